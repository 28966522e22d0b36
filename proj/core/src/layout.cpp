#include "mriofp/layout.hpp"

#include "mriofp/error.hpp"
#include "mriofp/table_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace mriofp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, file.string() + ": " + e.what());
    }
}

template <typename T>
T required(const json& j, const char* key, const fs::path& file) {
    if (!j.contains(key)) throw Error(ErrorKind::ParseError, file.string() + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, file.string() + ": key '" + key + "': " + e.what());
    }
}

template <typename T>
T optional_or(const json& j, const char* key, T fallback, const fs::path& file) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return required<T>(j, key, file);
}

std::string where(const fs::path& file, std::size_t line, std::size_t column) {
    std::ostringstream out;
    out << file.string() << " row " << line << " column " << column;
    return out.str();
}

void require_cells(const DelimitedRow& row, std::size_t expected, const fs::path& file) {
    if (row.cells.size() != expected) {
        std::ostringstream msg;
        msg << file.string() << " row " << row.line << ": expected " << expected << " cells, found "
            << row.cells.size();
        throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
}

void require_rows(const std::vector<DelimitedRow>& rows, std::size_t expected, const fs::path& file) {
    if (rows.size() != expected) {
        std::ostringstream msg;
        msg << file.string() << ": expected " << expected << " lines, found " << rows.size();
        throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
}

/// Derives the index from the two header rows of the transaction file.
RegionSectorIndex index_from_headers(const DelimitedRow& regions_row, const DelimitedRow& sectors_row,
                                     std::size_t skip, const fs::path& file) {
    require_cells(sectors_row, regions_row.cells.size(), file);
    std::vector<std::string> regions, sectors;
    for (std::size_t c = skip; c < regions_row.cells.size(); ++c) {
        const auto& r = regions_row.cells[c];
        if (regions.empty() || regions.back() != r) regions.push_back(r);
        if (regions.size() == 1) sectors.push_back(sectors_row.cells[c]);
    }
    if (regions.empty()) throw Error(ErrorKind::ParseError, file.string() + ": no data columns");
    RegionSectorIndex index(regions, sectors);
    const std::size_t n = static_cast<std::size_t>(index.size());
    if (regions_row.cells.size() - skip != n) {
        throw Error(ErrorKind::DimensionMismatch, file.string() + ": header is not a full region x sector grid");
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto& r = regions_row.cells[skip + k];
        const auto& s = sectors_row.cells[skip + k];
        if (r != index.regions()[k / sectors.size()] || s != index.sectors()[k % sectors.size()]) {
            throw Error(ErrorKind::ParseError, where(file, sectors_row.line, skip + k + 1) +
                                                  ": header '" + r + "/" + s + "' breaks region-block order");
        }
    }
    return index;
}

void check_headers_match(const RegionSectorIndex& index, const DelimitedRow& regions_row,
                         const DelimitedRow& sectors_row, std::size_t skip, const fs::path& file) {
    const std::size_t n = static_cast<std::size_t>(index.size());
    require_cells(regions_row, n + skip, file);
    require_cells(sectors_row, n + skip, file);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& r = index.regions()[index.region_of(static_cast<Index>(k))];
        const auto& s = index.sectors()[index.sector_of(static_cast<Index>(k))];
        if (regions_row.cells[skip + k] != r || sectors_row.cells[skip + k] != s) {
            throw Error(ErrorKind::ParseError,
                        where(file, sectors_row.line, skip + k + 1) + ": expected column '" + r + "/" + s + "'");
        }
    }
}

void check_row_labels(const RegionSectorIndex& index, Index i, const DelimitedRow& row, const fs::path& file) {
    const auto& r = index.regions()[index.region_of(i)];
    const auto& s = index.sectors()[index.sector_of(i)];
    if (row.cells.size() < 2 || row.cells[0] != r || row.cells[1] != s) {
        throw Error(ErrorKind::ParseError, where(file, row.line, 1) + ": expected row '" + r + "/" + s + "'");
    }
}

void parse_values(const DelimitedRow& row, std::size_t skip, const fs::path& file, auto&& sink) {
    for (std::size_t c = skip; c < row.cells.size(); ++c) {
        sink(c - skip, parse_number(row.cells[c], where(file, row.line, c + 1)));
    }
}

ExtensionAccount read_extension(const ExtensionLayout& ext, const LayoutDescriptor& layout,
                                const RegionSectorIndex& index) {
    const fs::path file = layout.resolve(ext.path);
    const auto rows = read_delimited(file, layout.delimiter);
    if (rows.size() < 3) throw Error(ErrorKind::ParseError, file.string() + ": needs two header rows and data");
    check_headers_match(index, rows[0], rows[1], 1, file);

    const std::size_t n = static_cast<std::size_t>(index.size());
    ExtensionAccount acc;
    acc.name = ext.name;
    acc.kind = ext.kind;
    acc.unit = ext.unit;
    acc.material_flags = ext.material_flags;
    acc.rows.resize(static_cast<Index>(rows.size() - 2), static_cast<Index>(n));
    for (std::size_t r = 2; r < rows.size(); ++r) {
        require_cells(rows[r], n + 1, file);
        const auto& label = rows[r].cells[0];
        if (std::find(acc.stressors.begin(), acc.stressors.end(), label) != acc.stressors.end()) {
            throw Error(ErrorKind::ParseError, where(file, rows[r].line, 1) + ": duplicate stressor '" + label + "'");
        }
        acc.stressors.push_back(label);
        parse_values(rows[r], 1, file, [&](std::size_t j, double v) {
            if (v < 0.0) {
                throw Error(ErrorKind::NegativeEntry, where(file, rows[r].line, j + 2));
            }
            acc.rows(static_cast<Index>(r - 2), static_cast<Index>(j)) = v;
        });
    }

    if (ext.direct_path) {
        const fs::path dfile = layout.resolve(*ext.direct_path);
        const auto drows = read_delimited(dfile, layout.delimiter);
        const std::size_t nr = index.regions().size();
        require_rows(drows, acc.stressors.size() + 1, dfile);
        require_cells(drows[0], nr + 1, dfile);
        for (std::size_t r = 0; r < nr; ++r) {
            if (drows[0].cells[r + 1] != index.regions()[r]) {
                throw Error(ErrorKind::ParseError, where(dfile, drows[0].line, r + 2) + ": expected region '" +
                                                       index.regions()[r] + "'");
            }
        }
        Matrix direct(static_cast<Index>(acc.stressors.size()), static_cast<Index>(nr));
        for (std::size_t k = 0; k < acc.stressors.size(); ++k) {
            const auto& row = drows[k + 1];
            require_cells(row, nr + 1, dfile);
            if (row.cells[0] != acc.stressors[k]) {
                throw Error(ErrorKind::ParseError,
                            where(dfile, row.line, 1) + ": expected stressor '" + acc.stressors[k] + "'");
            }
            parse_values(row, 1, dfile,
                         [&](std::size_t r, double v) { direct(static_cast<Index>(k), static_cast<Index>(r)) = v; });
        }
        acc.direct = std::move(direct);
    }

    if (acc.kind == ExtensionKind::Labour) {
        if (acc.unit == "1000 persons") {
            const double scale = 1000.0 * layout.hours_per_worker_year;
            acc.rows *= scale;
            if (acc.direct) *acc.direct *= scale;
            acc.unit = "hours";
        } else if (acc.unit != "hours") {
            throw Error(ErrorKind::UnitMismatch, "labour extension '" + acc.name + "' must be in 'hours' or '1000 persons', got '" +
                                                     acc.unit + "'");
        }
    }
    return acc;
}

std::string kind_or_throw(const std::string& label, const fs::path& file) {
    if (!parse_extension_kind(label)) {
        throw Error(ErrorKind::ParseError, file.string() + ": unknown extension kind '" + label + "'");
    }
    return label;
}

}  // namespace

fs::path LayoutDescriptor::resolve(const fs::path& p) const { return p.is_absolute() ? p : base_dir / p; }

LayoutDescriptor LayoutDescriptor::load(const fs::path& file) {
    const json j = read_json(file);
    LayoutDescriptor layout;
    layout.base_dir = file.parent_path();

    const auto delimiter = optional_or<std::string>(j, "delimiter", ",", file);
    if (delimiter == "\\t" || delimiter == "tab" || delimiter == "\t") {
        layout.delimiter = '\t';
    } else if (delimiter.size() == 1) {
        layout.delimiter = delimiter[0];
    } else {
        throw Error(ErrorKind::ParseError, file.string() + ": delimiter must be a single character or 'tab'");
    }
    layout.year = optional_or<int>(j, "year", 0, file);
    layout.currency_unit = optional_or<std::string>(j, "currency_unit", "", file);
    layout.hours_per_worker_year =
        optional_or<double>(j, "hours_per_worker_year", kDefaultHoursPerWorkerYear, file);
    if (!(layout.hours_per_worker_year > 0.0)) {
        throw Error(ErrorKind::ParseError, file.string() + ": hours_per_worker_year must be positive");
    }
    layout.balance_tolerance = optional_or<double>(j, "balance_tolerance", kDefaultBalanceTolerance, file);
    layout.transactions = required<std::string>(j, "transactions", file);
    layout.final_demand = required<std::string>(j, "final_demand", file);
    layout.total_output = required<std::string>(j, "total_output", file);

    for (const auto& e : optional_or<json>(j, "extensions", json::array(), file)) {
        ExtensionLayout ext;
        ext.name = required<std::string>(e, "name", file);
        ext.kind = *parse_extension_kind(kind_or_throw(optional_or<std::string>(e, "kind", "other", file), file));
        ext.unit = optional_or<std::string>(e, "unit", "", file);
        if (ext.unit.empty()) {
            throw Error(ErrorKind::UnitMismatch, file.string() + ": extension '" + ext.name + "' has no unit label");
        }
        ext.path = required<std::string>(e, "path", file);
        if (e.contains("direct") && !e.at("direct").is_null()) ext.direct_path = required<std::string>(e, "direct", file);
        const auto flags = optional_or<json>(e, "material_flags", json::object(), file);
        for (const auto& [label, flag] : flags.items()) {
            const auto f = flag.get<std::string>();
            if (f != "used" && f != "unused") {
                throw Error(ErrorKind::ParseError, file.string() + ": material flag for '" + label +
                                                       "' must be 'used' or 'unused'");
            }
            ext.material_flags[label] = f == "used" ? MaterialUse::Used : MaterialUse::Unused;
        }
        layout.extensions.push_back(std::move(ext));
    }
    for (const auto& q : optional_or<json>(j, "quirks", json::array(), file)) {
        layout.quirks.push_back({required<std::string>(q, "region", file), required<std::string>(q, "sector", file),
                                 optional_or<std::string>(q, "message", "", file)});
    }
    if (j.contains("home_region")) layout.home_region = required<std::string>(j, "home_region", file);
    if (j.contains("category_concordance")) {
        layout.category_concordance = required<std::string>(j, "category_concordance", file);
    }
    if (j.contains("sector_groups")) layout.sector_groups = required<std::string>(j, "sector_groups", file);
    if (j.contains("params")) layout.params = required<std::string>(j, "params", file);
    const auto scenarios = optional_or<json>(j, "scenarios", json::object(), file);
    for (const auto& [name, path] : scenarios.items()) {
        layout.scenarios[name] = path.get<std::string>();
    }
    return layout;
}

void LayoutDescriptor::save(const fs::path& file) const {
    json j;
    j["year"] = year;
    j["currency_unit"] = currency_unit;
    j["delimiter"] = delimiter == '\t' ? std::string("tab") : std::string(1, delimiter);
    j["hours_per_worker_year"] = hours_per_worker_year;
    j["balance_tolerance"] = balance_tolerance;
    j["transactions"] = transactions.generic_string();
    j["final_demand"] = final_demand.generic_string();
    j["total_output"] = total_output.generic_string();
    j["extensions"] = json::array();
    for (const auto& e : extensions) {
        json je;
        je["name"] = e.name;
        je["kind"] = std::string(to_string(e.kind));
        je["unit"] = e.unit;
        je["path"] = e.path.generic_string();
        if (e.direct_path) je["direct"] = e.direct_path->generic_string();
        if (!e.material_flags.empty()) {
            json flags = json::object();
            for (const auto& [label, use] : e.material_flags) flags[label] = use == MaterialUse::Used ? "used" : "unused";
            je["material_flags"] = flags;
        }
        j["extensions"].push_back(je);
    }
    if (!quirks.empty()) {
        j["quirks"] = json::array();
        for (const auto& q : quirks) j["quirks"].push_back({{"region", q.region}, {"sector", q.sector}, {"message", q.message}});
    }
    if (home_region) j["home_region"] = *home_region;
    if (category_concordance) j["category_concordance"] = category_concordance->generic_string();
    if (sector_groups) j["sector_groups"] = sector_groups->generic_string();
    if (params) j["params"] = params->generic_string();
    if (!scenarios.empty()) {
        json s = json::object();
        for (const auto& [name, path] : scenarios) s[name] = path.generic_string();
        j["scenarios"] = s;
    }
    std::ofstream out(file);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
    out << j.dump(2) << '\n';
}

MrioAccount ingest(const LayoutDescriptor& layout) {
    MrioAccount acc;
    acc.year = layout.year;
    acc.currency_unit = layout.currency_unit;

    const fs::path zfile = layout.resolve(layout.transactions);
    const auto zrows = read_delimited(zfile, layout.delimiter);
    if (zrows.size() < 3) throw Error(ErrorKind::ParseError, zfile.string() + ": needs two header rows and data");
    acc.index = index_from_headers(zrows[0], zrows[1], 2, zfile);
    const Index n = acc.index.size();
    const std::size_t nu = static_cast<std::size_t>(n);

    require_rows(zrows, nu + 2, zfile);
    acc.transactions.resize(n, n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = zrows[static_cast<std::size_t>(i) + 2];
        require_cells(row, nu + 2, zfile);
        check_row_labels(acc.index, i, row, zfile);
        parse_values(row, 2, zfile, [&](std::size_t j, double v) { acc.transactions(i, static_cast<Index>(j)) = v; });
    }

    const fs::path yfile = layout.resolve(layout.final_demand);
    const auto yrows = read_delimited(yfile, layout.delimiter);
    require_rows(yrows, nu + 2, yfile);
    require_cells(yrows[1], yrows[0].cells.size(), yfile);
    for (std::size_t c = 2; c < yrows[0].cells.size(); ++c) {
        const auto& region = yrows[0].cells[c];
        if (!acc.index.has_region(region)) {
            throw Error(ErrorKind::UnknownRegion, where(yfile, yrows[0].line, c + 1) + ": '" + region + "'");
        }
        const auto& label = yrows[1].cells[c];
        acc.demand_columns.push_back({region, label, parse_demand_category(label)});
    }
    const std::size_t ncols = acc.demand_columns.size();
    acc.final_demand.resize(n, static_cast<Index>(ncols));
    for (Index i = 0; i < n; ++i) {
        const auto& row = yrows[static_cast<std::size_t>(i) + 2];
        require_cells(row, ncols + 2, yfile);
        check_row_labels(acc.index, i, row, yfile);
        parse_values(row, 2, yfile, [&](std::size_t c, double v) { acc.final_demand(i, static_cast<Index>(c)) = v; });
    }

    const fs::path xfile = layout.resolve(layout.total_output);
    const auto xrows = read_delimited(xfile, layout.delimiter);
    require_rows(xrows, nu + 1, xfile);
    acc.total_output.resize(n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = xrows[static_cast<std::size_t>(i) + 1];
        require_cells(row, 3, xfile);
        check_row_labels(acc.index, i, row, xfile);
        acc.total_output[i] = parse_number(row.cells[2], where(xfile, row.line, 3));
    }

    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (acc.transactions(i, j) < 0.0) {
                throw Error(ErrorKind::NegativeEntry, where(zfile, static_cast<std::size_t>(i) + 3,
                                                            static_cast<std::size_t>(j) + 3));
            }
        }
        if (acc.total_output[j] < 0.0) {
            throw Error(ErrorKind::NegativeEntry, where(xfile, static_cast<std::size_t>(j) + 2, 3));
        }
    }

    for (const auto& ext : layout.extensions) {
        if (acc.find_extension(ext.name)) {
            throw Error(ErrorKind::ParseError, "duplicate extension name '" + ext.name + "'");
        }
        acc.extensions.push_back(read_extension(ext, layout, acc.index));
    }

    for (const auto& q : layout.quirks) {
        std::ostringstream msg;
        msg << q.message;
        if (acc.index.has_region(q.region) && acc.index.sector_position(q.sector)) {
            const Index i = acc.index.flat(q.region, q.sector);
            double purchased = 0.0;
            for (std::size_t c = 0; c < acc.demand_columns.size(); ++c) {
                if (acc.demand_columns[c].region == q.region) purchased += acc.final_demand(i, static_cast<Index>(c));
            }
            msg << " (total output " << acc.total_output[i] << ", final demand by " << q.region << " " << purchased
                << ")";
        } else {
            msg << " (not present in this table)";
        }
        acc.warnings.push_back({q.region, q.sector, msg.str()});
    }
    return acc;
}

void write_account(const MrioAccount& account, const LayoutDescriptor& layout) {
    const char d = layout.delimiter;
    const auto& idx = account.index;
    const Index n = idx.size();

    auto open = [&](const fs::path& p) {
        const fs::path full = layout.resolve(p);
        if (full.has_parent_path()) fs::create_directories(full.parent_path());
        std::ofstream out(full, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + full.string());
        return out;
    };
    auto header_rows = [&](std::ofstream& out, std::vector<std::string> corner_a, std::vector<std::string> corner_b) {
        for (Index k = 0; k < n; ++k) {
            corner_a.push_back(idx.regions()[idx.region_of(k)]);
            corner_b.push_back(idx.sectors()[idx.sector_of(k)]);
        }
        write_row(out, corner_a, d);
        write_row(out, corner_b, d);
    };
    auto labelled = [&](Index i) {
        return std::vector<std::string>{idx.regions()[idx.region_of(i)], idx.sectors()[idx.sector_of(i)]};
    };

    {
        auto out = open(layout.transactions);
        header_rows(out, {"region", ""}, {"sector", ""});
        for (Index i = 0; i < n; ++i) {
            auto cells = labelled(i);
            for (Index j = 0; j < n; ++j) cells.push_back(format_number(account.transactions(i, j)));
            write_row(out, cells, d);
        }
    }
    {
        auto out = open(layout.final_demand);
        std::vector<std::string> top{"region", ""}, bottom{"category", ""};
        for (const auto& c : account.demand_columns) {
            top.push_back(c.region);
            bottom.push_back(c.label);
        }
        write_row(out, top, d);
        write_row(out, bottom, d);
        for (Index i = 0; i < n; ++i) {
            auto cells = labelled(i);
            for (Index c = 0; c < account.final_demand.cols(); ++c) cells.push_back(format_number(account.final_demand(i, c)));
            write_row(out, cells, d);
        }
    }
    {
        auto out = open(layout.total_output);
        write_row(out, {"region", "sector", "total_output"}, d);
        for (Index i = 0; i < n; ++i) {
            auto cells = labelled(i);
            cells.push_back(format_number(account.total_output[i]));
            write_row(out, cells, d);
        }
    }
    for (const auto& ext : layout.extensions) {
        const auto& acc = account.extension(ext.name);
        if (acc.unit != ext.unit) {
            throw Error(ErrorKind::UnitMismatch, "extension '" + ext.name + "' is in '" + acc.unit +
                                                     "' but the layout declares '" + ext.unit + "'");
        }
        auto out = open(ext.path);
        header_rows(out, {"region"}, {"sector"});
        for (Index k = 0; k < acc.rows.rows(); ++k) {
            std::vector<std::string> cells{acc.stressors[static_cast<std::size_t>(k)]};
            for (Index j = 0; j < n; ++j) cells.push_back(format_number(acc.rows(k, j)));
            write_row(out, cells, d);
        }
        if (ext.direct_path && acc.direct) {
            auto dout = open(*ext.direct_path);
            std::vector<std::string> head{"stressor"};
            for (const auto& r : idx.regions()) head.push_back(r);
            write_row(dout, head, d);
            for (Index k = 0; k < acc.direct->rows(); ++k) {
                std::vector<std::string> cells{acc.stressors[static_cast<std::size_t>(k)]};
                for (Index r = 0; r < acc.direct->cols(); ++r) cells.push_back(format_number((*acc.direct)(k, r)));
                write_row(dout, cells, d);
            }
        }
    }
}

LayoutDescriptor default_layout_for(const MrioAccount& account, const fs::path& dir) {
    LayoutDescriptor layout;
    layout.base_dir = dir;
    layout.year = account.year;
    layout.currency_unit = account.currency_unit;
    layout.transactions = "Z.csv";
    layout.final_demand = "Y.csv";
    layout.total_output = "x.csv";
    for (const auto& e : account.extensions) {
        ExtensionLayout ext;
        ext.name = e.name;
        ext.kind = e.kind;
        ext.unit = e.unit;
        ext.path = e.name + ".csv";
        if (e.direct) ext.direct_path = e.name + "_direct.csv";
        ext.material_flags = e.material_flags;
        layout.extensions.push_back(std::move(ext));
    }
    return layout;
}

}  // namespace mriofp
