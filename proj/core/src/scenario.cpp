#include "mriofp/scenario.hpp"

#include "mriofp/error.hpp"
#include "mriofp/table_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace mriofp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr PerCategory<std::string_view> kLabels = {
    "Groceries (food and drinks)",
    "Clothing",
    "Housing",
    "Utilities and insurance",
    "Healthcare",
    "Appliances, furnishing, and maintenance",
    "Education",
    "Devices (TVs, phones, computers)",
    "Transport",
    "Public administration and defence",
    "Recreation (vacations, toys, dining out)",
    "Care work (babysitters, senior care)",
    "Gross fixed capital formation",
};

bool is_header(const DelimitedRow& row, std::string_view first) { return !row.cells.empty() && row.cells[0] == first; }

std::string sector_name(const RegionSectorIndex& index, Index i) {
    return index.regions()[index.region_of(i)] + "/" + index.sectors()[index.sector_of(i)];
}

}  // namespace

const PerCategory<SpendingCategory>& all_categories() noexcept {
    static const PerCategory<SpendingCategory> all = [] {
        PerCategory<SpendingCategory> out{};
        for (std::size_t i = 0; i < kCategoryCount; ++i) out[i] = static_cast<SpendingCategory>(i);
        return out;
    }();
    return all;
}

std::string_view label(SpendingCategory c) noexcept { return kLabels[slot(c)]; }

SpendingCategory parse_spending_category(std::string_view text) {
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        if (kLabels[i] == text) return static_cast<SpendingCategory>(i);
    }
    throw Error(ErrorKind::UnknownCategory, "'" + std::string(text) + "' is not a spending category");
}

CategoryConcordance::CategoryConcordance(const std::vector<std::string>& sectors,
                                         std::map<std::string, SpendingCategory> mapping)
    : sectors_(sectors), by_position_(sectors.size()) {
    for (const auto& [sector, category] : mapping) {
        const auto it = std::find(sectors_.begin(), sectors_.end(), sector);
        if (it == sectors_.end()) throw Error(ErrorKind::UnknownSector, "concordance names unknown sector '" + sector + "'");
        if (category == SpendingCategory::Gfcf) {
            throw Error(ErrorKind::InvalidArgument,
                        "sector '" + sector + "' mapped to GFCF; capital formation is its own demand vector");
        }
        by_position_[static_cast<std::size_t>(it - sectors_.begin())] = category;
    }
    for (std::size_t s = 0; s < sectors_.size(); ++s) {
        if (!by_position_[s]) unsorted_.insert(sectors_[s]);
    }
}

CategoryConcordance CategoryConcordance::load(const fs::path& file, const std::vector<std::string>& sectors,
                                              char delimiter) {
    const auto rows = read_delimited(file, delimiter);
    std::map<std::string, SpendingCategory> mapping;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && is_header(row, "sector")) continue;
        if (row.cells.size() != 2) {
            std::ostringstream msg;
            msg << file.string() << " row " << row.line << ": expected 2 cells";
            throw Error(ErrorKind::ParseError, msg.str());
        }
        if (!mapping.emplace(row.cells[0], parse_spending_category(row.cells[1])).second) {
            throw Error(ErrorKind::ParseError, file.string() + ": sector '" + row.cells[0] + "' listed twice");
        }
    }
    return CategoryConcordance(sectors, std::move(mapping));
}

std::optional<SpendingCategory> CategoryConcordance::category_of(const std::string& sector) const {
    const auto it = std::find(sectors_.begin(), sectors_.end(), sector);
    if (it == sectors_.end()) return std::nullopt;
    return by_position_[static_cast<std::size_t>(it - sectors_.begin())];
}

CategoryTotals aggregate_household_budgets(const HouseholdBudgetTable& table,
                                           const std::map<std::string, double>& counts, double weeks_per_year) {
    if (!(weeks_per_year > 0.0)) throw Error(ErrorKind::InvalidArgument, "weeks_per_year must be positive");
    CategoryTotals totals{};
    for (const auto& [type, budget] : table) {
        const auto it = counts.find(type);
        if (it == counts.end()) throw Error(ErrorKind::MissingHouseholdType, "no household count for '" + type + "'");
        for (const auto& [category, weekly] : budget) {
            if (weekly < 0.0) throw Error(ErrorKind::InvalidArgument, "negative budget for '" + type + "'");
            totals[slot(category)] += weekly * it->second * weeks_per_year;
        }
    }
    return totals;
}

Matrix decompose_by_category(const Vector& spending, const Vector& gfcf, const CategoryConcordance& concordance,
                             const RegionSectorIndex& index) {
    const Index n = index.size();
    if (spending.size() != n || gfcf.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "demand vectors do not match the index");
    }
    Matrix columns = Matrix::Zero(n, static_cast<Index>(kCategoryCount));
    const auto& categories = concordance.by_position();
    if (categories.size() != index.sectors().size()) {
        throw Error(ErrorKind::DimensionMismatch, "concordance was built for a different sector list");
    }
    for (Index i = 0; i < n; ++i) {
        const auto& c = categories[index.sector_of(i)];
        if (!c) {
            if (spending[i] != 0.0) {
                std::ostringstream msg;
                msg << "unsorted sector " << sector_name(index, i) << " has demand " << spending[i];
                throw Error(ErrorKind::UnsortedNonzeroDemand, msg.str());
            }
            continue;
        }
        columns(i, static_cast<Index>(slot(*c))) = spending[i];
    }
    columns.col(static_cast<Index>(slot(SpendingCategory::Gfcf))) = gfcf;
    return columns;
}

CategoryTotals baseline_category_totals(const Vector& spending, const Vector& gfcf,
                                        const CategoryConcordance& concordance, const RegionSectorIndex& index) {
    const Matrix columns = decompose_by_category(spending, gfcf, concordance, index);
    CategoryTotals totals{};
    for (std::size_t c = 0; c < kCategoryCount; ++c) totals[c] = columns.col(static_cast<Index>(c)).sum();
    return totals;
}

CategoryTotals category_scaling_factors(const CategoryTotals& baseline, const CategoryTotals& targets) {
    CategoryTotals factors{};
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
        const auto name = std::string(kLabels[c]);
        if (!(targets[c] >= 0.0) || !(baseline[c] >= 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "negative baseline or target for '" + name + "'");
        }
        if (baseline[c] > 0.0) {
            factors[c] = targets[c] / baseline[c];
        } else if (targets[c] > 0.0) {
            throw Error(ErrorKind::ZeroBaselineNonzeroTarget, "'" + name + "' has no baseline spending to scale");
        } else {
            factors[c] = 1.0;
        }
    }
    return factors;
}

Vector scale_gfcf(const Vector& gfcf_base, double target_total) {
    if (!(target_total >= 0.0)) throw Error(ErrorKind::InvalidArgument, "GFCF target must be nonnegative");
    const double base = gfcf_base.sum();
    if (target_total == 0.0) return Vector::Zero(gfcf_base.size());
    if (!(base > 0.0)) throw Error(ErrorKind::ZeroBaseNonzeroTarget, "GFCF base total is zero");
    return gfcf_base * (target_total / base);
}

CofogTable load_cofog(const fs::path& file, char delimiter) {
    CofogTable table;
    const auto rows = read_delimited(file, delimiter);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && is_header(row, "function")) continue;
        std::ostringstream at;
        at << file.string() << " row " << row.line;
        if (row.cells.size() != 3) throw Error(ErrorKind::ParseError, at.str() + ": expected 3 cells");
        const double spending = parse_number(row.cells[1], at.str() + " column 2");
        std::string flag = row.cells[2];
        std::transform(flag.begin(), flag.end(), flag.begin(), [](unsigned char ch) { return std::tolower(ch); });
        bool included = false;
        if (flag == "1" || flag == "true" || flag == "yes" || flag == "included") {
            included = true;
        } else if (!(flag == "0" || flag == "false" || flag == "no" || flag == "excluded")) {
            throw Error(ErrorKind::ParseError, at.str() + " column 3: '" + row.cells[2] + "' is not a flag");
        }
        table.push_back({row.cells[0], spending, included});
    }
    return table;
}

double government_factor(const CofogTable& table) {
    double included = 0.0;
    double all = 0.0;
    for (const auto& e : table) {
        if (!(e.spending >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative spending for '" + e.function + "'");
        all += e.spending;
        if (e.included) included += e.spending;
    }
    if (!(all > 0.0)) throw Error(ErrorKind::EmptyCofogTable, "no eligible public spending");
    return included / all;
}

double gfcf_depreciation_target(double gdp, double rate) {
    if (!(gdp > 0.0) || !(rate > 0.0 && rate < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "depreciation target needs gdp > 0 and 0 < rate < 1");
    }
    return gdp * rate;
}

BudgetSplit dining_out_adjustment(double food_total, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error(ErrorKind::InvalidArgument, "fraction must be in [0, 1]");
    // Whichever part is at least half of the total is obtained by an exact
    // (Sterbenz) subtraction, so the two parts add back to food_total.
    BudgetSplit split;
    if (fraction <= 0.5) {
        split.reduced = food_total - food_total * fraction;
        split.moved = food_total - split.reduced;
    } else {
        split.moved = food_total * fraction;
        split.reduced = food_total - split.moved;
    }
    return split;
}

namespace {

std::optional<CategoryTarget> parse_target(const json& v, const std::string& category, const fs::path& file) {
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::ParseError, file.string() + ": category '" + category + "': " + why);
    };
    CategoryTarget t;
    if (v.is_number()) {
        t.value = v.get<double>();
    } else if (v.is_object() && v.contains("baseline_factor") && v.at("baseline_factor").is_number()) {
        t.kind = CategoryTarget::Kind::BaselineFactor;
        t.value = v.at("baseline_factor").get<double>();
    } else if (v.is_null()) {
        return std::nullopt;
    } else {
        fail("expected a number or {\"baseline_factor\": f}");
    }
    if (!(t.value >= 0.0) || !std::isfinite(t.value)) fail("target must be a finite nonnegative number");
    return t;
}

}  // namespace

ScenarioSpec ScenarioSpec::load(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, file.string() + ": " + e.what());
    }
    const fs::path base = file.parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

    ScenarioSpec spec;
    try {
        spec.name = j.at("name").get<std::string>();
        spec.home_region = j.at("home_region").get<std::string>();
        spec.currency_unit = j.value("currency_unit", std::string{});
        for (const auto& [key, value] : j.at("categories").items()) {
            spec.targets[slot(parse_spending_category(key))] = parse_target(value, key, file);
        }
        if (j.contains("government_factor") && !j.at("government_factor").is_null()) {
            spec.government_factor = j.at("government_factor").get<double>();
        }
        if (j.contains("cofog")) {
            if (spec.government_factor) {
                throw Error(ErrorKind::ParseError, file.string() + ": give either government_factor or cofog, not both");
            }
            spec.government_factor = mriofp::government_factor(load_cofog(resolve(j.at("cofog").get<std::string>())));
        }
        for (const auto& m : j.value("adjustments", json::array())) {
            BudgetMove move;
            move.from = parse_spending_category(m.at("from").get<std::string>());
            if (m.contains("to") && !m.at("to").is_null()) move.to = parse_spending_category(m.at("to").get<std::string>());
            move.fraction = m.at("fraction").get<double>();
            if (!(move.fraction >= 0.0 && move.fraction <= 1.0)) {
                throw Error(ErrorKind::ParseError, file.string() + ": adjustment fraction must be in [0, 1]");
            }
            spec.adjustments.push_back(move);
        }
        if (j.contains("category_concordance")) {
            spec.category_concordance = resolve(j.at("category_concordance").get<std::string>());
        }
        if (j.contains("sector_groups")) spec.sector_groups = resolve(j.at("sector_groups").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, file.string() + ": " + e.what());
    }

    if (spec.government_factor && !(*spec.government_factor >= 0.0 && *spec.government_factor <= 1.0)) {
        throw Error(ErrorKind::ParseError, file.string() + ": government_factor must be in [0, 1]");
    }
    for (auto c : all_categories()) {
        if (spec.targets[slot(c)]) continue;
        if (c == SpendingCategory::PublicAdministration && spec.government_factor) continue;
        throw Error(ErrorKind::ParseError, file.string() + ": missing target for '" + std::string(label(c)) + "'");
    }
    return spec;
}

void ScenarioSpec::save(const fs::path& file) const {
    json j;
    j["name"] = name;
    j["home_region"] = home_region;
    if (!currency_unit.empty()) j["currency_unit"] = currency_unit;
    json cats = json::object();
    for (auto c : all_categories()) {
        const auto& t = targets[slot(c)];
        if (!t) continue;
        cats[std::string(label(c))] =
            t->kind == CategoryTarget::Kind::Absolute ? json(t->value) : json{{"baseline_factor", t->value}};
    }
    j["categories"] = cats;
    if (government_factor) j["government_factor"] = *government_factor;
    if (!adjustments.empty()) {
        j["adjustments"] = json::array();
        for (const auto& m : adjustments) {
            json jm{{"from", std::string(label(m.from))}, {"fraction", m.fraction}};
            if (m.to) jm["to"] = std::string(label(*m.to));
            j["adjustments"].push_back(jm);
        }
    }
    if (category_concordance) j["category_concordance"] = category_concordance->generic_string();
    if (sector_groups) j["sector_groups"] = sector_groups->generic_string();
    std::ofstream out(file);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
    out << j.dump(2) << '\n';
}

CategoryTotals ScenarioSpec::resolve_targets(const CategoryTotals& baseline) const {
    CategoryTotals out{};
    for (auto c : all_categories()) {
        const auto& t = targets[slot(c)];
        if (t) {
            out[slot(c)] = t->kind == CategoryTarget::Kind::Absolute ? t->value : baseline[slot(c)] * t->value;
        } else if (c == SpendingCategory::PublicAdministration && government_factor) {
            out[slot(c)] = baseline[slot(c)] * *government_factor;
        } else {
            throw Error(ErrorKind::InvalidArgument, "scenario '" + name + "' has no target for '" +
                                                        std::string(label(c)) + "'");
        }
    }
    for (const auto& m : adjustments) {
        const auto split = dining_out_adjustment(out[slot(m.from)], m.fraction);
        out[slot(m.from)] = split.reduced;
        if (m.to) out[slot(*m.to)] += split.moved;
    }
    return out;
}

ScenarioDemand apply_scenario(const Vector& spending_base, const Vector& gfcf_base,
                              const CategoryConcordance& concordance, const RegionSectorIndex& index,
                              const ScenarioSpec& spec) {
    ScenarioDemand out;
    out.baseline = baseline_category_totals(spending_base, gfcf_base, concordance, index);
    out.targets = spec.resolve_targets(out.baseline);
    out.factors = category_scaling_factors(out.baseline, out.targets);

    const auto& categories = concordance.by_position();
    out.spending = Vector::Zero(spending_base.size());
    for (Index i = 0; i < spending_base.size(); ++i) {
        const auto& c = categories[index.sector_of(i)];
        if (c) out.spending[i] = spending_base[i] * out.factors[slot(*c)];
    }
    out.gfcf = scale_gfcf(gfcf_base, out.targets[slot(SpendingCategory::Gfcf)]);
    return out;
}

}  // namespace mriofp
