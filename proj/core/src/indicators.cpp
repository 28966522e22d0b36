#include "mriofp/indicators.hpp"

#include "mriofp/error.hpp"
#include "mriofp/table_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mriofp {

namespace fs = std::filesystem;
using nlohmann::json;

void ConversionParams::validate() const {
    if (!(weeks_worked_per_year > 0.0 && weeks_worked_per_year <= 52.2)) {
        throw Error(ErrorKind::InvalidArgument, "weeks_worked_per_year must be in (0, 52.2]");
    }
    if (!(working_life_share > 0.0 && working_life_share <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "working_life_share must be in (0, 1]");
    }
    if (!(working_age_population > 0.0) || !(total_population > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "populations must be positive");
    }
    if (!(calendar_weeks_per_year > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "calendar_weeks_per_year must be positive");
    }
}

namespace {

ConversionParams overlay(ConversionParams p, const json& j) {
    p.weeks_worked_per_year = j.value("weeks_worked_per_year", p.weeks_worked_per_year);
    p.working_life_share = j.value("working_life_share", p.working_life_share);
    p.working_age_population = j.value("working_age_population", p.working_age_population);
    p.total_population = j.value("total_population", p.total_population);
    p.calendar_weeks_per_year = j.value("calendar_weeks_per_year", p.calendar_weeks_per_year);
    return p;
}

}  // namespace

ConversionParamsSet ConversionParamsSet::load(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
    ConversionParamsSet set;
    try {
        const json j = json::parse(in);
        set.defaults = overlay({}, j);
        const json regions = j.value("regions", json::object());
        for (const auto& [region, values] : regions.items()) {
            set.regions[region] = overlay(set.defaults, values);
            set.regions[region].validate();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, file.string() + ": " + e.what());
    }
    set.defaults.validate();
    return set;
}

ConversionParams ConversionParamsSet::for_region(const std::string& region) const {
    const auto it = regions.find(region);
    return it == regions.end() ? defaults : it->second;
}

double hours_per_week_equivalent(double total_annual_hours, const ConversionParams& params) {
    params.validate();
    return total_annual_hours /
           (params.weeks_worked_per_year * params.working_age_population * params.working_life_share);
}

double per_capita(double total, double population) {
    if (!(population > 0.0)) throw Error(ErrorKind::InvalidArgument, "population must be positive");
    return total / population;
}

OriginSplit split_origin(const Vector& by_source, const std::string& home_region, const RegionSectorIndex& index) {
    const std::size_t home = index.region_position(home_region);
    if (by_source.size() != index.size()) throw Error(ErrorKind::DimensionMismatch, "contributions vs index");
    OriginSplit split;
    for (Index i = 0; i < by_source.size(); ++i) {
        (index.region_of(i) == home ? split.domestic : split.imported) += by_source[i];
    }
    return split;
}

SectorGroupConcordance::SectorGroupConcordance(const std::vector<std::string>& sectors,
                                               const std::map<std::string, std::string>& groups) {
    for (const auto& [sector, group] : groups) {
        if (std::find(sectors.begin(), sectors.end(), sector) == sectors.end()) {
            throw Error(ErrorKind::UnknownSector, "sector group file names unknown sector '" + sector + "'");
        }
    }
    for (const auto& sector : sectors) {
        const auto it = groups.find(sector);
        if (it == groups.end()) throw Error(ErrorKind::UnmappedSector, "sector '" + sector + "' has no group");
        auto g = std::find(groups_.begin(), groups_.end(), it->second);
        if (g == groups_.end()) g = groups_.insert(groups_.end(), it->second);
        group_of_sector_.push_back(static_cast<std::size_t>(g - groups_.begin()));
    }
}

SectorGroupConcordance SectorGroupConcordance::load(const fs::path& file, const std::vector<std::string>& sectors,
                                                    char delimiter) {
    std::map<std::string, std::string> groups;
    const auto rows = read_delimited(file, delimiter);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && !row.cells.empty() && row.cells[0] == "sector") continue;
        if (row.cells.size() != 2) {
            std::ostringstream msg;
            msg << file.string() << " row " << row.line << ": expected 2 cells";
            throw Error(ErrorKind::ParseError, msg.str());
        }
        if (!groups.emplace(row.cells[0], row.cells[1]).second) {
            throw Error(ErrorKind::ParseError, file.string() + ": sector '" + row.cells[0] + "' listed twice");
        }
    }
    return SectorGroupConcordance(sectors, groups);
}

std::vector<double> aggregate_by_sector_group(const Vector& by_source, const SectorGroupConcordance& groups,
                                              const RegionSectorIndex& index) {
    if (by_source.size() != index.size()) throw Error(ErrorKind::DimensionMismatch, "contributions vs index");
    if (groups.group_of_sector().size() != index.sectors().size()) {
        throw Error(ErrorKind::UnmappedSector, "sector group concordance was built for a different sector list");
    }
    std::vector<double> totals(groups.groups().size(), 0.0);
    for (Index i = 0; i < by_source.size(); ++i) totals[groups.group_of_sector()[index.sector_of(i)]] += by_source[i];
    return totals;
}

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

SkillSplit aggregate_by_skill(const std::vector<std::string>& stressors, const std::vector<double>& totals) {
    if (stressors.size() != totals.size()) throw Error(ErrorKind::DimensionMismatch, "stressor labels vs totals");
    // [gender][skill], gender 0 = female, 1 = male
    std::array<std::array<int, 3>, 2> seen{};
    SkillSplit split;
    for (std::size_t k = 0; k < stressors.size(); ++k) {
        const std::string l = lowercase(stressors[k]);
        const int gender = l.find("female") != std::string::npos ? 0 : (l.find("male") != std::string::npos ? 1 : -1);
        int skill = -1;
        if (l.find("low") != std::string::npos) skill = 0;
        else if (l.find("medium") != std::string::npos) skill = 1;
        else if (l.find("high") != std::string::npos) skill = 2;
        if (gender < 0 || skill < 0) {
            throw Error(ErrorKind::MissingStressorLabel, "'" + stressors[k] + "' is not a gender x skill label");
        }
        ++seen[static_cast<std::size_t>(gender)][static_cast<std::size_t>(skill)];
        (skill == 0 ? split.low : skill == 1 ? split.medium : split.high) += totals[k];
    }
    static constexpr std::array<const char*, 2> genders = {"female", "male"};
    static constexpr std::array<const char*, 3> skills = {"low", "medium", "high"};
    for (std::size_t g = 0; g < 2; ++g) {
        for (std::size_t s = 0; s < 3; ++s) {
            if (seen[g][s] != 1) {
                throw Error(ErrorKind::MissingStressorLabel, std::string("expected exactly one ") + genders[g] + " " +
                                                                 skills[s] + "-skilled row");
            }
        }
    }
    return split;
}

CategoryTotals attribute_by_category(const Vector& intensities, const LeontiefOperator& leontief,
                                     const Matrix& demand_by_category) {
    if (demand_by_category.cols() != static_cast<Index>(kCategoryCount)) {
        throw Error(ErrorKind::DimensionMismatch, "expected one demand column per spending category");
    }
    const Matrix outputs = leontief.apply_many(demand_by_category);
    CategoryTotals out{};
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
        out[c] = footprint_total(intensities, outputs.col(static_cast<Index>(c)));
    }
    return out;
}

double direct_use_scaled(double direct_base, double embedded_scenario, double embedded_base) {
    if (!(embedded_base > 0.0)) throw Error(ErrorKind::ZeroEmbeddedBase, "embedded baseline footprint is zero");
    return direct_base * (embedded_scenario / embedded_base);
}

MaterialIndicators material_indicators(const std::vector<std::string>& stressors, const std::vector<double>& totals,
                                       const std::map<std::string, MaterialUse>& flags) {
    if (stressors.size() != totals.size()) throw Error(ErrorKind::DimensionMismatch, "stressor labels vs totals");
    MaterialIndicators m;
    for (std::size_t k = 0; k < stressors.size(); ++k) {
        const auto it = flags.find(stressors[k]);
        if (it == flags.end()) {
            throw Error(ErrorKind::UnflaggedStressor, "material stressor '" + stressors[k] + "' is not flagged");
        }
        m.tmc += totals[k];
        if (it->second == MaterialUse::Used) m.mf += totals[k];
    }
    return m;
}

ScenarioOutput solve_scenario(const LeontiefOperator& leontief, std::string scenario, std::string home_region,
                              const Matrix& demand_by_category) {
    ScenarioOutput out;
    out.scenario = std::move(scenario);
    out.home_region = std::move(home_region);
    out.output_by_category = leontief.apply_many(demand_by_category);
    out.output = leontief.apply(demand_by_category.rowwise().sum());
    return out;
}

double embodied_total(const MrioAccount& account, const ExtensionAccount& extension, const Vector& output) {
    double total = 0.0;
    for (Index k = 0; k < extension.rows.rows(); ++k) {
        total += footprint_total(intensity(extension.rows.row(k).transpose(), account.total_output), output);
    }
    return total;
}

FootprintReport build_report(const ReportInputs& in, const ExtensionAccount& extension, const ScenarioOutput& solved) {
    const auto& account = in.account;
    const auto& index = account.index;
    const Index n = index.size();
    if (extension.rows.cols() != n) throw Error(ErrorKind::DimensionMismatch, "extension '" + extension.name + "'");

    FootprintReport r;
    r.scenario = solved.scenario;
    r.home_region = solved.home_region;
    r.extension_name = extension.name;
    r.kind = extension.kind;
    r.unit = extension.unit;
    r.params = in.params;
    r.stressors = extension.stressors;

    Vector by_source = Vector::Zero(n);
    Vector mf_by_source = Vector::Zero(n);
    Vector combined_intensity = Vector::Zero(n);
    for (Index k = 0; k < extension.rows.rows(); ++k) {
        const Vector s = intensity(extension.rows.row(k).transpose(), account.total_output);
        const Vector contribution = footprint_by_source(s, solved.output);
        combined_intensity += s;
        by_source += contribution;
        r.by_stressor.push_back(contribution.sum());
        if (extension.kind == ExtensionKind::Material) {
            const auto it = extension.material_flags.find(extension.stressors[static_cast<std::size_t>(k)]);
            if (it != extension.material_flags.end() && it->second == MaterialUse::Used) mf_by_source += contribution;
        }
    }
    r.total = by_source.sum();
    r.by_origin = split_origin(by_source, solved.home_region, index);
    r.sector_groups = in.groups.groups();
    r.by_sector_group = aggregate_by_sector_group(by_source, in.groups, index);
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
        r.by_category[c] = footprint_total(combined_intensity, solved.output_by_category.col(static_cast<Index>(c)));
    }

    switch (extension.kind) {
        case ExtensionKind::Labour:
            r.by_skill = aggregate_by_skill(extension.stressors, r.by_stressor);
            r.hours_week_equivalent = hours_per_week_equivalent(r.total, in.params);
            break;
        case ExtensionKind::Energy:
        case ExtensionKind::Emissions:
            if (extension.direct) {
                const double direct_base =
                    extension.direct->col(static_cast<Index>(index.region_position(solved.home_region))).sum();
                if (direct_base != 0.0) r.direct_use = direct_use_scaled(direct_base, r.total, in.embedded_base);
            }
            break;
        case ExtensionKind::Material:
            r.material = material_indicators(extension.stressors, r.by_stressor, extension.material_flags);
            r.material_mf_by_origin = split_origin(mf_by_source, solved.home_region, index);
            break;
        case ExtensionKind::Other:
            break;
    }
    r.per_capita = per_capita(r.total + r.direct_use, in.params.total_population);
    return r;
}

ComparisonTable compare_report(const std::vector<FootprintReport>& reports) {
    ComparisonTable table;
    if (reports.empty()) return table;
    table.extension_name = reports.front().extension_name;
    table.unit = reports.front().unit;
    for (const auto& r : reports) {
        if (r.unit != table.unit || r.extension_name != table.extension_name) {
            throw Error(ErrorKind::UnitMismatch, "cannot compare '" + r.extension_name + "' in '" + r.unit +
                                                     "' with '" + table.extension_name + "' in '" + table.unit + "'");
        }
    }
    const auto& ref = reports.front();
    for (const auto& r : reports) {
        ComparisonRow row;
        row.scenario = r.scenario;
        row.home_region = r.home_region;
        row.total = r.total;
        row.direct_use = r.direct_use;
        row.per_capita = r.per_capita;
        row.hours_week_equivalent = r.hours_week_equivalent;
        row.domestic_share = r.total > 0.0 ? r.by_origin.domestic / r.total : 0.0;
        row.delta_total = r.total - ref.total;
        row.delta_per_capita = r.per_capita - ref.per_capita;
        if (r.hours_week_equivalent && ref.hours_week_equivalent) {
            row.delta_hours_week = *r.hours_week_equivalent - *ref.hours_week_equivalent;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace mriofp
