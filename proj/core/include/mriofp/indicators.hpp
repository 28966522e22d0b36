#pragma once

#include "mriofp/algebra.hpp"
#include "mriofp/mrio.hpp"
#include "mriofp/scenario.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mriofp {

struct ConversionParams {
    double weeks_worked_per_year = 46.6;
    double working_life_share = 0.8;
    double working_age_population = 1.0;
    double total_population = 1.0;
    /// Calendar weeks used when turning weekly averages into annual totals.
    double calendar_weeks_per_year = kCalendarWeeksPerYear;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

/// Params file: a flat object of ConversionParams fields, optionally with a
/// "regions" object whose entries override fields per home region.
class ConversionParamsSet {
  public:
    static ConversionParamsSet load(const std::filesystem::path& file);
    ConversionParams for_region(const std::string& region) const;

    ConversionParams defaults;
    std::map<std::string, ConversionParams> regions;
};

/// total / (weeks worked x working-age population x working-life share).
double hours_per_week_equivalent(double total_annual_hours, const ConversionParams& params);
double per_capita(double total, double population);

struct OriginSplit {
    double domestic = 0.0;
    double imported = 0.0;
};

/// Throws UnknownRegion.
OriginSplit split_origin(const Vector& by_source, const std::string& home_region, const RegionSectorIndex& index);

/// Sector name -> group label (the seven-group sector aggregation).
class SectorGroupConcordance {
  public:
    /// Throws UnmappedSector if a sector of `sectors` has no group.
    SectorGroupConcordance(const std::vector<std::string>& sectors, const std::map<std::string, std::string>& groups);
    /// Two-column delimited file (sector, group); header row optional.
    static SectorGroupConcordance load(const std::filesystem::path& file, const std::vector<std::string>& sectors,
                                       char delimiter = ',');

    /// Group labels in order of first appearance over the sector list.
    const std::vector<std::string>& groups() const noexcept { return groups_; }
    const std::vector<std::size_t>& group_of_sector() const noexcept { return group_of_sector_; }

  private:
    std::vector<std::string> groups_;
    std::vector<std::size_t> group_of_sector_;
};

/// Group totals in the order of `groups.groups()`.
std::vector<double> aggregate_by_sector_group(const Vector& by_source, const SectorGroupConcordance& groups,
                                              const RegionSectorIndex& index);

struct SkillSplit {
    double low = 0.0;
    double medium = 0.0;
    double high = 0.0;
};

/// Sums the six gender x skill labour rows into skill levels. Labels are
/// matched case-insensitively on "female"/"male" and "low"/"medium"/"high".
/// Throws MissingStressorLabel.
SkillSplit aggregate_by_skill(const std::vector<std::string>& stressors, const std::vector<double>& totals);

/// F_c = s . L y_c for every category column of `demand_by_category`.
CategoryTotals attribute_by_category(const Vector& intensities, const LeontiefOperator& leontief,
                                     const Matrix& demand_by_category);

/// direct_base x embedded_scenario / embedded_base. Throws ZeroEmbeddedBase.
double direct_use_scaled(double direct_base, double embedded_scenario, double embedded_base);

struct MaterialIndicators {
    double tmc = 0.0;  // used + unused extraction
    double mf = 0.0;   // used extraction only (RMC)
};

/// Throws UnflaggedStressor.
MaterialIndicators material_indicators(const std::vector<std::string>& stressors, const std::vector<double>& totals,
                                       const std::map<std::string, MaterialUse>& flags);

struct FootprintReport {
    std::string scenario;
    std::string home_region;
    std::string extension_name;
    ExtensionKind kind = ExtensionKind::Other;
    std::string unit;
    ConversionParams params;

    double total = 0.0;  // embodied in the demand, extension units per year
    double direct_use = 0.0;
    double per_capita = 0.0;  // (total + direct_use) / total population
    std::optional<double> hours_week_equivalent;

    OriginSplit by_origin;
    std::vector<std::string> sector_groups;
    std::vector<double> by_sector_group;
    std::optional<SkillSplit> by_skill;
    CategoryTotals by_category{};
    std::vector<std::string> stressors;
    std::vector<double> by_stressor;
    std::optional<MaterialIndicators> material;
    std::optional<OriginSplit> material_mf_by_origin;
};

/// Gross output for one demand, plus one output column per category.
struct ScenarioOutput {
    std::string scenario;
    std::string home_region;
    Vector output;
    Matrix output_by_category;
};

ScenarioOutput solve_scenario(const LeontiefOperator& leontief, std::string scenario, std::string home_region,
                              const Matrix& demand_by_category);

struct ReportInputs {
    const MrioAccount& account;
    const SectorGroupConcordance& groups;
    const ConversionParams& params;
    /// Embodied total of the home region's actual demand, for direct-use scaling.
    double embedded_base = 0.0;
};

/// All disaggregations of one extension for one solved scenario.
FootprintReport build_report(const ReportInputs& in, const ExtensionAccount& extension, const ScenarioOutput& solved);

/// Embodied total of `extension` for gross output `output`.
double embodied_total(const MrioAccount& account, const ExtensionAccount& extension, const Vector& output);

struct ComparisonRow {
    std::string scenario;
    std::string home_region;
    double total = 0.0;
    double direct_use = 0.0;
    double per_capita = 0.0;
    std::optional<double> hours_week_equivalent;
    double domestic_share = 0.0;
    double delta_total = 0.0;
    double delta_per_capita = 0.0;
    std::optional<double> delta_hours_week;
};

struct ComparisonTable {
    std::string extension_name;
    std::string unit;
    std::vector<ComparisonRow> rows;
};

/// Rows in input order; deltas against the first report. Throws UnitMismatch.
ComparisonTable compare_report(const std::vector<FootprintReport>& reports);

}  // namespace mriofp
