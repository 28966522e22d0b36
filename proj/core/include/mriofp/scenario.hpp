#pragma once

// Spending-category scenarios: sector -> category concordance, household
// budget aggregation, per-category scaling of a consolidated demand vector,
// and the government / GFCF / dining-out helpers used to build targets.

#include "mriofp/mrio.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mriofp {

enum class SpendingCategory {
    Groceries,
    Clothing,
    Housing,
    UtilitiesInsurance,
    Healthcare,
    AppliancesFurnishing,
    Education,
    Devices,
    Transport,
    PublicAdministration,
    Recreation,
    CareWork,
    Gfcf,
};

inline constexpr std::size_t kCategoryCount = 13;

template <typename T>
using PerCategory = std::array<T, kCategoryCount>;
using CategoryTotals = PerCategory<double>;

const PerCategory<SpendingCategory>& all_categories() noexcept;
std::string_view label(SpendingCategory c) noexcept;
/// Exact label match. Throws UnknownCategory.
SpendingCategory parse_spending_category(std::string_view text);
constexpr std::size_t slot(SpendingCategory c) noexcept { return static_cast<std::size_t>(c); }

/// Sector name -> category for the consolidated spending vector. GFCF is
/// reserved for the separate capital-formation vector and never mapped.
class CategoryConcordance {
  public:
    /// Every sector of `sectors` ends up either mapped or unsorted. Throws
    /// UnknownSector for mapping keys outside `sectors`, InvalidArgument for GFCF.
    CategoryConcordance(const std::vector<std::string>& sectors, std::map<std::string, SpendingCategory> mapping);

    /// Two-column delimited file (sector, category); header row optional.
    static CategoryConcordance load(const std::filesystem::path& file, const std::vector<std::string>& sectors,
                                    char delimiter = ',');

    std::optional<SpendingCategory> category_of(const std::string& sector) const;
    /// Category per sector position, in index order.
    const std::vector<std::optional<SpendingCategory>>& by_position() const noexcept { return by_position_; }
    const std::set<std::string>& unsorted() const noexcept { return unsorted_; }

  private:
    std::vector<std::string> sectors_;
    std::vector<std::optional<SpendingCategory>> by_position_;
    std::set<std::string> unsorted_;
};

using HouseholdBudgetTable = std::map<std::string, std::map<SpendingCategory, double>>;

inline constexpr double kCalendarWeeksPerYear = 365.25 / 7.0;

/// total[c] = sum over types of weekly budget x household count x weeks.
/// Throws MissingHouseholdType.
CategoryTotals aggregate_household_budgets(const HouseholdBudgetTable& table,
                                           const std::map<std::string, double>& counts,
                                           double weeks_per_year = kCalendarWeeksPerYear);

/// Category sums of the consolidated spending vector, with the GFCF slot
/// holding the GFCF vector total. Throws UnsortedNonzeroDemand.
CategoryTotals baseline_category_totals(const Vector& spending, const Vector& gfcf,
                                        const CategoryConcordance& concordance, const RegionSectorIndex& index);

/// factor = target / baseline (1 when both are zero).
/// Throws ZeroBaselineNonzeroTarget, InvalidArgument for negative values.
CategoryTotals category_scaling_factors(const CategoryTotals& baseline, const CategoryTotals& targets);

/// Every entry scaled so the total equals `target_total`. Throws ZeroBaseNonzeroTarget.
Vector scale_gfcf(const Vector& gfcf_base, double target_total);

struct CofogEntry {
    std::string function;
    double spending = 0.0;
    bool included = true;
};

using CofogTable = std::vector<CofogEntry>;

/// Three-column delimited file (function, spending, included); header row optional.
CofogTable load_cofog(const std::filesystem::path& file, char delimiter = ',');

/// Share of eligible public spending that a scenario keeps. Throws EmptyCofogTable.
double government_factor(const CofogTable& table);

/// gdp x rate. Throws InvalidArgument unless gdp > 0 and 0 < rate < 1.
double gfcf_depreciation_target(double gdp, double rate);

struct BudgetSplit {
    double reduced = 0.0;
    double moved = 0.0;
};

/// Removes `fraction` of a budget; reduced + moved == food_total exactly.
BudgetSplit dining_out_adjustment(double food_total, double fraction);

/// Target for one category: absolute amount or a multiple of the baseline.
struct CategoryTarget {
    enum class Kind { Absolute, BaselineFactor };
    Kind kind = Kind::Absolute;
    double value = 0.0;
};

/// Moves `fraction` of one category's resolved target into another
/// category (or drops it when `to` is empty).
struct BudgetMove {
    SpendingCategory from = SpendingCategory::Groceries;
    std::optional<SpendingCategory> to;
    double fraction = 0.0;
};

struct ScenarioSpec {
    std::string name;
    std::string home_region;
    std::string currency_unit;
    PerCategory<std::optional<CategoryTarget>> targets{};
    /// Fills the public-administration target as baseline x factor when that target is absent.
    std::optional<double> government_factor;
    std::vector<BudgetMove> adjustments;
    std::optional<std::filesystem::path> category_concordance;
    std::optional<std::filesystem::path> sector_groups;

    /// Structured JSON scenario file. Relative concordance paths resolve
    /// against the file's directory. Throws ParseError, UnknownCategory.
    static ScenarioSpec load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;

    /// Targets with baseline factors, government factor and moves applied.
    CategoryTotals resolve_targets(const CategoryTotals& baseline) const;
    double gfcf_target(const CategoryTotals& baseline) const { return resolve_targets(baseline)[slot(SpendingCategory::Gfcf)]; }
};

struct ScenarioDemand {
    Vector spending;
    Vector gfcf;
    CategoryTotals baseline{};
    CategoryTotals targets{};
    CategoryTotals factors{};
};

/// Scales each sector's spending by its category factor and GFCF by its total.
ScenarioDemand apply_scenario(const Vector& spending_base, const Vector& gfcf_base,
                              const CategoryConcordance& concordance, const RegionSectorIndex& index,
                              const ScenarioSpec& spec);

/// Splits spending into one column per category (GFCF column = gfcf vector),
/// so the columns sum to spending + gfcf. Throws UnsortedNonzeroDemand.
Matrix decompose_by_category(const Vector& spending, const Vector& gfcf, const CategoryConcordance& concordance,
                             const RegionSectorIndex& index);

}  // namespace mriofp
