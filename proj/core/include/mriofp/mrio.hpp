#pragma once

#include "mriofp/algebra.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mriofp {

/// Flat (region, sector) indexing in row-major region-block order.
class RegionSectorIndex {
  public:
    RegionSectorIndex() = default;
    RegionSectorIndex(std::vector<std::string> regions, std::vector<std::string> sectors);

    const std::vector<std::string>& regions() const noexcept { return regions_; }
    const std::vector<std::string>& sectors() const noexcept { return sectors_; }
    Index size() const noexcept { return static_cast<Index>(regions_.size() * sectors_.size()); }

    Index flat(std::size_t region, std::size_t sector) const noexcept {
        return static_cast<Index>(region * sectors_.size() + sector);
    }
    Index flat(const std::string& region, const std::string& sector) const;
    std::size_t region_of(Index i) const noexcept { return static_cast<std::size_t>(i) / sectors_.size(); }
    std::size_t sector_of(Index i) const noexcept { return static_cast<std::size_t>(i) % sectors_.size(); }

    /// Throws UnknownRegion.
    std::size_t region_position(const std::string& region) const;
    std::optional<std::size_t> sector_position(const std::string& sector) const;
    bool has_region(const std::string& region) const { return region_lookup_.count(region) != 0; }

    friend bool operator==(const RegionSectorIndex& a, const RegionSectorIndex& b) {
        return a.regions_ == b.regions_ && a.sectors_ == b.sectors_;
    }

  private:
    std::vector<std::string> regions_;
    std::vector<std::string> sectors_;
    std::unordered_map<std::string, std::size_t> region_lookup_;
    std::unordered_map<std::string, std::size_t> sector_lookup_;
};

/// Final-demand classes as stored in the tables.
enum class DemandCategory { Households, NonProfit, Government, Gfcf, InventoryChange };

std::string_view to_string(DemandCategory c) noexcept;
std::optional<DemandCategory> parse_demand_category(std::string_view label) noexcept;

/// Header of one Y column. `category` is empty for columns whose label is
/// not one of the five known classes; those columns are kept but never selected.
struct DemandColumn {
    std::string region;
    std::string label;
    std::optional<DemandCategory> category;

    friend bool operator==(const DemandColumn&, const DemandColumn&) = default;
};

enum class ExtensionKind { Labour, Energy, Emissions, Material, Other };

std::string_view to_string(ExtensionKind k) noexcept;
std::optional<ExtensionKind> parse_extension_kind(std::string_view label) noexcept;

enum class MaterialUse { Used, Unused };

struct ExtensionAccount {
    std::string name;
    std::string unit;
    ExtensionKind kind = ExtensionKind::Other;
    std::vector<std::string> stressors;
    Matrix rows;                   // stressors x n
    std::optional<Matrix> direct;  // stressors x regions (household direct use)
    std::map<std::string, MaterialUse> material_flags;

    /// Sum over stressor rows.
    Vector combined() const { return rows.colwise().sum().transpose(); }
};

struct DataWarning {
    std::string region;
    std::string sector;
    std::string message;
};

struct MrioAccount {
    RegionSectorIndex index;
    Matrix transactions;       // Z, n x n
    Matrix final_demand;       // Y, n x columns
    std::vector<DemandColumn> demand_columns;
    Vector total_output;       // x
    std::vector<ExtensionAccount> extensions;
    int year = 0;
    std::string currency_unit;
    std::vector<DataWarning> warnings;

    const ExtensionAccount& extension(const std::string& name) const;
    const ExtensionAccount* find_extension(const std::string& name) const noexcept;
};

/// Demand classes a scenario may select. Inventory change is not representable.
enum class SpendingClass { Households, NonProfit, Government, Gfcf };

/// Throws UnknownCategory, including for "inventory-change" which is excluded by policy.
SpendingClass parse_spending_class(std::string_view label);
DemandCategory to_demand_category(SpendingClass c) noexcept;

struct DemandSelection {
    std::vector<std::string> paying_regions;
    std::set<SpendingClass> classes;
    /// When false, GFCF is returned as its own vector by consolidate_demand.
    bool merge = false;

    static DemandSelection from_labels(std::vector<std::string> regions, const std::vector<std::string>& labels,
                                       bool merge = false);
    /// Households + non-profit + government + GFCF of one region, GFCF kept apart.
    static DemandSelection consumption_of(const std::string& region);
};

/// Sum of the selected Y columns. Throws UnknownRegion, NegativeEntry.
Vector select_demand(const MrioAccount& account, const DemandSelection& selection);

struct ConsolidatedDemand {
    Vector spending;  // households + non-profit + government (+ GFCF when merged)
    Vector gfcf;      // zero when merged or not selected
};

ConsolidatedDemand consolidate_demand(const MrioAccount& account, const DemandSelection& selection);

struct BalanceViolation {
    Index row = 0;
    std::string region;
    std::string sector;
    double relative_residual = 0.0;
};

struct BalanceReport {
    double tolerance = 0.0;
    double max_relative_residual = 0.0;
    std::vector<BalanceViolation> violations;

    bool clean() const noexcept { return violations.empty(); }
};

inline constexpr double kDefaultBalanceTolerance = 1e-6;

/// Per-row |x - sum Z - sum Y| / max(x, 1) against `tolerance`.
BalanceReport validate_balance(const MrioAccount& account, double tolerance = kDefaultBalanceTolerance);

/// Deterministic, balanced, productive synthetic economy with labour (6 rows),
/// energy, emissions and material extensions.
MrioAccount fixture(int n_regions, int n_sectors, std::uint64_t seed);

/// Stressor labels used by the fixture for the six labour rows.
const std::vector<std::string>& labour_stressor_labels();

}  // namespace mriofp
