#pragma once

// File layout of an MRIO table set and the reader/writer for it.
//
// A layout descriptor is a JSON file:
//
//   {
//     "year": 2012, "currency_unit": "M EUR", "delimiter": ",",
//     "hours_per_worker_year": 1840, "balance_tolerance": 1e-6,
//     "transactions": "Z.csv", "final_demand": "Y.csv", "total_output": "x.csv",
//     "extensions": [
//       {"name": "labour", "kind": "labour", "unit": "1000 persons", "path": "labour.csv"},
//       {"name": "energy", "kind": "energy", "unit": "TJ", "path": "energy.csv", "direct": "energy_direct.csv"},
//       {"name": "material", "kind": "material", "unit": "kt", "path": "material.csv",
//        "material_flags": {"biomass used": "used", "biomass unused": "unused"}}
//     ],
//     "quirks": [{"region": "GB", "sector": "Natural gas", "message": "..."}],
//     "home_region": "GB", "category_concordance": "categories.csv",
//     "sector_groups": "sector_groups.csv", "params": "params.json",
//     "scenarios": {"decent-living": "scenarios/decent-living.json"}
//   }
//
// Relative paths resolve against the descriptor's directory.

#include "mriofp/mrio.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mriofp {

struct ExtensionLayout {
    std::string name;
    ExtensionKind kind = ExtensionKind::Other;
    std::string unit;
    std::filesystem::path path;
    std::optional<std::filesystem::path> direct_path;
    std::map<std::string, MaterialUse> material_flags;
};

struct DataQuirk {
    std::string region;
    std::string sector;
    std::string message;
};

inline constexpr double kDefaultHoursPerWorkerYear = 1840.0;

struct LayoutDescriptor {
    std::filesystem::path base_dir;
    char delimiter = ',';
    int year = 0;
    std::string currency_unit;
    double hours_per_worker_year = kDefaultHoursPerWorkerYear;
    double balance_tolerance = kDefaultBalanceTolerance;
    std::filesystem::path transactions;
    std::filesystem::path final_demand;
    std::filesystem::path total_output;
    std::vector<ExtensionLayout> extensions;
    std::vector<DataQuirk> quirks;

    std::optional<std::string> home_region;
    std::optional<std::filesystem::path> category_concordance;
    std::optional<std::filesystem::path> sector_groups;
    std::optional<std::filesystem::path> params;
    std::map<std::string, std::filesystem::path> scenarios;

    /// Throws Io, ParseError, UnitMismatch.
    static LayoutDescriptor load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;

    std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/// Reads every file named by the layout. Throws ParseError, DimensionMismatch,
/// UnitMismatch, Io. Data quirks become warnings on the account.
MrioAccount ingest(const LayoutDescriptor& layout);

/// Writes Z, Y, x and extension files to the paths named by `layout`
/// (which must use unit labels matching the account).
void write_account(const MrioAccount& account, const LayoutDescriptor& layout);

/// Layout naming the canonical file set for `account` under `dir`.
LayoutDescriptor default_layout_for(const MrioAccount& account, const std::filesystem::path& dir);

}  // namespace mriofp
