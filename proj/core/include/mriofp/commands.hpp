#pragma once

// The four CLI verbs as library functions. Each returns the process exit
// code: 0 clean, 1 operational error, 2 validation failure. Human-readable
// progress goes to `out`, diagnostics to `err`; files go to `RunConfig::out`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mriofp {

inline constexpr int kExitClean = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitValidation = 2;

struct RunConfig {
    std::filesystem::path layout;
    /// Spec file paths, names listed in the layout, or "actual[:REGION]".
    std::vector<std::string> scenarios;
    std::optional<std::filesystem::path> params;
    std::optional<std::filesystem::path> out;
    std::vector<std::string> extensions;  // empty = all
    std::optional<std::string> home_region;
};

struct FixtureConfig {
    int regions = 2;
    int sectors = 3;
    std::uint64_t seed = 42;
    std::filesystem::path out;
};

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_footprint(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_fixture(const FixtureConfig& config, std::ostream& out, std::ostream& err);

/// File-name-safe form of a scenario name ("actual:GB" -> "actual-GB").
std::string scenario_file_stem(const std::string& scenario);

}  // namespace mriofp
