#include "mriofp/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_run_options(CLI::App* cmd, mriofp::RunConfig& config, std::string& extensions, std::string& out,
                     std::string& params, std::string& home) {
    cmd->add_option("--layout", config.layout, "Layout descriptor (JSON)")->required();
    cmd->add_option("--extensions", extensions, "Comma-separated extension names (default: all)");
    cmd->add_option("--home-region", home, "Home region for 'actual' scenarios; overrides scenario specs");
    cmd->add_option("--params", params, "Conversion params (JSON); default: the layout's 'params' entry");
    cmd->add_option("--out", out, "Output directory");
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto end = s.find(',', start);
        const auto item = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!item.empty()) out.push_back(item);
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Consumption-based labour, energy, emissions and material footprints from MRIO tables"};
    app.require_subcommand(1);

    mriofp::RunConfig config;
    std::string extensions, out, params, home;

    auto* validate = app.add_subcommand("validate", "Check table balance and productivity");
    add_run_options(validate, config, extensions, out, params, home);

    auto* footprint = app.add_subcommand("footprint", "Compute footprint reports for scenarios");
    add_run_options(footprint, config, extensions, out, params, home);
    footprint->add_option("--scenario", config.scenarios, "Scenario name, spec file, or actual[:REGION]")->required();

    auto* compare = app.add_subcommand("compare", "Compare scenarios and emit plot series");
    add_run_options(compare, config, extensions, out, params, home);
    compare->add_option("--scenario", config.scenarios, "Scenario name, spec file, or actual[:REGION]")->required();

    mriofp::FixtureConfig fixture;
    std::string fixture_out;
    auto* fixture_cmd = app.add_subcommand("fixture", "Write a synthetic, balanced MRIO table set");
    fixture_cmd->add_option("--regions", fixture.regions, "Number of regions")->check(CLI::PositiveNumber);
    fixture_cmd->add_option("--sectors", fixture.sectors, "Number of sectors")->check(CLI::PositiveNumber);
    fixture_cmd->add_option("--seed", fixture.seed, "Random seed");
    fixture_cmd->add_option("--out", fixture_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mriofp::kExitError;
    }

    config.extensions = split_commas(extensions);
    if (!out.empty()) config.out = out;
    if (!params.empty()) config.params = params;
    if (!home.empty()) config.home_region = home;

    if (*validate) return mriofp::cmd_validate(config, std::cout, std::cerr);
    if (*footprint) return mriofp::cmd_footprint(config, std::cout, std::cerr);
    if (*compare) return mriofp::cmd_compare(config, std::cout, std::cerr);
    fixture.out = fixture_out;
    return mriofp::cmd_fixture(fixture, std::cout, std::cerr);
}
