#pragma once

// Serialization of footprint reports: long-format CSV tables, JSON
// summaries, comparison tables and plot-ready stacked series.

#include "mriofp/indicators.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mriofp {

struct PlotSegment {
    std::string label;
    double value = 0.0;
};

/// One stacked bar: figure id (fig1..fig5), its segments and their sum.
struct PlotSeries {
    std::string figure;
    std::string scenario;
    std::string extension;
    std::string units;
    std::vector<PlotSegment> segments;
    double total = 0.0;
    std::map<std::string, std::string> metadata;
};

/// fig1 category, fig2 origin, fig3 sector group, fig4 skill (labour, hours/week);
/// fig5 domestic/imported/direct per capita (energy, emissions, material TMC and MF).
std::vector<PlotSeries> plot_series(const FootprintReport& report);

struct Provenance {
    std::string layout;
    std::string scenario_source;
    int year = 0;
    std::string currency_unit;
    std::size_t regions = 0;
    std::size_t sectors = 0;
    std::vector<std::string> warnings;
    /// Present for spec-driven scenarios.
    std::optional<ScenarioDemand> scenario;
};

/// Columns: scenario, extension, dimension, label, value, unit.
void write_report_csv(std::ostream& out, const std::vector<FootprintReport>& reports);
void write_report_summary(std::ostream& out, const std::vector<FootprintReport>& reports, const Provenance& provenance);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonTable>& tables);
void write_plot_series(std::ostream& out, const std::vector<PlotSeries>& series);

}  // namespace mriofp
