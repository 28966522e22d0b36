#include "mriofp/report.hpp"

#include "mriofp/table_io.hpp"

#include <json.hpp>

#include <ostream>

namespace mriofp {

using nlohmann::json;

namespace {

constexpr const char* kHoursWeek = "hours/week";

std::string per_person(const std::string& unit) { return unit + "/person/year"; }

PlotSeries series(const FootprintReport& r, const char* figure, std::string extension, std::string units) {
    PlotSeries s;
    s.figure = figure;
    s.scenario = r.scenario;
    s.extension = std::move(extension);
    s.units = std::move(units);
    s.metadata["home_region"] = r.home_region;
    s.metadata["weeks_worked_per_year"] = format_number(r.params.weeks_worked_per_year);
    s.metadata["working_life_share"] = format_number(r.params.working_life_share);
    s.metadata["working_age_population"] = format_number(r.params.working_age_population);
    s.metadata["total_population"] = format_number(r.params.total_population);
    return s;
}

void close(PlotSeries& s) {
    s.total = 0.0;
    for (const auto& seg : s.segments) s.total += seg.value;
}

json params_json(const ConversionParams& p) {
    return {{"weeks_worked_per_year", p.weeks_worked_per_year},
            {"working_life_share", p.working_life_share},
            {"working_age_population", p.working_age_population},
            {"total_population", p.total_population},
            {"calendar_weeks_per_year", p.calendar_weeks_per_year}};
}

json totals_json(const CategoryTotals& t) {
    json j = json::object();
    for (auto c : all_categories()) j[std::string(label(c))] = t[slot(c)];
    return j;
}

}  // namespace

std::vector<PlotSeries> plot_series(const FootprintReport& r) {
    std::vector<PlotSeries> out;
    if (r.kind == ExtensionKind::Labour && r.hours_week_equivalent) {
        auto hw = [&](double hours) { return hours_per_week_equivalent(hours, r.params); };

        auto fig1 = series(r, "fig1", r.extension_name, kHoursWeek);
        for (auto c : all_categories()) fig1.segments.push_back({std::string(label(c)), hw(r.by_category[slot(c)])});
        auto fig2 = series(r, "fig2", r.extension_name, kHoursWeek);
        fig2.segments = {{"domestic", hw(r.by_origin.domestic)}, {"imported", hw(r.by_origin.imported)}};
        auto fig3 = series(r, "fig3", r.extension_name, kHoursWeek);
        for (std::size_t g = 0; g < r.sector_groups.size(); ++g) {
            fig3.segments.push_back({r.sector_groups[g], hw(r.by_sector_group[g])});
        }
        auto fig4 = series(r, "fig4", r.extension_name, kHoursWeek);
        fig4.segments = {{"low", hw(r.by_skill->low)}, {"medium", hw(r.by_skill->medium)}, {"high", hw(r.by_skill->high)}};
        for (auto* s : {&fig1, &fig2, &fig3, &fig4}) {
            close(*s);
            out.push_back(std::move(*s));
        }
        return out;
    }

    const double pop = r.params.total_population;
    if (r.kind == ExtensionKind::Energy || r.kind == ExtensionKind::Emissions) {
        auto fig5 = series(r, "fig5", r.extension_name, per_person(r.unit));
        fig5.segments = {{"domestic", r.by_origin.domestic / pop},
                         {"imported", r.by_origin.imported / pop},
                         {"direct use", r.direct_use / pop}};
        close(fig5);
        out.push_back(std::move(fig5));
    } else if (r.kind == ExtensionKind::Material && r.material) {
        auto tmc = series(r, "fig5", r.extension_name + " (TMC)", per_person(r.unit));
        tmc.segments = {{"domestic", r.by_origin.domestic / pop}, {"imported", r.by_origin.imported / pop}};
        close(tmc);
        out.push_back(std::move(tmc));
        auto mf = series(r, "fig5", r.extension_name + " (MF)", per_person(r.unit));
        mf.segments = {{"domestic", r.material_mf_by_origin->domestic / pop},
                       {"imported", r.material_mf_by_origin->imported / pop}};
        close(mf);
        out.push_back(std::move(mf));
    }
    return out;
}

void write_report_csv(std::ostream& out, const std::vector<FootprintReport>& reports) {
    write_row(out, {"scenario", "extension", "dimension", "label", "value", "unit"}, ',');
    for (const auto& r : reports) {
        auto row = [&](const char* dimension, const std::string& lbl, double value, const std::string& unit) {
            write_row(out, {r.scenario, r.extension_name, dimension, lbl, format_number(value), unit}, ',');
        };
        const std::string per_cap = per_person(r.unit);
        row("total", "embodied", r.total, r.unit);
        row("total", "direct use", r.direct_use, r.unit);
        row("per_capita", "total", r.per_capita, per_cap);
        if (r.hours_week_equivalent) row("hours_week_equivalent", "total", *r.hours_week_equivalent, kHoursWeek);
        row("origin", "domestic", r.by_origin.domestic, r.unit);
        row("origin", "imported", r.by_origin.imported, r.unit);
        for (std::size_t g = 0; g < r.sector_groups.size(); ++g) row("sector_group", r.sector_groups[g], r.by_sector_group[g], r.unit);
        if (r.by_skill) {
            row("skill", "low", r.by_skill->low, r.unit);
            row("skill", "medium", r.by_skill->medium, r.unit);
            row("skill", "high", r.by_skill->high, r.unit);
        }
        for (auto c : all_categories()) row("category", std::string(label(c)), r.by_category[slot(c)], r.unit);
        for (std::size_t k = 0; k < r.stressors.size(); ++k) row("stressor", r.stressors[k], r.by_stressor[k], r.unit);
        if (r.material) {
            row("material", "TMC", r.material->tmc, r.unit);
            row("material", "MF", r.material->mf, r.unit);
            row("material_per_capita", "TMC", r.material->tmc / r.params.total_population, per_cap);
            row("material_per_capita", "MF", r.material->mf / r.params.total_population, per_cap);
            row("material_mf_origin", "domestic", r.material_mf_by_origin->domestic, r.unit);
            row("material_mf_origin", "imported", r.material_mf_by_origin->imported, r.unit);
        }
    }
}

void write_report_summary(std::ostream& out, const std::vector<FootprintReport>& reports, const Provenance& p) {
    json j;
    j["provenance"] = {{"layout", p.layout},        {"scenario_source", p.scenario_source},
                       {"year", p.year},            {"currency_unit", p.currency_unit},
                       {"regions", p.regions},      {"sectors", p.sectors},
                       {"warnings", p.warnings}};
    if (!reports.empty()) {
        j["scenario"] = reports.front().scenario;
        j["home_region"] = reports.front().home_region;
        j["params"] = params_json(reports.front().params);
    }
    if (p.scenario) {
        j["category_baseline"] = totals_json(p.scenario->baseline);
        j["category_targets"] = totals_json(p.scenario->targets);
        j["category_factors"] = totals_json(p.scenario->factors);
    }
    j["extensions"] = json::array();
    for (const auto& r : reports) {
        json e{{"name", r.extension_name},
               {"kind", std::string(to_string(r.kind))},
               {"unit", r.unit},
               {"total", r.total},
               {"direct_use", r.direct_use},
               {"per_capita", r.per_capita},
               {"per_capita_unit", per_person(r.unit)},
               {"domestic", r.by_origin.domestic},
               {"imported", r.by_origin.imported}};
        if (r.hours_week_equivalent) e["hours_week_equivalent"] = *r.hours_week_equivalent;
        if (r.material) e["material"] = {{"tmc", r.material->tmc}, {"mf", r.material->mf}};
        j["extensions"].push_back(e);
    }
    out << j.dump(2) << '\n';
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonTable>& tables) {
    write_row(out,
              {"extension", "scenario", "home_region", "unit", "total", "direct_use", "per_capita",
               "hours_week_equivalent", "domestic_share", "delta_total", "delta_per_capita", "delta_hours_week"},
              ',');
    for (const auto& t : tables) {
        for (const auto& r : t.rows) {
            write_row(out,
                      {t.extension_name, r.scenario, r.home_region, t.unit, format_number(r.total),
                       format_number(r.direct_use), format_number(r.per_capita),
                       r.hours_week_equivalent ? format_number(*r.hours_week_equivalent) : "",
                       format_number(r.domestic_share), format_number(r.delta_total),
                       format_number(r.delta_per_capita), r.delta_hours_week ? format_number(*r.delta_hours_week) : ""},
                      ',');
        }
    }
}

void write_plot_series(std::ostream& out, const std::vector<PlotSeries>& all) {
    json j = json::array();
    for (const auto& s : all) {
        json segments = json::array();
        for (const auto& seg : s.segments) segments.push_back({{"label", seg.label}, {"value", seg.value}});
        j.push_back({{"figure", s.figure},
                     {"scenario", s.scenario},
                     {"extension", s.extension},
                     {"units", s.units},
                     {"segments", segments},
                     {"total", s.total},
                     {"metadata", s.metadata}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace mriofp
