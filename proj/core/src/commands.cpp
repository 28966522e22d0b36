#include "mriofp/commands.hpp"

#include "mriofp/error.hpp"
#include "mriofp/indicators.hpp"
#include "mriofp/layout.hpp"
#include "mriofp/report.hpp"
#include "mriofp/scenario.hpp"
#include "mriofp/table_io.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>

namespace mriofp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_file(const fs::path& p, const std::string& what) {
    if (!fs::is_regular_file(p)) throw Error(ErrorKind::Io, what + " not found: " + p.string());
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + (dir / name).string());
    return f;
}

struct ResolvedScenario {
    std::string name;
    std::string home_region;
    std::string source;
    std::optional<ScenarioSpec> spec;
    fs::path categories;
    fs::path groups;
};

/// Paths and scenario specs resolved before any table is read.
struct ResolvedRun {
    LayoutDescriptor layout;
    fs::path params_file;
    std::vector<ResolvedScenario> scenarios;
};

std::optional<std::string> default_home(const RunConfig& config, const LayoutDescriptor& layout) {
    if (config.home_region) return config.home_region;
    return layout.home_region;
}

ResolvedRun resolve(const RunConfig& config) {
    require_file(config.layout, "layout descriptor");
    ResolvedRun run;
    run.layout = LayoutDescriptor::load(config.layout);
    const auto& layout = run.layout;

    require_file(layout.resolve(layout.transactions), "transaction table");
    require_file(layout.resolve(layout.final_demand), "final-demand table");
    require_file(layout.resolve(layout.total_output), "total-output table");
    for (const auto& e : layout.extensions) {
        require_file(layout.resolve(e.path), "extension '" + e.name + "'");
        if (e.direct_path) require_file(layout.resolve(*e.direct_path), "direct use of '" + e.name + "'");
    }

    if (config.params) {
        run.params_file = *config.params;
    } else if (layout.params) {
        run.params_file = layout.resolve(*layout.params);
    } else {
        throw Error(ErrorKind::InvalidArgument, "no conversion params (use --params or a layout 'params' entry)");
    }
    require_file(run.params_file, "conversion params");

    if (config.scenarios.empty()) throw Error(ErrorKind::UnknownScenario, "no scenario given");
    for (const auto& name : config.scenarios) {
        ResolvedScenario s;
        s.name = name;
        if (name == "actual" || name.starts_with("actual:")) {
            const auto home = name == "actual" ? default_home(config, layout) : std::optional(name.substr(7));
            if (!home || home->empty()) throw Error(ErrorKind::InvalidArgument, "'actual' needs --home-region");
            s.home_region = *home;
            s.name = "actual:" + *home;
            s.source = "actual demand";
        } else {
            fs::path spec_file;
            if (const auto it = layout.scenarios.find(name); it != layout.scenarios.end()) {
                spec_file = layout.resolve(it->second);
            } else if (fs::is_regular_file(name)) {
                spec_file = name;
            } else {
                throw Error(ErrorKind::UnknownScenario, "'" + name + "' is neither a layout scenario nor a file");
            }
            require_file(spec_file, "scenario spec");
            s.spec = ScenarioSpec::load(spec_file);
            s.name = s.spec->name;
            s.home_region = config.home_region.value_or(s.spec->home_region);
            s.source = spec_file.generic_string();
        }

        const auto pick = [&](const std::optional<fs::path>& from_spec, const std::optional<fs::path>& from_layout,
                              const char* what) {
            if (s.spec && from_spec) return *from_spec;
            if (from_layout) return layout.resolve(*from_layout);
            throw Error(ErrorKind::InvalidArgument, std::string("no ") + what + " for scenario '" + s.name + "'");
        };
        s.categories = pick(s.spec ? s.spec->category_concordance : std::nullopt, layout.category_concordance,
                            "category concordance");
        s.groups = pick(s.spec ? s.spec->sector_groups : std::nullopt, layout.sector_groups, "sector groups");
        require_file(s.categories, "category concordance");
        require_file(s.groups, "sector groups");
        run.scenarios.push_back(std::move(s));
    }
    return run;
}

struct ScenarioResult {
    std::vector<FootprintReport> reports;
    Provenance provenance;
};

class Pipeline {
  public:
    Pipeline(const RunConfig& config, ResolvedRun run)
        : config_(config),
          run_(std::move(run)),
          account_(ingest(run_.layout)),
          params_(ConversionParamsSet::load(run_.params_file)),
          leontief_(technical_coefficients(account_.transactions, account_.total_output)) {
        if (config.extensions.empty()) {
            for (const auto& e : account_.extensions) extensions_.push_back(&e);
        } else {
            for (const auto& name : config.extensions) extensions_.push_back(&account_.extension(name));
        }
    }

    const MrioAccount& account() const { return account_; }

    ScenarioResult evaluate(const ResolvedScenario& s) const {
        const auto& index = account_.index;
        index.region_position(s.home_region);
        const auto categories = CategoryConcordance::load(s.categories, index.sectors(), run_.layout.delimiter);
        const auto groups = SectorGroupConcordance::load(s.groups, index.sectors(), run_.layout.delimiter);
        const auto params = params_.for_region(s.home_region);

        const auto base = consolidate_demand(account_, DemandSelection::consumption_of(s.home_region));
        const Matrix base_columns = decompose_by_category(base.spending, base.gfcf, categories, index);
        const auto base_solved = solve_scenario(leontief_, s.name, s.home_region, base_columns);

        ScenarioResult result;
        std::optional<ScenarioOutput> scenario_solved;
        if (s.spec) {
            auto demand = apply_scenario(base.spending, base.gfcf, categories, index, *s.spec);
            scenario_solved = solve_scenario(leontief_, s.name, s.home_region,
                                             decompose_by_category(demand.spending, demand.gfcf, categories, index));
            result.provenance.scenario = std::move(demand);
        }
        const ScenarioOutput& solved = scenario_solved ? *scenario_solved : base_solved;

        for (const auto* ext : extensions_) {
            const ReportInputs inputs{account_, groups, params, embodied_total(account_, *ext, base_solved.output)};
            result.reports.push_back(build_report(inputs, *ext, solved));
        }

        auto& p = result.provenance;
        p.layout = config_.layout.generic_string();
        p.scenario_source = s.source;
        p.year = account_.year;
        p.currency_unit = account_.currency_unit;
        p.regions = index.regions().size();
        p.sectors = index.sectors().size();
        for (const auto& w : account_.warnings) p.warnings.push_back(w.region + "/" + w.sector + ": " + w.message);
        return result;
    }

  private:
    const RunConfig& config_;
    ResolvedRun run_;
    MrioAccount account_;
    ConversionParamsSet params_;
    LeontiefOperator leontief_;
    std::vector<const ExtensionAccount*> extensions_;
};

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

void print_report(std::ostream& out, const FootprintReport& r) {
    out << "  " << r.extension_name << ": " << format_number(r.total) << ' ' << r.unit;
    if (r.direct_use != 0.0) out << " (+ direct " << format_number(r.direct_use) << ')';
    out << ", per capita " << format_number(r.per_capita) << ' ' << r.unit;
    if (r.hours_week_equivalent) out << ", " << format_number(*r.hours_week_equivalent) << " hours/week";
    out << '\n';
}

}  // namespace

std::string scenario_file_stem(const std::string& scenario) {
    std::string out = scenario;
    for (auto& c : out) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '-';
    }
    return out;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        require_file(config.layout, "layout descriptor");
        const auto layout = LayoutDescriptor::load(config.layout);
        const auto account = ingest(layout);
        const auto balance = validate_balance(account, layout.balance_tolerance);
        const auto a = technical_coefficients(account.transactions, account.total_output);
        const auto spectral = productivity_check(a);
        const auto columns = a.column_sum_violations();
        const auto& idx = account.index;

        const bool productive = spectral.verdict != ProductivityVerdict::Unproductive;
        const bool clean = balance.clean() && productive;

        out << "layout: " << config.layout.generic_string() << '\n'
            << "regions: " << idx.regions().size() << ", sectors: " << idx.sectors().size() << ", n = " << idx.size()
            << '\n'
            << "balance: max relative residual " << format_number(balance.max_relative_residual) << " (tolerance "
            << format_number(balance.tolerance) << "), " << balance.violations.size() << " row(s) flagged\n";
        for (const auto& v : balance.violations) {
            out << "  " << v.region << '/' << v.sector << ": " << format_number(v.relative_residual) << '\n';
        }
        const char* verdict = spectral.verdict == ProductivityVerdict::Productive     ? "productive"
                              : spectral.verdict == ProductivityVerdict::Unproductive ? "unproductive"
                                                                                      : "indeterminate";
        out << "productivity: spectral radius " << format_number(spectral.radius) << " in ["
            << format_number(spectral.lower_bound) << ", " << format_number(spectral.upper_bound) << "], " << verdict
            << '\n'
            << "columns with sum >= 1: " << columns.size() << '\n';
        for (const auto& w : account.warnings) out << "warning: " << w.region << '/' << w.sector << ": " << w.message << '\n';
        out << "status: " << (clean ? "clean" : "violations") << '\n';

        if (config.out) {
            json j;
            j["layout"] = config.layout.generic_string();
            j["regions"] = idx.regions().size();
            j["sectors"] = idx.sectors().size();
            j["balance"] = {{"tolerance", balance.tolerance}, {"max_relative_residual", balance.max_relative_residual}};
            j["balance"]["violations"] = json::array();
            for (const auto& v : balance.violations) {
                j["balance"]["violations"].push_back(
                    {{"region", v.region}, {"sector", v.sector}, {"relative_residual", v.relative_residual}});
            }
            j["productivity"] = {{"radius", spectral.radius},
                                 {"lower_bound", spectral.lower_bound},
                                 {"upper_bound", spectral.upper_bound},
                                 {"iterations", spectral.iterations},
                                 {"converged", spectral.converged},
                                 {"verdict", verdict}};
            j["column_sum_violations"] = json::array();
            for (auto c : columns) {
                j["column_sum_violations"].push_back(idx.regions()[idx.region_of(c)] + "/" + idx.sectors()[idx.sector_of(c)]);
            }
            j["warnings"] = json::array();
            for (const auto& w : account.warnings) j["warnings"].push_back({{"region", w.region}, {"sector", w.sector}, {"message", w.message}});
            j["status"] = clean ? "clean" : "violations";
            open_output(*config.out, "validation.json") << j.dump(2) << '\n';
        }
        return clean ? kExitClean : kExitValidation;
    });
}

int cmd_footprint(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!config.out) throw Error(ErrorKind::InvalidArgument, "footprint needs --out");
        auto run = resolve(config);
        const auto scenarios = run.scenarios;
        const Pipeline pipeline(config, std::move(run));
        for (const auto& s : scenarios) {
            const auto result = pipeline.evaluate(s);
            const auto stem = "footprint_" + scenario_file_stem(s.name);
            auto csv = open_output(*config.out, stem + ".csv");
            write_report_csv(csv, result.reports);
            auto summary = open_output(*config.out, stem + ".json");
            write_report_summary(summary, result.reports, result.provenance);
            out << "scenario " << s.name << " (home region " << s.home_region << ")\n";
            for (const auto& r : result.reports) print_report(out, r);
        }
        return kExitClean;
    });
}

int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!config.out) throw Error(ErrorKind::InvalidArgument, "compare needs --out");
        auto run = resolve(config);
        const auto scenarios = run.scenarios;
        const Pipeline pipeline(config, std::move(run));

        std::vector<std::vector<FootprintReport>> by_scenario;
        for (const auto& s : scenarios) by_scenario.push_back(pipeline.evaluate(s).reports);

        std::vector<ComparisonTable> tables;
        const std::size_t n_ext = by_scenario.front().size();
        for (std::size_t e = 0; e < n_ext; ++e) {
            std::vector<FootprintReport> column;
            for (const auto& reports : by_scenario) column.push_back(reports[e]);
            tables.push_back(compare_report(column));
        }
        std::vector<PlotSeries> series;
        for (const auto& reports : by_scenario) {
            for (const auto& r : reports) {
                auto s = plot_series(r);
                series.insert(series.end(), s.begin(), s.end());
            }
        }
        auto comparison = open_output(*config.out, "comparison.csv");
        write_comparison_csv(comparison, tables);
        auto plots = open_output(*config.out, "plot_series.json");
        write_plot_series(plots, series);

        for (const auto& t : tables) {
            out << t.extension_name << " [" << t.unit << "]\n";
            for (const auto& r : t.rows) {
                out << "  " << r.scenario << ": per capita " << format_number(r.per_capita);
                if (r.hours_week_equivalent) out << ", " << format_number(*r.hours_week_equivalent) << " hours/week";
                out << ", delta " << format_number(r.delta_total) << '\n';
            }
        }
        return kExitClean;
    });
}

namespace {

const std::vector<std::string>& fixture_group_labels() {
    static const std::vector<std::string> labels = {"Agriculture", "Mining and quarrying", "Manufacturing",
                                                    "Utilities",   "Construction",          "Trade and transport",
                                                    "Services"};
    return labels;
}

// Multipliers applied per category by the fixture's "reduced" scenario.
constexpr PerCategory<double> kReducedFactors = {1.4, 1.3, 0.4, 0.45, 0.7, 0.2, 0.5, 0.3, 0.35, 0.7, 0.0, 0.5, 0.9};

}  // namespace

int cmd_fixture(const FixtureConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto account = fixture(config.regions, config.sectors, config.seed);
        fs::create_directories(config.out);
        auto layout = default_layout_for(account, config.out);
        layout.home_region = account.index.regions().front();
        layout.category_concordance = "categories.csv";
        layout.sector_groups = "sector_groups.csv";
        layout.params = "params.json";
        layout.scenarios = {{"halved", "scenarios/halved.json"}, {"reduced", "scenarios/reduced.json"}};
        write_account(account, layout);

        const auto& sectors = account.index.sectors();
        {
            auto f = open_output(config.out, "categories.csv");
            write_row(f, {"sector", "category"}, ',');
            for (std::size_t s = 0; s < sectors.size(); ++s) {
                write_row(f, {sectors[s], std::string(label(all_categories()[s % (kCategoryCount - 1)]))}, ',');
            }
        }
        {
            auto f = open_output(config.out, "sector_groups.csv");
            write_row(f, {"sector", "group"}, ',');
            for (std::size_t s = 0; s < sectors.size(); ++s) {
                write_row(f, {sectors[s], fixture_group_labels()[s % fixture_group_labels().size()]}, ',');
            }
        }
        {
            const double population = 1000.0 * static_cast<double>(account.index.size());
            json p{{"weeks_worked_per_year", 46.6},
                   {"working_life_share", 0.8},
                   {"working_age_population", 0.65 * population},
                   {"total_population", population}};
            open_output(config.out, "params.json") << p.dump(2) << '\n';
        }

        fs::create_directories(config.out / "scenarios");
        auto spec_with = [&](const std::string& name, auto factor_of) {
            ScenarioSpec spec;
            spec.name = name;
            spec.home_region = *layout.home_region;
            spec.currency_unit = account.currency_unit;
            for (auto c : all_categories()) {
                spec.targets[slot(c)] = CategoryTarget{CategoryTarget::Kind::BaselineFactor, factor_of(c)};
            }
            spec.save(config.out / "scenarios" / (name + ".json"));
        };
        spec_with("halved", [](SpendingCategory c) { return c == SpendingCategory::Groceries ? 0.5 : 1.0; });
        spec_with("reduced", [](SpendingCategory c) { return kReducedFactors[slot(c)]; });

        layout.save(config.out / "layout.json");
        out << "wrote " << config.regions << " x " << config.sectors << " fixture (seed " << config.seed << ") to "
            << config.out.generic_string() << '\n';
        return kExitClean;
    });
}

}  // namespace mriofp
