#include "mriofp/mrio.hpp"

#include "mriofp/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace mriofp {

namespace {

template <typename Map>
Map build_lookup(const std::vector<std::string>& labels, const char* what) {
    Map lookup;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!lookup.emplace(labels[i], i).second) {
            throw Error(ErrorKind::InvalidArgument, std::string("duplicate ") + what + " code '" + labels[i] + "'");
        }
    }
    return lookup;
}

constexpr std::array<std::string_view, 5> kDemandLabels = {"households", "non-profit", "government", "gfcf",
                                                           "inventory-change"};

constexpr std::array<std::string_view, 5> kKindLabels = {"labour", "energy", "emissions", "material", "other"};

}  // namespace

RegionSectorIndex::RegionSectorIndex(std::vector<std::string> regions, std::vector<std::string> sectors)
    : regions_(std::move(regions)),
      sectors_(std::move(sectors)),
      region_lookup_(build_lookup<decltype(region_lookup_)>(regions_, "region")),
      sector_lookup_(build_lookup<decltype(sector_lookup_)>(sectors_, "sector")) {
    if (regions_.empty() || sectors_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "index needs at least one region and one sector");
    }
}

Index RegionSectorIndex::flat(const std::string& region, const std::string& sector) const {
    const auto s = sector_position(sector);
    if (!s) throw Error(ErrorKind::UnknownSector, sector);
    return flat(region_position(region), *s);
}

std::size_t RegionSectorIndex::region_position(const std::string& region) const {
    const auto it = region_lookup_.find(region);
    if (it == region_lookup_.end()) throw Error(ErrorKind::UnknownRegion, region);
    return it->second;
}

std::optional<std::size_t> RegionSectorIndex::sector_position(const std::string& sector) const {
    const auto it = sector_lookup_.find(sector);
    if (it == sector_lookup_.end()) return std::nullopt;
    return it->second;
}

std::string_view to_string(DemandCategory c) noexcept { return kDemandLabels[static_cast<std::size_t>(c)]; }

std::optional<DemandCategory> parse_demand_category(std::string_view label) noexcept {
    for (std::size_t i = 0; i < kDemandLabels.size(); ++i) {
        if (kDemandLabels[i] == label) return static_cast<DemandCategory>(i);
    }
    return std::nullopt;
}

std::string_view to_string(ExtensionKind k) noexcept { return kKindLabels[static_cast<std::size_t>(k)]; }

std::optional<ExtensionKind> parse_extension_kind(std::string_view label) noexcept {
    for (std::size_t i = 0; i < kKindLabels.size(); ++i) {
        if (kKindLabels[i] == label) return static_cast<ExtensionKind>(i);
    }
    return std::nullopt;
}

const ExtensionAccount* MrioAccount::find_extension(const std::string& name) const noexcept {
    const auto it = std::find_if(extensions.begin(), extensions.end(), [&](const auto& e) { return e.name == name; });
    return it == extensions.end() ? nullptr : &*it;
}

const ExtensionAccount& MrioAccount::extension(const std::string& name) const {
    if (const auto* e = find_extension(name)) return *e;
    throw Error(ErrorKind::InvalidArgument, "no extension named '" + name + "'");
}

SpendingClass parse_spending_class(std::string_view label) {
    const auto c = parse_demand_category(label);
    if (!c) throw Error(ErrorKind::UnknownCategory, std::string(label));
    switch (*c) {
        case DemandCategory::Households: return SpendingClass::Households;
        case DemandCategory::NonProfit: return SpendingClass::NonProfit;
        case DemandCategory::Government: return SpendingClass::Government;
        case DemandCategory::Gfcf: return SpendingClass::Gfcf;
        case DemandCategory::InventoryChange: break;
    }
    throw Error(ErrorKind::UnknownCategory, "inventory-change (inventory excluded by policy)");
}

DemandCategory to_demand_category(SpendingClass c) noexcept {
    switch (c) {
        case SpendingClass::Households: return DemandCategory::Households;
        case SpendingClass::NonProfit: return DemandCategory::NonProfit;
        case SpendingClass::Government: return DemandCategory::Government;
        case SpendingClass::Gfcf: return DemandCategory::Gfcf;
    }
    return DemandCategory::Households;
}

DemandSelection DemandSelection::from_labels(std::vector<std::string> regions, const std::vector<std::string>& labels,
                                             bool merge) {
    DemandSelection sel;
    sel.paying_regions = std::move(regions);
    for (const auto& l : labels) sel.classes.insert(parse_spending_class(l));
    sel.merge = merge;
    return sel;
}

DemandSelection DemandSelection::consumption_of(const std::string& region) {
    DemandSelection sel;
    sel.paying_regions = {region};
    sel.classes = {SpendingClass::Households, SpendingClass::NonProfit, SpendingClass::Government,
                   SpendingClass::Gfcf};
    return sel;
}

namespace {

Vector sum_columns(const MrioAccount& account, const std::vector<std::string>& regions,
                   const std::set<DemandCategory>& categories) {
    for (const auto& r : regions) account.index.region_position(r);
    Vector out = Vector::Zero(account.index.size());
    for (std::size_t c = 0; c < account.demand_columns.size(); ++c) {
        const auto& col = account.demand_columns[c];
        if (!col.category || categories.count(*col.category) == 0) continue;
        if (std::find(regions.begin(), regions.end(), col.region) == regions.end()) continue;
        out += account.final_demand.col(static_cast<Index>(c));
    }
    for (Index i = 0; i < out.size(); ++i) {
        if (out[i] < 0.0) {
            std::ostringstream msg;
            msg << "selected demand for " << account.index.regions()[account.index.region_of(i)] << "/"
                << account.index.sectors()[account.index.sector_of(i)] << " is " << out[i];
            throw Error(ErrorKind::NegativeEntry, msg.str());
        }
    }
    return out;
}

}  // namespace

Vector select_demand(const MrioAccount& account, const DemandSelection& selection) {
    std::set<DemandCategory> cats;
    for (auto c : selection.classes) cats.insert(to_demand_category(c));
    return sum_columns(account, selection.paying_regions, cats);
}

ConsolidatedDemand consolidate_demand(const MrioAccount& account, const DemandSelection& selection) {
    if (selection.merge) {
        return {select_demand(account, selection), Vector::Zero(account.index.size())};
    }
    std::set<DemandCategory> spending;
    for (auto c : selection.classes) {
        if (c != SpendingClass::Gfcf) spending.insert(to_demand_category(c));
    }
    ConsolidatedDemand out;
    out.spending = sum_columns(account, selection.paying_regions, spending);
    out.gfcf = selection.classes.count(SpendingClass::Gfcf)
                   ? sum_columns(account, selection.paying_regions, {DemandCategory::Gfcf})
                   : Vector(Vector::Zero(account.index.size()));
    return out;
}

BalanceReport validate_balance(const MrioAccount& account, double tolerance) {
    BalanceReport report;
    report.tolerance = tolerance;
    const Index n = account.index.size();
    for (Index i = 0; i < n; ++i) {
        const double supplied = account.transactions.row(i).sum() + account.final_demand.row(i).sum();
        const double x = account.total_output[i];
        const double residual = std::abs(x - supplied) / std::max(x, 1.0);
        report.max_relative_residual = std::max(report.max_relative_residual, residual);
        if (!(residual <= tolerance)) {
            report.violations.push_back({i, account.index.regions()[account.index.region_of(i)],
                                         account.index.sectors()[account.index.sector_of(i)], residual});
        }
    }
    return report;
}

const std::vector<std::string>& labour_stressor_labels() {
    static const std::vector<std::string> labels = {"female low-skilled",    "male low-skilled",
                                                    "female medium-skilled", "male medium-skilled",
                                                    "female high-skilled",   "male high-skilled"};
    return labels;
}

namespace {

// Uniform [0, 1) from the top 53 bits; std distributions are not
// reproducible across standard libraries.
class UnitRandom {
  public:
    explicit UnitRandom(std::uint64_t seed) : engine_(seed) {}
    double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double between(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

  private:
    std::mt19937_64 engine_;
};

std::string numbered(const char* prefix, int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%02d", prefix, i);
    return buf;
}

}  // namespace

MrioAccount fixture(int n_regions, int n_sectors, std::uint64_t seed) {
    if (n_regions < 1 || n_sectors < 1) {
        throw Error(ErrorKind::InvalidArgument, "fixture needs at least one region and one sector");
    }
    UnitRandom rng(seed);

    std::vector<std::string> regions, sectors;
    for (int r = 1; r <= n_regions; ++r) regions.push_back(numbered("R", r));
    for (int s = 1; s <= n_sectors; ++s) sectors.push_back(numbered("S", s));

    MrioAccount acc;
    acc.index = RegionSectorIndex(regions, sectors);
    acc.year = 2012;
    acc.currency_unit = "M EUR";
    const Index n = acc.index.size();

    Matrix a(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) a(i, j) = rng() < 0.2 ? 0.0 : rng();
        const double target = rng.between(0.2, 0.7);
        const double sum = a.col(j).sum();
        if (sum > 0.0) a.col(j) *= target / sum;
    }

    for (const auto& region : regions) {
        for (auto c : {DemandCategory::Households, DemandCategory::NonProfit, DemandCategory::Government,
                       DemandCategory::Gfcf, DemandCategory::InventoryChange}) {
            acc.demand_columns.push_back({region, std::string(to_string(c)), c});
        }
    }
    acc.final_demand.resize(n, static_cast<Index>(acc.demand_columns.size()));
    for (Index c = 0; c < acc.final_demand.cols(); ++c) {
        const auto category = *acc.demand_columns[static_cast<std::size_t>(c)].category;
        for (Index i = 0; i < n; ++i) {
            double v = 0.0;
            switch (category) {
                case DemandCategory::Households: v = rng.between(10.0, 100.0); break;
                case DemandCategory::NonProfit: v = rng.between(0.0, 5.0); break;
                case DemandCategory::Government: v = rng() < 0.5 ? 0.0 : rng.between(0.0, 40.0); break;
                case DemandCategory::Gfcf: v = rng.between(0.0, 30.0); break;
                case DemandCategory::InventoryChange: v = rng.between(-1.0, 1.0); break;
            }
            acc.final_demand(i, c) = v;
        }
    }

    Matrix i_minus_a = -a;
    i_minus_a.diagonal().array() += 1.0;
    const Vector gross = i_minus_a.partialPivLu().solve(Vector(acc.final_demand.rowwise().sum()));
    acc.transactions = a * gross.asDiagonal();
    acc.total_output.resize(n);
    for (Index i = 0; i < n; ++i) {
        acc.total_output[i] = acc.transactions.row(i).sum() + acc.final_demand.row(i).sum();
    }

    const Vector& x = acc.total_output;
    auto per_output_row = [&](double lo, double hi) {
        Matrix row(1, n);
        for (Index j = 0; j < n; ++j) row(0, j) = x[j] * rng.between(lo, hi);
        return row;
    };
    auto direct_row = [&](double lo, double hi) {
        Matrix d(1, n_regions);
        for (int r = 0; r < n_regions; ++r) d(0, r) = rng.between(lo, hi);
        return d;
    };

    ExtensionAccount labour;
    labour.name = "labour";
    labour.unit = "hours";
    labour.kind = ExtensionKind::Labour;
    labour.stressors = labour_stressor_labels();
    labour.rows.resize(6, n);
    for (Index k = 0; k < 6; ++k) labour.rows.row(k) = per_output_row(200.0, 6000.0);
    acc.extensions.push_back(std::move(labour));

    ExtensionAccount energy;
    energy.name = "energy";
    energy.unit = "TJ";
    energy.kind = ExtensionKind::Energy;
    energy.stressors = {"energy use"};
    energy.rows = per_output_row(0.5, 8.0);
    energy.direct = direct_row(50.0, 500.0);
    acc.extensions.push_back(std::move(energy));

    ExtensionAccount emissions;
    emissions.name = "emissions";
    emissions.unit = "kt CO2-eq";
    emissions.kind = ExtensionKind::Emissions;
    emissions.stressors = {"GHG emissions"};
    emissions.rows = per_output_row(0.05, 0.9);
    emissions.direct = direct_row(5.0, 40.0);
    acc.extensions.push_back(std::move(emissions));

    ExtensionAccount material;
    material.name = "material";
    material.unit = "kt";
    material.kind = ExtensionKind::Material;
    material.stressors = {"biomass used", "biomass unused", "minerals used", "fossil fuels used",
                          "fossil fuels unused"};
    material.rows.resize(5, n);
    for (Index k = 0; k < 5; ++k) material.rows.row(k) = per_output_row(0.0, 1.5);
    for (const auto& s : material.stressors) {
        material.material_flags[s] = s.ends_with("unused") ? MaterialUse::Unused : MaterialUse::Used;
    }
    acc.extensions.push_back(std::move(material));

    return acc;
}

}  // namespace mriofp
