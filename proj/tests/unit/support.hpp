#pragma once

// Shared helpers for the unit tests: seeded generators for property tests and
// reference implementations that do not go through Eigen's solvers.

#include "mriofp/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mriofp::testing {

class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (static_cast<double>(rng_() >> 11) * 0x1.0p-53);
    }
    int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool coin(double p = 0.5) { return uniform() < p; }

    /// Nonnegative matrix with ~zero_share zeros; each column rescaled to sum
    /// to a value drawn from [lo, hi] (so rho <= hi).
    Matrix productive(Index n, double lo = 0.1, double hi = 0.7, double zero_share = 0.2) {
        Matrix a(n, n);
        for (Index j = 0; j < n; ++j) {
            double sum = 0.0;
            for (Index i = 0; i < n; ++i) {
                a(i, j) = coin(zero_share) ? 0.0 : uniform();
                sum += a(i, j);
            }
            const double target = uniform(lo, hi);
            if (sum > 0.0) a.col(j) *= target / sum;
        }
        return a;
    }

    Vector nonnegative(Index n, double hi = 100.0, double zero_share = 0.0) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v(i) = coin(zero_share) ? 0.0 : uniform(0.0, hi);
        return v;
    }

  private:
    std::mt19937_64 rng_;
};

/// q = sum_{k=0..terms} A^k y with plain loops.
inline std::vector<double> power_series(const Matrix& a, const Vector& y, int terms) {
    const auto n = static_cast<std::size_t>(y.size());
    std::vector<double> term(n), next(n), sum(n);
    for (std::size_t i = 0; i < n; ++i) term[i] = sum[i] = y(static_cast<Index>(i));
    for (int k = 1; k <= terms; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += a(static_cast<Index>(i), static_cast<Index>(j)) * term[j];
            next[i] = acc;
        }
        term.swap(next);
        for (std::size_t i = 0; i < n; ++i) sum[i] += term[i];
    }
    return sum;
}

/// Smallest K with rate^K < bound.
inline int terms_for(double rate, double bound) {
    return static_cast<int>(std::ceil(std::log(bound) / std::log(rate)));
}

inline double max_relative_error(const Vector& got, const std::vector<double>& want) {
    double worst = 0.0;
    double scale = 0.0;
    for (double w : want) scale = std::max(scale, std::abs(w));
    for (std::size_t i = 0; i < want.size(); ++i) {
        worst = std::max(worst, std::abs(got(static_cast<Index>(i)) - want[i]) / std::max(scale, 1e-300));
    }
    return worst;
}

inline double rel(double got, double want) {
    const double scale = std::max(std::abs(want), std::abs(got));
    return scale == 0.0 ? 0.0 : std::abs(got - want) / scale;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

/// Fresh scratch directory under the build tree, removed on destruction.
class ScratchDir {
  public:
    explicit ScratchDir(const std::string& name)
        : path_(std::filesystem::temp_directory_path() / ("mriofp-test-" + name)) {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

  private:
    std::filesystem::path path_;
};

}  // namespace mriofp::testing
