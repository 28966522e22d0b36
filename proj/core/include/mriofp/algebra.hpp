#pragma once

// Dense kernels behind every footprint: technical coefficients, Leontief
// solves, intensities and footprint contractions. Everything here is a pure
// function of its inputs; values can be shared across threads once built.

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace mriofp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultOutputEpsilon = 1e-9;

/// Input share of each supplier in one unit of a sector's output (A = Z x^-1).
class TechnicalCoefficients {
  public:
    TechnicalCoefficients() = default;
    /// Validates nonnegativity; does not require productivity.
    explicit TechnicalCoefficients(Matrix entries);

    const Matrix& entries() const noexcept { return entries_; }
    Index dim() const noexcept { return entries_.rows(); }

    /// Columns whose sum is >= 1. Productive tables normally report none.
    std::vector<Index> column_sum_violations() const;
    double max_column_sum() const;

  private:
    Matrix entries_;
};

TechnicalCoefficients technical_coefficients(const Matrix& transactions, const Vector& total_output,
                                             double epsilon = kDefaultOutputEpsilon);

enum class ProductivityVerdict { Productive, Unproductive, Indeterminate };

struct SpectralEstimate {
    double radius = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    int iterations = 0;
    bool converged = false;
    ProductivityVerdict verdict = ProductivityVerdict::Indeterminate;
};

struct ProductivityOptions {
    double tolerance = 1e-4;
    double margin = 1e-6;
    int max_iterations = 20000;
};

/// Perron-root estimate of a nonnegative matrix by power iteration on A + I.
/// The lower/upper bounds are Collatz-Wielandt bounds and hold at every
/// iteration, so a verdict can be reached before the estimate converges.
SpectralEstimate productivity_check(const TechnicalCoefficients& a, const ProductivityOptions& options = {});

/// Maps final demand y to the gross output q solving (I - A) q = y.
class LeontiefOperator {
  public:
    enum class Mode { FactorizedSolve, ExplicitInverse };

    explicit LeontiefOperator(TechnicalCoefficients a, Mode mode = Mode::FactorizedSolve);

    Mode mode() const noexcept { return mode_; }
    Index dim() const noexcept { return a_->dim(); }
    const TechnicalCoefficients& coefficients() const noexcept { return *a_; }

    /// Throws UnproductiveEconomy when the residual check fails.
    Vector apply(const Vector& demand) const;
    /// One column of output per column of demand; the factorization is shared.
    Matrix apply_many(const Matrix& demand) const;

    /// Only available in explicit-inverse mode.
    const Matrix& inverse() const;

    static constexpr double kResidualTolerance = 1e-10;

  private:
    void check_residual(const Matrix& output, const Matrix& demand) const;

    std::shared_ptr<const TechnicalCoefficients> a_;
    Mode mode_;
    std::shared_ptr<const Eigen::PartialPivLU<Matrix>> lu_;
    std::shared_ptr<const Matrix> inverse_;
};

Vector leontief_solve(const TechnicalCoefficients& a, const Vector& demand);
LeontiefOperator leontief_inverse(const TechnicalCoefficients& a);

struct IntensityVector {
    Vector values;
    std::string extension_name;
    std::string unit;
};

Vector intensity(const Vector& extension_row, const Vector& total_output, double epsilon = kDefaultOutputEpsilon);
IntensityVector intensity(const Vector& extension_row, const Vector& total_output, std::string extension_name,
                          std::string unit, double epsilon = kDefaultOutputEpsilon);

double footprint_total(const Vector& intensities, const Vector& output);
Vector footprint_by_source(const Vector& intensities, const Vector& output);

}  // namespace mriofp
