#include "mriofp/algebra.hpp"

#include "mriofp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mriofp {

namespace {

void require_nonnegative(const Matrix& m, const char* what) {
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            const double v = m(i, j);
            if (!(v >= 0.0)) {
                std::ostringstream msg;
                msg << what << "(" << i << ", " << j << ") = " << v;
                throw Error(ErrorKind::NegativeEntry, msg.str());
            }
        }
    }
}

void require_same_length(Index a, Index b, const char* what) {
    if (a != b) {
        std::ostringstream msg;
        msg << what << ": " << a << " vs " << b;
        throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
}

}  // namespace

TechnicalCoefficients::TechnicalCoefficients(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "technical coefficients must be square");
    }
    require_nonnegative(entries_, "A");
}

std::vector<Index> TechnicalCoefficients::column_sum_violations() const {
    std::vector<Index> out;
    for (Index j = 0; j < entries_.cols(); ++j) {
        if (entries_.col(j).sum() >= 1.0) out.push_back(j);
    }
    return out;
}

double TechnicalCoefficients::max_column_sum() const {
    if (entries_.size() == 0) return 0.0;
    return entries_.colwise().sum().maxCoeff();
}

TechnicalCoefficients technical_coefficients(const Matrix& transactions, const Vector& total_output,
                                             double epsilon) {
    if (transactions.rows() != transactions.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "transaction matrix must be square");
    }
    require_same_length(transactions.cols(), total_output.size(), "Z columns vs output length");
    require_nonnegative(transactions, "Z");
    require_nonnegative(total_output, "x");

    Matrix a(transactions.rows(), transactions.cols());
    for (Index j = 0; j < transactions.cols(); ++j) {
        if (total_output[j] > epsilon) {
            a.col(j) = transactions.col(j) / total_output[j];
        } else {
            a.col(j).setZero();
        }
    }
    return TechnicalCoefficients(std::move(a));
}

SpectralEstimate productivity_check(const TechnicalCoefficients& a, const ProductivityOptions& options) {
    const Matrix& m = a.entries();
    const Index n = m.rows();
    SpectralEstimate est;
    if (n == 0) {
        est.converged = true;
        est.verdict = ProductivityVerdict::Productive;
        return est;
    }

    // B = A + I has Perron root rho + 1 and, for nonnegative A, every other
    // eigenvalue satisfies |lambda + 1| < rho + 1 unless lambda = rho.
    Vector v = Vector::Constant(n, 1.0 / static_cast<double>(n));
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iterations; ++it) {
        Vector w = m * v + v;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double ratio = w[i] / v[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        const double growth = w.sum() / v.sum();
        est.iterations = it;
        est.lower_bound = std::max(0.0, lo - 1.0);
        est.upper_bound = hi - 1.0;
        est.radius = std::clamp(growth - 1.0, est.lower_bound, est.upper_bound);

        const bool bounds_tight = est.upper_bound - est.lower_bound <= options.tolerance;
        // Reducible matrices keep loose bounds; fall back to a stalled growth rate.
        const bool growth_stalled = std::abs(growth - previous) <= options.tolerance * 1e-3;
        if (bounds_tight || growth_stalled) {
            est.converged = true;
            if (bounds_tight) est.radius = 0.5 * (est.upper_bound + est.lower_bound);
            break;
        }
        previous = growth;
        v = w / w.sum();
    }

    const double threshold = 1.0 - options.margin;
    if (est.upper_bound < threshold) {
        est.verdict = ProductivityVerdict::Productive;
    } else if (est.lower_bound >= threshold) {
        est.verdict = ProductivityVerdict::Unproductive;
    } else if (est.converged) {
        est.verdict = est.radius < threshold ? ProductivityVerdict::Productive : ProductivityVerdict::Unproductive;
    } else {
        est.verdict = ProductivityVerdict::Indeterminate;
    }
    return est;
}

LeontiefOperator::LeontiefOperator(TechnicalCoefficients a, Mode mode)
    : a_(std::make_shared<const TechnicalCoefficients>(std::move(a))), mode_(mode) {
    const Index n = a_->dim();
    if (n > 0 && a_->max_column_sum() >= 1.0) {
        const auto est = productivity_check(*a_);
        if (est.verdict == ProductivityVerdict::Unproductive) {
            std::ostringstream msg;
            msg << "spectral radius estimate " << est.radius << " is not below 1";
            throw Error(ErrorKind::UnproductiveEconomy, msg.str());
        }
    }

    Matrix i_minus_a = -a_->entries();
    i_minus_a.diagonal().array() += 1.0;
    auto lu = std::make_shared<Eigen::PartialPivLU<Matrix>>(i_minus_a);
    if (n > 0 && !(lu->rcond() > std::numeric_limits<double>::epsilon())) {
        throw Error(ErrorKind::UnproductiveEconomy, "I - A is singular to working precision");
    }
    if (mode_ == Mode::ExplicitInverse) {
        inverse_ = std::make_shared<const Matrix>(lu->inverse());
    }
    lu_ = std::move(lu);
}

void LeontiefOperator::check_residual(const Matrix& output, const Matrix& demand) const {
    const Matrix& a = a_->entries();
    // Normwise backward error: ||(I - A) q - y|| / (||I - A|| ||q|| + ||y||).
    const double op_norm = 1.0 + (a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff());
    for (Index c = 0; c < output.cols(); ++c) {
        const Vector residual = output.col(c) - a * output.col(c) - demand.col(c);
        const double scale = op_norm * output.col(c).lpNorm<Eigen::Infinity>() + demand.col(c).lpNorm<Eigen::Infinity>();
        const double r = residual.size() == 0 ? 0.0 : residual.lpNorm<Eigen::Infinity>();
        const bool ok = scale > 0.0 ? r <= kResidualTolerance * scale : r == 0.0;
        if (!ok) {
            std::ostringstream msg;
            msg << "Leontief residual " << r << " exceeds tolerance (scale " << scale << ")";
            throw Error(ErrorKind::UnproductiveEconomy, msg.str());
        }
    }
}

Vector LeontiefOperator::apply(const Vector& demand) const {
    require_same_length(demand.size(), dim(), "demand length vs operator dimension");
    Vector q = mode_ == Mode::ExplicitInverse ? Vector(*inverse_ * demand) : Vector(lu_->solve(demand));
    check_residual(q, demand);
    return q;
}

Matrix LeontiefOperator::apply_many(const Matrix& demand) const {
    require_same_length(demand.rows(), dim(), "demand rows vs operator dimension");
    Matrix q = mode_ == Mode::ExplicitInverse ? Matrix(*inverse_ * demand) : Matrix(lu_->solve(demand));
    check_residual(q, demand);
    return q;
}

const Matrix& LeontiefOperator::inverse() const {
    if (!inverse_) throw Error(ErrorKind::InvalidArgument, "operator was built in factorized-solve mode");
    return *inverse_;
}

Vector leontief_solve(const TechnicalCoefficients& a, const Vector& demand) {
    return LeontiefOperator(a).apply(demand);
}

LeontiefOperator leontief_inverse(const TechnicalCoefficients& a) {
    return LeontiefOperator(a, LeontiefOperator::Mode::ExplicitInverse);
}

Vector intensity(const Vector& extension_row, const Vector& total_output, double epsilon) {
    require_same_length(extension_row.size(), total_output.size(), "extension row vs output length");
    Vector s(extension_row.size());
    for (Index j = 0; j < s.size(); ++j) {
        s[j] = total_output[j] > epsilon ? extension_row[j] / total_output[j] : 0.0;
    }
    return s;
}

IntensityVector intensity(const Vector& extension_row, const Vector& total_output, std::string extension_name,
                          std::string unit, double epsilon) {
    return {intensity(extension_row, total_output, epsilon), std::move(extension_name), std::move(unit)};
}

double footprint_total(const Vector& intensities, const Vector& output) {
    require_same_length(intensities.size(), output.size(), "intensity vs output length");
    return intensities.dot(output);
}

Vector footprint_by_source(const Vector& intensities, const Vector& output) {
    require_same_length(intensities.size(), output.size(), "intensity vs output length");
    return intensities.cwiseProduct(output);
}

}  // namespace mriofp
