#include "nestspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nestspec/errors.hpp"

namespace nestspec {

namespace {

double frobenius(const SymmetricMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

double off_diagonal_frobenius(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition eigen_symmetric(const SymmetricMatrix& input) {
    if (!input.all_finite()) throw InputError("eigendecomposition requires finite entries");

    const std::size_t n = input.dim();
    Matrix a = input.dense();
    Matrix v = Matrix::identity(n);

    const double initial_norm = frobenius(input);
    const double target = 1e-12 * initial_norm;
    constexpr int kMaxSweeps = 100;

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_frobenius(a) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Stable rotation angle: tan(theta) chosen with the smaller root.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp - s * (akq + tau * akp);
                    a(p, k) = a(k, p);
                    a(k, q) = akq + s * (akp - tau * akq);
                    a(q, k) = a(k, q);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }
    if (sweep == kMaxSweeps && off_diagonal_frobenius(a) > target)
        throw ConvergenceError("Jacobi eigensolver did not reach the off-diagonal target in 100 sweeps", {});

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

SpectralSummary eigenvalues_symmetric(const SymmetricMatrix& a) {
    EigenDecomposition d = eigen_symmetric(a);
    SpectralSummary s;
    s.min_eigenvalue = d.values.back();
    s.spectral_radius = std::max(std::abs(d.values.front()), std::abs(d.values.back()));
    s.eigenvalues = std::move(d.values);
    return s;
}

SymmetricMatrix principal_submatrix(const SymmetricMatrix& a, const ColumnSubset& keep) {
    if (keep.parent_dim() != a.dim())
        throw InputError("principal submatrix: subset parent dimension does not match matrix");
    const auto& idx = keep.indices();
    SymmetricMatrix sub(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t s = r; s < idx.size(); ++s) sub.set(r, s, a(idx[r], idx[s]));
    return sub;
}

InterlacingReport check_interlacing(const SpectralSummary& full,
                                    const SpectralSummary& sub,
                                    double tolerance) {
    const std::size_t n = full.eigenvalues.size();
    const std::size_t m = sub.eigenvalues.size();
    if (m == 0 || m >= n)
        throw InputError("interlacing check requires a strictly smaller nonempty sub-spectrum");
    const std::size_t k = n - m;

    InterlacingReport report;
    report.checked_inequalities = static_cast<int>(2 * m);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        // lambda_i >= mu_i and mu_i >= lambda_{i+k}
        worst = std::max(worst, sub.eigenvalues[i] - full.eigenvalues[i]);
        worst = std::max(worst, full.eigenvalues[i + k] - sub.eigenvalues[i]);
    }
    report.max_violation = std::max(0.0, worst);
    report.holds = report.max_violation <= tolerance;
    return report;
}

double spectral_radius_of_inverse(const SymmetricMatrix& a) {
    SpectralSummary s = eigenvalues_symmetric(a);
    if (s.min_eigenvalue <= kRankTolerance * s.spectral_radius || s.min_eigenvalue <= 0.0)
        throw SingularMatrixError(
            "matrix is singular at the rank tolerance (min eigenvalue " +
                std::to_string(s.min_eigenvalue) + ")",
            a.dim() - 1);
    return 1.0 / s.min_eigenvalue;
}

CholeskyFactor::CholeskyFactor(const SymmetricMatrix& a) : lower_(a.dim(), a.dim()) {
    const std::size_t n = a.dim();
    if (!a.all_finite()) throw InputError("Cholesky requires finite entries");

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    const double pivot_floor = kRankTolerance * std::max(max_diag, 1e-300);

    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= lower_(j, k) * lower_(j, k);
        if (!(d > pivot_floor))
            throw SingularMatrixError(
                "Cholesky pivot " + std::to_string(j) + " is " + std::to_string(d) +
                    ", at or below the rank tolerance; matrix is not positive definite",
                j);
        lower_(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
            lower_(i, j) = s / lower_(j, j);
        }
    }
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
    const std::size_t n = dim();
    if (b.size() != n) throw InputError("Cholesky solve: right-hand side length mismatch");
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * y[k];
        y[i] = s / lower_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * x[k];
        x[ii] = s / lower_(ii, ii);
    }
    return x;
}

SymmetricMatrix CholeskyFactor::inverse() const {
    const std::size_t n = dim();
    // W = L^{-1} by forward substitution on the identity; A^{-1} = W' W.
    Matrix w(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = col; i < n; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (std::size_t k = col; k < i; ++k) s -= lower_(i, k) * w(k, col);
            w(i, col) = s / lower_(i, i);
        }
    }
    SymmetricMatrix inv(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = std::max(i, j); k < n; ++k) s += w(k, i) * w(k, j);
            inv.set(i, j, s);
        }
    }
    return inv;
}

SymmetricMatrix invert_spd(const SymmetricMatrix& a) {
    return CholeskyFactor(a).inverse();
}

}  // namespace nestspec
