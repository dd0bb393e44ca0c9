#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nestspec/matrix.hpp"

namespace nestspec {

/// A matrix is treated as singular when its smallest eigenvalue (or Cholesky
/// pivot, on the diagonal scale) drops below this fraction of the largest.
inline constexpr double kRankTolerance = 1e-10;

/// Eigenvalues of a symmetric matrix, sorted descending.
struct SpectralSummary {
    std::vector<double> eigenvalues;  // non-increasing
    double spectral_radius = 0.0;     // max |eigenvalue|; equals eigenvalues[0] for PSD input
    double min_eigenvalue = 0.0;
};

/// Full symmetric eigendecomposition. Column j of `vectors` pairs with
/// `values[j]`; values sorted descending.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;
};

/// Outcome of a generalized interlacing check between a spectrum and the
/// spectrum of one of its principal submatrices.
struct InterlacingReport {
    bool holds = false;
    double max_violation = 0.0;  // largest amount by which an inequality fails
    int checked_inequalities = 0;
};

/// Cyclic Jacobi eigendecomposition. Sweeps until the off-diagonal Frobenius
/// norm falls below 1e-12 times the initial Frobenius norm (max 100 sweeps).
EigenDecomposition eigen_symmetric(const SymmetricMatrix& a);

SpectralSummary eigenvalues_symmetric(const SymmetricMatrix& a);

/// result(r, s) = a(keep[r], keep[s]).
SymmetricMatrix principal_submatrix(const SymmetricMatrix& a, const ColumnSubset& keep);

/// Generalized interlacing for removing k = |full| - |sub| indices:
/// lambda_i >= mu_i >= lambda_{i+k} for every i, each within `tolerance`.
InterlacingReport check_interlacing(const SpectralSummary& full,
                                    const SpectralSummary& sub,
                                    double tolerance);

/// 1 / min_eigenvalue(a) for symmetric positive definite `a`.
double spectral_radius_of_inverse(const SymmetricMatrix& a);

/// Inverse of a positive definite matrix via Cholesky.
SymmetricMatrix invert_spd(const SymmetricMatrix& a);

/// Lower-triangular Cholesky factor of a positive definite matrix. Throws
/// SingularMatrixError naming the failing pivot when a pivot drops below the
/// rank tolerance (relative to the largest initial diagonal entry).
class CholeskyFactor {
public:
    explicit CholeskyFactor(const SymmetricMatrix& a);

    std::size_t dim() const { return lower_.rows(); }
    const Matrix& lower() const { return lower_; }

    std::vector<double> solve(std::span<const double> b) const;
    SymmetricMatrix inverse() const;

private:
    Matrix lower_;
};

}  // namespace nestspec
