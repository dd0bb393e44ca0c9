#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nestspec/linalg.hpp"
#include "nestspec/matrix.hpp"
#include "nestspec/report.hpp"

namespace nestspec {

/// N x p design with N >= p >= 1. Full column rank is assumed and verified by
/// the fitting routines (Cholesky pivot check on the Gram matrix). The square
/// case N == p is admitted for interpolating fits; it yields zero residual
/// degrees of freedom.
class DesignMatrix {
public:
    explicit DesignMatrix(Matrix values);

    std::size_t n_rows() const { return values_.rows(); }
    std::size_t n_cols() const { return values_.cols(); }
    const Matrix& values() const { return values_; }

private:
    Matrix values_;
};

struct LinearFit {
    std::vector<double> beta_hat;
    std::vector<double> residuals;
    double rss = 0.0;         // squared residual norm, the model's bias
    double sigma2_hat = 0.0;  // rss / (N - p); 0 when dof == 0
    SymmetricMatrix covariance;  // sigma2_hat * (X'X)^{-1}
    long dof = 0;             // N - p
};

/// Ordinary least squares via Cholesky on the normal equations.
LinearFit fit_ols(const DesignMatrix& x, std::span<const double> y);

/// Orthogonal projector onto the column space: X (X'X)^{-1} X', assembled as
/// B B' with B = X L^{-T} so the result is symmetric by construction.
SymmetricMatrix projection_matrix(const DesignMatrix& x);

/// Design consisting of the subset's columns, in subset order. The subset
/// must be proper (a nested model has strictly fewer columns).
DesignMatrix nest_design(const DesignMatrix& x, const ColumnSubset& subset);

/// Fits the saturated and nested models and assembles the full comparison:
/// biases, residual norms, Gram interlacing, covariance spectral radii. The
/// orderings are theorem-backed for linear models and must hold on any
/// full-rank input.
NestedComparisonReport compare_nested(const DesignMatrix& x,
                                      std::span<const double> y,
                                      const ColumnSubset& subset);

}  // namespace nestspec
