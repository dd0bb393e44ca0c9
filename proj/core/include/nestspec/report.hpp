#pragma once

#include "nestspec/linalg.hpp"

namespace nestspec {

/// How the nested model's information matrix is formed when comparing models.
///  - shared: reuse the saturated fit's weights (GLM) or coefficient vector
///    (Cox), making the nested information an exact principal submatrix of the
///    saturated one; the spectral orderings are then interlacing-backed.
///  - refit: the nested model is refit from scratch and the orderings are
///    reported as observed, with no guarantee.
enum class NestingMode { shared, refit };

/// Paired saturated/nested diagnostics shared by every model family.
///
/// "bias" is the minimized training cost (residual sum of squares for least
/// squares, negative log-likelihood elsewhere). "info" is the information
/// matrix of the family: the Gram matrix X'X for linear models, the Fisher
/// matrix otherwise, the autocovariance Toeplitz matrix for AR models.
struct NestedComparisonReport {
    double bias_saturated = 0.0;
    double bias_nested = 0.0;

    double residual_norm_saturated = 0.0;
    double residual_norm_nested = 0.0;

    /// Spectral radius of the estimator covariance (dispersion-scaled).
    double var_radius_saturated = 0.0;
    double var_radius_nested = 0.0;

    /// Spectral radius of the information matrix itself...
    double info_radius_saturated = 0.0;
    double info_radius_nested = 0.0;
    /// ...and of its inverse (unscaled). Orderings are judged on these.
    double inv_info_radius_saturated = 0.0;
    double inv_info_radius_nested = 0.0;

    /// Interlacing of the nested information spectrum inside the saturated one.
    InterlacingReport info_interlacing;

    NestingMode mode = NestingMode::shared;
    /// True when the mode makes the orderings a mathematical guarantee, so a
    /// violation can only be a software defect.
    bool theorem_backed = false;
    bool orderings_hold = false;
};

}  // namespace nestspec
