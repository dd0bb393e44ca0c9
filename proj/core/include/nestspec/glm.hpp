#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nestspec/linear_model.hpp"
#include "nestspec/matrix.hpp"
#include "nestspec/report.hpp"

namespace nestspec {

/// The three canonical-link families: identity, logit, log.
enum class GlmFamily { gaussian, binomial, poisson };

const char* family_name(GlmFamily family);

/// Mean response h(eta) for the family's inverse link.
double glm_mean(GlmFamily family, double eta);

/// Log-likelihood of the observations at linear predictor eta (includes the
/// data-dependent constants, so values are comparable across models).
/// `sigma2` only matters for the gaussian family.
double glm_loglik(GlmFamily family, std::span<const double> y,
                  std::span<const double> eta, double sigma2 = 1.0);

/// IRLS working weights (h'(eta_i))^2 / Var(Y_i):
///   gaussian -> 1/sigma2, binomial -> pi(1-pi), poisson -> mu.
/// Observations whose weight underflows 1e-12 are flagged.
struct GlmWeights {
    std::vector<double> weights;
    std::vector<std::size_t> flagged;
};
GlmWeights glm_weights(std::span<const double> eta, GlmFamily family,
                       double sigma2 = 1.0);

struct GlmOptions {
    int max_iterations = 100;
    double step_tolerance = 1e-10;
    int max_step_halvings = 20;
};

struct GlmFit {
    std::vector<double> beta_hat;
    std::vector<double> eta;      // X beta_hat
    std::vector<double> mu;       // h(eta)
    std::vector<double> weights;  // diagonal of W at beta_hat
    SymmetricMatrix fisher;          // X' W X
    SymmetricMatrix fisher_inverse;  // asymptotic covariance of beta_hat
    bool converged = false;
    int iterations = 0;
    double final_step_norm = 0.0;
    double loglik = 0.0;
    double dispersion = 1.0;  // gaussian: rss/(N-p) folded into the weights
    std::vector<std::size_t> flagged_observations;
};

/// Maximum likelihood by iteratively reweighted least squares. The gaussian
/// family is solved in a single least-squares step and matches fit_ols.
GlmFit fit_glm(const DesignMatrix& x, std::span<const double> y, GlmFamily family,
               const GlmOptions& options = {});

/// Saturated/nested Fisher comparison. In shared mode the nested Fisher is
/// (X*)' W X* with W taken from the saturated fit -- an exact principal
/// submatrix of X' W X -- and the spectral orderings must hold. In refit mode
/// the nested model is refit and the orderings are reported as observed.
NestedComparisonReport compare_nested_glm(const DesignMatrix& x,
                                          std::span<const double> y,
                                          GlmFamily family,
                                          const ColumnSubset& subset,
                                          NestingMode mode);

}  // namespace nestspec
