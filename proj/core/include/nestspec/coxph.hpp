#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nestspec/linalg.hpp"
#include "nestspec/matrix.hpp"
#include "nestspec/report.hpp"

namespace nestspec {

/// One subject: observed (event or censoring) time, event indicator, and the
/// covariate row.
struct SurvivalRecord {
    double time = 0.0;
    bool event = false;
    std::vector<double> covariates;
};

/// Log partial likelihood with risk sets {j : t_j >= t_i}. Tied event times
/// share the full risk set (Breslow). Stabilized by a max-shift inside the
/// log-sum-exp.
double partial_loglik(std::span<const double> beta, std::span<const SurvivalRecord> data);

struct ScoreFisher {
    std::vector<double> score;
    SymmetricMatrix fisher;  // observed information: per-event risk-set covariance of covariates
};

/// Analytic gradient and negative Hessian of the log partial likelihood,
/// computed in one descending-time pass with suffix sums of exp(x'beta),
/// x exp(x'beta), and xx' exp(x'beta).
ScoreFisher cox_score_and_fisher(std::span<const double> beta,
                                 std::span<const SurvivalRecord> data);

struct CoxOptions {
    int max_iterations = 50;
    double step_tolerance = 1e-9;
    int max_step_halvings = 30;
};

struct CoxFit {
    std::vector<double> beta_hat;
    double partial_loglik = 0.0;
    SymmetricMatrix fisher;
    SymmetricMatrix fisher_inverse;
    bool converged = false;
    int iterations = 0;
};

/// Newton-Raphson from beta = 0 with step halving; the accepted partial
/// log-likelihood never decreases. Detects monotone-likelihood divergence
/// (estimates running away while the likelihood flattens).
CoxFit fit_cox(std::span<const SurvivalRecord> data, const CoxOptions& options = {});

/// Records restricted to the subset's covariates.
std::vector<SurvivalRecord> nest_records(std::span<const SurvivalRecord> data,
                                         const ColumnSubset& subset);

/// Saturated/nested inverse-Fisher comparison. In shared mode both Fisher
/// matrices are evaluated at the saturated estimate, where the nested one is
/// an exact principal submatrix and the ordering is interlacing-backed. In
/// refit mode the nested model is refit and orderings are reported only.
NestedComparisonReport compare_nested_cox(std::span<const SurvivalRecord> data,
                                          const ColumnSubset& subset,
                                          NestingMode mode);

}  // namespace nestspec
