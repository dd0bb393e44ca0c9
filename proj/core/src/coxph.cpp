#include "nestspec/coxph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nestspec/errors.hpp"

namespace nestspec {

namespace {

std::size_t validate(std::span<const SurvivalRecord> data) {
    if (data.empty()) throw InputError("survival data is empty");
    const std::size_t p = data[0].covariates.size();
    if (p == 0) throw InputError("survival records need at least one covariate");
    std::size_t events = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& r = data[i];
        if (!(r.time > 0.0) || !std::isfinite(r.time))
            throw InputError("record " + std::to_string(i) + " has a non-positive time");
        if (r.covariates.size() != p)
            throw InputError("record " + std::to_string(i) + " has inconsistent covariate length");
        for (double v : r.covariates)
            if (!std::isfinite(v))
                throw InputError("record " + std::to_string(i) + " has a non-finite covariate");
        if (r.event) ++events;
    }
    if (events == 0) throw InputError("survival data contains no events");
    return p;
}

/// Indices sorted by descending time, so every risk set is a prefix of the
/// traversal and the suffix sums S0, S1, S2 accumulate in one pass.
std::vector<std::size_t> descending_time_order(std::span<const SurvivalRecord> data) {
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data[a].time > data[b].time;
    });
    return order;
}

/// One descending-time pass computing whichever of loglik/score/fisher are
/// requested. Tied times enter the sums together before their events are
/// processed, which is exactly the shared-risk-set handling of ties.
struct PassResult {
    double loglik = 0.0;
    std::vector<double> score;
    SymmetricMatrix fisher{1};
};

PassResult risk_set_pass(std::span<const double> beta, std::span<const SurvivalRecord> data,
                         bool want_derivatives) {
    const std::size_t p = validate(data);
    if (beta.size() != p) throw InputError("coefficient length does not match covariates");

    std::vector<double> eta(data.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < data.size(); ++i) {
        eta[i] = dot(beta, data[i].covariates);
        shift = std::max(shift, eta[i]);
    }

    const std::vector<std::size_t> order = descending_time_order(data);

    PassResult out;
    out.score.assign(want_derivatives ? p : 0, 0.0);
    if (want_derivatives) out.fisher = SymmetricMatrix(p);
    Matrix s2(want_derivatives ? p : 0, want_derivatives ? p : 0);
    std::vector<double> s1(want_derivatives ? p : 0, 0.0);
    double s0 = 0.0;

    std::size_t k = 0;
    while (k < order.size()) {
        // Pull in everyone tied at this time before touching its events.
        const double t = data[order[k]].time;
        std::size_t group_end = k;
        while (group_end < order.size() && data[order[group_end]].time == t) {
            const auto& rec = data[order[group_end]];
            const double w = std::exp(eta[order[group_end]] - shift);
            s0 += w;
            if (want_derivatives) {
                for (std::size_t a = 0; a < p; ++a) {
                    s1[a] += w * rec.covariates[a];
                    for (std::size_t b = a; b < p; ++b) {
                        s2(a, b) += w * rec.covariates[a] * rec.covariates[b];
                        if (b != a) s2(b, a) = s2(a, b);
                    }
                }
            }
            ++group_end;
        }
        for (std::size_t g = k; g < group_end; ++g) {
            const auto& rec = data[order[g]];
            if (!rec.event) continue;
            out.loglik += (eta[order[g]] - shift) - std::log(s0);
            if (want_derivatives) {
                for (std::size_t a = 0; a < p; ++a) {
                    const double mean_a = s1[a] / s0;
                    out.score[a] += rec.covariates[a] - mean_a;
                    for (std::size_t b = a; b < p; ++b) {
                        const double cov_ab = s2(a, b) / s0 - mean_a * (s1[b] / s0);
                        out.fisher.set(a, b, out.fisher(a, b) + cov_ab);
                    }
                }
            }
        }
        k = group_end;
    }
    return out;
}

/// Reruns a fit step for the named sub-model so errors say which model broke.
template <typename Fn>
auto tagged(const char* model, Fn&& fn) {
    try {
        return fn();
    } catch (const SingularMatrixError& e) {
        throw SingularMatrixError(std::string(model) + " model: " + e.what(), e.pivot_index());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(model) + " model: " + e.what(), e.trace());
    } catch (const DivergenceError& e) {
        throw DivergenceError(std::string(model) + " model: " + e.what());
    } catch (const InputError& e) {
        throw InputError(std::string(model) + " model: " + e.what());
    }
}

}  // namespace

double partial_loglik(std::span<const double> beta, std::span<const SurvivalRecord> data) {
    return risk_set_pass(beta, data, /*want_derivatives=*/false).loglik;
}

ScoreFisher cox_score_and_fisher(std::span<const double> beta,
                                 std::span<const SurvivalRecord> data) {
    PassResult r = risk_set_pass(beta, data, /*want_derivatives=*/true);
    return ScoreFisher{std::move(r.score), std::move(r.fisher)};
}

CoxFit fit_cox(std::span<const SurvivalRecord> data, const CoxOptions& options) {
    const std::size_t p = validate(data);

    std::vector<double> beta(p, 0.0);
    double ll = partial_loglik(beta, data);
    std::vector<IterationRecord> trace;

    bool converged = false;
    int iterations = 0;
    double prev_step_norm = std::numeric_limits<double>::infinity();
    int flat_growing_steps = 0;

    while (iterations < options.max_iterations) {
        ++iterations;
        ScoreFisher sf = cox_score_and_fisher(beta, data);
        const std::vector<double> delta = CholeskyFactor(sf.fisher).solve(sf.score);

        double scale = 1.0;
        std::vector<double> beta_new(p);
        double ll_new = ll;
        bool accepted = false;
        for (int h = 0; h <= options.max_step_halvings; ++h) {
            for (std::size_t j = 0; j < p; ++j) beta_new[j] = beta[j] + scale * delta[j];
            ll_new = partial_loglik(beta_new, data);
            if (std::isfinite(ll_new) && ll_new >= ll - 1e-12 * (1.0 + std::abs(ll))) {
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) {
            trace.push_back({iterations, ll, norm2(delta)});
            throw ConvergenceError("Newton step could not improve the partial likelihood", trace);
        }

        const double step_norm = scale * norm2(delta);
        const double gain = ll_new - ll;
        beta = std::move(beta_new);
        ll = ll_new;
        trace.push_back({iterations, ll, step_norm});

        if (step_norm < options.step_tolerance) {
            converged = true;
            break;
        }

        // Monotone-likelihood watch: estimates marching off while the
        // likelihood flattens, or a linear predictor beyond any plausible
        // hazard ratio.
        double max_eta = 0.0;
        for (const auto& rec : data) max_eta = std::max(max_eta, std::abs(dot(beta, rec.covariates)));
        if (max_eta > 200.0)
            throw DivergenceError(
                "partial likelihood appears monotone: linear predictor reached " +
                std::to_string(max_eta) + "; estimates are diverging");
        if (step_norm > prev_step_norm && gain < 1e-9 * (1.0 + std::abs(ll))) {
            if (++flat_growing_steps >= 3)
                throw DivergenceError(
                    "partial likelihood appears monotone: step norms grow while the "
                    "likelihood no longer improves");
        } else {
            flat_growing_steps = 0;
        }
        prev_step_norm = step_norm;
    }

    if (!converged)
        throw ConvergenceError("Cox fit did not converge within " +
                                   std::to_string(options.max_iterations) + " iterations",
                               trace);

    ScoreFisher sf = cox_score_and_fisher(beta, data);
    CoxFit fit{.beta_hat = std::move(beta),
               .partial_loglik = ll,
               .fisher = sf.fisher,
               .fisher_inverse = invert_spd(sf.fisher),
               .converged = converged,
               .iterations = iterations};
    return fit;
}

std::vector<SurvivalRecord> nest_records(std::span<const SurvivalRecord> data,
                                         const ColumnSubset& subset) {
    if (data.empty()) throw InputError("survival data is empty");
    if (subset.parent_dim() != data[0].covariates.size())
        throw InputError("subset parent dimension does not match covariate count");
    if (!subset.proper())
        throw InputError("nested model requires a proper covariate subset");
    std::vector<SurvivalRecord> nested(data.begin(), data.end());
    for (auto& rec : nested) {
        std::vector<double> kept(subset.size());
        for (std::size_t c = 0; c < subset.size(); ++c) kept[c] = rec.covariates[subset.indices()[c]];
        rec.covariates = std::move(kept);
    }
    return nested;
}

NestedComparisonReport compare_nested_cox(std::span<const SurvivalRecord> data,
                                          const ColumnSubset& subset,
                                          NestingMode mode) {
    const std::vector<SurvivalRecord> nested_data = nest_records(data, subset);
    const CoxFit sat = tagged("saturated", [&] { return fit_cox(data); });
    const CoxFit nest = tagged("nested", [&] { return fit_cox(nested_data); });

    // Shared mode evaluates both information matrices at the saturated
    // estimate; there the nested one is the principal submatrix at the subset
    // indices (identical risk-set weights, restricted covariates).
    const SymmetricMatrix fisher_nested =
        mode == NestingMode::shared ? principal_submatrix(sat.fisher, subset) : nest.fisher;

    const SpectralSummary spec_sat = eigenvalues_symmetric(sat.fisher);
    const SpectralSummary spec_nest = eigenvalues_symmetric(fisher_nested);

    NestedComparisonReport r;
    r.mode = mode;
    r.theorem_backed = (mode == NestingMode::shared);

    r.bias_saturated = -sat.partial_loglik;
    r.bias_nested = -nest.partial_loglik;
    r.residual_norm_saturated = std::numeric_limits<double>::quiet_NaN();
    r.residual_norm_nested = std::numeric_limits<double>::quiet_NaN();

    r.info_radius_saturated = spec_sat.spectral_radius;
    r.info_radius_nested = spec_nest.spectral_radius;
    r.inv_info_radius_saturated = spectral_radius_of_inverse(sat.fisher);
    r.inv_info_radius_nested = spectral_radius_of_inverse(fisher_nested);
    r.var_radius_saturated = r.inv_info_radius_saturated;
    r.var_radius_nested = r.inv_info_radius_nested;

    const double tol = 1e-9 * (1.0 + spec_sat.spectral_radius);
    r.info_interlacing = check_interlacing(spec_sat, spec_nest, tol);

    const double inv_tol = 1e-9 * (1.0 + r.inv_info_radius_saturated);
    const double radius_tol = 1e-9 * (1.0 + r.info_radius_saturated);
    r.orderings_hold = (r.info_radius_nested <= r.info_radius_saturated + radius_tol) &&
                       (r.inv_info_radius_nested <= r.inv_info_radius_saturated + inv_tol);
    return r;
}

}  // namespace nestspec
