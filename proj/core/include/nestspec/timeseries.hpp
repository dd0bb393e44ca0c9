#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nestspec/linalg.hpp"
#include "nestspec/matrix.hpp"
#include "nestspec/report.hpp"

namespace nestspec {

struct TimeSeriesSample {
    std::vector<double> values;
    std::size_t n() const { return values.size(); }
};

/// gamma[l] = (1/n) sum_{t} (x_t - xbar)(x_{t+l} - xbar). The 1/n divisor is
/// deliberate: it is the estimator whose Toeplitz matrices are guaranteed
/// positive semi-definite.
struct AutocovarianceEstimate {
    std::vector<double> gamma;  // gamma[0] ... gamma[maxlag]
    std::size_t maxlag() const { return gamma.empty() ? 0 : gamma.size() - 1; }
};

AutocovarianceEstimate autocovariance(const TimeSeriesSample& x, std::size_t maxlag);

/// size x size symmetric Toeplitz matrix with entry (i, j) = gamma[|i - j|].
SymmetricMatrix toeplitz_from(const AutocovarianceEstimate& gamma, std::size_t size);

struct YuleWalkerSolution {
    std::vector<double> phi;  // AR coefficients phi_1 ... phi_p
    double sigma2 = 0.0;      // innovation variance gamma_0 - phi . (gamma_1..gamma_p)
    std::size_t order = 0;
    SpectralSummary toeplitz_spectrum;
};

/// Solves Toeplitz(gamma, p) phi = (gamma_1, ..., gamma_p)' by Cholesky and
/// recovers the innovation variance from the remaining equation.
YuleWalkerSolution solve_yule_walker(const AutocovarianceEstimate& gamma, std::size_t p);

struct ArmaVarianceResult {
    double sigma2_ma = 0.0;  // sigma2 * (1 + b_1^2 + ... + b_q^2)
    std::vector<double> b;
    double sigma2 = 0.0;
};

/// Moving-average variance identity for an ARMA(p, q) disturbance.
ArmaVarianceResult arma_ma_variance(double sigma2, std::span<const double> b);

struct ArNestedComparison {
    NestedComparisonReport report;
    YuleWalkerSolution saturated;  // order p
    YuleWalkerSolution nested;     // order m < p
};

/// Compares AR(p) against AR(m), m < p, on the same series: the nested
/// Toeplitz matrix is the leading principal submatrix of the saturated one,
/// so interlacing and both spectral-radius orderings are guaranteed. The
/// nested innovation variance can only be larger.
ArNestedComparison compare_nested_ar(const TimeSeriesSample& x, std::size_t p, std::size_t m);

/// Simulates x_t = sum_k phi_k x_{t-k} + eps_t with Gaussian innovations,
/// discarding a burn-in of 10 * order. Stationarity is verified numerically:
/// every root of 1 - phi_1 z - ... - phi_p z^p must lie outside the unit
/// circle. Deterministic for a fixed seed.
TimeSeriesSample simulate_ar(std::span<const double> phi, double sigma, std::size_t n,
                             std::uint64_t seed);

inline TimeSeriesSample simulate_ar(std::initializer_list<double> phi, double sigma,
                                    std::size_t n, std::uint64_t seed) {
    return simulate_ar(std::span<const double>(phi.begin(), phi.size()), sigma, n, seed);
}

}  // namespace nestspec
