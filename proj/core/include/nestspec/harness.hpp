#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "nestspec/coxph.hpp"
#include "nestspec/linear_model.hpp"
#include "nestspec/matrix.hpp"
#include "nestspec/timeseries.hpp"

namespace nestspec {

enum class DataFamily { linear, binomial, poisson, survival, ar };

const char* data_family_name(DataFamily family);

/// Two-part train/validation split. The admissible band for the train
/// fraction is [0.2, 0.8].
struct SplitSpec {
    double train_fraction = 0.5;
    std::uint64_t seed = 0;
};

/// How the generator builds regression designs: i.i.d. standard normal
/// entries, or a single uniformly drawn abscissa column whose response is a
/// polynomial in it (the complexity-sweep benchmark).
enum class DesignKind { gaussian_iid, polynomial };

struct GeneratorSpec {
    DataFamily family = DataFamily::linear;
    std::size_t n = 0;
    /// Regression / survival: coefficient vector. AR: phi. Polynomial design:
    /// polynomial coefficients c_0 ... c_d.
    std::vector<double> true_parameters;
    /// linear / ar: noise standard deviation. survival: censoring rate in
    /// [0, 1). Ignored for binomial / poisson.
    double noise = 1.0;
    std::uint64_t seed = 0;
    DesignKind design = DesignKind::gaussian_iid;
    double x_min = -1.0;  // polynomial abscissa range
    double x_max = 1.0;
};

struct RegressionData {
    DesignMatrix x;
    std::vector<double> y;
};
struct SurvivalData {
    std::vector<SurvivalRecord> records;
};
struct SeriesData {
    TimeSeriesSample series;
};

struct Dataset {
    DataFamily family = DataFamily::linear;
    std::variant<RegressionData, SurvivalData, SeriesData> payload;
    std::optional<GeneratorSpec> truth;  // present when generated

    std::size_t size() const;
    const RegressionData& regression() const;
    const SurvivalData& survival() const;
    const SeriesData& series() const;
};

/// Draws a dataset from the named generative model; deterministic per seed.
/// The spec is retained in the result for recovery tests.
Dataset generate(const GeneratorSpec& spec);

/// Disjoint, exhaustive split with |train| = round(fraction * N). Regression
/// and survival data are assigned uniformly at random per seed; time series
/// are split into a contiguous prefix (train) and suffix (validation) to
/// preserve the dependence structure.
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec);

/// Complexity ladders. Subsets index columns of an existing design; degrees
/// build polynomial designs from a univariate abscissa column; orders are AR
/// model orders.
struct SubsetLadder {
    std::vector<ColumnSubset> subsets;  // each contained in the next
};
struct DegreeLadder {
    std::vector<std::size_t> degrees;  // strictly increasing
};
struct OrderLadder {
    std::vector<std::size_t> orders;  // strictly increasing
};
using Ladder = std::variant<SubsetLadder, DegreeLadder, OrderLadder>;

struct RungSample {
    int replicate = 0;
    double train_cost = 0.0;
    double validation_cost = 0.0;
    double var_radius = 0.0;
};

struct TradeoffPoint {
    std::size_t complexity = 0;  // fitted parameter count
    double train_cost_mean = 0.0;
    double train_cost_se = 0.0;
    double validation_cost_mean = 0.0;
    double validation_cost_se = 0.0;
    double var_radius_mean = 0.0;
    double var_radius_se = 0.0;
    int failures = 0;  // replicates whose fit failed at this rung
};

struct TradeoffCurve {
    std::vector<TradeoffPoint> points;  // complexities strictly increasing
    int replicates = 0;
    /// Raw per-replicate samples per rung, for downstream analysis.
    std::vector<std::vector<RungSample>> raw;
};

/// Monte Carlo complexity sweep with fresh data per replicate: replicate i
/// generates with seed 10^6 * spec.seed + i and splits with the analogous
/// derived split seed. Train cost is the per-family training objective (mean
/// squared error for linear/AR rungs, mean negative log-likelihood per
/// observation for GLMs, negative partial log-likelihood for Cox), validation
/// cost the same metric on held-out data, and var_radius the spectral radius
/// of the fitted estimator covariance. Failed rungs are skipped and counted.
TradeoffCurve sweep_complexity(const GeneratorSpec& generator, const Ladder& ladder,
                               const SplitSpec& split_spec, int replicates);

/// Same sweep on one fixed dataset; only the split is re-randomized per
/// replicate.
TradeoffCurve sweep_complexity(const Dataset& dataset, const Ladder& ladder,
                               const SplitSpec& split_spec, int replicates);

/// Vandermonde design: columns x^0 ... x^degree. Requires at least degree+1
/// distinct abscissa values, else the design cannot have full rank.
DesignMatrix polynomial_design(std::span<const double> x, std::size_t degree);

/// The default tradeoff benchmark: N points of a noisy cubic on [-1, 1],
/// swept over polynomial degrees 0..9.
GeneratorSpec noisy_cubic_spec(std::size_t n, std::uint64_t seed);
DegreeLadder default_degree_ladder();

}  // namespace nestspec
