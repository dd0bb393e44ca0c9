#include "nestspec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "nestspec/errors.hpp"
#include "nestspec/glm.hpp"
#include "nestspec/random.hpp"

namespace nestspec {

namespace {

std::size_t sample_poisson(Rng& rng, double mu) {
    if (mu <= 0.0) return 0;
    if (mu < 30.0) {
        // Knuth's product-of-uniforms method.
        const double limit = std::exp(-mu);
        double prod = 1.0;
        std::size_t k = 0;
        do {
            prod *= rng.uniform();
            ++k;
        } while (prod > limit);
        return k - 1;
    }
    const double v = std::round(mu + std::sqrt(mu) * rng.normal());
    return v < 0.0 ? 0 : static_cast<std::size_t>(v);
}

Matrix gaussian_design(Rng& rng, std::size_t n, std::size_t p) {
    Matrix x(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) x(i, j) = rng.normal();
    return x;
}

double polynomial_value(std::span<const double> coeffs, double x) {
    double v = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
    return v;
}

void validate_generator(const GeneratorSpec& spec) {
    if (spec.n == 0) throw InputError("generator: sample size must be positive");
    if (spec.true_parameters.empty())
        throw InputError("generator: true parameter vector must be nonempty");
    for (double v : spec.true_parameters)
        if (!std::isfinite(v)) throw InputError("generator: parameters must be finite");
    if (spec.family == DataFamily::survival) {
        if (!(spec.noise >= 0.0 && spec.noise < 1.0))
            throw InputError("generator: censoring rate must lie in [0, 1)");
    } else if (!(spec.noise >= 0.0)) {
        throw InputError("generator: noise scale must be non-negative");
    }
    if (spec.design == DesignKind::polynomial) {
        if (spec.family != DataFamily::linear)
            throw InputError("generator: polynomial designs are defined for the linear family");
        if (!(spec.x_min < spec.x_max))
            throw InputError("generator: polynomial abscissa range is empty");
    }
}

}  // namespace

const char* data_family_name(DataFamily family) {
    switch (family) {
        case DataFamily::linear: return "linear";
        case DataFamily::binomial: return "binomial";
        case DataFamily::poisson: return "poisson";
        case DataFamily::survival: return "survival";
        case DataFamily::ar: return "ar";
    }
    return "unknown";
}

std::size_t Dataset::size() const {
    if (const auto* r = std::get_if<RegressionData>(&payload)) return r->y.size();
    if (const auto* s = std::get_if<SurvivalData>(&payload)) return s->records.size();
    return std::get<SeriesData>(payload).series.n();
}

const RegressionData& Dataset::regression() const {
    if (const auto* r = std::get_if<RegressionData>(&payload)) return *r;
    throw InputError("dataset does not hold regression data");
}

const SurvivalData& Dataset::survival() const {
    if (const auto* s = std::get_if<SurvivalData>(&payload)) return *s;
    throw InputError("dataset does not hold survival data");
}

const SeriesData& Dataset::series() const {
    if (const auto* s = std::get_if<SeriesData>(&payload)) return *s;
    throw InputError("dataset does not hold time-series data");
}

Dataset generate(const GeneratorSpec& spec) {
    validate_generator(spec);
    Rng rng(spec.seed);
    const std::size_t n = spec.n;

    switch (spec.family) {
        case DataFamily::linear: {
            if (spec.design == DesignKind::polynomial) {
                Matrix x(n, 1);
                std::vector<double> y(n);
                for (std::size_t i = 0; i < n; ++i) x(i, 0) = rng.uniform(spec.x_min, spec.x_max);
                for (std::size_t i = 0; i < n; ++i)
                    y[i] = polynomial_value(spec.true_parameters, x(i, 0)) +
                           spec.noise * rng.normal();
                return Dataset{spec.family, RegressionData{DesignMatrix(std::move(x)), std::move(y)},
                               spec};
            }
            const std::size_t p = spec.true_parameters.size();
            Matrix x = gaussian_design(rng, n, p);
            std::vector<double> y = multiply(x, spec.true_parameters);
            for (std::size_t i = 0; i < n; ++i) y[i] += spec.noise * rng.normal();
            return Dataset{spec.family, RegressionData{DesignMatrix(std::move(x)), std::move(y)},
                           spec};
        }
        case DataFamily::binomial:
        case DataFamily::poisson: {
            const std::size_t p = spec.true_parameters.size();
            Matrix x = gaussian_design(rng, n, p);
            const std::vector<double> eta = multiply(x, spec.true_parameters);
            std::vector<double> y(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (spec.family == DataFamily::binomial) {
                    const double pi = glm_mean(GlmFamily::binomial, eta[i]);
                    y[i] = rng.uniform() < pi ? 1.0 : 0.0;
                } else {
                    y[i] = static_cast<double>(sample_poisson(rng, std::exp(eta[i])));
                }
            }
            return Dataset{spec.family, RegressionData{DesignMatrix(std::move(x)), std::move(y)},
                           spec};
        }
        case DataFamily::survival: {
            const std::size_t p = spec.true_parameters.size();
            const double rate = spec.noise;
            double mean_hazard = 0.0;  // E[exp(x'beta)] for standard normal x
            for (double b : spec.true_parameters) mean_hazard += b * b;
            mean_hazard = std::exp(0.5 * mean_hazard);
            const double censor_rate = rate == 0.0 ? 0.0 : rate / (1.0 - rate) * mean_hazard;

            std::vector<SurvivalRecord> records(n);
            for (std::size_t i = 0; i < n; ++i) {
                records[i].covariates.resize(p);
                for (std::size_t j = 0; j < p; ++j) records[i].covariates[j] = rng.normal();
                const double hazard = std::exp(dot(records[i].covariates, spec.true_parameters));
                const double event_time = std::max(rng.exponential(hazard), 1e-300);
                const double censor_time = rng.exponential(censor_rate);
                records[i].event = event_time <= censor_time;
                records[i].time = records[i].event ? event_time : censor_time;
            }
            return Dataset{spec.family, SurvivalData{std::move(records)}, spec};
        }
        case DataFamily::ar: {
            TimeSeriesSample series =
                simulate_ar(spec.true_parameters, spec.noise, n, spec.seed);
            return Dataset{spec.family, SeriesData{std::move(series)}, spec};
        }
    }
    throw InputError("generator: unknown family");
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec) {
    if (!(spec.train_fraction >= 0.2 && spec.train_fraction <= 0.8))
        throw InputError("train fraction " + std::to_string(spec.train_fraction) +
                         " is outside the admissible band [0.2, 0.8]");
    const std::size_t n = dataset.size();
    if (n < 10) throw InputError("dataset too small to split (need at least 10 observations)");
    const std::size_t n_train =
        static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));

    if (const auto* series = std::get_if<SeriesData>(&dataset.payload)) {
        // Contiguous prefix/suffix: a random split would destroy the
        // dependence structure the model is estimating.
        const auto& v = series->series.values;
        Dataset train{dataset.family,
                      SeriesData{TimeSeriesSample{{v.begin(), v.begin() + n_train}}},
                      dataset.truth};
        Dataset validation{dataset.family,
                           SeriesData{TimeSeriesSample{{v.begin() + n_train, v.end()}}},
                           dataset.truth};
        return {std::move(train), std::move(validation)};
    }

    Rng rng(spec.seed);
    const std::vector<std::size_t> train_idx = rng.sample_indices(n, n_train);
    std::vector<bool> in_train(n, false);
    for (std::size_t i : train_idx) in_train[i] = true;

    if (const auto* reg = std::get_if<RegressionData>(&dataset.payload)) {
        const std::size_t p = reg->x.n_cols();
        Matrix xt(n_train, p), xv(n - n_train, p);
        std::vector<double> yt(n_train), yv(n - n_train);
        std::size_t a = 0, b = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (in_train[i]) {
                for (std::size_t j = 0; j < p; ++j) xt(a, j) = reg->x.values()(i, j);
                yt[a++] = reg->y[i];
            } else {
                for (std::size_t j = 0; j < p; ++j) xv(b, j) = reg->x.values()(i, j);
                yv[b++] = reg->y[i];
            }
        }
        Dataset train{dataset.family, RegressionData{DesignMatrix(std::move(xt)), std::move(yt)},
                      dataset.truth};
        Dataset validation{dataset.family,
                           RegressionData{DesignMatrix(std::move(xv)), std::move(yv)},
                           dataset.truth};
        return {std::move(train), std::move(validation)};
    }

    const auto& records = dataset.survival().records;
    SurvivalData train_data, val_data;
    for (std::size_t i = 0; i < n; ++i)
        (in_train[i] ? train_data.records : val_data.records).push_back(records[i]);
    Dataset train{dataset.family, std::move(train_data), dataset.truth};
    Dataset validation{dataset.family, std::move(val_data), dataset.truth};
    return {std::move(train), std::move(validation)};
}

DesignMatrix polynomial_design(std::span<const double> x, std::size_t degree) {
    if (x.size() < degree + 1)
        throw InputError("polynomial design of degree " + std::to_string(degree) + " needs " +
                         std::to_string(degree + 1) + " points, got " + std::to_string(x.size()));
    std::vector<double> distinct(x.begin(), x.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < degree + 1)
        throw SingularMatrixError(
            "polynomial design of degree " + std::to_string(degree) + " is rank deficient: only " +
                std::to_string(distinct.size()) + " distinct abscissa values",
            distinct.size());

    Matrix m(x.size(), degree + 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double pow = 1.0;
        for (std::size_t j = 0; j <= degree; ++j) {
            m(i, j) = pow;
            pow *= x[i];
        }
    }
    return DesignMatrix(std::move(m));
}

GeneratorSpec noisy_cubic_spec(std::size_t n, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.family = DataFamily::linear;
    spec.design = DesignKind::polynomial;
    spec.n = n;
    spec.true_parameters = {0.5, 1.2, -0.7, 2.0};
    spec.noise = 0.4;
    spec.seed = seed;
    spec.x_min = -1.0;
    spec.x_max = 1.0;
    return spec;
}

DegreeLadder default_degree_ladder() {
    DegreeLadder ladder;
    ladder.degrees.resize(10);
    for (std::size_t d = 0; d < 10; ++d) ladder.degrees[d] = d;
    return ladder;
}

namespace {

struct RungOutcome {
    double train_cost;
    double validation_cost;
    double var_radius;
};

std::vector<std::size_t> ladder_complexities(const Ladder& ladder) {
    std::vector<std::size_t> c;
    if (const auto* s = std::get_if<SubsetLadder>(&ladder)) {
        if (s->subsets.empty()) throw InputError("ladder must have at least one rung");
        for (std::size_t i = 0; i < s->subsets.size(); ++i) {
            c.push_back(s->subsets[i].size());
            if (i > 0 && !s->subsets[i - 1].contained_in(s->subsets[i]))
                throw InputError("ladder is not nested: rung " + std::to_string(i - 1) +
                                 " is not contained in rung " + std::to_string(i));
        }
    } else if (const auto* d = std::get_if<DegreeLadder>(&ladder)) {
        if (d->degrees.empty()) throw InputError("ladder must have at least one rung");
        for (std::size_t deg : d->degrees) c.push_back(deg + 1);
    } else {
        const auto& orders = std::get<OrderLadder>(ladder).orders;
        if (orders.empty()) throw InputError("ladder must have at least one rung");
        for (std::size_t order : orders) {
            if (order == 0) throw InputError("AR orders must be at least 1");
            c.push_back(order);
        }
    }
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i] <= c[i - 1])
            throw InputError("ladder complexities must be strictly increasing");
    return c;
}

double mean_squared_error(std::span<const double> truth, std::span<const double> predicted) {
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double r = truth[i] - predicted[i];
        s += r * r;
    }
    return s / static_cast<double>(truth.size());
}

/// Validation-side predictor matrices carry no rank or shape requirements, so
/// they stay plain matrices rather than designs.
RungOutcome evaluate_regression_rung(DataFamily family, const DesignMatrix& xt,
                                     std::span<const double> yt, const Matrix& xv,
                                     std::span<const double> yv) {
    if (family == DataFamily::linear) {
        const LinearFit fit = fit_ols(xt, yt);
        const std::vector<double> pred = multiply(xv, fit.beta_hat);
        return RungOutcome{fit.rss / static_cast<double>(yt.size()),
                           mean_squared_error(yv, pred),
                           eigenvalues_symmetric(fit.covariance).spectral_radius};
    }
    const GlmFamily glm_family =
        family == DataFamily::binomial ? GlmFamily::binomial : GlmFamily::poisson;
    const GlmFit fit = fit_glm(xt, yt, glm_family);
    const std::vector<double> eta_val = multiply(xv, fit.beta_hat);
    const double train_cost = -fit.loglik / static_cast<double>(yt.size());
    const double val_cost = -glm_loglik(glm_family, yv, eta_val, fit.dispersion) /
                            static_cast<double>(yv.size());
    return RungOutcome{train_cost, val_cost,
                       eigenvalues_symmetric(fit.fisher_inverse).spectral_radius};
}

Matrix select_columns(const Matrix& x, const ColumnSubset& subset) {
    Matrix out(x.rows(), subset.size());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < subset.size(); ++c)
            out(r, c) = x(r, subset.indices()[c]);
    return out;
}

Matrix vandermonde(std::span<const double> x, std::size_t degree) {
    Matrix m(x.size(), degree + 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double pow = 1.0;
        for (std::size_t j = 0; j <= degree; ++j) {
            m(i, j) = pow;
            pow *= x[i];
        }
    }
    return m;
}

RungOutcome evaluate_rung(const Dataset& train, const Dataset& validation, const Ladder& ladder,
                          std::size_t rung) {
    if (const auto* subsets = std::get_if<SubsetLadder>(&ladder)) {
        const ColumnSubset& subset = subsets->subsets[rung];
        if (train.family == DataFamily::survival) {
            const auto& records = train.survival().records;
            const bool whole = !subset.proper();
            const std::vector<SurvivalRecord> rt =
                whole ? records : nest_records(records, subset);
            const std::vector<SurvivalRecord> rv =
                whole ? validation.survival().records
                      : nest_records(validation.survival().records, subset);
            const CoxFit fit = fit_cox(rt);
            return RungOutcome{-fit.partial_loglik, -partial_loglik(fit.beta_hat, rv),
                               eigenvalues_symmetric(fit.fisher_inverse).spectral_radius};
        }
        const auto& reg_t = train.regression();
        const auto& reg_v = validation.regression();
        const bool whole = !subset.proper();
        const DesignMatrix xt = whole ? reg_t.x : nest_design(reg_t.x, subset);
        const Matrix xv = whole ? reg_v.x.values() : select_columns(reg_v.x.values(), subset);
        return evaluate_regression_rung(train.family, xt, reg_t.y, xv, reg_v.y);
    }

    if (const auto* degrees = std::get_if<DegreeLadder>(&ladder)) {
        const auto& reg_t = train.regression();
        const auto& reg_v = validation.regression();
        if (reg_t.x.n_cols() != 1)
            throw InputError("degree ladders need a univariate abscissa design");
        std::vector<double> abscissa_t(reg_t.y.size()), abscissa_v(reg_v.y.size());
        for (std::size_t i = 0; i < abscissa_t.size(); ++i) abscissa_t[i] = reg_t.x.values()(i, 0);
        for (std::size_t i = 0; i < abscissa_v.size(); ++i) abscissa_v[i] = reg_v.x.values()(i, 0);
        const std::size_t degree = degrees->degrees[rung];
        const DesignMatrix xt = polynomial_design(abscissa_t, degree);
        const Matrix xv = vandermonde(abscissa_v, degree);
        return evaluate_regression_rung(DataFamily::linear, xt, reg_t.y, xv, reg_v.y);
    }

    const std::size_t order = std::get<OrderLadder>(ladder).orders[rung];
    const auto& train_series = train.series().series;
    const auto& val_series = validation.series().series;
    const std::size_t n_train = train_series.n();
    if (n_train < 3 * order)
        throw InputError("train series too short for order " + std::to_string(order));

    const AutocovarianceEstimate gamma = autocovariance(train_series, order);
    const YuleWalkerSolution yw = solve_yule_walker(gamma, order);

    // One-step-ahead predictions over the validation suffix; boundary lags
    // come from the train tail.
    std::vector<double> joined(train_series.values);
    joined.insert(joined.end(), val_series.values.begin(), val_series.values.end());
    double val_cost = 0.0;
    for (std::size_t t = n_train; t < joined.size(); ++t) {
        double pred = 0.0;
        for (std::size_t k = 0; k < order; ++k) pred += yw.phi[k] * joined[t - 1 - k];
        const double r = joined[t] - pred;
        val_cost += r * r;
    }
    val_cost /= static_cast<double>(val_series.n());

    const double var_radius =
        yw.sigma2 / static_cast<double>(n_train) *
        spectral_radius_of_inverse(toeplitz_from(gamma, order));
    return RungOutcome{yw.sigma2, val_cost, var_radius};
}

TradeoffCurve run_sweep(const std::function<Dataset(int)>& dataset_for_replicate,
                        const Ladder& ladder, const SplitSpec& split_spec, int replicates) {
    if (replicates < 1) throw InputError("sweep needs at least one replicate");
    const std::vector<std::size_t> complexities = ladder_complexities(ladder);

    TradeoffCurve curve;
    curve.replicates = replicates;
    curve.raw.resize(complexities.size());
    curve.points.resize(complexities.size());
    for (std::size_t r = 0; r < complexities.size(); ++r)
        curve.points[r].complexity = complexities[r];

    for (int i = 0; i < replicates; ++i) {
        const Dataset data = dataset_for_replicate(i);
        SplitSpec per_replicate = split_spec;
        per_replicate.seed = replicate_seed(split_spec.seed, static_cast<std::uint64_t>(i));
        const auto [train, validation] = split(data, per_replicate);

        for (std::size_t r = 0; r < complexities.size(); ++r) {
            try {
                const RungOutcome o = evaluate_rung(train, validation, ladder, r);
                curve.raw[r].push_back(
                    RungSample{i, o.train_cost, o.validation_cost, o.var_radius});
            } catch (const Error&) {
                // Fit or data-shape failure at this rung: skip and count it.
                ++curve.points[r].failures;
            }
        }
    }

    for (std::size_t r = 0; r < complexities.size(); ++r) {
        auto& point = curve.points[r];
        const auto& samples = curve.raw[r];
        if (samples.empty()) continue;
        const double count = static_cast<double>(samples.size());
        double mt = 0.0, mv = 0.0, mr = 0.0;
        for (const auto& s : samples) {
            mt += s.train_cost;
            mv += s.validation_cost;
            mr += s.var_radius;
        }
        mt /= count;
        mv /= count;
        mr /= count;
        double vt = 0.0, vv = 0.0, vr = 0.0;
        for (const auto& s : samples) {
            vt += (s.train_cost - mt) * (s.train_cost - mt);
            vv += (s.validation_cost - mv) * (s.validation_cost - mv);
            vr += (s.var_radius - mr) * (s.var_radius - mr);
        }
        const double se_scale = samples.size() > 1 ? count * (count - 1.0) : 1.0;
        point.train_cost_mean = mt;
        point.validation_cost_mean = mv;
        point.var_radius_mean = mr;
        if (samples.size() > 1) {
            point.train_cost_se = std::sqrt(vt / se_scale);
            point.validation_cost_se = std::sqrt(vv / se_scale);
            point.var_radius_se = std::sqrt(vr / se_scale);
        }
    }
    return curve;
}

}  // namespace

TradeoffCurve sweep_complexity(const GeneratorSpec& generator, const Ladder& ladder,
                               const SplitSpec& split_spec, int replicates) {
    validate_generator(generator);
    return run_sweep(
        [&](int i) {
            GeneratorSpec per_replicate = generator;
            per_replicate.seed = replicate_seed(generator.seed, static_cast<std::uint64_t>(i));
            return generate(per_replicate);
        },
        ladder, split_spec, replicates);
}

TradeoffCurve sweep_complexity(const Dataset& dataset, const Ladder& ladder,
                               const SplitSpec& split_spec, int replicates) {
    return run_sweep([&](int) { return dataset; }, ladder, split_spec, replicates);
}

}  // namespace nestspec
