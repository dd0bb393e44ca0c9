#include <doctest.h>

#include <cmath>

#include "nestspec/errors.hpp"
#include "nestspec/glm.hpp"
#include "nestspec/harness.hpp"
#include "nestspec/random.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace nestspec;
using test_helpers::matrix_from_rows;
using test_helpers::random_design;

namespace {

/// Deterministic GLM instance with moderate linear predictors.
struct GlmInstance {
    DesignMatrix x;
    std::vector<double> y;
};

GlmInstance make_instance(GlmFamily family, std::uint64_t seed, std::size_t n, std::size_t p) {
    GeneratorSpec spec;
    spec.family = family == GlmFamily::binomial ? DataFamily::binomial : DataFamily::poisson;
    spec.n = n;
    spec.seed = seed;
    spec.true_parameters.assign(p, 0.0);
    Rng rng(seed * 31 + 7);
    for (auto& b : spec.true_parameters) b = 0.5 * rng.normal();
    const Dataset data = generate(spec);
    return GlmInstance{data.regression().x, data.regression().y};
}

}  // namespace

TEST_SUITE_BEGIN("glm");

TEST_CASE("working weights at reference points") {
    const std::vector<double> eta{0.0, 0.0, 0.0};
    CHECK(glm_weights(eta, GlmFamily::binomial).weights[0] == doctest::Approx(0.25));
    CHECK(glm_weights(eta, GlmFamily::poisson).weights[1] == doctest::Approx(1.0));
    CHECK(glm_weights(eta, GlmFamily::gaussian, 2.0).weights[2] == doctest::Approx(0.5));

    const std::vector<double> extreme{0.0, -40.0, 1.0};
    const GlmWeights w = glm_weights(extreme, GlmFamily::binomial);
    REQUIRE(w.flagged.size() == 1);
    CHECK(w.flagged[0] == 1);
}

TEST_CASE("gaussian family reduces to ordinary least squares") {
    Rng rng(2101);
    const DesignMatrix x = random_design(rng, 30, 3);
    const std::vector<double> y = test_helpers::random_vector(rng, 30, 2.0);

    const LinearFit ols = fit_ols(x, y);
    const GlmFit glm = fit_glm(x, y, GlmFamily::gaussian);
    CHECK(glm.converged);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(std::abs(glm.beta_hat[j] - ols.beta_hat[j]) <= 1e-10);
    CHECK(test_helpers::max_abs_diff(glm.fisher_inverse, ols.covariance) <=
          1e-10 * (1.0 + ols.covariance.max_abs_entry()));
    CHECK(glm.dispersion == doctest::Approx(ols.sigma2_hat));
}

TEST_CASE("intercept-only Poisson MLE is the log of the sample mean") {
    const DesignMatrix x(matrix_from_rows(3, 1, {1, 1, 1}));
    const GlmFit fit = fit_glm(x, std::vector<double>{1.0, 2.0, 3.0}, GlmFamily::poisson);
    CHECK(fit.converged);
    CHECK(fit.beta_hat[0] == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("intercept-only logistic MLE is the logit of the sample proportion") {
    const DesignMatrix x(matrix_from_rows(4, 1, {1, 1, 1, 1}));
    const GlmFit fit = fit_glm(x, std::vector<double>{0.0, 1.0, 1.0, 1.0}, GlmFamily::binomial);
    CHECK(fit.converged);
    CHECK(fit.beta_hat[0] == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("the score vanishes at the IRLS fixed point") {
    for (GlmFamily family : {GlmFamily::binomial, GlmFamily::poisson}) {
        const GlmInstance inst = make_instance(family, 2102, 60, 3);
        const GlmFit fit = fit_glm(inst.x, inst.y, family);
        CHECK(fit.converged);

        std::vector<double> working(inst.y.size());
        for (std::size_t i = 0; i < inst.y.size(); ++i) working[i] = inst.y[i] - fit.mu[i];
        const std::vector<double> score = multiply_transposed(inst.x.values(), working);
        const double scale = 1.0 + max_abs(multiply_transposed(inst.x.values(), inst.y));
        CHECK(max_abs(score) <= 1e-8 * scale);

        // mu is the inverse link of eta, weights are positive, Fisher = X'WX.
        for (std::size_t i = 0; i < fit.mu.size(); ++i) {
            CHECK(std::abs(fit.mu[i] - glm_mean(family, fit.eta[i])) <= 1e-10);
            CHECK(fit.weights[i] > 0.0);
        }
        const SymmetricMatrix expected = weighted_gram(inst.x.values(), fit.weights);
        CHECK(test_helpers::max_abs_diff(fit.fisher, expected) <=
              1e-9 * (1.0 + expected.max_abs_entry()));
    }
}

TEST_CASE("Fisher matrix agrees with the finite-difference Hessian of the log-likelihood") {
    auto gaussian_instance = [](std::uint64_t seed) {
        Rng rng(seed);
        DesignMatrix x = random_design(rng, 25, 3);
        std::vector<double> y = test_helpers::random_vector(rng, 25, 1.5);
        return GlmInstance{std::move(x), std::move(y)};
    };

    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 7; ++seed) {
        for (GlmFamily family :
             {GlmFamily::gaussian, GlmFamily::binomial, GlmFamily::poisson}) {
            const GlmInstance inst = family == GlmFamily::gaussian
                                         ? gaussian_instance(2210 + seed)
                                         : make_instance(family, 2200 + seed, 25, 3);
            GlmFit fit = fit_glm(inst.x, inst.y, family);

            // The gaussian dispersion is held fixed at its estimate for the
            // derivative check.
            const double dispersion = fit.dispersion;
            auto loglik = [&](std::span<const double> beta) {
                const std::vector<double> eta = multiply(inst.x.values(), beta);
                return glm_loglik(family, inst.y, eta, dispersion);
            };
            const Matrix hessian = oracles::fd_hessian(loglik, fit.beta_hat, 1e-5);

            double worst = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    worst = std::max(worst, std::abs(-hessian(i, j) - fit.fisher(i, j)));
                    scale = std::max(scale, std::abs(fit.fisher(i, j)));
                }
            CHECK(worst <= 1e-4 * scale);
            ++checked;
        }
    }
    CHECK(checked == 21);
}

TEST_CASE("shared-weights nested comparison: orderings are guaranteed") {
    for (int trial = 0; trial < 50; ++trial) {
        const GlmFamily family = trial % 2 == 0 ? GlmFamily::poisson : GlmFamily::binomial;
        const GlmInstance inst = make_instance(family, 2300 + trial, 120, 4);
        Rng rng(40 + trial);
        const std::size_t sub_size = 1 + static_cast<std::size_t>(rng.uniform_int(0, 2));
        const ColumnSubset subset(rng.sample_indices(4, sub_size), 4);

        const NestedComparisonReport report =
            compare_nested_glm(inst.x, inst.y, family, subset, NestingMode::shared);
        CHECK(report.theorem_backed);
        CHECK(report.orderings_hold);
        CHECK(report.info_interlacing.holds);
        CHECK(report.bias_saturated <= report.bias_nested + 1e-9 * (1.0 + std::abs(report.bias_nested)));
    }
}

TEST_CASE("refit mode reports orderings without asserting them") {
    const GlmInstance inst = make_instance(GlmFamily::binomial, 2400, 80, 3);
    const NestedComparisonReport report = compare_nested_glm(
        inst.x, inst.y, GlmFamily::binomial, ColumnSubset({0, 2}, 3), NestingMode::refit);
    CHECK(report.mode == NestingMode::refit);
    CHECK_FALSE(report.theorem_backed);
    CHECK(std::isfinite(report.inv_info_radius_nested));
}

TEST_CASE("gaussian comparison matches the linear-model comparison") {
    Rng rng(2500);
    const DesignMatrix x = random_design(rng, 40, 4);
    const std::vector<double> y = test_helpers::random_vector(rng, 40, 1.5);
    const ColumnSubset subset({0, 3}, 4);

    const NestedComparisonReport glm_report =
        compare_nested_glm(x, y, GlmFamily::gaussian, subset, NestingMode::shared);
    const NestedComparisonReport lin_report = compare_nested(x, y, subset);

    CHECK(glm_report.orderings_hold == lin_report.orderings_hold);
    CHECK(glm_report.info_interlacing.holds == lin_report.info_interlacing.holds);
    // The saturated inverse-Fisher radius is the OLS covariance radius.
    CHECK(glm_report.var_radius_saturated ==
          doctest::Approx(lin_report.var_radius_saturated).epsilon(1e-10));
}

TEST_CASE("complete separation raises SeparationError") {
    const DesignMatrix x(matrix_from_rows(6, 1, {-3, -2, -1, 1, 2, 3}));
    const std::vector<double> y{0.0, 0.0, 0.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(fit_glm(x, y, GlmFamily::binomial), SeparationError);
}

TEST_CASE("iteration budget exhaustion raises ConvergenceError with a trace") {
    const GlmInstance inst = make_instance(GlmFamily::poisson, 2600, 50, 3);
    GlmOptions options;
    options.max_iterations = 1;
    try {
        fit_glm(inst.x, inst.y, GlmFamily::poisson, options);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK_FALSE(e.trace().empty());
        CHECK(e.trace().front().iteration == 1);
    }
}

TEST_CASE("response support validation") {
    const DesignMatrix x(matrix_from_rows(3, 1, {1, 1, 1}));
    CHECK_THROWS_AS(fit_glm(x, std::vector<double>{0.0, 0.5, 1.0}, GlmFamily::binomial),
                    InputError);
    CHECK_THROWS_AS(fit_glm(x, std::vector<double>{1.0, -1.0, 2.0}, GlmFamily::poisson),
                    InputError);
    CHECK_THROWS_AS(fit_glm(x, std::vector<double>{1.0, 1.5, 2.0}, GlmFamily::poisson),
                    InputError);
}

TEST_SUITE_END();
