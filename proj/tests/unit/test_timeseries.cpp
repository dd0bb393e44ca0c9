#include <doctest.h>

#include <cmath>

#include "nestspec/errors.hpp"
#include "nestspec/random.hpp"
#include "nestspec/timeseries.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace nestspec;

TEST_SUITE_BEGIN("timeseries");

TEST_CASE("autocovariance of the alternating series") {
    const TimeSeriesSample x{{1, -1, 1, -1, 1, -1}};
    const AutocovarianceEstimate g = autocovariance(x, 1);
    CHECK(g.gamma[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.gamma[1] == doctest::Approx(-5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("lag zero is the population-style variance") {
    Rng rng(4101);
    TimeSeriesSample x{test_helpers::random_vector(rng, 40, 2.0)};
    double mean = 0.0;
    for (double v : x.values) mean += v;
    mean /= 40.0;
    double var = 0.0;
    for (double v : x.values) var += (v - mean) * (v - mean);
    var /= 40.0;
    CHECK(autocovariance(x, 0).gamma[0] == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("white noise has vanishing lag-1 autocovariance at n = 1e5") {
    const TimeSeriesSample x = simulate_ar({}, 1.0, 100000, 4102);
    const AutocovarianceEstimate g = autocovariance(x, 1);
    CHECK(std::abs(g.gamma[1]) <= 0.02);
}

TEST_CASE("autocovariance input validation") {
    CHECK_THROWS_AS(autocovariance(TimeSeriesSample{{1, 2, 3}}, 3), InputError);
    CHECK_THROWS_AS(autocovariance(TimeSeriesSample{{2, 2, 2, 2}}, 1), DegenerateSeriesError);
}

TEST_CASE("Toeplitz layout, boundary, and nesting identity") {
    AutocovarianceEstimate g;
    g.gamma = {2.0, 1.0};
    const SymmetricMatrix t = toeplitz_from(g, 2);
    CHECK(t(0, 0) == 2.0);
    CHECK(t(0, 1) == 1.0);
    CHECK(t(1, 1) == 2.0);

    const SymmetricMatrix t1 = toeplitz_from(g, 1);
    CHECK(t1.dim() == 1);
    CHECK(t1(0, 0) == 2.0);

    CHECK_THROWS_AS(toeplitz_from(g, 3), InputError);

    // The size-m Toeplitz is the leading principal submatrix of the size-p one.
    Rng rng(4103);
    const TimeSeriesSample x = simulate_ar({0.5, -0.2}, 1.0, 500, 4103);
    const AutocovarianceEstimate gamma = autocovariance(x, 5);
    const SymmetricMatrix big = toeplitz_from(gamma, 5);
    const SymmetricMatrix small = toeplitz_from(gamma, 3);
    const SymmetricMatrix leading = principal_submatrix(big, ColumnSubset::leading(3, 5));
    CHECK(test_helpers::max_abs_diff(small, leading) == 0.0);
}

TEST_CASE("Yule-Walker for AR(1): closed-form solution") {
    AutocovarianceEstimate g;
    g.gamma = {2.0, 0.8};
    const YuleWalkerSolution sol = solve_yule_walker(g, 1);
    CHECK(sol.phi[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(sol.sigma2 == doctest::Approx(2.0 * (1.0 - 0.16)).epsilon(1e-15));
}

TEST_CASE("exact AR(1) autocovariances recover phi and sigma2 exactly") {
    const double phi = 0.5, sigma2 = 1.0;
    AutocovarianceEstimate g;
    for (int l = 0; l <= 3; ++l)
        g.gamma.push_back(sigma2 * std::pow(phi, l) / (1.0 - phi * phi));

    const YuleWalkerSolution order1 = solve_yule_walker(g, 1);
    CHECK(std::abs(order1.phi[0] - phi) <= 1e-12);
    CHECK(std::abs(order1.sigma2 - sigma2) <= 1e-12);

    // Extra lags contribute nothing: phi_2 = phi_3 = 0, same sigma2.
    const YuleWalkerSolution order3 = solve_yule_walker(g, 3);
    CHECK(std::abs(order3.phi[0] - phi) <= 1e-12);
    CHECK(std::abs(order3.phi[1]) <= 1e-12);
    CHECK(std::abs(order3.phi[2]) <= 1e-12);
    CHECK(std::abs(order3.sigma2 - sigma2) <= 1e-12);
}

TEST_CASE("simulated AR(3) at n = 1e5 recovers the coefficients") {
    const std::vector<double> truth{0.4, -0.2, 0.1};
    const TimeSeriesSample x = simulate_ar(truth, 1.0, 100000, 4104);
    const AutocovarianceEstimate g = autocovariance(x, 3);
    const YuleWalkerSolution sol = solve_yule_walker(g, 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(sol.phi[k] - truth[k]) <= 0.03);

    // Levinson-Durbin cross-check.
    const oracles::LevinsonResult ld = oracles::levinson_durbin(g.gamma, 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(sol.phi[k] - ld.phi[k]) <= 1e-8);
    CHECK(std::abs(sol.sigma2 - ld.sigma2) <= 1e-8 * (1.0 + ld.sigma2));
}

TEST_CASE("Levinson-Durbin equivalence on random stationary models") {
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(4200 + trial);
        std::vector<double> phi{0.6 * rng.uniform(-1, 1), 0.3 * rng.uniform(-1, 1),
                                0.15 * rng.uniform(-1, 1)};
        const TimeSeriesSample x = simulate_ar(phi, 1.0, 2000, 4300 + trial);
        const AutocovarianceEstimate g = autocovariance(x, 6);
        for (std::size_t p : {1ul, 3ul, 6ul}) {
            const YuleWalkerSolution direct = solve_yule_walker(g, p);
            const oracles::LevinsonResult ld = oracles::levinson_durbin(g.gamma, p);
            for (std::size_t k = 0; k < p; ++k)
                CHECK(std::abs(direct.phi[k] - ld.phi[k]) <= 1e-8 * (1.0 + std::abs(ld.phi[k])));
        }
    }
}

TEST_CASE("innovation variance is monotone in the model order") {
    const TimeSeriesSample x = simulate_ar({0.5, -0.25}, 1.3, 3000, 4105);
    const AutocovarianceEstimate g = autocovariance(x, 8);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p <= 8; ++p) {
        const double sigma2 = solve_yule_walker(g, p).sigma2;
        CHECK(sigma2 <= prev + 1e-9 * g.gamma[0]);
        CHECK(sigma2 >= -1e-9 * g.gamma[0]);
        prev = sigma2;
    }
}

TEST_CASE("biased autocovariance estimator yields PSD Toeplitz matrices") {
    // Deliberately awkward inputs: ramps, steps, spikes.
    std::vector<TimeSeriesSample> inputs;
    TimeSeriesSample ramp, step, spike;
    for (int t = 0; t < 60; ++t) {
        ramp.values.push_back(0.1 * t);
        step.values.push_back(t < 30 ? -1.0 : 1.0);
        spike.values.push_back(t == 17 ? 25.0 : 0.0);
    }
    inputs.push_back(ramp);
    inputs.push_back(step);
    inputs.push_back(spike);
    Rng rng(4106);
    inputs.push_back(TimeSeriesSample{test_helpers::random_vector(rng, 60)});

    for (const auto& x : inputs) {
        const AutocovarianceEstimate g = autocovariance(x, 10);
        for (std::size_t size : {3ul, 7ul, 11ul}) {
            const SpectralSummary spec = eigenvalues_symmetric(toeplitz_from(g, size));
            CHECK(spec.min_eigenvalue >= -1e-8 * g.gamma[0]);
        }
    }
}

TEST_CASE("moving-average variance identity") {
    CHECK(arma_ma_variance(1.0, {}).sigma2_ma == doctest::Approx(1.0));
    CHECK(arma_ma_variance(2.0, std::vector<double>{1.0, 1.0}).sigma2_ma == doctest::Approx(6.0));
    CHECK(arma_ma_variance(1.0, std::vector<double>{0.5}).sigma2_ma == doctest::Approx(1.25));
    CHECK_THROWS_AS(arma_ma_variance(-1.0, {}), InputError);

    Rng rng(4107);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> b = test_helpers::random_vector(rng, 4);
        const double sigma2 = rng.uniform(0.0, 3.0);
        double expanded = sigma2;
        for (double coeff : b) expanded += sigma2 * coeff * coeff;
        const ArmaVarianceResult r = arma_ma_variance(sigma2, b);
        CHECK(std::abs(r.sigma2_ma - expanded) <= 1e-12 * (1.0 + expanded));
        CHECK(std::abs(r.sigma2_ma - r.sigma2 * (1.0 + dot(r.b, r.b))) <=
              1e-12 * (1.0 + r.sigma2_ma));
    }
}

TEST_CASE("nested AR comparison on an AR(1) series") {
    const TimeSeriesSample x = simulate_ar({0.6}, 1.0, 2000, 4108);
    const ArNestedComparison cmp = compare_nested_ar(x, 2, 1);
    CHECK(cmp.report.theorem_backed);
    CHECK(cmp.report.orderings_hold);
    CHECK(cmp.report.info_interlacing.holds);
    CHECK(cmp.nested.sigma2 >= cmp.saturated.sigma2 - 1e-9 * (1.0 + cmp.saturated.sigma2));
    CHECK(cmp.saturated.order == 2);
    CHECK(cmp.nested.order == 1);

    CHECK_THROWS_AS(compare_nested_ar(x, 2, 2), InputError);
    CHECK_THROWS_AS(compare_nested_ar(x, 2, 3), InputError);
}

TEST_CASE("nested AR orderings hold across simulated replicates") {
    for (int replicate = 0; replicate < 30; ++replicate) {
        const TimeSeriesSample x = simulate_ar({0.5, -0.3}, 1.0, 600, 4400 + replicate);
        const ArNestedComparison cmp = compare_nested_ar(x, 4, 2);
        CHECK(cmp.report.orderings_hold);
        CHECK(cmp.report.info_interlacing.holds);
    }
}

TEST_CASE("simulate_ar: determinism, stationarity check, sample autocorrelation") {
    const TimeSeriesSample a = simulate_ar({0.5, -0.2}, 1.0, 200, 4109);
    const TimeSeriesSample b = simulate_ar({0.5, -0.2}, 1.0, 200, 4109);
    CHECK(a.values == b.values);

    try {
        simulate_ar(std::vector<double>{1.0}, 1.0, 100, 1);
        FAIL("expected InputError for a unit root");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("modulus") != std::string::npos);
    }
    CHECK_THROWS_AS(simulate_ar(std::vector<double>{0.7, 0.7}, 1.0, 100, 1), InputError);

    const TimeSeriesSample long_run = simulate_ar({0.9}, 1.0, 100000, 4110);
    const AutocovarianceEstimate g = autocovariance(long_run, 1);
    CHECK(std::abs(g.gamma[1] / g.gamma[0] - 0.9) <= 0.01);
}

TEST_SUITE_END();
