#include "verify.hpp"

#include <algorithm>
#include <cmath>

#include "nestspec/errors.hpp"

namespace nestspec::cli {

SymmetricMatrix random_spd(Rng& rng, std::size_t dim) {
    Matrix b(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) b(i, j) = rng.normal();
    SymmetricMatrix a = gram(b);
    double mean_diag = 0.0;
    for (std::size_t i = 0; i < dim; ++i) mean_diag += a(i, i);
    mean_diag /= static_cast<double>(dim);
    const double ridge = 0.01 * std::max(mean_diag, 1e-12);
    for (std::size_t i = 0; i < dim; ++i) a.set(i, i, a(i, i) + ridge);
    return a;
}

ColumnSubset random_proper_subset(Rng& rng, std::size_t dim) {
    const std::size_t size = 1 + static_cast<std::size_t>(rng.uniform_int(0, dim - 2));
    return ColumnSubset(rng.sample_indices(dim, size), dim);
}

namespace {

void record(PropertyResult& prop, double violation, double tolerance, std::uint64_t seed,
            std::size_t dim) {
    ++prop.trials;
    prop.max_violation = std::max(prop.max_violation, violation);
    if (violation > tolerance) {
        if (prop.violations == 0) {
            prop.first_violation_seed = seed;
            prop.first_violation_dim = dim;
        }
        ++prop.violations;
    }
}

}  // namespace

VerifyResult run_verify(const VerifyConfig& config) {
    if (config.dim_min < 2 || config.dim_max < config.dim_min)
        throw InputError("verify: dimension band must satisfy 2 <= min <= max");
    if (config.trials < 1) throw InputError("verify: need at least one trial");

    VerifyResult result;
    result.properties = {PropertyResult{.name = "interlacing"},
                         PropertyResult{.name = "spectral_radius_monotonicity"},
                         PropertyResult{.name = "inverse_interlacing"},
                         PropertyResult{.name = "permutation_similarity"}};
    PropertyResult& interlacing = result.properties[0];
    PropertyResult& monotonicity = result.properties[1];
    PropertyResult& inverse = result.properties[2];
    PropertyResult& permutation = result.properties[3];

    for (int t = 0; t < config.trials; ++t) {
        const std::uint64_t trial_seed = replicate_seed(config.seed, static_cast<std::uint64_t>(t));
        Rng rng(trial_seed);
        const std::size_t dim =
            static_cast<std::size_t>(rng.uniform_int(config.dim_min, config.dim_max));

        const SymmetricMatrix a = random_spd(rng, dim);
        const ColumnSubset keep = random_proper_subset(rng, dim);
        const SymmetricMatrix sub = principal_submatrix(a, keep);

        SpectralSummary spec_full = eigenvalues_symmetric(a);
        const SpectralSummary spec_sub = eigenvalues_symmetric(sub);
        if (config.perturb_eigenvalue != 0.0) {
            spec_full.eigenvalues[0] -= config.perturb_eigenvalue;
            spec_full.spectral_radius = spec_full.eigenvalues[0];
        }

        const double tol = 1e-9 * spec_full.spectral_radius;
        const InterlacingReport inter = check_interlacing(spec_full, spec_sub, tol);
        record(interlacing, inter.max_violation, tol, trial_seed, dim);

        const double mono_violation =
            std::max(0.0, spec_sub.spectral_radius - spec_full.spectral_radius);
        record(monotonicity, mono_violation, tol, trial_seed, dim);

        const SpectralSummary inv_full = eigenvalues_symmetric(invert_spd(a));
        const SpectralSummary inv_sub = eigenvalues_symmetric(invert_spd(sub));
        const double inv_tol = 1e-9 * (1.0 + inv_full.spectral_radius);
        const InterlacingReport inv_inter = check_interlacing(inv_full, inv_sub, inv_tol);
        record(inverse, inv_inter.max_violation, inv_tol, trial_seed, dim);

        // Simultaneous row/column permutation leaves the spectrum unchanged.
        std::vector<std::size_t> perm(dim);
        for (std::size_t i = 0; i < dim; ++i) perm[i] = i;
        for (std::size_t i = dim; i-- > 1;)
            std::swap(perm[i], perm[rng.uniform_int(0, i)]);
        SymmetricMatrix permuted(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) permuted.set(i, j, a(perm[i], perm[j]));
        const SpectralSummary spec_perm = eigenvalues_symmetric(permuted);
        double perm_violation = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            perm_violation = std::max(
                perm_violation, std::abs(spec_perm.eigenvalues[i] - spec_full.eigenvalues[i]));
        record(permutation, perm_violation, tol, trial_seed, dim);
    }

    for (const auto& prop : result.properties)
        if (prop.violations > 0) result.all_pass = false;
    return result;
}

}  // namespace nestspec::cli
