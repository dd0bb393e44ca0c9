#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nestspec/linalg.hpp"
#include "nestspec/random.hpp"

namespace nestspec::cli {

struct VerifyConfig {
    std::uint64_t seed = 0;
    int trials = 1000;
    std::size_t dim_min = 2;
    std::size_t dim_max = 20;
    /// Test hook: added to the largest eigenvalue of each full spectrum before
    /// checking, to confirm the harness detects injected defects.
    double perturb_eigenvalue = 0.0;
};

struct PropertyResult {
    std::string name;
    int trials = 0;
    int violations = 0;
    double max_violation = 0.0;
    /// Trial seed and matrix dimension of the first violation, for replay.
    std::uint64_t first_violation_seed = 0;
    std::size_t first_violation_dim = 0;
};

struct VerifyResult {
    std::vector<PropertyResult> properties;
    bool all_pass = true;
};

/// Deterministic random SPD matrix: B'B plus a small diagonal ridge so the
/// inverse-spectrum properties always have a well-conditioned matrix to work
/// with. Entries of B are standard normal.
SymmetricMatrix random_spd(Rng& rng, std::size_t dim);

/// Uniformly random proper subset of {0..dim-1} (size 1..dim-1), sorted.
ColumnSubset random_proper_subset(Rng& rng, std::size_t dim);

/// Runs the seeded interlacing/ordering fuzz corpus: for each trial, a random
/// SPD matrix and a random proper principal submatrix are checked for
///   - generalized eigenvalue interlacing,
///   - spectral-radius monotonicity,
///   - interlacing of the inverse spectra,
///   - permutation similarity of the spectrum.
/// Trial t runs on seed 10^6 * config.seed + t.
VerifyResult run_verify(const VerifyConfig& config);

}  // namespace nestspec::cli
