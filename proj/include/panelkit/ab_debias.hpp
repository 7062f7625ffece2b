#pragma once

#include "panelkit/ab_gmm.hpp"
#include "panelkit/correction.hpp"
#include "panelkit/sample.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace panelkit {

// Seed of split r is derive_seed(seed, r).
std::vector<std::uint64_t> split_seeds(std::uint64_t seed, int n_splits);
std::vector<Index> split_permutation(Index num_units, std::uint64_t split_seed);

// Cross-section split correction averaged over the given unit orderings. Each
// half rebuilds its own instruments (same lag cap) and one-step weight.
CorrectionReport debias_ab_split(const Eigen::VectorXd& raw_slopes, const RegressionSample& sample,
                                 std::span<const std::vector<Index>> permutations, const AbOptions& options = {},
                                 SplitConvention convention = SplitConvention::paper);

CorrectionReport debias_ab_split_seeded(const Eigen::VectorXd& raw_slopes, const RegressionSample& sample,
                                        std::span<const std::uint64_t> seeds, const AbOptions& options = {},
                                        SplitConvention convention = SplitConvention::paper);

// K uniformly random splits from `seed`; fits the full-sample AB itself.
CorrectionReport debias_ab_split(const RegressionSample& sample, int n_splits, std::uint64_t seed,
                                 const AbOptions& options = {}, SplitConvention convention = SplitConvention::paper);

}  // namespace panelkit
