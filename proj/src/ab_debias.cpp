#include "panelkit/ab_debias.hpp"

#include "panelkit/error.hpp"
#include "panelkit/rng.hpp"

namespace panelkit {

std::vector<std::uint64_t> split_seeds(std::uint64_t seed, int n_splits) {
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < n_splits; ++r) seeds.push_back(derive_seed(seed, static_cast<std::uint64_t>(r)));
  return seeds;
}

std::vector<Index> split_permutation(Index num_units, std::uint64_t split_seed) {
  Rng rng(split_seed);
  return random_permutation(static_cast<std::size_t>(num_units), rng);
}

namespace {

Eigen::VectorXd fit_half(const RegressionSample& half, const AbOptions& options) {
  try {
    return fit_ab(half, options).slopes();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::OrderConditionFailed) {
      throw Error(ErrorCode::HalfSampleOrderConditionFailed, e.what());
    }
    throw;
  }
}

}  // namespace

CorrectionReport debias_ab_split(const Eigen::VectorXd& raw_slopes, const RegressionSample& sample,
                                 std::span<const std::vector<Index>> permutations, const AbOptions& options,
                                 SplitConvention convention) {
  if (permutations.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one split");
  CorrectionReport r;
  r.method = CorrectionReport::Method::split;
  r.raw_estimate = raw_slopes;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(raw_slopes.size());
  for (const auto& perm : permutations) {
    const SplitPartition partition = cross_split(sample, perm, convention);
    const Eigen::VectorXd half_a = fit_half(split_part(sample, partition, 0), options);
    const Eigen::VectorXd half_b = fit_half(split_part(sample, partition, 1), options);
    sum += split_correct(raw_slopes, half_a, half_b);
    r.half_estimates.emplace_back(half_a, half_b);
    r.partitions.push_back(partition.descriptor);
  }
  r.corrected_estimate = sum / static_cast<double>(permutations.size());
  return r;
}

CorrectionReport debias_ab_split_seeded(const Eigen::VectorXd& raw_slopes, const RegressionSample& sample,
                                        std::span<const std::uint64_t> seeds, const AbOptions& options,
                                        SplitConvention convention) {
  std::vector<std::vector<Index>> perms;
  for (auto s : seeds) perms.push_back(split_permutation(sample.num_units(), s));
  return debias_ab_split(raw_slopes, sample, perms, options, convention);
}

CorrectionReport debias_ab_split(const RegressionSample& sample, int n_splits, std::uint64_t seed,
                                 const AbOptions& options, SplitConvention convention) {
  if (n_splits < 1) throw Error(ErrorCode::InvalidArgument, "number of splits must be positive");
  if (sample.num_units() < 4) {
    throw Error(ErrorCode::TooFewUnits, "cross-section split needs at least 4 units");
  }
  const Eigen::VectorXd raw = fit_ab(sample, options).slopes();
  const auto seeds = split_seeds(seed, n_splits);
  return debias_ab_split_seeded(raw, sample, seeds, options, convention);
}

}  // namespace panelkit
