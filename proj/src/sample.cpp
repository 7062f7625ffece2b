#include "panelkit/sample.hpp"

#include "panelkit/error.hpp"

#include <algorithm>

namespace panelkit {

RegressionSample::RegressionSample(std::vector<std::string> unit_ids, std::vector<int> period_labels,
                                   std::string outcome_name, std::vector<std::string> treatment_names,
                                   Eigen::MatrixXd outcome_levels, std::vector<Eigen::MatrixXd> treatment_levels,
                                   int n_lags, Index window_begin, Index window_end)
    : unit_ids_(std::move(unit_ids)),
      period_labels_(std::move(period_labels)),
      outcome_name_(std::move(outcome_name)),
      treatment_names_(std::move(treatment_names)),
      outcome_levels_(std::move(outcome_levels)),
      treatment_levels_(std::move(treatment_levels)),
      n_lags_(n_lags),
      window_begin_(window_begin),
      window_end_(window_end) {
  const Index N = outcome_levels_.rows();
  const Index T_all = outcome_levels_.cols();
  if (N == 0) throw Error(ErrorCode::EmptyInput, "sample has no units");
  if (static_cast<Index>(unit_ids_.size()) != N || static_cast<Index>(period_labels_.size()) != T_all) {
    throw Error(ErrorCode::InvalidArgument, "sample labels do not match level dimensions");
  }
  if (treatment_levels_.size() != treatment_names_.size()) {
    throw Error(ErrorCode::InvalidArgument, "treatment names do not match treatment series");
  }
  if (n_lags_ < 0 || window_begin_ < n_lags_ || window_end_ > T_all || window_begin_ >= window_end_) {
    throw Error(ErrorCode::TooFewPeriods, "effective window [" + std::to_string(window_begin_) + ", " +
                                              std::to_string(window_end_) + ") is invalid with " +
                                              std::to_string(n_lags_) + " lags");
  }

  const Index T = num_periods();
  const Index da = d_alpha();
  outcome_.resize(N * T);
  predetermined_.resize(N * T, da + n_lags_);
  for (Index i = 0; i < N; ++i) {
    for (Index t = 0; t < T; ++t) {
      const Index row = i * T + t;
      const Index s = window_begin_ + t;
      outcome_(row) = outcome_levels_(i, s);
      for (Index k = 0; k < da; ++k) predetermined_(row, k) = treatment_levels_[k](i, s);
      for (int j = 1; j <= n_lags_; ++j) predetermined_(row, da + j - 1) = outcome_levels_(i, s - j);
    }
  }
}

std::vector<std::string> RegressionSample::slope_names() const {
  std::vector<std::string> names = treatment_names_;
  for (int j = 1; j <= n_lags_; ++j) names.push_back("L" + std::to_string(j) + "." + outcome_name_);
  return names;
}

RegressionSample RegressionSample::select_units(std::span<const Index> positions, bool fresh_ids) const {
  if (positions.empty()) throw Error(ErrorCode::EmptyInput, "no units selected");
  const auto n_sel = static_cast<Index>(positions.size());
  std::vector<std::string> ids;
  ids.reserve(positions.size());
  Eigen::MatrixXd y(n_sel, outcome_levels_.cols());
  std::vector<Eigen::MatrixXd> d(treatment_levels_.size(), Eigen::MatrixXd(n_sel, outcome_levels_.cols()));
  for (Index k = 0; k < n_sel; ++k) {
    const Index i = positions[k];
    if (i < 0 || i >= num_units()) throw Error(ErrorCode::InvalidArgument, "unit position out of range");
    ids.push_back(fresh_ids ? unit_ids_[i] + "#" + std::to_string(k) : unit_ids_[i]);
    y.row(k) = outcome_levels_.row(i);
    for (std::size_t v = 0; v < d.size(); ++v) d[v].row(k) = treatment_levels_[v].row(i);
  }
  return RegressionSample(std::move(ids), period_labels_, outcome_name_, treatment_names_, std::move(y),
                          std::move(d), n_lags_, window_begin_, window_end_);
}

RegressionSample RegressionSample::restrict_periods(Index begin, Index end) const {
  if (begin < 0 || end > num_periods() || begin >= end) {
    throw Error(ErrorCode::InvalidArgument, "period range out of bounds");
  }
  return RegressionSample(unit_ids_, period_labels_, outcome_name_, treatment_names_, outcome_levels_,
                          treatment_levels_, n_lags_, window_begin_ + begin, window_begin_ + end);
}

RegressionSample build_design(const BalancedPanel& panel, const std::string& outcome,
                              const std::vector<std::string>& treatments, int n_lags) {
  if (n_lags < 0) throw Error(ErrorCode::InvalidArgument, "number of lags must be non-negative");
  if (treatments.empty() && n_lags == 0) throw Error(ErrorCode::InvalidArgument, "model has no slope regressors");
  const Index T = panel.num_periods();
  if (T <= n_lags) {
    throw Error(ErrorCode::TooFewPeriods, std::to_string(T) + " periods cannot support " + std::to_string(n_lags) +
                                              " lags");
  }
  std::vector<Eigen::MatrixXd> d;
  for (const auto& name : treatments) {
    if (name == outcome) throw Error(ErrorCode::InvalidArgument, "treatment equals outcome");
    d.push_back(panel.series(name));
  }
  return RegressionSample(panel.units(), panel.periods(), outcome, treatments, panel.series(outcome), std::move(d),
                          n_lags, n_lags, T);
}

namespace {

struct HalfBounds {
  Index a_end;    // part a = [0, a_end)
  Index b_begin;  // part b = [b_begin, K)
};

// 0-based version of {1..ceil(K/2)} and {floor(K/2)..K}.
HalfBounds half_bounds(Index K, SplitConvention convention) {
  const Index ceil_half = (K + 1) / 2;
  const Index floor_half = K / 2;
  if (convention == SplitConvention::paper) return {ceil_half, floor_half - 1};
  return {ceil_half, ceil_half};
}

std::string range_text(const std::vector<Index>& members) {
  // 1-based, as a closed range when contiguous
  if (members.empty()) return "{}";
  return std::to_string(members.front() + 1) + ".." + std::to_string(members.back() + 1);
}

}  // namespace

SplitPartition time_split(const RegressionSample& sample, SplitConvention convention) {
  const Index T = sample.num_periods();
  if (T < 4) {
    throw Error(ErrorCode::TooFewPeriodsForSplit, "time split needs at least 4 effective periods, have " +
                                                      std::to_string(T));
  }
  const auto [a_end, b_begin] = half_bounds(T, convention);
  SplitPartition p;
  p.scheme = SplitScheme::time;
  for (Index t = 0; t < a_end; ++t) p.members_a.push_back(t);
  for (Index t = b_begin; t < T; ++t) p.members_b.push_back(t);
  for (Index i = 0; i < sample.num_units(); ++i) {
    for (Index t : p.members_a) p.part_a.push_back(sample.row_of(i, t));
    for (Index t : p.members_b) p.part_b.push_back(sample.row_of(i, t));
  }
  p.descriptor = "time: periods " + range_text(p.members_a) + " | " + range_text(p.members_b) + " of " +
                 std::to_string(T);
  return p;
}

SplitPartition cross_split(const RegressionSample& sample, std::span<const Index> permutation,
                           SplitConvention convention) {
  const Index N = sample.num_units();
  if (N < 4) throw Error(ErrorCode::TooFewUnits, "cross-section split needs at least 4 units, have " +
                                                     std::to_string(N));
  if (static_cast<Index>(permutation.size()) != N) {
    throw Error(ErrorCode::InvalidPermutation, "permutation length differs from the number of units");
  }
  std::vector<char> seen(N, 0);
  for (Index i : permutation) {
    if (i < 0 || i >= N || seen[i]) throw Error(ErrorCode::InvalidPermutation, "not a permutation of the units");
    seen[i] = 1;
  }
  const auto [a_end, b_begin] = half_bounds(N, convention);
  SplitPartition p;
  p.scheme = SplitScheme::cross_section;
  p.members_a.assign(permutation.begin(), permutation.begin() + a_end);
  p.members_b.assign(permutation.begin() + b_begin, permutation.end());
  const Index T = sample.num_periods();
  for (Index i : p.members_a)
    for (Index t = 0; t < T; ++t) p.part_a.push_back(sample.row_of(i, t));
  for (Index i : p.members_b)
    for (Index t = 0; t < T; ++t) p.part_b.push_back(sample.row_of(i, t));
  p.descriptor = "cross-section: ordered positions 1.." + std::to_string(a_end) + " | " +
                 std::to_string(b_begin + 1) + ".." + std::to_string(N) + " of " + std::to_string(N);
  return p;
}

RegressionSample split_part(const RegressionSample& sample, const SplitPartition& partition, int part) {
  const auto& members = part == 0 ? partition.members_a : partition.members_b;
  if (partition.scheme == SplitScheme::time) return sample.restrict_periods(members.front(), members.back() + 1);
  return sample.select_units(members, false);
}

}  // namespace panelkit
