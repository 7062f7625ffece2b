#pragma once

#include "panelkit/panel.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace panelkit {

// Estimation-ready rows of the dynamic model
//   Y_it = a_i + b_t + D_it' alpha + sum_j beta_j Y_{i,t-j} + e_it
// over an effective window of periods. Rows are unit-major: row i*T_eff + t is
// unit i at effective period t. The full level histories are retained so that
// lags inside any sub-window and the difference-GMM instruments see the
// original data rather than a re-truncated copy.
class RegressionSample {
 public:
  RegressionSample(std::vector<std::string> unit_ids, std::vector<int> period_labels, std::string outcome_name,
                   std::vector<std::string> treatment_names, Eigen::MatrixXd outcome_levels,
                   std::vector<Eigen::MatrixXd> treatment_levels, int n_lags, Index window_begin, Index window_end);

  Index num_units() const { return outcome_levels_.rows(); }
  // Effective periods (those with rows).
  Index num_periods() const { return window_end_ - window_begin_; }
  Index n() const { return num_units() * num_periods(); }
  Index d_alpha() const { return static_cast<Index>(treatment_names_.size()); }
  int n_lags() const { return n_lags_; }
  // Slopes (alpha, beta).
  Index num_slopes() const { return d_alpha() + n_lags_; }
  // Slopes + unit dummies + time dummies with the first retained one dropped.
  Index num_params() const { return num_slopes() + num_units() + num_periods() - 1; }

  const Eigen::VectorXd& outcome() const { return outcome_; }
  // n x (d_alpha + L): treatments first, then outcome lags 1..L.
  const Eigen::MatrixXd& predetermined() const { return predetermined_; }
  auto treatment_cols() const { return predetermined_.leftCols(d_alpha()); }
  auto lag_cols() const { return predetermined_.rightCols(n_lags_); }

  Index row_unit(Index row) const { return row / num_periods(); }
  Index row_period(Index row) const { return row % num_periods(); }
  Index row_of(Index unit, Index period) const { return unit * num_periods() + period; }

  const std::vector<std::string>& unit_ids() const { return unit_ids_; }
  // Labels of all panel periods (including initial conditions).
  const std::vector<int>& period_labels() const { return period_labels_; }
  // Position of the effective window inside the full period range, [begin, end).
  Index window_begin() const { return window_begin_; }
  Index window_end() const { return window_end_; }

  const std::string& outcome_name() const { return outcome_name_; }
  const std::vector<std::string>& treatment_names() const { return treatment_names_; }
  std::vector<std::string> slope_names() const;

  // N x T_all level histories.
  const Eigen::MatrixXd& outcome_levels() const { return outcome_levels_; }
  const std::vector<Eigen::MatrixXd>& treatment_levels() const { return treatment_levels_; }

  // Sub-sample over the given unit positions (repeats allowed). With fresh_ids
  // every selected copy gets its own identifier, hence its own fixed effect.
  RegressionSample select_units(std::span<const Index> positions, bool fresh_ids = false) const;
  // Sub-sample over effective periods [begin, end); lags keep their original values.
  RegressionSample restrict_periods(Index begin, Index end) const;

 private:
  std::vector<std::string> unit_ids_;
  std::vector<int> period_labels_;
  std::string outcome_name_;
  std::vector<std::string> treatment_names_;
  Eigen::MatrixXd outcome_levels_;
  std::vector<Eigen::MatrixXd> treatment_levels_;
  int n_lags_;
  Index window_begin_;
  Index window_end_;

  Eigen::VectorXd outcome_;
  Eigen::MatrixXd predetermined_;
};

// Effective periods are t = L+1..T; n = N (T - L).
RegressionSample build_design(const BalancedPanel& panel, const std::string& outcome,
                              const std::vector<std::string>& treatments, int n_lags);

enum class SplitScheme { time, cross_section };

// `paper`: halves {1..ceil(K/2)} and {floor(K/2)..K}; `nonoverlap`: second half
// starts at ceil(K/2)+1.
enum class SplitConvention { paper, nonoverlap };

struct SplitPartition {
  SplitScheme scheme = SplitScheme::time;
  // Row indices into the source sample.
  std::vector<Index> part_a;
  std::vector<Index> part_b;
  // Effective periods (time scheme) or unit positions (cross-section scheme) of each part.
  std::vector<Index> members_a;
  std::vector<Index> members_b;
  std::string descriptor;
};

SplitPartition time_split(const RegressionSample& sample, SplitConvention convention = SplitConvention::paper);
SplitPartition cross_split(const RegressionSample& sample, std::span<const Index> permutation,
                           SplitConvention convention = SplitConvention::paper);

// Materializes one part (0 = a, 1 = b) as its own balanced sample.
RegressionSample split_part(const RegressionSample& sample, const SplitPartition& partition, int part);

}  // namespace panelkit
