#pragma once

#include "panelkit/ab_gmm.hpp"
#include "panelkit/correction.hpp"
#include "panelkit/covariance.hpp"
#include "panelkit/sample.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace panelkit {

enum class EstimatorKind { fe, dfe_a, dfe_ss, ab, dab_ss };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::fe;
  // dfe-a trimming M
  int trim = 4;
  // dab-ss number of random splits K
  int splits = 1;
  SplitConvention convention = SplitConvention::paper;
  std::optional<int> lag_cap;
  bool small_sample_correction = false;

  // Column label, e.g. "FE", "DFE-A", "DAB-SS5".
  std::string label() const;
  bool is_ab() const { return kind == EstimatorKind::ab || kind == EstimatorKind::dab_ss; }
  bool is_debiased() const { return kind != EstimatorKind::fe && kind != EstimatorKind::ab; }
};

// "fe", "dfe-a", "dfe-a:3", "dfe-ss", "ab", "dab-ss", "dab-ss:5"; the suffix
// sets the trim (dfe-a) or the number of splits (dab-ss).
EstimatorSpec parse_estimator(std::string_view text);

struct Estimate {
  EstimatorSpec spec;
  // (alpha, beta), corrected for the debiased estimators.
  Eigen::VectorXd slopes;
  // Analytic clustered covariance of the uncorrected estimator.
  CovarianceEstimate covariance;
  Index n = 0;
  Index p = 0;
  Index m = 0;
  bool pseudo_inverse_weight = false;
  std::optional<CorrectionReport> correction;
};

Estimate run_estimator(const RegressionSample& sample, const EstimatorSpec& spec, std::uint64_t seed);

// Point estimate only, without covariance work.
Eigen::VectorXd estimate_slopes(const RegressionSample& sample, const EstimatorSpec& spec, std::uint64_t seed);

// Slopes followed by one long-run effect per treatment (only when the model has lags).
Eigen::VectorXd with_long_run(const Eigen::VectorXd& slopes, Index d_alpha);

}  // namespace panelkit
