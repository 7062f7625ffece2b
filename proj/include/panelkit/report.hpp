#pragma once

#include "panelkit/estimators.hpp"
#include "panelkit/inference.hpp"
#include "panelkit/sample.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace panelkit {

struct EstimationRequest {
  std::vector<EstimatorSpec> estimators;
  int bootstrap_replications = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

// One estimator column. Missing quantities (no bootstrap, undefined long run) are NaN.
struct ColumnReport {
  std::string label;
  std::vector<std::string> names;
  Eigen::VectorXd estimate;
  Eigen::VectorXd se_analytic;
  Eigen::VectorXd se_bootstrap;
  // One entry per treatment (empty without lags).
  Eigen::VectorXd long_run;
  Eigen::VectorXd long_run_se_analytic;
  Eigen::VectorXd long_run_se_bootstrap;
  Index n = 0;
  Index p = 0;
  Index m = 0;
  SmallBiasDiagnostic diagnostic;
  int bootstrap_failures = 0;
  bool pseudo_inverse_weight = false;
  std::vector<std::string> partitions;
};

struct EstimationReport {
  std::string outcome;
  std::vector<std::string> treatments;
  Index units = 0;
  Index periods = 0;
  int lags = 0;
  std::uint64_t seed = 0;
  int bootstrap_replications = 0;
  std::vector<ColumnReport> columns;
};

EstimationReport run_estimation(const RegressionSample& sample, const EstimationRequest& request);

// Coefficient, (analytic SE), [bootstrap SE] at two decimals. With scale100 the
// treatment and long-run rows are multiplied by 100.
std::string render_table(const EstimationReport& report, bool scale100);

// Full-precision JSON; report_from_json(report_to_json(r)) reproduces r.
std::string report_to_json(const EstimationReport& report);
EstimationReport report_from_json(std::string_view text);

}  // namespace panelkit
