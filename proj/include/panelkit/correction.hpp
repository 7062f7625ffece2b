#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace panelkit {

struct CorrectionReport {
  enum class Method { analytic, split };

  Method method = Method::analytic;
  Eigen::VectorXd raw_estimate;
  Eigen::VectorXd corrected_estimate;
  // analytic only: estimated first-order bias b/n.
  Eigen::VectorXd bias_estimate;
  int trim = 0;
  // split only: one pair of half-sample estimates per split.
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> half_estimates;
  std::vector<std::string> partitions;
};

// 2 * raw - (a + b) / 2
inline Eigen::VectorXd split_correct(const Eigen::VectorXd& raw, const Eigen::VectorXd& half_a,
                                     const Eigen::VectorXd& half_b) {
  return 2.0 * raw - 0.5 * (half_a + half_b);
}

}  // namespace panelkit
