#pragma once

#include <Eigen/Dense>

namespace panelkit {

// Covariance of the slope vector (alpha, beta).
struct CovarianceEstimate {
  enum class Source { analytic, bootstrap };

  Eigen::MatrixXd matrix;
  Source source = Source::analytic;

  Eigen::VectorXd standard_errors() const { return matrix.diagonal().cwiseMax(0.0).cwiseSqrt(); }
};

}  // namespace panelkit
