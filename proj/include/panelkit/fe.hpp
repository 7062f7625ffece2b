#pragma once

#include "panelkit/covariance.hpp"
#include "panelkit/sample.hpp"

#include <Eigen/Dense>

namespace panelkit {

// Two-way fixed-effects (dummy-variable OLS) fit.
struct FEFit {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  // Unit effects a_i and time effects b_t with b_1 = 0.
  Eigen::VectorXd unit_effects;
  Eigen::VectorXd time_effects;
  Eigen::VectorXd residuals;
  // Predetermined block (treatments, lags) partialled out on the dummies.
  Eigen::MatrixXd dtilde;
  // Raw predetermined block, kept for the bias estimator.
  Eigen::MatrixXd predetermined;
  Index num_units = 0;
  Index num_periods = 0;
  Index num_params = 0;

  Eigen::VectorXd slopes() const;
  Index n() const { return residuals.size(); }
};

FEFit fit_fe(const RegressionSample& sample);

struct ClusterCovOptions {
  // Multiply by G/(G-1) * (n-1)/(n-p).
  bool small_sample_correction = false;
};

// Cluster-robust (by unit) sandwich covariance of (alpha, beta).
CovarianceEstimate fe_cluster_cov(const FEFit& fit, ClusterCovOptions options = {});

// Two-way within transformation of a balanced unit-major column.
Eigen::VectorXd within_transform(const Eigen::VectorXd& column, Index num_units, Index num_periods);

}  // namespace panelkit
