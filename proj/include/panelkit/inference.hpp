#pragma once

#include "panelkit/covariance.hpp"
#include "panelkit/sample.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace panelkit {

// alpha / (1 - sum beta)
double long_run_effect(double alpha, const Eigen::VectorXd& beta);

// d/d(alpha, beta) of the long-run effect.
Eigen::VectorXd long_run_gradient(double alpha, const Eigen::VectorXd& beta);

// Delta-method SE of the long-run effect; `cov` is the joint covariance of (alpha, beta).
double delta_method_lr(double alpha, const Eigen::VectorXd& beta, const Eigen::MatrixXd& cov);

// Joint (alpha_k, beta) block of a slope covariance.
Eigen::MatrixXd treatment_lag_block(const Eigen::MatrixXd& slope_cov, Index treatment, Index d_alpha);

// Quantities of interest from one (re)sample. The seed drives any randomness
// inside the procedure (e.g. random splits).
using BootstrapProcedure = std::function<Eigen::VectorXd(const RegressionSample&, std::uint64_t)>;

struct BootstrapResult {
  // One row per successful replicate, in replicate order.
  Eigen::MatrixXd replicates;
  Eigen::VectorXd standard_errors;
  std::vector<int> failed_replicates;
  int requested = 0;
};

struct BootstrapOptions {
  int replications = 500;
  std::uint64_t seed = 0;
  // 0 = hardware concurrency
  int threads = 1;
};

// Pairs bootstrap over units: draws N units with replacement (each copy its own
// unit effect), reruns the whole procedure, reports across-replicate SDs.
BootstrapResult cluster_bootstrap(const RegressionSample& sample, const BootstrapProcedure& procedure,
                                  const BootstrapOptions& options);

// Unit positions drawn for replicate b.
std::vector<Index> bootstrap_draw(Index num_units, std::uint64_t seed, int replicate);
// Seed handed to the procedure for replicate b.
std::uint64_t bootstrap_procedure_seed(std::uint64_t seed, int replicate);

struct SmallBiasDiagnostic {
  double ratio = 0.0;
  bool debiasing_recommended = false;
  std::string verdict;
};

// (max(p, m))^2 / n, flagged at >= 1.
SmallBiasDiagnostic small_bias_diagnostic(double n, double p, double m);

// Runs f(0..count-1) on `threads` workers. Each index is handled exactly once.
void parallel_for(int count, int threads, const std::function<void(int)>& f);

}  // namespace panelkit
