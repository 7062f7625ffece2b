#pragma once

#include "panelkit/estimators.hpp"
#include "panelkit/panel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace panelkit {

enum class NoiseKind { gaussian, student_t };

// Dynamic panel with unit/time effects and a binary, persistent treatment:
//   Y_it = a_i + b_t + alpha D_it + sum_j rho_j Y_{i,t-j} + e_it.
// D_it follows a two-state Markov chain: with probability stay_prob it keeps
// its previous value, otherwise it is redrawn as Bernoulli(logistic(
// logit(treatment_share) + lambda a_i + feedback e_{i,t-1})). D therefore
// correlates with a_i and, with feedback != 0, responds to past shocks
// (predetermined but not strictly exogenous). e_it is independent of
// everything dated before t.
struct DGPConfig {
  Index N = 100;
  // Observed periods, after burn-in.
  Index T = 10;
  bool treatment = true;
  double alpha = 0.0;
  std::vector<double> rho{0.5};
  double sigma_a = 1.0;
  double sigma_b = 0.0;
  double sigma_eps = 1.0;
  double treatment_share = 0.5;
  double stay_prob = 0.8;
  double lambda = 0.0;
  double feedback = 0.0;
  Index burn_in = 100;
  NoiseKind noise = NoiseKind::gaussian;
  // Degrees of freedom for student_t noise (rescaled to unit variance when > 2).
  int noise_df = 5;

  // Throws InvalidConfig naming the offending field.
  void validate() const;
  int n_lags() const { return static_cast<int>(rho.size()); }
};

// Variables "y" and, with a treatment, "d"; units "u00001".., periods 1..T.
BalancedPanel simulate_dgp(const DGPConfig& config, std::uint64_t seed);

// Design matching the DGP: outcome "y", treatment "d", L = rho.size().
RegressionSample simulated_design(const BalancedPanel& panel, const DGPConfig& config);

struct StudyRow {
  std::string estimator;
  std::string parameter;
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
  // Share of nominal 95% analytic intervals covering the truth.
  double coverage = 0.0;
  int failures = 0;
};

struct StudyReport {
  DGPConfig config;
  std::vector<std::string> estimators;
  std::vector<std::string> parameters;
  int replications = 0;
  std::uint64_t seed = 0;
  std::vector<StudyRow> rows;
  // Per estimator: R x k point estimates and analytic SEs; failed replications are NaN rows.
  std::vector<Eigen::MatrixXd> estimates;
  std::vector<Eigen::MatrixXd> standard_errors;

  const StudyRow& row(const std::string& estimator, const std::string& parameter) const;
};

// Replication r simulates with derive_seed(derive_seed(seed, r), 0) and hands
// derive_seed(derive_seed(seed, r), 1) to randomized estimators.
StudyReport mc_study(const DGPConfig& config, const std::vector<EstimatorSpec>& estimators, int replications,
                     std::uint64_t seed, int threads = 1);

std::string study_to_csv(const StudyReport& report);
std::string study_to_json(const StudyReport& report);

}  // namespace panelkit
