#pragma once

#include "panelkit/covariance.hpp"
#include "panelkit/sample.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace panelkit {

struct InstrumentColumn {
  enum class Kind { treatment, outcome, time_dummy };

  Kind kind = Kind::treatment;
  // Treatment index (treatment columns only).
  Index variable = 0;
  // Panel period of the instrumenting level (not used for dummies).
  Index source_period = 0;
  // Differenced equation the column belongs to.
  Index equation = 0;
};

// Block-diagonal difference-GMM instruments. Every column belongs to exactly
// one differenced equation, so unit i's instrument matrix Z_i (equations x m)
// has at most one non-zero per column: Z_i(columns[c].equation, c) = values(c, i).
struct InstrumentSet {
  std::vector<InstrumentColumn> columns;
  // Panel period (position in the level history) of each differenced equation.
  std::vector<Index> equation_periods;
  // m x N
  Eigen::MatrixXd values;
  std::optional<int> lag_cap;

  Index m() const { return static_cast<Index>(columns.size()); }
  Index num_equations() const { return static_cast<Index>(equation_periods.size()); }
  Index num_units() const { return values.cols(); }
  Eigen::MatrixXd unit_matrix(Index unit) const;
};

// For the equation at period t: treatment levels dated <= t-1 and outcome
// levels dated <= t-2 (when the model has outcome lags), each (variable, period)
// once, plus the equation's time dummy. lag_cap keeps only the most recent
// lag_cap admissible levels per variable.
InstrumentSet build_instruments(const RegressionSample& sample, std::optional<int> lag_cap = std::nullopt);

// First-differenced data, unit-major with one row per (unit, equation).
// Columns: d_alpha treatment differences, L lagged-outcome differences, one dummy per equation.
struct DifferencedData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Index num_equations = 0;
};

DifferencedData difference_sample(const RegressionSample& sample);

// Tridiagonal covariance of differenced white noise: 2 on the diagonal, -1 off it.
Eigen::MatrixXd difference_noise_band(Index num_equations);

// sum_i Z_i' H Z_i
Eigen::MatrixXd one_step_moment_matrix(const InstrumentSet& instruments);

struct GmmWeight {
  Eigen::MatrixXd matrix;
  // Set when sum Z'HZ was rank-deficient and a spectral pseudo-inverse was used.
  bool pseudo_inverse = false;
  Index rank = 0;
};

// W = [sum_i Z_i' H Z_i]^{-1}, pseudo-inverse below 1e-10 * largest eigenvalue.
GmmWeight one_step_weight(const InstrumentSet& instruments);

struct ABFit {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  Eigen::VectorXd time_effects;
  // All coefficients in DifferencedData column order.
  Eigen::VectorXd coefficients;
  // Differenced residuals, equations x N.
  Eigen::MatrixXd residuals;
  Index n = 0;
  Index m = 0;
  Index p = 0;
  Index num_slopes = 0;
  bool pseudo_inverse_weight = false;
  // Z'X (m x p), kept for the covariance.
  Eigen::MatrixXd zx;

  Eigen::VectorXd slopes() const { return coefficients.head(num_slopes); }
};

// Linear GMM: (X'Z W Z'X)^{-1} X'Z W Z'y on the differenced data.
ABFit fit_ab(const RegressionSample& sample, const InstrumentSet& instruments, const GmmWeight& weight);

struct AbOptions {
  std::optional<int> lag_cap;
};

// Instruments, one-step weight and fit in one call.
ABFit fit_ab(const RegressionSample& sample, const AbOptions& options = {});

// A [sum_i Z_i' e_i e_i' Z_i] A' with A = (X'ZWZ'X)^{-1} X'ZW, all p coefficients.
Eigen::MatrixXd ab_cluster_cov_full(const ABFit& fit, const InstrumentSet& instruments, const GmmWeight& weight);
// Slope block (alpha, beta) of the above.
CovarianceEstimate ab_cluster_cov(const ABFit& fit, const InstrumentSet& instruments, const GmmWeight& weight);

// (1/n) sum_i Z_i' (dy_i - X_i theta)
Eigen::VectorXd ab_moments(const RegressionSample& sample, const InstrumentSet& instruments,
                           const Eigen::VectorXd& coefficients);

}  // namespace panelkit
