#pragma once

#include "panelkit/ab_gmm.hpp"
#include "panelkit/error.hpp"
#include "panelkit/panel.hpp"
#include "panelkit/rng.hpp"
#include "panelkit/sample.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace testing {

using panelkit::Index;

inline std::vector<std::string> unit_names(Index n) {
  std::vector<std::string> out;
  for (Index i = 0; i < n; ++i) {
    std::string s = std::to_string(i);
    out.push_back("u" + std::string(4 - s.size(), '0') + s);
  }
  return out;
}

inline std::vector<int> period_range(Index t) {
  std::vector<int> out;
  for (Index s = 0; s < t; ++s) out.push_back(static_cast<int>(s + 1));
  return out;
}

// Panel of independent standard normal draws: "y" and treatments "d1".."dk".
inline panelkit::BalancedPanel random_panel(Index n, Index t, int treatments, std::uint64_t seed) {
  panelkit::Rng rng(seed);
  std::map<std::string, Eigen::MatrixXd> series;
  auto draw = [&] {
    Eigen::MatrixXd m(n, t);
    for (Index i = 0; i < n; ++i)
      for (Index s = 0; s < t; ++s) m(i, s) = rng.normal();
    return m;
  };
  series["y"] = draw();
  for (int k = 1; k <= treatments; ++k) series["d" + std::to_string(k)] = draw();
  return panelkit::BalancedPanel(unit_names(n), period_range(t), series);
}

inline std::vector<std::string> treatment_names(int k) {
  std::vector<std::string> out;
  for (int j = 1; j <= k; ++j) out.push_back("d" + std::to_string(j));
  return out;
}

// Full dummy-variable design: slopes, N unit dummies, time dummies for periods 2..T_eff.
inline Eigen::MatrixXd dummy_design(const panelkit::RegressionSample& s) {
  const Index k = s.num_slopes(), N = s.num_units(), T = s.num_periods();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(s.n(), k + N + T - 1);
  for (Index i = 0; i < N; ++i) {
    for (Index t = 0; t < T; ++t) {
      const Index r = i * T + t;
      x.row(r).head(k) = s.predetermined().row(r);
      x(r, k + i) = 1.0;
      if (t > 0) x(r, k + N + t - 1) = 1.0;
    }
  }
  return x;
}

// Brute-force OLS via the normal equations and a full-pivot LU.
inline Eigen::VectorXd dense_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd xtx = x.transpose() * x;
  Eigen::VectorXd xty = x.transpose() * y;
  return xtx.fullPivLu().solve(xty);
}

inline Eigen::VectorXd dense_fe_slopes(const panelkit::RegressionSample& s) {
  return dense_ols(dummy_design(s), s.outcome()).head(s.num_slopes());
}

// Code of the panelkit::Error thrown by f, or nullopt when f returns normally.
template <class F>
std::optional<panelkit::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const panelkit::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return max_abs(a - b) / std::max(1.0, max_abs(b));
}

inline panelkit::GmmWeight as_weight(const Eigen::MatrixXd& m) {
  panelkit::GmmWeight w;
  w.matrix = m;
  w.rank = m.rows();
  return w;
}

// Exactly identified instruments: one column per coefficient.
inline panelkit::InstrumentSet just_identified(const panelkit::RegressionSample& s) {
  using Kind = panelkit::InstrumentColumn::Kind;
  panelkit::InstrumentSet z;
  for (Index t = s.window_begin() + 1; t < s.window_end(); ++t) z.equation_periods.push_back(t);
  const Index E = z.num_equations();
  // slopes instrumented on the last equation, dummies everywhere
  for (Index k = 0; k < s.d_alpha(); ++k) z.columns.push_back({Kind::treatment, k, z.equation_periods[E - 1] - 1 - k, E - 1});
  for (int j = 0; j < s.n_lags(); ++j) z.columns.push_back({Kind::outcome, 0, z.equation_periods[E - 1] - 2 - j, E - 1});
  for (Index e = 0; e < E; ++e) z.columns.push_back({Kind::time_dummy, 0, 0, e});
  z.values.resize(z.m(), s.num_units());
  for (Index c = 0; c < z.m(); ++c) {
    const auto& col = z.columns[c];
    for (Index i = 0; i < s.num_units(); ++i) {
      z.values(c, i) = col.kind == Kind::treatment ? s.treatment_levels()[col.variable](i, col.source_period)
                       : col.kind == Kind::outcome ? s.outcome_levels()(i, col.source_period)
                                                   : 1.0;
    }
  }
  return z;
}

inline Eigen::MatrixXd random_pd(Index m, panelkit::Rng& rng) {
  Eigen::MatrixXd a(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) a(i, j) = rng.normal();
  return a * a.transpose() + Eigen::MatrixXd::Identity(m, m);
}

}  // namespace testing
