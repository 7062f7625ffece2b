#include "panelkit/ab_gmm.hpp"

#include "panelkit/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>

namespace panelkit {

namespace {

constexpr double kPinvTolerance = 1e-10;

std::vector<Index> equation_periods_of(const RegressionSample& sample) {
  if (sample.num_periods() < 2) {
    throw Error(ErrorCode::TooFewPeriods, "differencing needs at least two effective periods");
  }
  std::vector<Index> periods;
  for (Index t = sample.window_begin() + 1; t < sample.window_end(); ++t) periods.push_back(t);
  return periods;
}

}  // namespace

Eigen::MatrixXd InstrumentSet::unit_matrix(Index unit) const {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(num_equations(), m());
  for (Index c = 0; c < m(); ++c) z(columns[c].equation, c) = values(c, unit);
  return z;
}

InstrumentSet build_instruments(const RegressionSample& sample, std::optional<int> lag_cap) {
  if (lag_cap && *lag_cap < 1) throw Error(ErrorCode::InvalidArgument, "lag cap must be positive");
  InstrumentSet set;
  set.lag_cap = lag_cap;
  set.equation_periods = equation_periods_of(sample);

  Index gmm_columns = 0;
  for (Index e = 0; e < set.num_equations(); ++e) {
    const Index t = set.equation_periods[e];
    for (Index k = 0; k < sample.d_alpha(); ++k) {
      const Index first = lag_cap ? std::max<Index>(0, t - *lag_cap) : 0;
      for (Index s = first; s <= t - 1; ++s) {
        set.columns.push_back({InstrumentColumn::Kind::treatment, k, s, e});
        ++gmm_columns;
      }
    }
    if (sample.n_lags() > 0) {
      const Index first = lag_cap ? std::max<Index>(0, t - 1 - *lag_cap) : 0;
      for (Index s = first; s <= t - 2; ++s) {
        set.columns.push_back({InstrumentColumn::Kind::outcome, 0, s, e});
        ++gmm_columns;
      }
    }
    set.columns.push_back({InstrumentColumn::Kind::time_dummy, 0, 0, e});
  }
  if (gmm_columns == 0) throw Error(ErrorCode::NoValidInstruments, "no predetermined levels available as instruments");

  const Index N = sample.num_units();
  set.values.resize(set.m(), N);
  for (Index c = 0; c < set.m(); ++c) {
    const auto& col = set.columns[c];
    switch (col.kind) {
      case InstrumentColumn::Kind::treatment:
        set.values.row(c) = sample.treatment_levels()[col.variable].col(col.source_period).transpose();
        break;
      case InstrumentColumn::Kind::outcome:
        set.values.row(c) = sample.outcome_levels().col(col.source_period).transpose();
        break;
      case InstrumentColumn::Kind::time_dummy:
        set.values.row(c).setOnes();
        break;
    }
  }
  return set;
}

DifferencedData difference_sample(const RegressionSample& sample) {
  const auto eq_periods = equation_periods_of(sample);
  const Index N = sample.num_units();
  const Index E = static_cast<Index>(eq_periods.size());
  const Index da = sample.d_alpha();
  const int L = sample.n_lags();
  const auto& Y = sample.outcome_levels();

  DifferencedData d;
  d.num_equations = E;
  d.x = Eigen::MatrixXd::Zero(N * E, da + L + E);
  d.y.resize(N * E);
  for (Index i = 0; i < N; ++i) {
    for (Index e = 0; e < E; ++e) {
      const Index t = eq_periods[e];
      const Index r = i * E + e;
      d.y(r) = Y(i, t) - Y(i, t - 1);
      for (Index k = 0; k < da; ++k) {
        const auto& D = sample.treatment_levels()[k];
        d.x(r, k) = D(i, t) - D(i, t - 1);
      }
      for (int j = 1; j <= L; ++j) d.x(r, da + j - 1) = Y(i, t - j) - Y(i, t - j - 1);
      d.x(r, da + L + e) = 1.0;
    }
  }
  return d;
}

Eigen::MatrixXd difference_noise_band(Index num_equations) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(num_equations, num_equations);
  for (Index e = 0; e < num_equations; ++e) {
    h(e, e) = 2.0;
    if (e + 1 < num_equations) {
      h(e, e + 1) = -1.0;
      h(e + 1, e) = -1.0;
    }
  }
  return h;
}

Eigen::MatrixXd one_step_moment_matrix(const InstrumentSet& instruments) {
  const Index m = instruments.m();
  // (Z_i' H Z_i)(c, c') = H(eq c, eq c') z_i(c) z_i(c')
  Eigen::MatrixXd a(m, m);
  a.triangularView<Eigen::Lower>() = instruments.values * instruments.values.transpose();
  for (Index c2 = 0; c2 < m; ++c2) {
    const Index e2 = instruments.columns[c2].equation;
    for (Index c1 = c2; c1 < m; ++c1) {
      const Index gap = instruments.columns[c1].equation - e2;
      const double h = gap == 0 ? 2.0 : (gap == 1 || gap == -1 ? -1.0 : 0.0);
      a(c1, c2) *= h;
      a(c2, c1) = a(c1, c2);
    }
  }
  return a;
}

GmmWeight one_step_weight(const InstrumentSet& instruments) {
  const Eigen::MatrixXd a = one_step_moment_matrix(instruments);
  const Index m = a.rows();
  const double a_norm = a.norm();
  if (!(a_norm > 0.0)) throw Error(ErrorCode::ZeroWeightMatrix, "instrument moment matrix is zero");

  GmmWeight w;
  // Fast path: lambda_max <= ||A||_F and 1/lambda_min <= ||A^{-1}||_F, so a small
  // product certifies that no eigenvalue falls under the pseudo-inverse threshold.
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) {
    w.matrix = llt.solve(Eigen::MatrixXd::Identity(m, m));
    if (w.matrix.allFinite() && w.matrix.norm() * a_norm * kPinvTolerance < 1.0) {
      w.matrix = 0.5 * (w.matrix + w.matrix.transpose()).eval();
      w.rank = m;
      return w;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double cut = kPinvTolerance * lambda.maxCoeff();
  if (!(lambda.maxCoeff() > 0.0)) throw Error(ErrorCode::ZeroWeightMatrix, "instrument moment matrix is not positive");
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(m);
  for (Index k = 0; k < m; ++k) {
    if (lambda(k) > cut) {
      inv(k) = 1.0 / lambda(k);
      ++w.rank;
    }
  }
  w.matrix = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  w.pseudo_inverse = w.rank < m;
  return w;
}

namespace {

// Z'X for block-diagonal Z: row c accumulates z_i(c) * X_i(eq c, :).
Eigen::MatrixXd instruments_times(const InstrumentSet& instruments, const Eigen::MatrixXd& x) {
  const Index E = instruments.num_equations();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(instruments.m(), x.cols());
  for (Index i = 0; i < instruments.num_units(); ++i) {
    for (Index c = 0; c < instruments.m(); ++c) {
      const double z = instruments.values(c, i);
      if (z != 0.0) out.row(c).noalias() += z * x.row(i * E + instruments.columns[c].equation);
    }
  }
  return out;
}

}  // namespace

ABFit fit_ab(const RegressionSample& sample, const InstrumentSet& instruments, const GmmWeight& weight) {
  const DifferencedData d = difference_sample(sample);
  if (d.num_equations != instruments.num_equations() || sample.num_units() != instruments.num_units()) {
    throw Error(ErrorCode::InvalidArgument, "instrument set was built for a different sample");
  }
  const Index m = instruments.m();
  const Index p = d.x.cols();
  if (m < p) {
    throw Error(ErrorCode::OrderConditionFailed, std::to_string(m) + " moment conditions for " + std::to_string(p) +
                                                     " coefficients");
  }

  ABFit fit;
  fit.zx = instruments_times(instruments, d.x);
  const Eigen::VectorXd zy = instruments_times(instruments, d.y);
  const Eigen::MatrixXd wzx = weight.matrix * fit.zx;
  Eigen::MatrixXd gram = fit.zx.transpose() * wzx;
  gram = 0.5 * (gram + gram.transpose()).eval();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(p - 1) < 1e-12 * sv(0)) {
    throw Error(ErrorCode::SingularGMMGram, "X'Z W Z'X is singular; coefficients are not identified");
  }
  fit.coefficients = gram.ldlt().solve(wzx.transpose() * zy);

  const Index E = d.num_equations;
  const Eigen::VectorXd e = d.y - d.x * fit.coefficients;
  fit.residuals = Eigen::Map<const Eigen::MatrixXd>(e.data(), E, sample.num_units());
  fit.num_slopes = sample.num_slopes();
  fit.alpha = fit.coefficients.head(sample.d_alpha());
  fit.beta = fit.coefficients.segment(sample.d_alpha(), sample.n_lags());
  fit.time_effects = fit.coefficients.tail(E);
  fit.n = d.x.rows();
  fit.m = m;
  fit.p = p;
  fit.pseudo_inverse_weight = weight.pseudo_inverse;
  return fit;
}

ABFit fit_ab(const RegressionSample& sample, const AbOptions& options) {
  const InstrumentSet z = build_instruments(sample, options.lag_cap);
  return fit_ab(sample, z, one_step_weight(z));
}

Eigen::MatrixXd ab_cluster_cov_full(const ABFit& fit, const InstrumentSet& instruments, const GmmWeight& weight) {
  const Index N = instruments.num_units();
  if (N < 2) throw Error(ErrorCode::SingleCluster, "cluster covariance needs at least two units");
  const Eigen::MatrixXd wzx = weight.matrix * fit.zx;
  Eigen::MatrixXd gram = fit.zx.transpose() * wzx;
  gram = 0.5 * (gram + gram.transpose()).eval();
  // A = gram^{-1} (W Z'X)'
  const Eigen::MatrixXd a = gram.ldlt().solve(wzx.transpose());

  // Per-unit scores Z_i' e_i
  Eigen::MatrixXd scores(instruments.m(), N);
  for (Index i = 0; i < N; ++i) {
    for (Index c = 0; c < instruments.m(); ++c) {
      scores(c, i) = instruments.values(c, i) * fit.residuals(instruments.columns[c].equation, i);
    }
  }
  const Eigen::MatrixXd s = a * scores;
  Eigen::MatrixXd cov = s * s.transpose();
  return 0.5 * (cov + cov.transpose());
}

CovarianceEstimate ab_cluster_cov(const ABFit& fit, const InstrumentSet& instruments, const GmmWeight& weight) {
  CovarianceEstimate cov;
  const Index k = fit.num_slopes;
  cov.matrix = ab_cluster_cov_full(fit, instruments, weight).topLeftCorner(k, k);
  cov.source = CovarianceEstimate::Source::analytic;
  return cov;
}

Eigen::VectorXd ab_moments(const RegressionSample& sample, const InstrumentSet& instruments,
                           const Eigen::VectorXd& coefficients) {
  const DifferencedData d = difference_sample(sample);
  const Eigen::VectorXd e = d.y - d.x * coefficients;
  return instruments_times(instruments, e) / static_cast<double>(d.x.rows());
}

}  // namespace panelkit
