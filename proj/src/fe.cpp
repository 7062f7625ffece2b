#include "panelkit/fe.hpp"

#include "panelkit/error.hpp"

#include <Eigen/SVD>

namespace panelkit {

namespace {

constexpr double kRankTolerance = 1e-10;

bool full_column_rank(const Eigen::MatrixXd& x) {
  if (x.cols() == 0) return false;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const auto& sv = svd.singularValues();
  return sv(0) > 0.0 && sv(sv.size() - 1) >= kRankTolerance * sv(0);
}

}  // namespace

Eigen::VectorXd FEFit::slopes() const {
  Eigen::VectorXd s(alpha.size() + beta.size());
  s << alpha, beta;
  return s;
}

Eigen::VectorXd within_transform(const Eigen::VectorXd& column, Index num_units, Index num_periods) {
  Eigen::Map<const Eigen::MatrixXd> m(column.data(), num_periods, num_units);  // (t, i)
  const Eigen::VectorXd period_mean = m.rowwise().mean();
  const Eigen::RowVectorXd unit_mean = m.colwise().mean();
  const double grand = m.mean();
  Eigen::VectorXd out(column.size());
  Eigen::Map<Eigen::MatrixXd> o(out.data(), num_periods, num_units);
  o = m;
  o.colwise() -= period_mean;
  o.rowwise() -= unit_mean;
  o.array() += grand;
  return out;
}

FEFit fit_fe(const RegressionSample& sample) {
  const Index N = sample.num_units();
  const Index T = sample.num_periods();
  const Index k = sample.num_slopes();

  Eigen::MatrixXd xd(sample.n(), k);
  for (Index c = 0; c < k; ++c) xd.col(c) = within_transform(sample.predetermined().col(c), N, T);
  const Eigen::VectorXd yd = within_transform(sample.outcome(), N, T);

  if (!full_column_rank(xd)) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xd);
    qr.setThreshold(kRankTolerance);
    const auto names = sample.slope_names();
    std::string cols;
    for (Index c = qr.rank(); c < k; ++c) {
      if (!cols.empty()) cols += ", ";
      cols += names[qr.colsPermutation().indices()(c)];
    }
    if (cols.empty() && k > 0) cols = names[qr.colsPermutation().indices()(k - 1)];
    throw Error(ErrorCode::RankDeficientDesign,
                "slope columns collinear with the unit/time dummies or each other: " + cols);
  }

  const Eigen::VectorXd coef = xd.colPivHouseholderQr().solve(yd);

  FEFit fit;
  fit.alpha = coef.head(sample.d_alpha());
  fit.beta = coef.tail(sample.n_lags());
  fit.residuals = yd - xd * coef;
  fit.dtilde = std::move(xd);
  fit.predetermined = sample.predetermined();
  fit.num_units = N;
  fit.num_periods = T;
  fit.num_params = sample.num_params();

  // Dummy part of the fit is exactly additive: a_i + b_t.
  Eigen::VectorXd dummy_part = sample.outcome() - sample.predetermined() * coef - fit.residuals;
  Eigen::Map<const Eigen::MatrixXd> f(dummy_part.data(), T, N);
  fit.unit_effects = f.row(0).transpose();
  fit.time_effects = (f.rowwise() - f.row(0)).rowwise().mean();
  return fit;
}

CovarianceEstimate fe_cluster_cov(const FEFit& fit, ClusterCovOptions options) {
  const Index G = fit.num_units;
  const Index T = fit.num_periods;
  if (G < 2) throw Error(ErrorCode::SingleCluster, "cluster covariance needs at least two units");
  const Index k = fit.dtilde.cols();

  const Eigen::MatrixXd gram = fit.dtilde.transpose() * fit.dtilde;
  if (!full_column_rank(fit.dtilde)) throw Error(ErrorCode::SingularBread, "partialled-out Gram matrix is singular");
  const Eigen::MatrixXd bread = gram.ldlt().solve(Eigen::MatrixXd::Identity(k, k));

  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (Index g = 0; g < G; ++g) {
    const Eigen::VectorXd score =
        fit.dtilde.middleRows(g * T, T).transpose() * fit.residuals.segment(g * T, T);
    meat.noalias() += score * score.transpose();
  }

  CovarianceEstimate cov;
  cov.matrix = bread * meat * bread;
  cov.matrix = 0.5 * (cov.matrix + cov.matrix.transpose()).eval();
  if (options.small_sample_correction) {
    const double n = static_cast<double>(fit.n());
    const double p = static_cast<double>(fit.num_params);
    cov.matrix *= static_cast<double>(G) / static_cast<double>(G - 1) * (n - 1.0) / (n - p);
  }
  cov.source = CovarianceEstimate::Source::analytic;
  return cov;
}

}  // namespace panelkit
