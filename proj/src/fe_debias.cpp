#include "panelkit/fe_debias.hpp"

#include "panelkit/error.hpp"

#include <Eigen/SVD>

namespace panelkit {

Eigen::VectorXd nickell_bias(const FEFit& fit, int trim) {
  const Index N = fit.num_units;
  const Index T = fit.num_periods;
  if (trim < 1 || trim >= T) {
    throw Error(ErrorCode::InvalidTrim, "trim M=" + std::to_string(trim) + " must satisfy 1 <= M < T=" +
                                            std::to_string(T));
  }
  const Index k = fit.dtilde.cols();
  const double n = static_cast<double>(N * T);

  Eigen::VectorXd cross = Eigen::VectorXd::Zero(k);
  for (Index i = 0; i < N; ++i) {
    const Index base = i * T;
    for (Index t = 0; t + 1 < T; ++t) {
      const double e = fit.residuals(base + t);
      const Index s_end = std::min<Index>(t + trim, T - 1);
      for (Index s = t + 1; s <= s_end; ++s) {
        cross.noalias() += fit.predetermined.row(base + s).transpose() * (e / static_cast<double>(T - (s - t)));
      }
    }
  }

  const Eigen::MatrixXd h = fit.dtilde.transpose() * fit.dtilde / n;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
  const auto& sv = svd.singularValues();
  if (k == 0 || !(sv(0) > 0.0) || sv(k - 1) < 1e-10 * sv(0)) {
    throw Error(ErrorCode::SingularH, "partialled-out second-moment matrix is singular");
  }
  const Eigen::VectorXd b = -h.ldlt().solve(cross);
  return b / n;
}

CorrectionReport debias_fe_analytic(const FEFit& fit, int trim) {
  CorrectionReport r;
  r.method = CorrectionReport::Method::analytic;
  r.trim = trim;
  r.raw_estimate = fit.slopes();
  r.bias_estimate = nickell_bias(fit, trim);
  r.corrected_estimate = r.raw_estimate - r.bias_estimate;
  return r;
}

CorrectionReport debias_fe_analytic(const RegressionSample& sample, int trim) {
  return debias_fe_analytic(fit_fe(sample), trim);
}

CorrectionReport debias_fe_split(const FEFit& full_fit, const RegressionSample& sample,
                                 SplitConvention convention) {
  const SplitPartition partition = time_split(sample, convention);
  const Eigen::VectorXd half_a = fit_fe(split_part(sample, partition, 0)).slopes();
  const Eigen::VectorXd half_b = fit_fe(split_part(sample, partition, 1)).slopes();

  CorrectionReport r;
  r.method = CorrectionReport::Method::split;
  r.raw_estimate = full_fit.slopes();
  r.corrected_estimate = split_correct(r.raw_estimate, half_a, half_b);
  r.half_estimates.emplace_back(half_a, half_b);
  r.partitions.push_back(partition.descriptor);
  return r;
}

CorrectionReport debias_fe_split(const RegressionSample& sample, SplitConvention convention) {
  return debias_fe_split(fit_fe(sample), sample, convention);
}

}  // namespace panelkit
