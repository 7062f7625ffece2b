#include "panelkit/estimators.hpp"

#include "panelkit/ab_debias.hpp"
#include "panelkit/error.hpp"
#include "panelkit/fe.hpp"
#include "panelkit/fe_debias.hpp"
#include "panelkit/inference.hpp"

#include <charconv>

namespace panelkit {

std::string EstimatorSpec::label() const {
  switch (kind) {
    case EstimatorKind::fe: return "FE";
    case EstimatorKind::dfe_a: return "DFE-A";
    case EstimatorKind::dfe_ss: return "DFE-SS";
    case EstimatorKind::ab: return "AB";
    case EstimatorKind::dab_ss: return "DAB-SS" + std::to_string(splits);
  }
  return "?";
}

EstimatorSpec parse_estimator(std::string_view text) {
  EstimatorSpec spec;
  std::string_view name = text;
  std::optional<int> arg;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    name = text.substr(0, colon);
    const auto a = text.substr(colon + 1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
    if (ec != std::errc() || ptr != a.data() + a.size() || v < 1) {
      throw Error(ErrorCode::InvalidArgument, "bad estimator argument in '" + std::string(text) + "'");
    }
    arg = v;
  }
  if (name == "fe") {
    spec.kind = EstimatorKind::fe;
  } else if (name == "dfe-a") {
    spec.kind = EstimatorKind::dfe_a;
    if (arg) spec.trim = *arg;
  } else if (name == "dfe-ss") {
    spec.kind = EstimatorKind::dfe_ss;
  } else if (name == "ab") {
    spec.kind = EstimatorKind::ab;
  } else if (name == "dab-ss") {
    spec.kind = EstimatorKind::dab_ss;
    if (arg) spec.splits = *arg;
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "unknown estimator '" + std::string(text) + "' (expected fe, dfe-a, dfe-ss, ab, dab-ss)");
  }
  if (arg && (spec.kind == EstimatorKind::fe || spec.kind == EstimatorKind::dfe_ss || spec.kind == EstimatorKind::ab)) {
    throw Error(ErrorCode::InvalidArgument, "estimator '" + std::string(name) + "' takes no argument");
  }
  return spec;
}

Estimate run_estimator(const RegressionSample& sample, const EstimatorSpec& spec, std::uint64_t seed) {
  Estimate est;
  est.spec = spec;
  if (!spec.is_ab()) {
    const FEFit fit = fit_fe(sample);
    est.covariance = fe_cluster_cov(fit, {spec.small_sample_correction});
    est.n = fit.n();
    est.p = fit.num_params;
    est.m = 0;
    switch (spec.kind) {
      case EstimatorKind::dfe_a:
        est.correction = debias_fe_analytic(fit, spec.trim);
        break;
      case EstimatorKind::dfe_ss:
        est.correction = debias_fe_split(fit, sample, spec.convention);
        break;
      default:
        break;
    }
    est.slopes = est.correction ? est.correction->corrected_estimate : fit.slopes();
    return est;
  }

  const AbOptions options{spec.lag_cap};
  const InstrumentSet z = build_instruments(sample, options.lag_cap);
  const GmmWeight w = one_step_weight(z);
  const ABFit fit = fit_ab(sample, z, w);
  est.covariance = ab_cluster_cov(fit, z, w);
  est.n = fit.n;
  est.p = fit.p;
  est.m = fit.m;
  est.pseudo_inverse_weight = fit.pseudo_inverse_weight;
  if (spec.kind == EstimatorKind::dab_ss) {
    const auto seeds = split_seeds(seed, spec.splits);
    est.correction = debias_ab_split_seeded(fit.slopes(), sample, seeds, options, spec.convention);
  }
  est.slopes = est.correction ? est.correction->corrected_estimate : fit.slopes();
  return est;
}

Eigen::VectorXd estimate_slopes(const RegressionSample& sample, const EstimatorSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case EstimatorKind::fe:
      return fit_fe(sample).slopes();
    case EstimatorKind::dfe_a:
      return debias_fe_analytic(fit_fe(sample), spec.trim).corrected_estimate;
    case EstimatorKind::dfe_ss:
      return debias_fe_split(sample, spec.convention).corrected_estimate;
    case EstimatorKind::ab:
      return fit_ab(sample, AbOptions{spec.lag_cap}).slopes();
    case EstimatorKind::dab_ss: {
      const AbOptions options{spec.lag_cap};
      const auto seeds = split_seeds(seed, spec.splits);
      return debias_ab_split_seeded(fit_ab(sample, options).slopes(), sample, seeds, options, spec.convention)
          .corrected_estimate;
    }
  }
  return {};
}

Eigen::VectorXd with_long_run(const Eigen::VectorXd& slopes, Index d_alpha) {
  const Index L = slopes.size() - d_alpha;
  if (L == 0) return slopes;
  Eigen::VectorXd out(slopes.size() + d_alpha);
  out.head(slopes.size()) = slopes;
  const Eigen::VectorXd beta = slopes.tail(L);
  for (Index k = 0; k < d_alpha; ++k) out(slopes.size() + k) = long_run_effect(slopes(k), beta);
  return out;
}

}  // namespace panelkit
