#include "panelkit/simlab.hpp"

#include "panelkit/error.hpp"
#include "panelkit/inference.hpp"
#include "panelkit/rng.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace panelkit {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void require(bool ok, const char* field, const std::string& why) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, std::string(field) + ": " + why);
}

}  // namespace

void DGPConfig::validate() const {
  require(N >= 1, "N", "must be at least 1");
  require(T >= 1, "T", "must be at least 1");
  const double rho_sum = std::accumulate(rho.begin(), rho.end(), 0.0);
  require(std::abs(rho_sum) < 1.0, "rho", "lag coefficients must sum inside (-1, 1)");
  require(treatment || !rho.empty(), "treatment", "model needs a treatment or at least one lag");
  require(std::isfinite(alpha), "alpha", "must be finite");
  require(sigma_a >= 0.0, "sigma_a", "must be non-negative");
  require(sigma_b >= 0.0, "sigma_b", "must be non-negative");
  require(sigma_eps >= 0.0, "sigma_eps", "must be non-negative");
  require(treatment_share > 0.0 && treatment_share < 1.0, "treatment_share", "must lie in (0, 1)");
  require(stay_prob >= 0.0 && stay_prob <= 1.0, "stay_prob", "must lie in [0, 1]");
  require(std::isfinite(lambda), "lambda", "must be finite");
  require(std::isfinite(feedback), "feedback", "must be finite");
  require(burn_in >= 0, "burn_in", "must be non-negative");
  require(noise_df >= 1, "noise_df", "must be at least 1");
}

BalancedPanel simulate_dgp(const DGPConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const Index N = config.N;
  const Index T = config.T;
  const Index L = static_cast<Index>(config.rho.size());
  const double rho_sum = std::accumulate(config.rho.begin(), config.rho.end(), 0.0);
  const double intercept = std::log(config.treatment_share / (1.0 - config.treatment_share));
  const double t_scale =
      config.noise_df > 2 ? std::sqrt((config.noise_df - 2.0) / static_cast<double>(config.noise_df)) : 1.0;

  Eigen::VectorXd b(T);
  for (Index t = 0; t < T; ++t) b(t) = config.sigma_b * rng.normal();

  Eigen::MatrixXd y(N, T);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(N, T);
  std::vector<double> history(L);
  for (Index i = 0; i < N; ++i) {
    const double a = config.sigma_a * rng.normal();
    const double level = intercept + config.lambda * a;
    double d_prev = 0.0;
    if (config.treatment) d_prev = rng.bernoulli(logistic(level)) ? 1.0 : 0.0;
    const double start = (a + config.alpha * (config.treatment ? logistic(level) : 0.0)) / (1.0 - rho_sum);
    std::fill(history.begin(), history.end(), start);
    double e_prev = 0.0;

    for (Index step = 0; step < config.burn_in + T; ++step) {
      const Index t = step - config.burn_in;
      double dt = 0.0;
      if (config.treatment) {
        const bool stay = rng.uniform() < config.stay_prob;
        const double u = rng.uniform();
        dt = stay ? d_prev : (u < logistic(level + config.feedback * e_prev) ? 1.0 : 0.0);
      }
      const double e = config.sigma_eps *
                       (config.noise == NoiseKind::gaussian ? rng.normal() : t_scale * rng.student_t(config.noise_df));
      double yt = a + (t >= 0 ? b(t) : 0.0) + config.alpha * dt + e;
      for (Index j = 0; j < L; ++j) yt += config.rho[j] * history[j];
      for (Index j = L - 1; j > 0; --j) history[j] = history[j - 1];
      if (L > 0) history[0] = yt;
      if (t >= 0) {
        y(i, t) = yt;
        d(i, t) = dt;
      }
      d_prev = dt;
      e_prev = e;
    }
  }

  std::vector<std::string> units;
  char name[32];
  for (Index i = 0; i < N; ++i) {
    std::snprintf(name, sizeof name, "u%05ld", static_cast<long>(i + 1));
    units.emplace_back(name);
  }
  std::vector<int> periods(T);
  std::iota(periods.begin(), periods.end(), 1);
  std::map<std::string, Eigen::MatrixXd> series;
  series.emplace("y", std::move(y));
  if (config.treatment) series.emplace("d", std::move(d));
  return BalancedPanel(std::move(units), std::move(periods), std::move(series));
}

RegressionSample simulated_design(const BalancedPanel& panel, const DGPConfig& config) {
  std::vector<std::string> treatments;
  if (config.treatment) treatments.push_back("d");
  return build_design(panel, "y", treatments, config.n_lags());
}

const StudyRow& StudyReport::row(const std::string& estimator, const std::string& parameter) const {
  for (const auto& r : rows) {
    if (r.estimator == estimator && r.parameter == parameter) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "no study row for " + estimator + "/" + parameter);
}

StudyReport mc_study(const DGPConfig& config, const std::vector<EstimatorSpec>& estimators, int replications,
                     std::uint64_t seed, int threads) {
  config.validate();
  if (replications < 2) throw Error(ErrorCode::InvalidConfig, "replications: must be at least 2");
  if (estimators.empty()) throw Error(ErrorCode::InvalidConfig, "estimators: list is empty");

  StudyReport report;
  report.config = config;
  report.replications = replications;
  report.seed = seed;
  std::vector<double> truth;
  if (config.treatment) {
    report.parameters.push_back("alpha");
    truth.push_back(config.alpha);
  }
  for (std::size_t j = 0; j < config.rho.size(); ++j) {
    report.parameters.push_back("beta" + std::to_string(j + 1));
    truth.push_back(config.rho[j]);
  }
  const auto k = static_cast<Index>(truth.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& e : estimators) {
    report.estimators.push_back(e.label());
    report.estimates.push_back(Eigen::MatrixXd::Constant(replications, k, nan));
    report.standard_errors.push_back(Eigen::MatrixXd::Constant(replications, k, nan));
  }

  parallel_for(replications, threads, [&](int r) {
    const std::uint64_t rep_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    const BalancedPanel panel = simulate_dgp(config, derive_seed(rep_seed, 0));
    const RegressionSample sample = simulated_design(panel, config);
    for (std::size_t e = 0; e < estimators.size(); ++e) {
      try {
        const Estimate est = run_estimator(sample, estimators[e], derive_seed(rep_seed, 1));
        report.estimates[e].row(r) = est.slopes.transpose();
        report.standard_errors[e].row(r) = est.covariance.standard_errors().transpose();
      } catch (const Error&) {
        // counted as a failure below
      }
    }
  });

  for (std::size_t e = 0; e < estimators.size(); ++e) {
    const auto& est = report.estimates[e];
    const auto& se = report.standard_errors[e];
    for (Index j = 0; j < k; ++j) {
      StudyRow row;
      row.estimator = report.estimators[e];
      row.parameter = report.parameters[j];
      row.truth = truth[j];
      double sum = 0.0, sq_err = 0.0;
      int ok = 0, covered = 0;
      for (int r = 0; r < replications; ++r) {
        const double v = est(r, j);
        if (std::isnan(v)) continue;
        ++ok;
        sum += v;
        sq_err += (v - truth[j]) * (v - truth[j]);
        if (std::abs(v - truth[j]) <= 1.959963984540054 * se(r, j)) ++covered;
      }
      row.failures = replications - ok;
      if (ok == 0) {
        row.mean = row.bias = row.sd = row.rmse = row.coverage = nan;
      } else {
        row.mean = sum / ok;
        row.bias = row.mean - truth[j];
        double ss = 0.0;
        for (int r = 0; r < replications; ++r) {
          const double v = est(r, j);
          if (!std::isnan(v)) ss += (v - row.mean) * (v - row.mean);
        }
        row.sd = ok > 1 ? std::sqrt(ss / (ok - 1)) : nan;
        row.rmse = std::sqrt(sq_err / ok);
        row.coverage = static_cast<double>(covered) / ok;
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

namespace {

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string study_to_csv(const StudyReport& report) {
  std::ostringstream out;
  out << "estimator,parameter,truth,mean,bias,sd,rmse,coverage,failures\n";
  for (const auto& r : report.rows) {
    out << r.estimator << ',' << r.parameter << ',' << shortest(r.truth) << ',' << shortest(r.mean) << ','
        << shortest(r.bias) << ',' << shortest(r.sd) << ',' << shortest(r.rmse) << ',' << shortest(r.coverage) << ','
        << r.failures << '\n';
  }
  return out.str();
}

std::string study_to_json(const StudyReport& report) {
  using json = nlohmann::ordered_json;
  const auto& c = report.config;
  json cfg = {{"N", c.N},
              {"T", c.T},
              {"treatment", c.treatment},
              {"alpha", c.alpha},
              {"rho", c.rho},
              {"sigma_a", c.sigma_a},
              {"sigma_b", c.sigma_b},
              {"sigma_eps", c.sigma_eps},
              {"treatment_share", c.treatment_share},
              {"stay_prob", c.stay_prob},
              {"lambda", c.lambda},
              {"feedback", c.feedback},
              {"burn_in", c.burn_in},
              {"noise", c.noise == NoiseKind::gaussian ? "gaussian" : "student_t"},
              {"noise_df", c.noise_df}};
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"estimator", r.estimator},
                    {"parameter", r.parameter},
                    {"truth", r.truth},
                    {"mean", r.mean},
                    {"bias", r.bias},
                    {"sd", r.sd},
                    {"rmse", r.rmse},
                    {"coverage", r.coverage},
                    {"failures", r.failures}});
  }
  json doc = {{"config", cfg},
              {"replications", report.replications},
              {"seed", report.seed},
              {"estimators", report.estimators},
              {"results", rows}};
  return doc.dump(2) + "\n";
}

}  // namespace panelkit
