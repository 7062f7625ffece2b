#include "panelkit/report.hpp"

#include "panelkit/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace panelkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

EstimationReport run_estimation(const RegressionSample& sample, const EstimationRequest& request) {
  EstimationReport report;
  report.outcome = sample.outcome_name();
  report.treatments = sample.treatment_names();
  report.units = sample.num_units();
  report.periods = static_cast<Index>(sample.period_labels().size());
  report.lags = sample.n_lags();
  report.seed = request.seed;
  report.bootstrap_replications = request.bootstrap_replications;

  const Index da = sample.d_alpha();
  const Index L = sample.n_lags();
  for (const auto& spec : request.estimators) {
    const Estimate est = run_estimator(sample, spec, request.seed);
    ColumnReport col;
    col.label = spec.label();
    col.names = sample.slope_names();
    col.estimate = est.slopes;
    col.se_analytic = est.covariance.standard_errors();
    col.se_bootstrap = Eigen::VectorXd::Constant(est.slopes.size(), kNaN);
    col.n = est.n;
    col.p = est.p;
    col.m = est.m;
    col.diagnostic = small_bias_diagnostic(static_cast<double>(est.n), static_cast<double>(est.p),
                                           static_cast<double>(est.m));
    col.pseudo_inverse_weight = est.pseudo_inverse_weight;
    if (est.correction) col.partitions = est.correction->partitions;

    const Index n_lr = L > 0 ? da : 0;
    col.long_run = Eigen::VectorXd::Constant(n_lr, kNaN);
    col.long_run_se_analytic = Eigen::VectorXd::Constant(n_lr, kNaN);
    col.long_run_se_bootstrap = Eigen::VectorXd::Constant(n_lr, kNaN);
    const Eigen::VectorXd beta = est.slopes.tail(L);
    for (Index k = 0; k < n_lr; ++k) {
      try {
        col.long_run(k) = long_run_effect(est.slopes(k), beta);
        col.long_run_se_analytic(k) =
            delta_method_lr(est.slopes(k), beta, treatment_lag_block(est.covariance.matrix, k, da));
      } catch (const Error&) {
        // undefined long run stays NaN
      }
    }

    if (request.bootstrap_replications > 0) {
      const BootstrapProcedure procedure = [spec, da](const RegressionSample& s, std::uint64_t seed) {
        return with_long_run(estimate_slopes(s, spec, seed), da);
      };
      const BootstrapResult boot = cluster_bootstrap(
          sample, procedure, {request.bootstrap_replications, request.seed, request.threads});
      col.se_bootstrap = boot.standard_errors.head(est.slopes.size());
      if (n_lr > 0) col.long_run_se_bootstrap = boot.standard_errors.tail(n_lr);
      col.bootstrap_failures = static_cast<int>(boot.failed_replicates.size());
    }
    report.columns.push_back(std::move(col));
  }
  return report;
}

namespace {

std::string fixed2(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string render_table(const EstimationReport& report, bool scale100) {
  constexpr std::size_t kLabel = 22;
  constexpr std::size_t kCol = 12;
  std::ostringstream out;

  auto row = [&](const std::string& label, auto&& cell) {
    std::string line = pad_right(label, kLabel);
    for (const auto& col : report.columns) line += pad_left(cell(col), kCol);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  auto block = [&](const std::string& label, double scale, auto&& est, auto&& se, auto&& bse) {
    row(label, [&](const ColumnReport& c) { return fixed2(scale * est(c)); });
    row("", [&](const ColumnReport& c) { return "(" + fixed2(scale * se(c)) + ")"; });
    const bool any_boot = std::any_of(report.columns.begin(), report.columns.end(),
                                      [&](const ColumnReport& c) { return !std::isnan(bse(c)); });
    if (any_boot) {
      row("", [&](const ColumnReport& c) {
        return std::isnan(bse(c)) ? std::string() : "[" + fixed2(scale * bse(c)) + "]";
      });
    }
  };

  row("", [](const ColumnReport& c) { return c.label; });
  const auto da = static_cast<Index>(report.treatments.size());
  if (report.columns.empty()) return out.str();
  const auto& names = report.columns.front().names;
  for (std::size_t j = 0; j < names.size(); ++j) {
    const double scale = (scale100 && static_cast<Index>(j) < da) ? 100.0 : 1.0;
    block(names[j], scale, [j](const ColumnReport& c) { return c.estimate(j); },
          [j](const ColumnReport& c) { return c.se_analytic(j); },
          [j](const ColumnReport& c) { return c.se_bootstrap(j); });
  }
  for (Index k = 0; k < report.columns.front().long_run.size(); ++k) {
    block("Long-run " + report.treatments[k], scale100 ? 100.0 : 1.0,
          [k](const ColumnReport& c) { return c.long_run(k); },
          [k](const ColumnReport& c) { return c.long_run_se_analytic(k); },
          [k](const ColumnReport& c) { return c.long_run_se_bootstrap(k); });
  }
  row("n", [](const ColumnReport& c) { return std::to_string(c.n); });
  row("p", [](const ColumnReport& c) { return std::to_string(c.p); });
  row("m", [](const ColumnReport& c) { return std::to_string(c.m); });
  row("(p v m)^2/n", [](const ColumnReport& c) { return fixed2(c.diagnostic.ratio); });
  for (const auto& c : report.columns) {
    if (c.diagnostic.debiasing_recommended) out << c.label << ": " << c.diagnostic.verdict << '\n';
    if (c.pseudo_inverse_weight) out << c.label << ": warning: one-step weight used a pseudo-inverse\n";
    if (c.bootstrap_failures > 0) out << c.label << ": " << c.bootstrap_failures << " bootstrap replicates failed\n";
  }
  return out.str();
}

namespace {

using json = nlohmann::ordered_json;

json number(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
double number(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

}  // namespace

std::string report_to_json(const EstimationReport& report) {
  json cols = json::array();
  for (const auto& c : report.columns) {
    json coefs = json::array();
    for (std::size_t j = 0; j < c.names.size(); ++j) {
      coefs.push_back({{"name", c.names[j]},
                       {"estimate", number(c.estimate(j))},
                       {"se_analytic", number(c.se_analytic(j))},
                       {"se_bootstrap", number(c.se_bootstrap(j))}});
    }
    json lr = json::array();
    for (Index k = 0; k < c.long_run.size(); ++k) {
      lr.push_back({{"treatment", report.treatments[k]},
                    {"estimate", number(c.long_run(k))},
                    {"se_analytic", number(c.long_run_se_analytic(k))},
                    {"se_bootstrap", number(c.long_run_se_bootstrap(k))}});
    }
    cols.push_back({{"estimator", c.label},
                    {"coefficients", coefs},
                    {"long_run", lr},
                    {"dimensions", {{"n", c.n}, {"p", c.p}, {"m", c.m}}},
                    {"small_bias",
                     {{"ratio", c.diagnostic.ratio},
                      {"debiasing_recommended", c.diagnostic.debiasing_recommended},
                      {"verdict", c.diagnostic.verdict}}},
                    {"bootstrap_failures", c.bootstrap_failures},
                    {"pseudo_inverse_weight", c.pseudo_inverse_weight},
                    {"partitions", c.partitions}});
  }
  json doc = {{"outcome", report.outcome},
              {"treatments", report.treatments},
              {"units", report.units},
              {"periods", report.periods},
              {"lags", report.lags},
              {"seed", report.seed},
              {"bootstrap_replications", report.bootstrap_replications},
              {"estimators", cols}};
  return doc.dump(2) + "\n";
}

EstimationReport report_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("report JSON: ") + e.what());
  }
  EstimationReport r;
  r.outcome = doc.at("outcome").get<std::string>();
  r.treatments = doc.at("treatments").get<std::vector<std::string>>();
  r.units = doc.at("units").get<Index>();
  r.periods = doc.at("periods").get<Index>();
  r.lags = doc.at("lags").get<int>();
  r.seed = doc.at("seed").get<std::uint64_t>();
  r.bootstrap_replications = doc.at("bootstrap_replications").get<int>();
  for (const auto& jc : doc.at("estimators")) {
    ColumnReport c;
    c.label = jc.at("estimator").get<std::string>();
    const auto& coefs = jc.at("coefficients");
    const auto k = static_cast<Index>(coefs.size());
    c.estimate.resize(k);
    c.se_analytic.resize(k);
    c.se_bootstrap.resize(k);
    for (Index j = 0; j < k; ++j) {
      c.names.push_back(coefs[j].at("name").get<std::string>());
      c.estimate(j) = number(coefs[j].at("estimate"));
      c.se_analytic(j) = number(coefs[j].at("se_analytic"));
      c.se_bootstrap(j) = number(coefs[j].at("se_bootstrap"));
    }
    const auto& lr = jc.at("long_run");
    const auto q = static_cast<Index>(lr.size());
    c.long_run.resize(q);
    c.long_run_se_analytic.resize(q);
    c.long_run_se_bootstrap.resize(q);
    for (Index j = 0; j < q; ++j) {
      c.long_run(j) = number(lr[j].at("estimate"));
      c.long_run_se_analytic(j) = number(lr[j].at("se_analytic"));
      c.long_run_se_bootstrap(j) = number(lr[j].at("se_bootstrap"));
    }
    const auto& dims = jc.at("dimensions");
    c.n = dims.at("n").get<Index>();
    c.p = dims.at("p").get<Index>();
    c.m = dims.at("m").get<Index>();
    const auto& sb = jc.at("small_bias");
    c.diagnostic.ratio = sb.at("ratio").get<double>();
    c.diagnostic.debiasing_recommended = sb.at("debiasing_recommended").get<bool>();
    c.diagnostic.verdict = sb.at("verdict").get<std::string>();
    c.bootstrap_failures = jc.at("bootstrap_failures").get<int>();
    c.pseudo_inverse_weight = jc.at("pseudo_inverse_weight").get<bool>();
    c.partitions = jc.at("partitions").get<std::vector<std::string>>();
    r.columns.push_back(std::move(c));
  }
  return r;
}

}  // namespace panelkit
