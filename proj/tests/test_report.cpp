#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "panelkit/ab_debias.hpp"
#include "panelkit/error.hpp"
#include "panelkit/estimators.hpp"
#include "panelkit/fe.hpp"
#include "panelkit/fe_debias.hpp"
#include "panelkit/report.hpp"
#include "support.hpp"

#include <cmath>

using namespace panelkit;
using testing::error_code;
using testing::max_abs;

namespace {

RegressionSample dynamic_toy() {
  return build_design(testing::random_panel(16, 9, 1, 31), "y", {"d1"}, 1);
}

bool same(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return false;
  for (Index k = 0; k < a.size(); ++k) {
    if (std::isnan(a(k)) != std::isnan(b(k))) return false;
    if (!std::isnan(a(k)) && a(k) != b(k)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("estimator names") {
  CHECK(parse_estimator("fe").label() == "FE");
  auto a = parse_estimator("dfe-a:3");
  CHECK(a.kind == EstimatorKind::dfe_a);
  CHECK(a.trim == 3);
  CHECK(parse_estimator("dfe-a").trim == 4);
  CHECK(parse_estimator("dfe-ss").label() == "DFE-SS");
  CHECK(parse_estimator("ab").label() == "AB");
  auto d = parse_estimator("dab-ss:5");
  CHECK(d.splits == 5);
  CHECK(d.label() == "DAB-SS5");
  CHECK(parse_estimator("dab-ss").label() == "DAB-SS1");
  CHECK(d.is_ab());
  CHECK(d.is_debiased());
  CHECK_FALSE(parse_estimator("ab").is_debiased());
  for (const char* bad : {"ols", "fe:2", "dab-ss:0", "dfe-a:x", "ab:1"})
    CHECK(error_code([&] { parse_estimator(bad); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("dispatch matches the underlying estimators") {
  auto s = dynamic_toy();
  auto fit = fit_fe(s);

  auto fe = run_estimator(s, parse_estimator("fe"), 0);
  CHECK(fe.slopes == fit.slopes());
  CHECK(fe.covariance.matrix == fe_cluster_cov(fit).matrix);
  CHECK(fe.n == s.n());
  CHECK(fe.p == s.num_params());
  CHECK(fe.m == 0);
  CHECK_FALSE(fe.correction.has_value());

  auto dfa = run_estimator(s, parse_estimator("dfe-a:2"), 0);
  CHECK(dfa.slopes == debias_fe_analytic(fit, 2).corrected_estimate);
  // analytic covariance stays that of the uncorrected fit
  CHECK(dfa.covariance.matrix == fe.covariance.matrix);

  auto dfs = run_estimator(s, parse_estimator("dfe-ss"), 0);
  CHECK(dfs.slopes == debias_fe_split(s).corrected_estimate);

  auto ab = run_estimator(s, parse_estimator("ab"), 0);
  auto abfit = fit_ab(s);
  CHECK(ab.slopes == abfit.slopes());
  CHECK(ab.m == abfit.m);
  CHECK(ab.p == abfit.p);
  CHECK(ab.n == abfit.n);

  auto dab = run_estimator(s, parse_estimator("dab-ss:3"), 17);
  CHECK(dab.slopes == debias_ab_split(s, 3, 17).corrected_estimate);
  CHECK(dab.covariance.matrix == ab.covariance.matrix);

  for (const char* name : {"fe", "dfe-a", "dfe-ss", "ab", "dab-ss:2"}) {
    auto spec = parse_estimator(name);
    CHECK(estimate_slopes(s, spec, 5) == run_estimator(s, spec, 5).slopes);
  }
}

TEST_CASE("slopes with long-run effects") {
  Eigen::VectorXd v(3);
  v << 0.1, 0.3, 0.2;
  auto w = with_long_run(v, 1);
  REQUIRE(w.size() == 4);
  CHECK(w(3) == doctest::Approx(0.2));
  Eigen::VectorXd only(2);
  only << 1.0, 2.0;
  CHECK(with_long_run(only, 2) == only);
}

TEST_CASE("noiseless table shows the exact coefficient") {
  auto p = testing::random_panel(10, 6, 1, 2);
  std::map<std::string, Eigen::MatrixXd> series{{"d1", p.series("d1")}, {"y", 2.0 * p.series("d1")}};
  auto s = build_design(BalancedPanel(p.units(), p.periods(), series), "y", {"d1"}, 0);
  auto r = run_estimation(s, {.estimators = {parse_estimator("fe")}, .bootstrap_replications = 20, .seed = 1});
  auto table = render_table(r, false);
  CHECK(table.find("2.00") != std::string::npos);
  CHECK(table.find("(0.00)") != std::string::npos);
  CHECK(table.find("[0.00]") != std::string::npos);
  CHECK(table.find("-0.00") == std::string::npos);
  CHECK(render_table(r, true).find("200.00") != std::string::npos);
}

TEST_CASE("table layout") {
  auto s = dynamic_toy();
  auto r = run_estimation(s, {.estimators = {parse_estimator("fe"), parse_estimator("ab")}});
  auto table = render_table(r, true);
  CHECK(table.find("FE") != std::string::npos);
  CHECK(table.find("AB") != std::string::npos);
  CHECK(table.find("L1.y") != std::string::npos);
  CHECK(table.find("Long-run d1") != std::string::npos);
  CHECK(table.find("(p v m)^2/n") != std::string::npos);
  // no bootstrap requested: no bracket row
  CHECK(table.find('[') == std::string::npos);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * r.columns[0].estimate(0));
  CHECK(table.find(buf) != std::string::npos);
  std::snprintf(buf, sizeof buf, "%.2f", r.columns[0].estimate(1));
  CHECK(table.find(buf) != std::string::npos);
}

TEST_CASE("report columns") {
  auto s = dynamic_toy();
  auto r = run_estimation(s, {.estimators = {parse_estimator("fe"), parse_estimator("dab-ss:2")},
                              .bootstrap_replications = 30,
                              .seed = 4});
  const auto& fe = r.columns[0];
  auto fit = fit_fe(s);
  auto cov = fe_cluster_cov(fit).matrix;
  CHECK(fe.long_run(0) == long_run_effect(fit.alpha(0), fit.beta));
  CHECK(fe.long_run_se_analytic(0) == doctest::Approx(delta_method_lr(fit.alpha(0), fit.beta, cov)));
  CHECK(fe.diagnostic.ratio == doctest::Approx(static_cast<double>(s.num_params() * s.num_params()) / s.n()));

  auto boot = cluster_bootstrap(
      s, [](const RegressionSample& x, std::uint64_t) { return with_long_run(fit_fe(x).slopes(), 1); },
      {.replications = 30, .seed = 4});
  CHECK(max_abs(fe.se_bootstrap - boot.standard_errors.head(2)) < 1e-14);
  CHECK(fe.long_run_se_bootstrap(0) == doctest::Approx(boot.standard_errors(2)).epsilon(1e-12));

  const auto& dab = r.columns[1];
  CHECK(dab.partitions.size() == 2);
  CHECK((dab.se_bootstrap.array() > 0.0).all());
}

TEST_CASE("json round trip") {
  auto s = dynamic_toy();
  auto r = run_estimation(s, {.estimators = {parse_estimator("fe"), parse_estimator("dfe-a"), parse_estimator("ab")},
                              .bootstrap_replications = 0,
                              .seed = 12});
  const auto text = report_to_json(r);
  auto back = report_from_json(text);
  CHECK(report_to_json(back) == text);
  CHECK(render_table(back, true) == render_table(r, true));
  REQUIRE(back.columns.size() == 3);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(same(back.columns[c].estimate, r.columns[c].estimate));
    CHECK(same(back.columns[c].se_analytic, r.columns[c].se_analytic));
    CHECK(same(back.columns[c].se_bootstrap, r.columns[c].se_bootstrap));
    CHECK(same(back.columns[c].long_run, r.columns[c].long_run));
    CHECK(back.columns[c].m == r.columns[c].m);
  }
  CHECK(error_code([] { report_from_json("{not json"); }) == ErrorCode::InvalidArgument);
}
