#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "panelkit/fe.hpp"
#include "panelkit/fe_debias.hpp"
#include "panelkit/inference.hpp"
#include "panelkit/rng.hpp"
#include "panelkit/simlab.hpp"

#include <cmath>

using namespace panelkit;

namespace {

std::vector<EstimatorSpec> specs(std::initializer_list<const char*> names) {
  std::vector<EstimatorSpec> out;
  for (const char* n : names) out.push_back(parse_estimator(n));
  return out;
}

double mc_se(const StudyRow& row, int R) { return row.sd / std::sqrt(static_cast<double>(R)); }

DGPConfig ar1(Index N, Index T) {
  DGPConfig c;
  c.N = N;
  c.T = T;
  c.treatment = false;
  c.rho = {0.5};
  return c;
}

}  // namespace

TEST_CASE("bias estimate vanishes under strict exogeneity") {
  DGPConfig c;
  c.N = 2000;
  c.T = 20;
  c.alpha = 1.0;
  c.rho = {};
  c.lambda = 1.0;
  c.sigma_b = 0.5;
  const int R = 40;
  double sum = 0.0, sum2 = 0.0;
  double max_gap = 0.0;
  for (int r = 0; r < R; ++r) {
    auto s = simulated_design(simulate_dgp(c, derive_seed(3, r)), c);
    auto fit = fit_fe(s);
    const double b = nickell_bias(fit, 4)(0);
    sum += b;
    sum2 += b * b;
    // corrected and raw differ only by noise
    auto rep = debias_fe_analytic(fit, 4);
    max_gap = std::max(max_gap, std::abs(rep.corrected_estimate(0) - rep.raw_estimate(0)));
  }
  const double mean = sum / R;
  const double sd = std::sqrt((sum2 - R * mean * mean) / (R - 1));
  MESSAGE("mean bias estimate " << mean << ", MC SE " << sd / std::sqrt(R));
  CHECK(std::abs(mean) < 3.0 * sd / std::sqrt(R));
  CHECK(max_gap < 0.01);
}

TEST_CASE("analytic correction moves the AR(1) coefficient toward the truth") {
  auto c = ar1(1000, 11);
  const int R = 200;
  int closer = 0;
  for (int r = 0; r < R; ++r) {
    auto s = simulated_design(simulate_dgp(c, derive_seed(5, r)), c);
    auto rep = debias_fe_analytic(s, 3);
    closer += std::abs(rep.corrected_estimate(0) - 0.5) < std::abs(rep.raw_estimate(0) - 0.5);
  }
  MESSAGE("closer in " << closer << " of " << R);
  CHECK(closer >= 190);
}

TEST_CASE("analytic correction improves the treatment coefficient at N=147, T=23") {
  DGPConfig c;
  c.N = 147;
  c.T = 23;
  c.alpha = 2.0;
  c.rho = {0.8};
  c.stay_prob = 0.95;
  c.lambda = 1.0;
  c.sigma_b = 0.5;
  const int R = 200;
  int closer = 0;
  for (int r = 0; r < R; ++r) {
    auto s = simulated_design(simulate_dgp(c, 1000 + r), c);
    auto rep = debias_fe_analytic(s, 4);
    closer += std::abs(rep.corrected_estimate(0) - c.alpha) < std::abs(rep.raw_estimate(0) - c.alpha);
  }
  MESSAGE("closer in " << closer << " of " << R);
  CHECK(closer >= 180);
}

TEST_CASE("half-panel and analytic corrections cut the first-order bias") {
  DGPConfig c;
  c.N = 500;
  c.T = 11;
  c.alpha = 0.5;
  c.rho = {0.1};
  c.stay_prob = 0.0;
  c.feedback = 16.0;
  c.lambda = 2.0;
  c.sigma_b = 0.5;
  const int R = 500;
  auto rep = mc_study(c, specs({"fe", "dfe-a:3", "dfe-ss"}), R, 1);
  const double fe = rep.row("FE", "alpha").bias;
  MESSAGE("FE " << fe << ", DFE-A " << rep.row("DFE-A", "alpha").bias << ", DFE-SS " << rep.row("DFE-SS", "alpha").bias);
  CHECK(std::abs(fe) > 5.0 * mc_se(rep.row("FE", "alpha"), R));
  CHECK(std::abs(rep.row("DFE-A", "alpha").bias) < 0.5 * std::abs(fe));
  CHECK(std::abs(rep.row("DFE-SS", "alpha").bias) < 0.5 * std::abs(fe));
  for (const char* e : {"DFE-A", "DFE-SS"})
    CHECK(std::abs(rep.row(e, "beta1").bias) < 0.5 * std::abs(rep.row("FE", "beta1").bias));
}

TEST_CASE("difference GMM is consistent for large N") {
  auto c = ar1(2000, 5);
  const int R = 100;
  auto rep = mc_study(c, specs({"ab"}), R, 9);
  const auto& row = rep.row("AB", "beta1");
  MESSAGE("AB mean " << row.mean << ", MC SE " << mc_se(row, R));
  CHECK(std::abs(row.bias) < 3.0 * mc_se(row, R));
}

TEST_CASE("split averaging reduces the GMM bias at N=100, T=12") {
  DGPConfig c;
  c.N = 100;
  c.T = 12;
  c.alpha = 0.5;
  c.rho = {0.6};
  c.stay_prob = 0.5;
  c.feedback = 4.0;
  c.lambda = 1.0;
  c.sigma_b = 0.5;
  const int R = 300;
  auto rep = mc_study(c, specs({"ab", "dab-ss:1", "dab-ss:5"}), R, 17);
  const auto& ab = rep.row("AB", "alpha");
  const auto& d1 = rep.row("DAB-SS1", "alpha");
  const auto& d5 = rep.row("DAB-SS5", "alpha");
  MESSAGE("AB " << ab.bias << ", DAB-SS5 " << d5.bias << "; SD " << d1.sd << " vs " << d5.sd);
  CHECK(std::abs(ab.bias) > 3.0 * mc_se(ab, R));
  CHECK(std::abs(d5.bias) < std::abs(ab.bias));
  // SE of a sample SD is about SD / sqrt(2R)
  CHECK(d5.sd <= d1.sd + 3.0 * d1.sd / std::sqrt(2.0 * R));
}

TEST_CASE("bootstrap SE tracks the sampling spread") {
  DGPConfig c;
  c.N = 200;
  c.T = 10;
  c.alpha = 0.5;
  c.rho = {0.5};
  c.stay_prob = 0.7;
  c.lambda = 1.0;
  c.sigma_b = 0.5;
  const int R = 300;
  auto rep = mc_study(c, specs({"fe"}), R, 21);
  const double mc_sd = rep.row("FE", "alpha").sd;
  auto s = simulated_design(simulate_dgp(c, 77), c);
  auto boot = cluster_bootstrap(
      s, [](const RegressionSample& x, std::uint64_t) { return fit_fe(x).slopes(); }, {.replications = 500, .seed = 5});
  MESSAGE("bootstrap " << boot.standard_errors(0) << ", MC SD " << mc_sd);
  CHECK(std::abs(boot.standard_errors(0) / mc_sd - 1.0) < 0.25);
}
