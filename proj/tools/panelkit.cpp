// panelkit: fixed-effects and Arellano-Bond estimation of dynamic panels with
// bias corrections, plus a Monte Carlo study runner.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 estimation error.

#include "panelkit/config.hpp"
#include "panelkit/error.hpp"
#include "panelkit/panel.hpp"
#include "panelkit/report.hpp"
#include "panelkit/sample.hpp"
#include "panelkit/simlab.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitEstimation = 4;

int exit_code(const panelkit::Error& e) {
  switch (e.category()) {
    case panelkit::ErrorCategory::usage: return kExitUsage;
    case panelkit::ErrorCategory::data: return kExitData;
    case panelkit::ErrorCategory::estimation: return kExitEstimation;
  }
  return kExitEstimation;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw panelkit::Error(panelkit::ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << content;
}

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

struct EstimateArgs {
  std::string data;
  std::vector<std::string> estimators{"fe"};
  std::string outcome = "y";
  std::vector<std::string> treatments{"d"};
  int lags = 4;
  int trim = 4;
  int splits = 1;
  int boot = 0;
  std::uint64_t seed = 0;
  std::string convention = "paper";
  int lag_cap = 0;
  bool small_sample = false;
  bool scale100 = false;
  int threads = 1;
  std::string json_path;
};

int run_estimate(const EstimateArgs& args) {
  using namespace panelkit;
  const BalancedPanel panel = read_panel_csv_file(args.data);
  const RegressionSample sample = build_design(panel, args.outcome, split_commas(args.treatments), args.lags);

  EstimationRequest request;
  request.bootstrap_replications = args.boot;
  request.seed = args.seed;
  request.threads = args.threads;
  for (const auto& name : split_commas(args.estimators)) {
    EstimatorSpec spec = parse_estimator(name);
    const bool has_arg = name.find(':') != std::string::npos;
    if (spec.kind == EstimatorKind::dfe_a && !has_arg) spec.trim = args.trim;
    if (spec.kind == EstimatorKind::dab_ss && !has_arg) spec.splits = args.splits;
    spec.convention = args.convention == "nonoverlap" ? SplitConvention::nonoverlap : SplitConvention::paper;
    if (args.lag_cap > 0) spec.lag_cap = args.lag_cap;
    spec.small_sample_correction = args.small_sample;
    request.estimators.push_back(spec);
  }

  const EstimationReport report = run_estimation(sample, request);
  std::cout << render_table(report, args.scale100);
  if (!args.json_path.empty()) write_file(args.json_path, report_to_json(report));
  return 0;
}

int run_mc(const std::string& config_path, const std::string& csv_path, const std::string& json_path, int threads) {
  using namespace panelkit;
  std::ifstream in(config_path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + config_path + "'");
  StudyConfig cfg = parse_study_config(in);
  if (threads > 0) cfg.threads = threads;
  const StudyReport report = mc_study(cfg.dgp, cfg.estimators, cfg.replications, cfg.seed, cfg.threads);

  std::printf("%-10s %-8s %9s %9s %9s %9s %9s %9s %5s\n", "estimator", "param", "truth", "mean", "bias", "sd", "rmse",
              "coverage", "fail");
  for (const auto& r : report.rows) {
    std::printf("%-10s %-8s %9.4f %9.4f %9.4f %9.4f %9.4f %9.3f %5d\n", r.estimator.c_str(), r.parameter.c_str(),
                r.truth, r.mean, r.bias, r.sd, r.rmse, r.coverage, r.failures);
  }
  if (!csv_path.empty()) write_file(csv_path, study_to_csv(report));
  if (!json_path.empty()) write_file(json_path, study_to_json(report));
  return 0;
}

int run_describe(const std::string& data) {
  using namespace panelkit;
  const BalancedPanel panel = read_panel_csv_file(data);
  std::printf("units %ld, periods %ld (%d..%d), cells %ld\n", static_cast<long>(panel.num_units()),
              static_cast<long>(panel.num_periods()), panel.periods().front(), panel.periods().back(),
              static_cast<long>(panel.num_cells()));
  std::printf("%-16s %12s %12s %8s\n", "variable", "mean", "sd", "count");
  for (const auto& s : summarize(panel)) {
    std::printf("%-16s %12.4f %12.4f %8ld\n", s.name.c_str(), s.mean, s.sd, static_cast<long>(s.count));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-effects and Arellano-Bond estimation of dynamic panels with bias corrections"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate a dynamic panel model from a long-format CSV");
  estimate->add_option("--data", est.data, "CSV with header unit,period,<vars>")->required();
  estimate->add_option("--estimator", est.estimators, "fe, dfe-a, dfe-ss, ab, dab-ss (comma list or repeated)");
  estimate->add_option("--outcome", est.outcome, "Outcome variable")->capture_default_str();
  estimate->add_option("--treatment", est.treatments, "Treatment variable(s)")->capture_default_str();
  estimate->add_option("--lags", est.lags, "Number of outcome lags L")->capture_default_str()->check(CLI::NonNegativeNumber);
  estimate->add_option("--trim", est.trim, "Trimming M for dfe-a")->capture_default_str()->check(CLI::PositiveNumber);
  estimate->add_option("--splits", est.splits, "Random splits K for dab-ss")->capture_default_str()->check(CLI::PositiveNumber);
  estimate->add_option("--boot", est.boot, "Bootstrap replications (0 = none)")->capture_default_str()->check(CLI::NonNegativeNumber);
  estimate->add_option("--seed", est.seed, "Seed for splits and bootstrap")->capture_default_str();
  estimate->add_option("--split-convention", est.convention, "Half-sample convention")
      ->capture_default_str()
      ->check(CLI::IsMember({"paper", "nonoverlap"}));
  estimate->add_option("--lag-cap", est.lag_cap, "AB: most recent admissible levels per variable (0 = all)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  estimate->add_flag("--small-sample", est.small_sample, "Apply G/(G-1)(n-1)/(n-p) to FE clustered covariance");
  estimate->add_flag("--scale100", est.scale100, "Multiply treatment and long-run rows by 100");
  estimate->add_option("--threads", est.threads, "Bootstrap worker threads (0 = all cores)")->capture_default_str();
  estimate->add_option("--json", est.json_path, "Write full-precision JSON report");

  std::string mc_config, mc_csv, mc_json;
  int mc_threads = 0;
  auto* mc = app.add_subcommand("mc", "Run a seeded Monte Carlo study from a key=value config");
  mc->add_option("--config", mc_config, "Study configuration file")->required();
  mc->add_option("--csv", mc_csv, "Write results as CSV");
  mc->add_option("--json", mc_json, "Write results as JSON");
  mc->add_option("--threads", mc_threads, "Override the config's thread count");

  std::string describe_data;
  auto* describe = app.add_subcommand("describe", "Descriptive statistics of a long-format CSV panel");
  describe->add_option("--data", describe_data, "CSV with header unit,period,<vars>")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*estimate) return run_estimate(est);
    if (*mc) return run_mc(mc_config, mc_csv, mc_json, mc_threads);
    if (*describe) return run_describe(describe_data);
  } catch (const panelkit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return kExitUsage;
}
