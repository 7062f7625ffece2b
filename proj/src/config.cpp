#include "panelkit/config.hpp"

#include "panelkit/error.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <functional>
#include <map>
#include <string>

namespace panelkit {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    const auto item = strip(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct LineParser {
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ConfigParse, "line " + std::to_string(line) + ": " + what);
  }

  double real(std::string_view v) const {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) fail("'" + std::string(v) + "' is not a number");
    return x;
  }

  template <typename Int>
  Int integer(std::string_view v) const {
    Int x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
      fail("'" + std::string(v) + "' is not an integer");
    }
    return x;
  }

  bool boolean(std::string_view v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("'" + std::string(v) + "' is not a boolean");
  }
};

}  // namespace

StudyConfig parse_study_config(std::istream& in) {
  StudyConfig cfg;
  std::vector<std::string> estimator_names{"fe"};
  std::optional<int> trim, splits, lag_cap;
  SplitConvention convention = SplitConvention::paper;

  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    const auto line = strip(text);
    if (line.empty() || line.front() == '#') continue;
    const LineParser p{line_no};
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) p.fail("expected key = value");
    const std::string key(strip(line.substr(0, eq)));
    const auto value = strip(line.substr(eq + 1));
    auto& d = cfg.dgp;

    if (key == "N") d.N = p.integer<Index>(value);
    else if (key == "T") d.T = p.integer<Index>(value);
    else if (key == "treatment") d.treatment = p.boolean(value);
    else if (key == "alpha") d.alpha = p.real(value);
    else if (key == "rho") {
      d.rho.clear();
      for (auto item : split_list(value)) d.rho.push_back(p.real(item));
    }
    else if (key == "sigma_a") d.sigma_a = p.real(value);
    else if (key == "sigma_b") d.sigma_b = p.real(value);
    else if (key == "sigma_eps") d.sigma_eps = p.real(value);
    else if (key == "treatment_share") d.treatment_share = p.real(value);
    else if (key == "stay_prob") d.stay_prob = p.real(value);
    else if (key == "lambda") d.lambda = p.real(value);
    else if (key == "feedback") d.feedback = p.real(value);
    else if (key == "burn_in") d.burn_in = p.integer<Index>(value);
    else if (key == "noise") {
      if (value == "gaussian") d.noise = NoiseKind::gaussian;
      else if (value == "student_t") d.noise = NoiseKind::student_t;
      else p.fail("noise must be gaussian or student_t");
    }
    else if (key == "noise_df") d.noise_df = p.integer<int>(value);
    else if (key == "estimators") {
      estimator_names.clear();
      for (auto item : split_list(value)) estimator_names.emplace_back(item);
    }
    else if (key == "trim") trim = p.integer<int>(value);
    else if (key == "splits") splits = p.integer<int>(value);
    else if (key == "lag_cap") lag_cap = p.integer<int>(value);
    else if (key == "split_convention") {
      if (value == "paper") convention = SplitConvention::paper;
      else if (value == "nonoverlap") convention = SplitConvention::nonoverlap;
      else p.fail("split_convention must be paper or nonoverlap");
    }
    else if (key == "replications") cfg.replications = p.integer<int>(value);
    else if (key == "seed") cfg.seed = p.integer<std::uint64_t>(value);
    else if (key == "threads") cfg.threads = p.integer<int>(value);
    else p.fail("unknown key '" + key + "'");
  }

  for (const auto& name : estimator_names) {
    EstimatorSpec spec;
    try {
      spec = parse_estimator(name);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, std::string("estimators: ") + e.what());
    }
    if (trim && spec.kind == EstimatorKind::dfe_a && name.find(':') == std::string::npos) spec.trim = *trim;
    if (splits && spec.kind == EstimatorKind::dab_ss && name.find(':') == std::string::npos) spec.splits = *splits;
    spec.lag_cap = lag_cap;
    spec.convention = convention;
    cfg.estimators.push_back(spec);
  }
  if (cfg.estimators.empty()) throw Error(ErrorCode::InvalidConfig, "estimators: list is empty");
  if (cfg.replications < 2) throw Error(ErrorCode::InvalidConfig, "replications: must be at least 2");
  if (lag_cap && *lag_cap < 1) throw Error(ErrorCode::InvalidConfig, "lag_cap: must be positive");
  cfg.dgp.validate();
  return cfg;
}

}  // namespace panelkit
