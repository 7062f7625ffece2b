#include "panelkit/panel.hpp"

#include "panelkit/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace panelkit {

BalancedPanel::BalancedPanel(std::vector<std::string> units, std::vector<int> periods,
                             std::map<std::string, Eigen::MatrixXd> series)
    : units_(std::move(units)), periods_(std::move(periods)), series_(std::move(series)) {
  if (units_.empty() || periods_.empty()) throw Error(ErrorCode::EmptyInput, "panel has no units or no periods");
  std::set<std::string> seen(units_.begin(), units_.end());
  if (seen.size() != units_.size()) throw Error(ErrorCode::DuplicateCell, "unit identifiers are not unique");
  for (std::size_t t = 1; t < periods_.size(); ++t) {
    if (periods_[t] <= periods_[t - 1]) {
      throw Error(ErrorCode::InvalidArgument, "periods must be strictly increasing");
    }
  }
  for (const auto& [name, m] : series_) {
    if (m.rows() != num_units() || m.cols() != num_periods()) {
      throw Error(ErrorCode::UnbalancedPanel, "variable '" + name + "' is not N x T");
    }
    if (!m.allFinite()) throw Error(ErrorCode::NonNumericValue, "variable '" + name + "' has non-finite cells");
  }
}

const Eigen::MatrixXd& BalancedPanel::series(const std::string& name) const {
  auto it = series_.find(name);
  if (it == series_.end()) throw Error(ErrorCode::UnknownVariable, "no variable named '" + name + "'");
  return it->second;
}

std::vector<std::string> BalancedPanel::variable_names() const {
  std::vector<std::string> names;
  for (const auto& kv : series_) names.push_back(kv.first);
  return names;
}

BalancedPanel load_panel(std::span<const PanelRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records");

  std::set<std::string> unit_set;
  std::set<int> period_set;
  std::set<std::string> var_set;
  for (const auto& r : records) {
    unit_set.insert(r.unit);
    period_set.insert(r.period);
    for (const auto& [name, value] : r.values) var_set.insert(name);
  }
  std::vector<std::string> units(unit_set.begin(), unit_set.end());
  std::vector<int> periods(period_set.begin(), period_set.end());
  const auto n_units = static_cast<Index>(units.size());
  const auto n_periods = static_cast<Index>(periods.size());

  std::unordered_map<std::string, Index> unit_pos;
  for (Index i = 0; i < n_units; ++i) unit_pos[units[i]] = i;
  std::unordered_map<int, Index> period_pos;
  for (Index t = 0; t < n_periods; ++t) period_pos[periods[t]] = t;

  const double missing = std::numeric_limits<double>::quiet_NaN();
  std::map<std::string, Eigen::MatrixXd> series;
  for (const auto& v : var_set) series.emplace(v, Eigen::MatrixXd::Constant(n_units, n_periods, missing));

  for (const auto& r : records) {
    const Index i = unit_pos[r.unit];
    const Index t = period_pos[r.period];
    for (const auto& [name, value] : r.values) {
      if (!std::isfinite(value)) {
        throw Error(ErrorCode::NonNumericValue,
                    "non-finite value for '" + name + "' at unit " + r.unit + ", period " + std::to_string(r.period));
      }
      double& cell = series[name](i, t);
      if (!std::isnan(cell)) {
        throw Error(ErrorCode::DuplicateCell,
                    "duplicate '" + name + "' at unit " + r.unit + ", period " + std::to_string(r.period));
      }
      cell = value;
    }
  }

  for (const auto& [name, m] : series) {
    for (Index i = 0; i < n_units; ++i) {
      for (Index t = 0; t < n_periods; ++t) {
        if (std::isnan(m(i, t))) {
          throw Error(ErrorCode::UnbalancedPanel, "unit " + units[i] + " lacks '" + name + "' in period " +
                                                      std::to_string(periods[t]));
        }
      }
    }
  }
  return BalancedPanel(std::move(units), std::move(periods), std::move(series));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

BalancedPanel read_panel_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto f : split_fields(line)) header.emplace_back(f);
    break;
  }
  if (header.size() < 3 || header[0] != "unit" || header[1] != "period") {
    throw Error(ErrorCode::MalformedCsv, "header must start with 'unit,period' and name at least one variable");
  }

  std::vector<PanelRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line_no) + ": expected " +
                                               std::to_string(header.size()) + " fields, got " +
                                               std::to_string(fields.size()));
    }
    PanelRecord rec;
    rec.unit = std::string(fields[0]);
    {
      const auto f = fields[1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), rec.period);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(ErrorCode::NonNumericValue,
                    "line " + std::to_string(line_no) + ": period '" + std::string(f) + "' is not an integer");
      }
    }
    for (std::size_t c = 2; c < fields.size(); ++c) {
      const auto f = fields[c];
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(value)) {
        throw Error(ErrorCode::NonNumericValue, "line " + std::to_string(line_no) + ": value '" + std::string(f) +
                                                    "' for '" + header[c] + "' is not numeric");
      }
      rec.values.emplace_back(header[c], value);
    }
    records.push_back(std::move(rec));
  }
  return load_panel(records);
}

BalancedPanel read_panel_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::EmptyInput, "cannot open '" + path + "'");
  return read_panel_csv(in);
}

void write_panel_csv(std::ostream& out, const BalancedPanel& panel) {
  const auto names = panel.variable_names();
  out << "unit,period";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  std::vector<const Eigen::MatrixXd*> data;
  for (const auto& n : names) data.push_back(&panel.series(n));
  char buf[64];
  for (Index i = 0; i < panel.num_units(); ++i) {
    for (Index t = 0; t < panel.num_periods(); ++t) {
      out << panel.units()[i] << ',' << panel.periods()[t];
      for (const auto* m : data) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, (*m)(i, t));
        out << ',' << std::string_view(buf, ptr - buf);
      }
      out << '\n';
    }
  }
}

std::vector<VariableSummary> summarize(const BalancedPanel& panel) {
  std::vector<VariableSummary> out;
  for (const auto& name : panel.variable_names()) {
    const auto& m = panel.series(name);
    VariableSummary s;
    s.name = name;
    s.count = m.size();
    s.mean = m.mean();
    s.sd = s.count > 1 ? std::sqrt((m.array() - s.mean).square().sum() / static_cast<double>(s.count - 1)) : 0.0;
    out.push_back(s);
  }
  return out;
}

Eigen::MatrixXd lag(const Eigen::MatrixXd& series, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "lag order must be positive");
  if (k >= series.cols()) {
    throw Error(ErrorCode::LagTooLarge, "lag " + std::to_string(k) + " with only " + std::to_string(series.cols()) +
                                            " periods");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(series.rows(), series.cols(),
                                                  std::numeric_limits<double>::quiet_NaN());
  out.rightCols(series.cols() - k) = series.leftCols(series.cols() - k);
  return out;
}

Eigen::MatrixXd lag(const BalancedPanel& panel, const std::string& variable, int k) {
  return lag(panel.series(variable), k);
}

Eigen::MatrixXd difference(const Eigen::MatrixXd& series) {
  if (series.cols() < 2) throw Error(ErrorCode::SingletonTimeSeries, "difference needs at least two periods");
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(series.rows(), series.cols(),
                                                  std::numeric_limits<double>::quiet_NaN());
  const Index T = series.cols();
  out.rightCols(T - 1) = series.rightCols(T - 1) - series.leftCols(T - 1);
  return out;
}

Eigen::MatrixXd difference(const BalancedPanel& panel, const std::string& variable) {
  return difference(panel.series(variable));
}

}  // namespace panelkit
