#pragma once

#include <Eigen/Dense>

#include <istream>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace panelkit {

using Index = Eigen::Index;

// Strictly balanced N x T panel. Each variable is stored as an N x T matrix
// (row = unit, column = period). Units are kept in lexicographic order and
// periods in increasing order, so the ingestion order never leaks into results.
class BalancedPanel {
 public:
  BalancedPanel(std::vector<std::string> units, std::vector<int> periods,
                std::map<std::string, Eigen::MatrixXd> series);

  Index num_units() const { return static_cast<Index>(units_.size()); }
  Index num_periods() const { return static_cast<Index>(periods_.size()); }
  Index num_cells() const { return num_units() * num_periods(); }

  const std::vector<std::string>& units() const { return units_; }
  const std::vector<int>& periods() const { return periods_; }

  bool has(const std::string& name) const { return series_.count(name) != 0; }
  const Eigen::MatrixXd& series(const std::string& name) const;
  std::vector<std::string> variable_names() const;

 private:
  std::vector<std::string> units_;
  std::vector<int> periods_;
  std::map<std::string, Eigen::MatrixXd> series_;
};

struct PanelRecord {
  std::string unit;
  int period = 0;
  std::vector<std::pair<std::string, double>> values;
};

BalancedPanel load_panel(std::span<const PanelRecord> records);

// Long-format CSV: header `unit,period,<var1>,<var2>,...`.
BalancedPanel read_panel_csv(std::istream& in);
BalancedPanel read_panel_csv_file(const std::string& path);
void write_panel_csv(std::ostream& out, const BalancedPanel& panel);

struct VariableSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  Index count = 0;
};

// Per-variable mean, sample SD and cell count.
std::vector<VariableSummary> summarize(const BalancedPanel& panel);

// Per-unit lag by k periods; the first k periods of each unit are NaN.
Eigen::MatrixXd lag(const BalancedPanel& panel, const std::string& variable, int k);
Eigen::MatrixXd lag(const Eigen::MatrixXd& series, int k);

// Per-unit first difference; the first period of each unit is NaN.
Eigen::MatrixXd difference(const BalancedPanel& panel, const std::string& variable);
Eigen::MatrixXd difference(const Eigen::MatrixXd& series);

}  // namespace panelkit
