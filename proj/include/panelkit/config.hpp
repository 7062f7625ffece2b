#pragma once

#include "panelkit/estimators.hpp"
#include "panelkit/simlab.hpp"

#include <cstdint>
#include <istream>
#include <vector>

namespace panelkit {

// Monte Carlo study description read from flat `key = value` text.
// Blank lines and lines starting with '#' are ignored.
struct StudyConfig {
  DGPConfig dgp;
  std::vector<EstimatorSpec> estimators;
  int replications = 100;
  std::uint64_t seed = 0;
  int threads = 1;
};

// ConfigParse (with the line number) for malformed lines, unknown keys and
// unparsable values; InvalidConfig (naming the field) for out-of-range values.
StudyConfig parse_study_config(std::istream& in);

}  // namespace panelkit
