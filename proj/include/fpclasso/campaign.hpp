#pragma once

#include <string>
#include <vector>

#include "fpclasso/simlab.hpp"

namespace fpc {

// A declarative simulation run: which experiment, its data-generating specs,
// and the solver settings. Parsed from a JSON document.
struct Campaign {
  std::string experiment;  // "fp", "corr", or "tp"
  DesignSpec design;
  SignalSpec signal;
  ResponseSpec response;
  std::vector<double> targets;   // fp and tp experiments
  std::vector<double> rho_list;  // corr experiment
  double target_fp = 0.0;        // corr experiment
  Index replicates = 0;
  PathConfig path;
};

// Validates the schema strictly: unknown keys, wrong types, and missing
// required fields all raise MalformedInput naming the offending path.
Campaign parse_campaign(const std::string& json_text);

SimResult run_campaign(const Campaign& campaign, int threads = 1);

}  // namespace fpc
