// finslerlab - report serialization (JSON and per-sample CSV).
#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "finsler/geometry.hpp"

namespace finsler {

// The resolved run configuration embedded into every report, so a verdict
// always carries its tolerance/seed/sample-count context.
struct RunInfo {
  std::string command;
  std::string metric_path;
  std::string aux_path;
  int samples = 0;
  uint64_t seed = 0;
  double tol = 0.0;
  int threads = 1;
};

nlohmann::json report_to_json(const ResidualReport& report, const RunInfo& info);
std::string report_to_csv(const ResidualReport& report);

}  // namespace finsler
