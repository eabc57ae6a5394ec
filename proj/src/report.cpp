#include "finsler/report.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace finsler {

namespace {

nlohmann::json vec_to_json(const Vec& v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

}  // namespace

nlohmann::json report_to_json(const ResidualReport& report, const RunInfo& info) {
  nlohmann::json j;
  j["name"] = report.name;
  j["config"] = {{"command", info.command}, {"metric_path", info.metric_path},
                 {"aux_path", info.aux_path}, {"samples", info.samples},
                 {"seed", info.seed},         {"tol", info.tol},
                 {"threads", info.threads}};
  j["tol_used"] = report.tol_used;
  j["aggregate_sup"] = report.aggregate_sup;
  j["aggregate_mean"] = report.aggregate_mean;
  j["verdict"] = report.pass ? "pass" : "fail";
  if (!report.note.empty()) j["note"] = report.note;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : report.samples) {
    nlohmann::json row;
    row["x"] = vec_to_json(s.sample.x);
    row["y"] = vec_to_json(s.sample.y);
    row["residual"] = vec_to_json(s.residual);
    row["sup"] = s.sup;
    rows.push_back(row);
  }
  j["samples"] = rows;
  return j;
}

std::string report_to_csv(const ResidualReport& report) {
  if (report.samples.empty()) return "";
  const int n = report.samples.front().sample.n();
  const int nr = static_cast<int>(report.samples.front().residual.size());
  std::string out;
  for (int i = 1; i <= n; ++i) out += "x" + std::to_string(i) + ",";
  for (int i = 1; i <= n; ++i) out += "y" + std::to_string(i) + ",";
  for (int i = 1; i <= nr; ++i) out += "r" + std::to_string(i) + ",";
  out += "sup\n";
  char buf[64];
  auto append = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
    out += buf;
  };
  for (const auto& s : report.samples) {
    for (int i = 0; i < n; ++i) append(s.sample.x[i], ',');
    for (int i = 0; i < n; ++i) append(s.sample.y[i], ',');
    for (int i = 0; i < nr; ++i) append(s.residual[i], ',');
    append(s.sup, '\n');
  }
  return out;
}

}  // namespace finsler
