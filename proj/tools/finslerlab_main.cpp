// finslerlab - command-line front end.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "finsler/deriv.hpp"
#include "finsler/fields.hpp"
#include "finsler/flatness.hpp"
#include "finsler/geodesics.hpp"
#include "finsler/metrics.hpp"
#include "finsler/regularity.hpp"
#include "finsler/report.hpp"
#include "finsler/transforms.hpp"

namespace {

using namespace finsler;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string metric_path;
  std::string aux_path;
  int samples = 200;
  uint64_t seed = 42;
  double tol = 1e-8;
  std::string output_path;
  std::string format = "json";
  int threads = 0;  // 0 = all cores

  // geodesic / killing / indicatrix extras
  std::vector<double> x0, y0, p, q;
  double T = 1.0;
  int steps = 64;
  double epsilon = 0.05;
  int degree = 3;
  int iters = 200;
  bool run_oracle = false;
};

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
  return j;
}

void write_output(const Options& opt, const std::string& payload) {
  if (opt.output_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(opt.output_path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file: " + opt.output_path);
  out << payload;
}

Vec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size()));
}

RunInfo make_info(const std::string& command, const Options& opt) {
  RunInfo info;
  info.command = command;
  info.metric_path = opt.metric_path;
  info.aux_path = opt.aux_path;
  info.samples = opt.samples;
  info.seed = opt.seed;
  info.tol = opt.tol;
  info.threads = opt.threads;
  return info;
}

int emit_report(const ResidualReport& report, const std::string& command, const Options& opt) {
  if (opt.format == "csv")
    write_output(opt, report_to_csv(report));
  else
    write_output(opt, report_to_json(report, make_info(command, opt)).dump(2) + "\n");
  return report.pass ? kExitPass : kExitFail;
}

int cmd_residual(const std::string& command, const Options& opt) {
  MetricSpec spec = MetricSpec::from_json(load_json(opt.metric_path));
  Metric m = build_metric(spec);
  auto samples = sample_domain(spec, opt.samples, opt.seed);

  if (command == "check-hamel") {
    auto report = run_residual_report(
        "hamel", samples, [&](const TangentSample& s) { return hamel_residual(m, s); }, opt.tol,
        opt.threads,
        "a fail verdict means the metric is not rectilinear in these coordinates; a "
        "rectilinear chart may still exist (see search-rectilinear)");
    return emit_report(report, command, opt);
  }
  if (command == "check-param") {
    auto report = run_residual_report(
        "param-preserving", samples, [&](const TangentSample& s) { return param_residual(m, s); },
        opt.tol, opt.threads);
    return emit_report(report, command, opt);
  }
  if (command == "check-randers") {
    auto report = run_residual_report(
        "randers-reduction", samples,
        [&](const TangentSample& s) {
          auto r = randers_reduction_residual(m, s);
          Vec v(2);
          v << r.identity_sup, 0.0;
          return v;
        },
        opt.tol, opt.threads, "residual entries: [identity residual, 0]; closedness defect reported separately");
    // Closedness defect belongs to the hypothesis, not the identity verdict.
    double defect = 0.0;
    for (const auto& s : samples)
      defect = std::max(defect, randers_reduction_residual(m, s.with_unit_dir()).closedness_defect);
    nlohmann::json j = report_to_json(report, make_info(command, opt));
    j["closedness_defect"] = defect;
    j["one_form_closed"] = defect <= opt.tol;
    if (opt.format == "csv") {
      write_output(opt, report_to_csv(report));
    } else {
      write_output(opt, j.dump(2) + "\n");
    }
    return report.pass ? kExitPass : kExitFail;
  }
  throw UsageError("unknown residual command");
}

int cmd_check_rank(const Options& opt) {
  MetricSpec spec = MetricSpec::from_json(load_json(opt.metric_path));
  Metric m = build_metric(spec);
  auto samples = sample_domain(spec, opt.samples, opt.seed);
  const int n = m.dimension();

  bool ok = true;
  double min_eig = std::numeric_limits<double>::infinity();
  double worst_kernel = 0.0;
  int bad_rank = 0;
  for (const auto& raw : samples) {
    TangentSample s = raw.with_unit_dir();
    if (reduced_hessian_rank(m, s) != n - 1) {
      ++bad_rank;
      ok = false;
    }
    auto g = fundamental_tensor(m, s);
    min_eig = std::min(min_eig, g.eigen_spectrum.minCoeff());
    if (!g.positive_definite) ok = false;
    worst_kernel = std::max(worst_kernel, kernel_direction_check(m, s));
    if (worst_kernel > opt.tol) ok = false;
  }

  nlohmann::json j;
  j["name"] = "regularity";
  j["config"] = report_to_json(ResidualReport{}, make_info("check-rank", opt))["config"];
  j["expected_rank"] = n - 1;
  j["rank_violations"] = bad_rank;
  j["min_fundamental_eigenvalue"] = min_eig;
  j["kernel_direction_sup"] = worst_kernel;
  j["verdict"] = ok ? "pass" : "fail";
  write_output(opt, j.dump(2) + "\n");
  return ok ? kExitPass : kExitFail;
}

int cmd_check_minkowski(const Options& opt) {
  MetricSpec spec = MetricSpec::from_json(load_json(opt.metric_path));
  Metric m = build_metric(spec);
  auto samples = sample_domain(spec, opt.samples, opt.seed);
  MinkowskiVerdict v = minkowski_check(m, samples, opt.tol);

  nlohmann::json j;
  j["name"] = "minkowski";
  j["config"] = report_to_json(ResidualReport{}, make_info("check-minkowski", opt))["config"];
  j["dFdx_sup"] = v.dFdx_sup;
  j["param_residual_sup"] = v.param_sup;
  j["criteria_agree"] = v.agree;
  j["verdict"] = v.pass ? "pass" : "fail";
  write_output(opt, j.dump(2) + "\n");
  return v.pass ? kExitPass : kExitFail;
}

int cmd_geodesic(const Options& opt) {
  MetricSpec spec = MetricSpec::from_json(load_json(opt.metric_path));
  Metric m = build_metric(spec);
  if (static_cast<int>(opt.x0.size()) != m.dimension() ||
      static_cast<int>(opt.y0.size()) != m.dimension())
    throw UsageError("geodesic: provide --x0 and --y0 once per dimension");

  GeodesicTrace trace = integrate_geodesic(m, TangentSample(to_vec(opt.x0), to_vec(opt.y0)),
                                           opt.T, opt.steps);
  write_output(opt, trace_to_csv(trace));

  nlohmann::json j;
  j["straightness"] = trace.straightness;
  j["affine_defect"] = trace.affine_defect;
  j["speed_drift"] = trace.speed_drift;
  j["domain_exit"] = trace.domain_exit;
  j["nodes"] = trace.nodes();
  std::cerr << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_killing(const Options& opt) {
  MetricSpec spec = MetricSpec::from_json(load_json(opt.metric_path));
  Metric m = build_metric(spec);
  if (opt.aux_path.empty()) throw UsageError("killing: requires --aux <vector-field.json>");
  VectorFieldSpec X = VectorFieldSpec::from_json(load_json(opt.aux_path));
  auto samples = sample_domain(spec, opt.samples, opt.seed);

  auto report = run_residual_report(
      "killing", samples, [&](const TangentSample& s) { return killing_residual(m, X, s); },
      opt.tol, opt.threads);

  nlohmann::json j = report_to_json(report, make_info("killing", opt));
  if (opt.run_oracle) {
    if (static_cast<int>(opt.x0.size()) != m.dimension() ||
        static_cast<int>(opt.y0.size()) != m.dimension())
      throw UsageError("killing --oracle: provide --x0 and --y0 once per dimension");
    auto oracle = flow_oracle(m, X, TangentSample(to_vec(opt.x0), to_vec(opt.y0)), opt.epsilon);
    j["flow_oracle"] = {{"geodesy_defect", oracle.geodesy_defect},
                        {"image_straightness", oracle.image_straightness},
                        {"truncated", oracle.truncated}};
  }
  if (opt.format == "csv")
    write_output(opt, report_to_csv(report));
  else
    write_output(opt, j.dump(2) + "\n");
  return report.pass ? kExitPass : kExitFail;
}

int cmd_terms_ab(const Options& opt) {
  MetricSpec spec = MetricSpec::from_json(load_json(opt.metric_path));
  Metric m = build_metric(spec);
  if (opt.aux_path.empty()) throw UsageError("terms-ab: requires --aux <change.json>");
  CoordinateChange change = CoordinateChange::from_json(load_json(opt.aux_path));
  auto samples = sample_domain(spec, opt.samples, opt.seed);

  auto report = run_residual_report(
      "terms-ab", samples,
      [&](const TangentSample& s) {
        TermAB t = eval_terms(m, change, s);
        Vec v(1);
        v << t.identity_residual;
        return v;
      },
      opt.tol, opt.threads, "residual entry: |term_full - term_A - term_B| at the sample");
  return emit_report(report, "terms-ab", opt);
}

int cmd_search(const Options& opt) {
  MetricSpec spec = MetricSpec::from_json(load_json(opt.metric_path));
  Metric m = build_metric(spec);
  auto samples = sample_domain(spec, opt.samples, opt.seed);

  SearchOptions so;
  so.degree = opt.degree;
  so.max_iterations = opt.iters;
  so.tol = opt.tol;
  so.threads = opt.threads;
  SearchResult res = rectilinear_search(m, samples, so);

  nlohmann::json j;
  j["name"] = "search-rectilinear";
  j["config"] = report_to_json(ResidualReport{}, make_info("search-rectilinear", opt))["config"];
  j["degree"] = so.degree;
  j["iterations"] = res.iterations;
  j["initial_residual"] = res.initial_residual;
  j["achieved_residual"] = res.achieved_residual;
  j["converged"] = res.converged;
  j["change"] = res.change.to_json();
  j["verdict"] = res.converged ? "pass" : "fail";
  j["note"] = "non-convergence is inconclusive; it does not certify that no rectilinear chart exists";
  write_output(opt, j.dump(2) + "\n");
  return res.converged ? kExitPass : kExitFail;
}

int cmd_indicatrix(const Options& opt) {
  MetricSpec spec = MetricSpec::from_json(load_json(opt.metric_path));
  Metric m = build_metric(spec);
  if (static_cast<int>(opt.p.size()) != m.dimension() ||
      static_cast<int>(opt.q.size()) != m.dimension())
    throw UsageError("indicatrix: provide --p and --q once per dimension");

  double measure = indicatrix_translation_check(m, to_vec(opt.p), to_vec(opt.q), opt.samples);
  nlohmann::json j;
  j["name"] = "indicatrix";
  j["config"] = report_to_json(ResidualReport{}, make_info("indicatrix", opt))["config"];
  j["congruence_measure"] = measure;
  j["verdict"] = measure <= opt.tol ? "pass" : "fail";
  write_output(opt, j.dump(2) + "\n");
  return measure <= opt.tol ? kExitPass : kExitFail;
}

void add_common(CLI::App* sub, Options& opt, bool needs_aux = false) {
  sub->add_option("--metric", opt.metric_path, "metric spec JSON")->required();
  if (needs_aux) sub->add_option("--aux", opt.aux_path, "auxiliary document (change or field)");
  sub->add_option("--samples", opt.samples, "sample count");
  sub->add_option("--seed", opt.seed, "RNG seed");
  sub->add_option("--tol", opt.tol, "verdict tolerance");
  sub->add_option("--output", opt.output_path, "output path (default stdout)");
  sub->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical projective-flatness checks for Finsler metrics"};
  app.require_subcommand(1);

  Options opt;
  auto* hamel = app.add_subcommand("check-hamel", "Hamel residual over sampled domain");
  add_common(hamel, opt);
  auto* param = app.add_subcommand("check-param", "parameter-preserving residual");
  add_common(param, opt);
  auto* rank = app.add_subcommand("check-rank", "Hessian rank and fundamental tensor");
  add_common(rank, opt);
  auto* randers = app.add_subcommand("check-randers", "Randers reduction identity");
  add_common(randers, opt);
  auto* minkowski = app.add_subcommand("check-minkowski", "Minkowski detection (two criteria)");
  add_common(minkowski, opt);
  auto* geodesic = app.add_subcommand("geodesic", "integrate one geodesic, emit CSV trace");
  add_common(geodesic, opt);
  geodesic->add_option("--x0", opt.x0, "initial base point (repeat per coordinate)");
  geodesic->add_option("--y0", opt.y0, "initial direction (repeat per coordinate)");
  geodesic->add_option("--T", opt.T, "integration horizon");
  geodesic->add_option("--steps", opt.steps, "fixed step count");
  auto* killing = app.add_subcommand("killing", "Killing-type residual for a vector field");
  add_common(killing, opt, /*needs_aux=*/true);
  killing->add_flag("--oracle", opt.run_oracle, "also run the flow oracle from --x0/--y0");
  killing->add_option("--x0", opt.x0, "oracle geodesic base point");
  killing->add_option("--y0", opt.y0, "oracle geodesic direction");
  killing->add_option("--epsilon", opt.epsilon, "oracle flow time");
  auto* terms = app.add_subcommand("terms-ab", "transformation identity of the Hamel residual");
  add_common(terms, opt, /*needs_aux=*/true);
  auto* search = app.add_subcommand("search-rectilinear", "least-squares rectilinear chart search");
  add_common(search, opt);
  search->add_option("--degree", opt.degree, "polynomial degree of the candidate map (2 or 3)");
  search->add_option("--iters", opt.iters, "iteration budget");
  auto* indicatrix = app.add_subcommand("indicatrix", "sampled indicatrix congruence at two points");
  add_common(indicatrix, opt);
  indicatrix->add_option("--p", opt.p, "first base point (repeat per coordinate)");
  indicatrix->add_option("--q", opt.q, "second base point (repeat per coordinate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (const char* env_seed = std::getenv("FINSLERLAB_SEED")) {
    try {
      opt.seed = std::stoull(env_seed);
    } catch (...) {
      std::cerr << "error: FINSLERLAB_SEED is not an integer\n";
      return kExitUsage;
    }
  }

  try {
    if (hamel->parsed()) return cmd_residual("check-hamel", opt);
    if (param->parsed()) return cmd_residual("check-param", opt);
    if (randers->parsed()) return cmd_residual("check-randers", opt);
    if (rank->parsed()) return cmd_check_rank(opt);
    if (minkowski->parsed()) return cmd_check_minkowski(opt);
    if (geodesic->parsed()) return cmd_geodesic(opt);
    if (killing->parsed()) return cmd_killing(opt);
    if (terms->parsed()) return cmd_terms_ab(opt);
    if (search->parsed()) return cmd_search(opt);
    if (indicatrix->parsed()) return cmd_indicatrix(opt);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
