#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path config(const std::string& name) { return fs::path(FINSLERLAB_CONFIG_DIR) / name; }

CliResult run_cli(const std::string& args, const std::string& env = {}) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "finslerlab_cli_tests";
  fs::create_directories(dir);
  fs::path out = dir / ("out" + std::to_string(counter));
  fs::path err = dir / ("err" + std::to_string(counter));
  ++counter;

  std::string cmd = env + (env.empty() ? "" : " ") + std::string(FINSLERLAB_CLI_PATH) + " " + args +
                    " > " + out.string() + " 2> " + err.string();
  int rc = std::system(cmd.c_str());
  CliResult r;
  r.status = WEXITSTATUS(rc);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check-hamel verdicts and exit codes") {
    auto pass = run_cli("check-hamel --metric " + config("klein.json").string() + " --samples 50");
    CHECK(pass.status == 0);
    auto j = nlohmann::json::parse(pass.out);
    CHECK(j["verdict"] == "pass");
    CHECK(j["aggregate_sup"].get<double>() < 1e-8);
    CHECK(j["config"]["seed"] == 42);
    CHECK(j["samples"].size() == 50);

    auto fail = run_cli("check-hamel --metric " + config("curved_riemannian.json").string() +
                        " --samples 50");
    CHECK(fail.status == 1);
    auto jf = nlohmann::json::parse(fail.out);
    CHECK(jf["verdict"] == "fail");
    CHECK(jf["note"].get<std::string>().find("not rectilinear in these coordinates") !=
          std::string::npos);
  }

  TEST_CASE("reports are byte-identical for identical configs") {
    std::string args = "check-hamel --metric " + config("funk.json").string() +
                       " --samples 40 --seed 7";
    auto a = run_cli(args);
    auto b = run_cli(args + " --threads 4");
    CHECK(a.status == 0);
    // thread count is part of the embedded config, so compare everything else
    auto ja = nlohmann::json::parse(a.out);
    auto jb = nlohmann::json::parse(b.out);
    ja["config"].erase("threads");
    jb["config"].erase("threads");
    CHECK(ja.dump() == jb.dump());

    auto c = run_cli(args);
    CHECK(a.out == c.out);
  }

  TEST_CASE("environment seed override") {
    std::string args = "check-param --metric " + config("pnorm4.json").string() + " --samples 20";
    auto with_env = run_cli(args, "FINSLERLAB_SEED=99");
    CHECK(with_env.status == 0);
    auto j = nlohmann::json::parse(with_env.out);
    CHECK(j["config"]["seed"] == 99);

    auto bad = run_cli(args, "FINSLERLAB_SEED=notanumber");
    CHECK(bad.status == 2);
  }

  TEST_CASE("csv residual output") {
    auto r = run_cli("check-hamel --metric " + config("euclidean.json").string() +
                     " --samples 5 --format csv");
    CHECK(r.status == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x1,x2,y1,y2,r1,r2,sup");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
  }

  TEST_CASE("geodesic emits a csv trace and a summary") {
    fs::path trace = fs::temp_directory_path() / "finslerlab_cli_tests" / "trace.csv";
    auto r = run_cli("geodesic --metric " + config("funk.json").string() +
                     " --x0 0 --x0 0 --y0 1 --y0 0 --T 0.5 --steps 64 --output " + trace.string());
    CHECK(r.status == 0);
    std::istringstream in(slurp(trace));
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x1,x2,y1,y2,F");
    auto j = nlohmann::json::parse(r.err);
    CHECK(j["straightness"].get<double>() < 1e-7);
    CHECK(j["affine_defect"].get<double>() > 1e-3);
    CHECK(j["speed_drift"].get<double>() < 1e-6);

    auto missing = run_cli("geodesic --metric " + config("funk.json").string() + " --T 0.5");
    CHECK(missing.status == 2);
  }

  TEST_CASE("check-rank, check-minkowski and domain preconditions") {
    auto rank = run_cli("check-rank --metric " + config("pnorm4.json").string() + " --samples 30");
    CHECK(rank.status == 0);
    auto jr = nlohmann::json::parse(rank.out);
    CHECK(jr["expected_rank"] == 1);
    CHECK(jr["rank_violations"] == 0);

    auto mink = run_cli("check-minkowski --metric " + config("randers_const.json").string() +
                        " --samples 30");
    CHECK(mink.status == 0);
    auto jm = nlohmann::json::parse(mink.out);
    CHECK(jm["criteria_agree"] == true);

    auto bounded = run_cli("check-minkowski --metric " + config("klein.json").string());
    CHECK(bounded.status == 2);
    CHECK(bounded.err.find("usage error") != std::string::npos);

    auto curved = run_cli("check-minkowski --metric " + config("curved_riemannian.json").string() +
                          " --samples 30");
    CHECK(curved.status == 1);
  }

  TEST_CASE("check-randers reports identity and closedness") {
    auto r = run_cli("check-randers --metric " + config("randers_nonclosed.json").string() +
                     " --samples 30");
    CHECK(r.status == 0);  // the reduction identity holds regardless of closedness
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["aggregate_sup"].get<double>() < 1e-8);
    CHECK(j["closedness_defect"].get<double>() == doctest::Approx(0.1));
    CHECK(j["one_form_closed"] == false);

    auto closed = run_cli("check-randers --metric " + config("randers_closed.json").string() +
                          " --samples 30");
    auto jc = nlohmann::json::parse(closed.out);
    CHECK(jc["one_form_closed"] == true);

    auto wrong = run_cli("check-randers --metric " + config("euclidean.json").string());
    CHECK(wrong.status == 2);
  }

  TEST_CASE("killing and terms-ab require aux documents") {
    auto k = run_cli("killing --metric " + config("euclidean.json").string() + " --aux " +
                     config("rotation_field.json").string() + " --samples 30");
    CHECK(k.status == 0);

    auto kf = run_cli("killing --metric " + config("euclidean.json").string() + " --aux " +
                      config("squares_field.json").string() + " --samples 30 --seed 5");
    CHECK(kf.status == 1);

    auto noaux = run_cli("killing --metric " + config("euclidean.json").string());
    CHECK(noaux.status == 2);

    auto oracle = run_cli("killing --metric " + config("euclidean.json").string() + " --aux " +
                          config("rotation_field.json").string() +
                          " --samples 20 --oracle --x0 0.1 --x0 -0.3 --y0 0.8 --y0 0.6");
    CHECK(oracle.status == 0);
    auto jo = nlohmann::json::parse(oracle.out);
    CHECK(jo["flow_oracle"]["geodesy_defect"].get<double>() < 1e-6);

    auto t = run_cli("terms-ab --metric " + config("euclidean.json").string() + " --aux " +
                     config("quadratic_change.json").string() + " --samples 30 --tol 1e-7");
    CHECK(t.status == 0);
  }

  TEST_CASE("indicatrix congruence") {
    auto same = run_cli("indicatrix --metric " + config("pnorm4.json").string() +
                        " --p 0 --p 0 --q 0.5 --q 0.2 --samples 40");
    CHECK(same.status == 0);

    auto diff = run_cli("indicatrix --metric " + config("klein.json").string() +
                        " --p 0 --p 0 --q 0.5 --q 0 --samples 40");
    CHECK(diff.status == 1);
    auto j = nlohmann::json::parse(diff.out);
    CHECK(j["congruence_measure"].get<double>() > 0.1);
  }

  TEST_CASE("search-rectilinear on an already rectilinear metric") {
    auto r = run_cli("search-rectilinear --metric " + config("euclidean.json").string() +
                     " --samples 70 --degree 2 --tol 1e-8");
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["achieved_residual"].get<double>() < 1e-8);
    CHECK(j["converged"] == true);
  }

  TEST_CASE("malformed inputs are diagnosed with status 2") {
    fs::path dir = fs::temp_directory_path() / "finslerlab_cli_tests";
    fs::create_directories(dir);
    fs::path bad = dir / "bad.json";
    std::ofstream(bad) << R"({"dimension": 2, "family": "euclidean", "oops": 3})";
    auto r = run_cli("check-hamel --metric " + bad.string());
    CHECK(r.status == 2);
    CHECK(r.err.find("oops") != std::string::npos);

    fs::path garbage = dir / "garbage.json";
    std::ofstream(garbage) << "not json at all";
    auto g = run_cli("check-hamel --metric " + garbage.string());
    CHECK(g.status == 2);

    auto missing = run_cli("check-hamel --metric /nonexistent/nope.json");
    CHECK(missing.status == 2);

    auto nocmd = run_cli("");
    CHECK(nocmd.status == 2);
  }
}
