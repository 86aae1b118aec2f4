#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "wavedecay/error.hpp"
#include "wavedecay/experiment.hpp"

using namespace wavedecay;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

json small_config() {
  return json::parse(R"({
    "schema_version": 1,
    "name": "small",
    "profile": {"dim_mode": "line-1d", "family": "radial-bump", "L": 1.0, "a": 0.1},
    "data": {"family": "bump", "u0_amplitude": 1.0, "u1_amplitude": 0.5},
    "solver": {"h": 0.02, "T_final": 6.0, "sample_stride": 5},
    "checks": {"R_list": [2.0], "conservation": {}, "morawetz": {}, "weighted_energy": {},
               "pairing_constant": {}, "antiderivative": {}}
  })");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string s; std::getline(in, s);) ++n;
  return n;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("wavedecay-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string field_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("config round trip") {
    const auto cfg = parse_config(small_config());
    CHECK(cfg.profile.mode == DimMode::Line1D);
    CHECK(cfg.checks.conservation_tol.value() == 1e-3);
    CHECK(cfg.checks.pairing_constant);
    CHECK_FALSE(cfg.checks.decay);
    const auto again = parse_config(to_json(cfg));
    CHECK(to_json(again) == to_json(cfg));
    CHECK(config_digest(again) == config_digest(cfg));
    auto other = cfg;
    other.solver.h = 0.01;
    CHECK(config_digest(other) != config_digest(cfg));
  }

  TEST_CASE("config errors name the offending field") {
    auto j = small_config();
    j["checks"]["R_list"] = {1.0};
    CHECK(field_of(j) == "checks.R_list");
    try {
      parse_config(j);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("R > L") != std::string::npos);
    }

    j = small_config();
    j["solver"]["dt"] = 0.1;
    CHECK(field_of(j) == "solver.dt");
    j = small_config();
    j["schema_version"] = 2;
    CHECK(field_of(j) == "schema_version");
    j = small_config();
    j.erase("schema_version");
    CHECK(field_of(j) == "schema_version");
    j = small_config();
    j["profile"]["a"] = -1.5;
    CHECK(field_of(j) == "profile.a");
    j = small_config();
    j["solver"]["cfl"] = 1.2;
    CHECK(field_of(j) == "solver.cfl");
    j = small_config();
    j["solver"]["h"] = "fine";
    CHECK(field_of(j) == "solver.h");
    j = small_config();
    j["data"]["family"] = "dipole";
    j["profile"]["dim_mode"] = "radial-3d";
    CHECK(field_of(j) == "data.family");
    j = small_config();
    j["output"] = {{"formats", {"csv"}}};
    CHECK(field_of(j) == "output.formats");
    j = small_config();
    j["name"] = "a/b";
    CHECK(field_of(j) == "name");
  }

  TEST_CASE("load_config reports unreadable files") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    TempDir d("bad");
    std::ofstream(d.path / "x.json") << "{not json";
    CHECK_THROWS_AS(load_config(d.path / "x.json"), ConfigError);
  }

  TEST_CASE("matrix expansion") {
    auto j = small_config();
    j["matrix"] = {{"a", {0.0, 0.1, -0.2}}, {"h", {0.02, 0.01}}};
    const auto cfg = parse_config(j);
    const auto runs = expand_matrix(cfg);
    REQUIRE(runs.size() == 6);
    CHECK(runs.front().name != runs.back().name);
    for (const auto& r : runs) CHECK(r.matrix.empty());
    CHECK(runs[0].profile.a == 0.0);
    CHECK(runs[0].solver.h == 0.02);
    CHECK(runs[1].solver.h == 0.01);
    CHECK(expand_matrix(parse_config(small_config())).size() == 1);
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  }

  TEST_CASE("a small run passes its identity checks") {
    const auto out = run_experiment(parse_config(small_config()));
    CHECK(out.complete);
    CHECK(out.all_passed());
    CHECK(out.checks.size() == 5);
    CHECK(out.summary["profile"]["eta"].get<double>() > 0.0);
    CHECK(out.record.entries.size() > 10);
  }

  TEST_CASE("T_final = 0 produces a single sample") {
    auto j = small_config();
    j["solver"]["T_final"] = 0.0;
    const auto out = run_experiment(parse_config(j));
    CHECK(out.complete);
    CHECK(out.record.entries.size() == 1);
    CHECK(out.all_passed());
  }

  TEST_CASE("eta >= 1 skips the decay and integral-inequality checks") {
    auto j = small_config();
    j["profile"]["a"] = -0.5;
    j["checks"] = {{"R_list", {2.0}}, {"decay", json::object()}, {"gronwall", json::object()}};
    const auto out = run_experiment(parse_config(j));
    REQUIRE(out.checks.size() == 2);
    for (const auto& c : out.checks) CHECK(c.status.rfind("skipped:", 0) == 0);
    CHECK(out.all_passed());
  }

  TEST_CASE("artifacts are byte-identical across runs and parallel order") {
    TempDir d("artifacts");
    auto j = small_config();
    j["matrix"] = {{"a", {0.0, 0.1}}};
    const auto runs = expand_matrix(parse_config(j));
    const auto seq = run_all(runs, 1);
    const auto par = run_all(runs, 4);
    REQUIRE(seq.size() == 2);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      write_artifacts(seq[i], d.path / "seq" / seq[i].config.name);
      write_artifacts(par[i], d.path / "par" / par[i].config.name);
      for (const char* f : {"config.json", "diagnostics.csv", "summary.json"}) {
        const auto a = slurp(d.path / "seq" / seq[i].config.name / f);
        CHECK(!a.empty());
        CHECK(a == slurp(d.path / "par" / par[i].config.name / f));
      }
      CHECK(fs::exists(d.path / "seq" / seq[i].config.name / "timing.json"));
    }
    const auto first = slurp(d.path / "seq" / seq[0].config.name / "diagnostics.csv");
    CHECK(first.substr(0, first.find('\n')) == csv_header({2.0}));
  }

  TEST_CASE("report writes four plot files of equal length") {
    TempDir d("report");
    const auto out = run_experiment(parse_config(small_config()));
    write_artifacts(out, d.path / "run");
    std::string text;
    REQUIRE(report_run(d.path / "run", text) == kExitOk);
    CHECK(!text.empty());
    const char* files[] = {"plot_local_energy.dat", "plot_scaled_local_energy.dat",
                           "plot_morawetz_residual.dat", "plot_weighted_exterior.dat"};
    const std::size_t n = lines(d.path / "run" / files[0]);
    CHECK(n > 10);
    std::vector<std::string> before;
    for (const char* f : files) {
      CHECK(lines(d.path / "run" / f) == n);
      before.push_back(slurp(d.path / "run" / f));
    }
    std::string again;
    report_run(d.path / "run", again);
    CHECK(again == text);
    for (std::size_t i = 0; i < 4; ++i) CHECK(slurp(d.path / "run" / files[i]) == before[i]);
  }

  TEST_CASE("report on a missing or empty run is incomplete") {
    TempDir d("empty");
    std::string text;
    CHECK(report_run(d.path, text) == kExitIncomplete);
    CHECK(report_run(d.path / "missing", text) == kExitIncomplete);
  }

  TEST_CASE("verification batteries") {
    CHECK_THROWS_AS(verify_suite("nonsense"), ConfigError);
    CHECK(suite_names().size() == 5);
    const auto g = verify_suite("gronwall");
    CHECK(g.passed());
    CHECK(g.to_json()["suite"] == "gronwall");
  }

  TEST_CASE("number formatting round trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(2.0) == "2");
  }
}
