#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "wavedecay/error.hpp"
#include "wavedecay/experiment.hpp"
#include "wavedecay/suites.hpp"

namespace fs = std::filesystem;
using namespace wavedecay;

namespace {

fs::path output_root(const std::string& flag, const ExperimentConfig* cfg) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("WAVEDECAY_OUT"); env && *env) return env;
  if (cfg && !cfg->output_dir.empty()) return cfg->output_dir;
  return "runs";
}

int simulate(const std::string& path, const std::string& out_flag, std::size_t parallel, double scale) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(path);
    if (!(scale > 0.0)) throw ConfigError("--resolution-scale", "must be positive");
    cfg.solver.h /= scale;
    for (double& h : cfg.matrix.h) h /= scale;
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  const fs::path root = output_root(out_flag, &cfg);
  const auto runs = expand_matrix(cfg);
  std::vector<RunOutcome> outcomes;
  try {
    outcomes = run_all(runs, parallel);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  int code = kExitOk;
  for (const auto& o : outcomes) {
    const fs::path dir = root / o.config.name;
    write_artifacts(o, dir);
    if (!o.complete) {
      std::cerr << o.config.name << ": numerical instability at step " << *o.unstable_step << "\n";
      code = kExitUnstable;
      continue;
    }
    std::cout << o.config.name << " (eta = " << format_number(o.summary["profile"]["eta"].get<double>())
              << ")\n";
    for (const auto& c : o.checks) {
      std::cout << "  " << c.name << ": " << c.status;
      if (c.status.rfind("skipped", 0) != 0) std::cout << " (" << format_number(c.value) << ")";
      std::cout << "\n";
    }
    if (!o.all_passed() && code == kExitOk) code = kExitCheckFailed;
    std::cout << "  -> " << dir.string() << "\n";
  }
  return code;
}

int verify(const std::string& suite, const std::string& out_flag, double scale) {
  SuiteReport rep;
  try {
    rep = verify_suite(suite, scale);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalidConfig;
  }
  for (const auto& c : rep.checks) {
    std::cout << (c.failed() ? "FAIL " : c.status == "pass" ? "PASS " : "SKIP ") << c.name;
    if (std::isfinite(c.value)) std::cout << "  value=" << format_number(c.value);
    if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
    std::cout << "\n";
  }
  const fs::path root = output_root(out_flag, nullptr);
  fs::create_directories(root);
  std::ofstream(root / ("verify-" + suite + ".json")) << rep.to_json().dump(2) << "\n";
  std::cout << suite << ": " << (rep.passed() ? "pass" : "fail") << "\n";
  return rep.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-equation local energy decay laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  std::size_t parallel = std::max(1u, std::thread::hardware_concurrency());
  double scale = 1.0;
  app.add_option("--out", out, "Output root (default: $WAVEDECAY_OUT, then the config, then ./runs)");
  app.add_option("--parallel", parallel, "Concurrent runs for scenario matrices")->check(CLI::PositiveNumber);
  app.add_option("--resolution-scale", scale, "Divide every mesh width by this factor");

  std::string config;
  auto* sim = app.add_subcommand("simulate", "Run an experiment config");
  sim->add_option("config", config, "Experiment config (JSON)")->required();

  std::string suite;
  auto* ver = app.add_subcommand("verify", "Run a verification battery");
  ver->add_option("suite", suite, "identities | spectral | gronwall | convergence | decay")->required();

  std::string dir;
  auto* rep = app.add_subcommand("report", "Summarise a run directory and write plot data");
  rep->add_option("dir", dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (*sim) return simulate(config, out, parallel, scale);
    if (*ver) return verify(suite, out, scale);
    std::string text;
    const int rc = report_run(dir, text);
    (rc == kExitOk ? std::cout : std::cerr) << text;
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
