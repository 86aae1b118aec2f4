#include "wavedecay/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "wavedecay/error.hpp"
#include "wavedecay/spectral.hpp"

namespace wavedecay {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError(path.empty() ? k : path + "." + k, "unknown key");
}

template <class T>
T get(const json& obj, const char* key, const std::string& path, T def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  const std::string where = path.empty() ? key : path + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(where, "expected a boolean");
  } else if constexpr (std::is_arithmetic_v<T>) {
    if (!v.is_number()) throw ConfigError(where, "expected a number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(where, "expected a string");
  }
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where, "wrong type");
  }
}

std::vector<double> get_list(const json& obj, const char* key, const std::string& path,
                             std::vector<double> def = {}) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  const std::string where = path + "." + key;
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(where, "expected a list of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where, "expected a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::optional<double> tol_of(const json& checks, const char* key, double def) {
  if (!checks.contains(key)) return std::nullopt;
  const json& c = checks.at(key);
  const std::string path = std::string("checks.") + key;
  if (c.is_boolean()) {
    if (!c.get<bool>()) return std::nullopt;
    return def;
  }
  check_keys(c, path, {"tol", "plateau_tol"});
  return get<double>(c, "tol", path, def);
}

bool enabled(const json& checks, const char* key) {
  if (!checks.contains(key)) return false;
  const json& c = checks.at(key);
  if (c.is_boolean()) return c.get<bool>();
  return true;
}

ProfileFamily parse_family(const std::string& s) {
  if (s == "constant") return ProfileFamily::Constant;
  if (s == "radial-bump" || s == "radial_bump") return ProfileFamily::RadialBump;
  throw ConfigError("profile.family", "unknown profile family '" + s +
                                          "' (expected constant or radial-bump)");
}

std::string family_name(ProfileFamily f) {
  switch (f) {
    case ProfileFamily::Constant: return "constant";
    case ProfileFamily::RadialBump: return "radial-bump";
    case ProfileFamily::Custom: return "custom";
  }
  return "custom";
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  for (int p = 1; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "", {"schema_version", "name", "profile", "data", "solver", "checks", "matrix",
                     "output"});
  if (!j.contains("schema_version")) throw ConfigError("schema_version", "missing");
  if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kSchemaVersion)
    throw ConfigError("schema_version", "unsupported (expected " + std::to_string(kSchemaVersion) + ")");
  ExperimentConfig cfg;
  cfg.name = get<std::string>(j, "name", "", cfg.name);
  if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("name", "must be a non-empty name without path separators");

  if (!j.contains("profile")) throw ConfigError("profile", "missing");
  const json& p = j.at("profile");
  check_keys(p, "profile", {"dim_mode", "family", "L", "a"});
  try {
    cfg.profile.mode = parse_dim_mode(get<std::string>(p, "dim_mode", "profile", "line-1d"));
  } catch (const PreconditionError& e) {
    throw ConfigError("profile.dim_mode", e.what());
  }
  cfg.profile.family = parse_family(get<std::string>(p, "family", "profile", "constant"));
  cfg.profile.L = get<double>(p, "L", "profile", 1.0);
  cfg.profile.a = get<double>(p, "a", "profile", 0.0);

  if (j.contains("data")) {
    const json& d = j.at("data");
    check_keys(d, "data", {"family", "radius", "u0_amplitude", "u1_amplitude", "center", "offset",
                           "power", "project_moment_zero"});
    cfg.data.family = get<std::string>(d, "family", "data", cfg.data.family);
    cfg.data.radius = get<double>(d, "radius", "data", cfg.data.radius);
    cfg.data.u0_amplitude = get<double>(d, "u0_amplitude", "data", cfg.data.u0_amplitude);
    cfg.data.u1_amplitude = get<double>(d, "u1_amplitude", "data", cfg.data.u1_amplitude);
    cfg.data.offset = get<double>(d, "offset", "data", cfg.data.offset);
    cfg.data.power = get<int>(d, "power", "data", cfg.data.power);
    cfg.data.project_moment_zero =
        get<bool>(d, "project_moment_zero", "data", cfg.data.project_moment_zero);
    const auto c = get_list(d, "center", "data", {0.0, 0.0});
    if (c.empty() || c.size() > 2) throw ConfigError("data.center", "expected 1 or 2 coordinates");
    cfg.data.center = {c[0], c.size() > 1 ? c[1] : 0.0};
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, "solver", {"cfl", "h", "T_final", "sample_stride", "extent_rule", "memory_cap_mb"});
    cfg.solver.cfl = get<double>(s, "cfl", "solver", cfg.solver.cfl);
    cfg.solver.h = get<double>(s, "h", "solver", cfg.solver.h);
    cfg.solver.T_final = get<double>(s, "T_final", "solver", cfg.solver.T_final);
    const double stride = get<double>(s, "sample_stride", "solver", double(cfg.solver.sample_stride));
    if (!(stride >= 1.0) || stride != std::floor(stride))
      throw ConfigError("solver.sample_stride", "must be a positive integer");
    cfg.solver.sample_stride = std::size_t(stride);
    cfg.solver.extent_rule = get<double>(s, "extent_rule", "solver", cfg.solver.extent_rule);
    const double cap = get<double>(s, "memory_cap_mb", "solver", double(cfg.solver.memory_cap_mb));
    if (!(cap >= 1.0)) throw ConfigError("solver.memory_cap_mb", "must be >= 1");
    cfg.solver.memory_cap_mb = std::size_t(cap);
  }

  ChecksSpec& ck = cfg.checks;
  if (j.contains("checks")) {
    const json& c = j.at("checks");
    check_keys(c, "checks", {"R_list", "conservation", "morawetz", "weighted_energy", "pairing_constant",
                             "antiderivative", "decay", "gronwall", "spectral"});
    ck.R_list = get_list(c, "R_list", "checks");
    ck.conservation_tol = tol_of(c, "conservation", 1e-3);
    ck.morawetz_tol = tol_of(c, "morawetz", 1e-2);
    ck.weighted_energy_tol = tol_of(c, "weighted_energy", 0.02);
    ck.pairing_constant = enabled(c, "pairing_constant");
    if (ck.pairing_constant && c.at("pairing_constant").is_object()) check_keys(c.at("pairing_constant"), "checks.pairing_constant", {});
    ck.antiderivative_tol = tol_of(c, "antiderivative", 1e-2);
    if (ck.antiderivative_tol && c.at("antiderivative").is_object())
      ck.plateau_tol = get<double>(c.at("antiderivative"), "plateau_tol", "checks.antiderivative", 0.05);
    ck.decay = enabled(c, "decay");
    if (ck.decay && c.at("decay").is_object()) {
      const json& d = c.at("decay");
      check_keys(d, "checks.decay", {"window", "growth_tol"});
      const auto w = get_list(d, "window", "checks.decay", {ck.window_start, ck.window_end});
      if (w.size() != 2) throw ConfigError("checks.decay.window", "expected [start, end] fractions of T_final");
      ck.window_start = w[0];
      ck.window_end = w[1];
      ck.growth_tol = get<double>(d, "growth_tol", "checks.decay", ck.growth_tol);
    }
    ck.gronwall = enabled(c, "gronwall");
    if (ck.gronwall && c.at("gronwall").is_object()) {
      check_keys(c.at("gronwall"), "checks.gronwall", {"t0"});
      ck.gronwall_t0 = get<double>(c.at("gronwall"), "t0", "checks.gronwall", ck.gronwall_t0);
    }
    ck.spectral = enabled(c, "spectral");
    if (ck.spectral && c.at("spectral").is_object()) {
      check_keys(c.at("spectral"), "checks.spectral", {"gamma", "theta"});
      ck.gamma = get<double>(c.at("spectral"), "gamma", "checks.spectral", ck.gamma);
      ck.theta = get_list(c.at("spectral"), "theta", "checks.spectral", ck.theta);
    }
  }
  if (ck.R_list.empty()) ck.R_list = {cfg.profile.L + 1.0};

  if (j.contains("matrix")) {
    const json& m = j.at("matrix");
    check_keys(m, "matrix", {"a", "L", "h"});
    cfg.matrix.a = get_list(m, "a", "matrix");
    cfg.matrix.L = get_list(m, "L", "matrix");
    cfg.matrix.h = get_list(m, "h", "matrix");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"directory", "formats"});
    cfg.output_dir = get<std::string>(o, "directory", "output", "");
    if (o.contains("formats")) {
      if (!o.at("formats").is_array()) throw ConfigError("output.formats", "expected a list");
      cfg.write_csv = false;
      bool has_json = false;
      for (const auto& f : o.at("formats")) {
        if (!f.is_string()) throw ConfigError("output.formats", "expected strings");
        const auto s = f.get<std::string>();
        if (s == "csv")
          cfg.write_csv = true;
        else if (s == "json")
          has_json = true;
        else
          throw ConfigError("output.formats", "unknown format '" + s + "' (csv, json)");
      }
      if (!has_json) throw ConfigError("output.formats", "json is required (run summary)");
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate_config(const ExperimentConfig& cfg) {
  const auto& p = cfg.profile;
  if (!(p.L > 0.0)) throw ConfigError("profile.L", "L must be positive (A-2)");
  if (p.family == ProfileFamily::RadialBump && !(p.a > -1.0))
    throw ConfigError("profile.a", "a must exceed -1 so that c > 0 (A-1)");
  for (double a : cfg.matrix.a)
    if (!(a > -1.0)) throw ConfigError("matrix.a", "a must exceed -1 so that c > 0 (A-1)");
  for (double L : cfg.matrix.L)
    if (!(L > 0.0)) throw ConfigError("matrix.L", "L must be positive (A-2)");
  for (double h : cfg.matrix.h)
    if (!(h > 0.0)) throw ConfigError("matrix.h", "h must be positive");

  const auto& d = cfg.data;
  if (d.family != "bump" && d.family != "travelling" && d.family != "dipole")
    throw ConfigError("data.family", "unknown data family '" + d.family +
                                         "' (bump, travelling, dipole)");
  if (!(d.radius > 0.0)) throw ConfigError("data.radius", "must be positive");
  if (d.power < 2) throw ConfigError("data.power", "must be >= 2");
  if (d.family == "travelling" && p.mode != DimMode::Line1D)
    throw ConfigError("data.family", "travelling data is line-1d only");
  if (d.family == "dipole" && p.mode == DimMode::Radial3D)
    throw ConfigError("data.family", "dipole data is not radial");
  if (d.project_moment_zero && p.mode != DimMode::Plane2D)
    throw ConfigError("data.project_moment_zero", "moment projection is plane-2d only");

  const auto& s = cfg.solver;
  if (!(s.cfl > 0.0 && s.cfl <= 0.9)) throw ConfigError("solver.cfl", "must lie in (0, 0.9]");
  if (!(s.h > 0.0)) throw ConfigError("solver.h", "must be positive");
  if (!(s.T_final >= 0.0)) throw ConfigError("solver.T_final", "must be non-negative");
  if (!(s.extent_rule >= 1.0)) throw ConfigError("solver.extent_rule", "must be >= 1");

  const auto& c = cfg.checks;
  std::vector<double> Ls = cfg.matrix.L.empty() ? std::vector<double>{p.L} : cfg.matrix.L;
  const double Lmax = *std::max_element(Ls.begin(), Ls.end());
  for (double R : c.R_list)
    if (!(R > Lmax))
      throw ConfigError("checks.R_list", "R = " + format_number(R) + " violates R > L (L = " +
                                             format_number(Lmax) + ")");
  if (c.conservation_tol && !(*c.conservation_tol > 0.0))
    throw ConfigError("checks.conservation.tol", "must be positive");
  if (c.morawetz_tol && !(*c.morawetz_tol > 0.0))
    throw ConfigError("checks.morawetz.tol", "must be positive");
  if (c.weighted_energy_tol && !(*c.weighted_energy_tol >= 0.0))
    throw ConfigError("checks.weighted_energy.tol", "must be non-negative");
  if (c.antiderivative_tol && !(*c.antiderivative_tol > 0.0))
    throw ConfigError("checks.antiderivative.tol", "must be positive");
  if (!(c.window_start >= 0.0 && c.window_start < c.window_end && c.window_end <= 1.0))
    throw ConfigError("checks.decay.window", "need 0 <= start < end <= 1 (fractions of T_final)");
  if (!(c.growth_tol >= 1.0)) throw ConfigError("checks.decay.growth_tol", "must be >= 1");
  if (!(c.gronwall_t0 > 0.0 && c.gronwall_t0 <= 1.0))
    throw ConfigError("checks.gronwall.t0", "must lie in (0, 1] (fraction of T_final)");
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) throw ConfigError("checks.spectral.gamma", "must lie in [0, 1]");
  for (double th : c.theta)
    if (!(th >= 0.0)) throw ConfigError("checks.spectral.theta", "must be non-negative");
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = cfg.name;
  j["profile"] = {{"dim_mode", std::string(to_string(cfg.profile.mode))},
                  {"family", family_name(cfg.profile.family)},
                  {"L", cfg.profile.L},
                  {"a", cfg.profile.a}};
  j["data"] = {{"family", cfg.data.family},
               {"radius", cfg.data.radius},
               {"u0_amplitude", cfg.data.u0_amplitude},
               {"u1_amplitude", cfg.data.u1_amplitude},
               {"center", {cfg.data.center.x, cfg.data.center.y}},
               {"offset", cfg.data.offset},
               {"power", cfg.data.power},
               {"project_moment_zero", cfg.data.project_moment_zero}};
  j["solver"] = {{"cfl", cfg.solver.cfl},
                 {"h", cfg.solver.h},
                 {"T_final", cfg.solver.T_final},
                 {"sample_stride", cfg.solver.sample_stride},
                 {"extent_rule", cfg.solver.extent_rule},
                 {"memory_cap_mb", cfg.solver.memory_cap_mb}};
  const auto& c = cfg.checks;
  json checks;
  checks["R_list"] = c.R_list;
  if (c.conservation_tol) checks["conservation"] = {{"tol", *c.conservation_tol}};
  if (c.morawetz_tol) checks["morawetz"] = {{"tol", *c.morawetz_tol}};
  if (c.weighted_energy_tol) checks["weighted_energy"] = {{"tol", *c.weighted_energy_tol}};
  if (c.pairing_constant) checks["pairing_constant"] = json::object();
  if (c.antiderivative_tol)
    checks["antiderivative"] = {{"tol", *c.antiderivative_tol}, {"plateau_tol", c.plateau_tol}};
  if (c.decay)
    checks["decay"] = {{"window", {c.window_start, c.window_end}}, {"growth_tol", c.growth_tol}};
  if (c.gronwall) checks["gronwall"] = {{"t0", c.gronwall_t0}};
  if (c.spectral) checks["spectral"] = {{"gamma", c.gamma}, {"theta", c.theta}};
  j["checks"] = checks;
  if (!cfg.matrix.empty()) {
    json m = json::object();
    if (!cfg.matrix.a.empty()) m["a"] = cfg.matrix.a;
    if (!cfg.matrix.L.empty()) m["L"] = cfg.matrix.L;
    if (!cfg.matrix.h.empty()) m["h"] = cfg.matrix.h;
    j["matrix"] = m;
  }
  json out = {{"formats", cfg.write_csv ? json{"csv", "json"} : json{"json"}}};
  if (!cfg.output_dir.empty()) out["directory"] = cfg.output_dir;
  j["output"] = out;
  return j;
}

std::vector<ExperimentConfig> expand_matrix(const ExperimentConfig& cfg) {
  if (cfg.matrix.empty()) return {cfg};
  const auto as = cfg.matrix.a.empty() ? std::vector<double>{cfg.profile.a} : cfg.matrix.a;
  const auto Ls = cfg.matrix.L.empty() ? std::vector<double>{cfg.profile.L} : cfg.matrix.L;
  const auto hs = cfg.matrix.h.empty() ? std::vector<double>{cfg.solver.h} : cfg.matrix.h;
  std::vector<ExperimentConfig> out;
  std::size_t idx = 0;
  for (double a : as)
    for (double L : Ls)
      for (double h : hs) {
        ExperimentConfig c = cfg;
        c.matrix = {};
        c.profile.a = a;
        c.profile.L = L;
        c.solver.h = h;
        char prefix[16];
        std::snprintf(prefix, sizeof prefix, "%03zu", idx++);
        c.name = cfg.name + "-" + prefix + "_a" + format_number(a) + "_L" + format_number(L) +
                 "_h" + format_number(h);
        out.push_back(std::move(c));
      }
  return out;
}

std::string config_digest(const ExperimentConfig& cfg) {
  const std::string s = to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool RunOutcome::all_passed() const {
  if (!complete) return false;
  return std::none_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.failed(); });
}

namespace {

CheckOutcome skipped(const std::string& name, const std::string& reason) {
  return {name, "skipped:" + reason, 0.0, 0.0, ""};
}

CheckOutcome verdict(const std::string& name, bool ok, double value, double threshold,
                     std::string detail = "") {
  return {name, ok ? "pass" : "fail", value, threshold, std::move(detail)};
}

json check_json(const CheckOutcome& c) {
  json j = {{"name", c.name}, {"status", c.status}};
  if (c.status.rfind("skipped", 0) != 0) {
    j["value"] = num(c.value);
    j["threshold"] = num(c.threshold);
  }
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

json fit_json(const DecayFit& f) {
  json j = {{"model", to_string(f.model)}, {"ok", f.ok}, {"window", {f.t_start, f.t_end}},
            {"used", f.used}, {"excluded", f.excluded}};
  if (f.ok) {
    j["A"] = num(f.A);
    j["p"] = num(f.p);
    j["rss"] = num(f.rss);
  } else {
    j["reason"] = f.reason;
  }
  return j;
}

// u1 / c^2 sampled on a padded cube for the weighted Fourier inequalities.
SpectralSample sample_weight(const InitialData& data, const WavespeedProfile& profile) {
  const int dim = space_dim(data.mode);
  const double reach = std::max(data.u1.reach(data.mode), 1e-3);
  const double X = 4.0 * reach;
  const std::size_t n = dim == 3 ? 96 : 128;
  const double h = 2.0 * X / double(n);
  const DimMode m = data.mode;
  auto fn = [&](const std::array<double, 3>& x) {
    double r = 0.0;
    Coord p{};
    if (m == DimMode::Radial3D) {
      r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      p = {r, 0.0};
    } else {
      p = {x[0], x[1]};
      r = radius(p, m);
    }
    const double c = profile.speed(r);
    return data.u1(p, m) / (c * c);
  };
  return fourier_transform(dim, n, h, sample_cube(dim, n, h, fn));
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (!cfg.matrix.empty()) throw ConfigError("matrix", "expand the matrix before running");
  const auto wall0 = std::chrono::steady_clock::now();
  RunOutcome out;
  out.config = cfg;

  WavespeedProfile profile;
  InitialData data;
  try {
    profile = make_profile(cfg.profile.mode, cfg.profile.family, cfg.profile.L, cfg.profile.a);
    data = make_data(cfg.profile.mode, cfg.data);
    if (cfg.data.project_moment_zero) data = project_moment_zero(data, profile);
  } catch (const PreconditionError& e) {
    throw ConfigError("profile/data", e.what());
  }
  const auto& ck = cfg.checks;
  const DataNorms norms = init_data_norms(data, profile, ck.gamma);
  const EtaReport eta = compute_eta(profile);

  DiagnosticsRecorder recorder(profile, ck.R_list);
  AntiderivativeTracker tracker(data);
  std::vector<Observer*> observers{&recorder};
  if (ck.antiderivative_tol) observers.push_back(&tracker);

  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["name"] = cfg.name;
  summary["config_digest"] = config_digest(cfg);
  summary["profile"] = {{"dim_mode", std::string(to_string(profile.mode))},
                        {"family", family_name(profile.family)},
                        {"L", profile.L},
                        {"a", profile.a},
                        {"c_sup", profile.c_sup},
                        {"c_m", profile.c_m},
                        {"inv_c_sup", profile.inv_c_sup},
                        {"grad_c_sup", profile.grad_c_sup},
                        {"eta", profile.eta},
                        {"eta_in_hypothesis", eta.applicable}};
  summary["data_norms"] = {{"I0_sq", norms.I0_sq},          {"J0_sq", norms.J0_sq},
                           {"moment", norms.moment},        {"l2_u1", norms.l2_u1},
                           {"l1_u1", norms.l1_u1},          {"l1_gamma_u1", norms.l1_gamma_u1},
                           {"l2_cinv_u0", norms.l2_cinv_u0}, {"l2_u0", norms.l2_u0},
                           {"energy", norms.energy},        {"gamma", ck.gamma}};

  RunResult rr;
  try {
    rr = run(data, profile, cfg.solver, observers);
    out.complete = true;
  } catch (const InstabilityError& e) {
    out.unstable_step = e.step();
    out.complete = false;
  } catch (const ResourceError& e) {
    throw ConfigError("solver.h", e.what());
  }
  out.record = recorder.take();
  DiagnosticsRecord& rec = out.record;
  morawetz_residual(rec);

  if (out.complete) {
    summary["discretization"] = {{"h", rr.disc.grid.h},
                                 {"dt", rr.disc.dt},
                                 {"steps", rr.disc.steps},
                                 {"points_per_axis", rr.disc.grid.n},
                                 {"extent", rr.disc.grid.extent},
                                 {"samples", rr.samples}};
    out.steps = rr.disc.steps;
  } else {
    summary["instability"] = {{"step", *out.unstable_step}};
  }

  const auto& entries = rec.entries;
  const double E0 = entries.empty() ? 0.0 : entries.front().E_u;
  summary["initial"] = {{"E_u", E0},
                        {"pair_ut_u", entries.empty() ? 0.0 : entries.front().pair_ut_u},
                        {"pair_ut_xgrad", entries.empty() ? 0.0 : entries.front().pair_ut_xgrad},
                        {"initial_pairing", initial_pairing(rec)}};

  auto& checks = out.checks;
  json metrics = json::object();
  const double T = cfg.solver.T_final;

  if (ck.conservation_tol) {
    const double drift = conservation_drift(rec);
    metrics["conservation_drift"] = drift;
    checks.push_back(verdict("conservation", drift <= *ck.conservation_tol, drift, *ck.conservation_tol));
  }
  if (ck.morawetz_tol) {
    double worst = 0.0;
    for (const auto& e : entries) {
      if (!(e.t > 0.0) || !(e.E_u > 0.0)) continue;
      worst = std::max(worst, std::abs(e.morawetz_residual) / (e.t * e.E_u));
    }
    metrics["morawetz_max_ratio"] = worst;
    checks.push_back(verdict("morawetz", worst <= *ck.morawetz_tol, worst, *ck.morawetz_tol,
                             "max |residual| / (t E_u)"));
  }
  if (ck.weighted_energy_tol) {
    double worst = 0.0;
    bool ok = true;
    for (double R : ck.R_list) {
      const auto r = weighted_energy_check(rec, norms.I0_sq, profile.L, R, *ck.weighted_energy_tol);
      worst = std::max(worst, r.max_ratio);
      ok = ok && r.passed;
    }
    metrics["weighted_energy_max_ratio"] = worst;
    checks.push_back(verdict("weighted_energy", ok, worst, 1.0 + *ck.weighted_energy_tol,
                             "max weighted exterior energy / ((2 + L) I0^2)"));
  }
  if (ck.pairing_constant) {
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < ck.R_list.size(); ++k)
      for (const auto& e : entries) {
        if (!(e.t > ck.R_list[k])) continue;
        worst = std::max(worst, pairing_constant(e, k, ck.R_list[k], norms.I0_sq, profile.c_m));
        ++used;
      }
    if (used == 0) {
      checks.push_back(skipped("pairing_constant", "no samples with t > R"));
    } else {
      metrics["pairing_implied_constant"] = num(worst);
      checks.push_back(verdict("pairing_constant", std::isfinite(worst), worst,
                               std::numeric_limits<double>::infinity(), "sup implied constant"));
    }
  }
  if (ck.antiderivative_tol) {
    const auto rep = antiderivative_identity_check(tracker, ck.plateau_tol);
    const int n = space_dim(profile.mode);
    const bool zero_moment = std::abs(norms.moment) <= 1e-8 * std::max(norms.l1_u1, 1e-300);
    const bool plateau_claimed = n >= 3 || (n == 2 && zero_moment);
    metrics["antiderivative_max_relative_residual"] = rep.max_relative_residual;
    metrics["l2_sup_first_half"] = rep.sup_l2_first_half;
    metrics["l2_sup_second_half"] = rep.sup_l2_second_half;
    metrics["l2_plateau"] = rep.plateau;
    const bool ok = rep.max_relative_residual <= *ck.antiderivative_tol &&
                    (!plateau_claimed || rep.plateau || T == 0.0);
    std::string detail = "max |residual| / E_v; plateau ";
    detail += rep.plateau ? "observed" : "not observed";
    if (!plateau_claimed) detail += " (no uniform L2 bound claimed for this dimension/data)";
    checks.push_back(verdict("antiderivative", ok, rep.max_relative_residual,
                             *ck.antiderivative_tol, detail));
  }

  const double ta = ck.window_start * T;
  const double tb = ck.window_end * T;
  std::vector<double> ts;
  for (const auto& e : entries) ts.push_back(e.t);
  auto series = [&](std::size_t k) {
    std::vector<double> v;
    for (const auto& e : entries) v.push_back(e.E_R[k]);
    return v;
  };

  if (ck.decay) {
    json per_R = json::array();
    if (!eta.applicable) {
      checks.push_back(skipped("decay", "outside theorem hypothesis (eta >= 1)"));
    } else if (!out.complete || T == 0.0) {
      checks.push_back(skipped("decay", out.complete ? "T_final = 0" : "run incomplete"));
    } else {
      bool ok = true;
      bool any = false;
      std::string why;
      double worst = 0.0;
      for (std::size_t k = 0; k < ck.R_list.size(); ++k) {
        const double R = ck.R_list[k];
        const double a = R / profile.c_m;
        const auto E = series(k);
        json jr = {{"R", R}, {"a", a}};
        if (!(ta > a)) {
          jr["boundedness"] = "skipped:window starts before R / c_m";
          why = "window starts before R / c_m";
        } else {
          const auto b = bounded_scaled_energy_check(ts, E, profile.eta, R, profile.c_m, ta, tb,
                                                     ck.growth_tol);
          any = true;
          ok = ok && b.status == CheckStatus::Pass;
          worst = std::max(worst, b.ratio);
          jr["boundedness"] = {{"status", to_string(b.status)},
                               {"max_first", b.max_first},
                               {"max_second", b.max_second},
                               {"ratio", num(b.ratio)}};
        }
        const double floor = 1e-14 * E0;
        const double fa = std::max(ta, a);
        if (tb > fa) {
          const auto alg = fit_decay(ts, E, fa, tb, DecayModel::Algebraic, floor);
          const auto lg = fit_decay(ts, E, fa, tb, DecayModel::Logarithmic, floor);
          jr["fits"] = {fit_json(alg), fit_json(lg)};
          jr["predicted_exponent"] = 1.0 - profile.eta;
        }
        per_R.push_back(jr);
      }
      if (!any)
        checks.push_back(skipped("decay", why));
      else
        checks.push_back(verdict("decay", ok, worst, ck.growth_tol,
                                 "sup Q second half / sup Q first half, Q = (t - R/c_m)^(1-eta) E_R"));
    }
    summary["decay"] = per_R;
  }

  if (ck.gronwall) {
    const double R = ck.R_list.front();
    const double a = R / profile.c_m;
    const double t0 = ck.gronwall_t0 * T;
    if (!eta.applicable) {
      checks.push_back(skipped("gronwall", "outside theorem hypothesis (eta >= 1)"));
    } else if (!out.complete || !(t0 > a) || ts.size() < 2) {
      checks.push_back(skipped("gronwall", "t0 must exceed R / c_m"));
    } else {
      const auto E = series(0);
      const double K0 = empirical_k0(ts, E, profile.eta, a);
      const auto cert = gronwall_bound(ts, E, K0, profile.eta, a, t0, 1e-9);
      json sens = json::array();
      for (double f : {0.5, 1.0, 1.5}) {
        const double t0s = std::min(f * t0, ts.back());
        if (!(t0s > a)) continue;
        const auto c2 = gronwall_bound(ts, E, K0, profile.eta, a, t0s, 1e-9);
        sens.push_back({{"t0", t0s}, {"M0", c2.M0}});
      }
      summary["gronwall"] = {{"R", R},        {"a", a},       {"K0_sq", K0},
                             {"eta", cert.eta}, {"t0", t0},   {"xi_t0", cert.xi_t0},
                             {"M0", cert.M0},   {"max_ratio", cert.max_ratio},
                             {"t0_sensitivity", sens}};
      checks.push_back(verdict("gronwall", cert.dominated && std::isfinite(cert.M0), cert.max_ratio,
                               1.0, "max e / bound for t >= t0"));
    }
  }

  if (ck.spectral) {
    const SpectralSample s = sample_weight(data, profile);
    const int n = s.dim;
    const bool zero_mean = std::abs(s.integral) <= 1e-8 * std::max(norms.l1_u1, 1e-300);
    json reps = json::array();
    bool any = false;
    bool ok = true;
    double worst = 0.0;
    for (double th : ck.theta) {
      json jr = {{"theta", th}};
      const bool admissible = zero_mean ? th < ck.gamma + 0.5 * n : th < 0.5 * n;
      if (!admissible) {
        jr["status"] = "skipped:theta outside admissible range";
      } else {
        const auto r = weighted_inequality_ratio(s, ck.gamma, th, !zero_mean);
        any = true;
        ok = ok && std::isfinite(r.ratio);
        worst = std::max(worst, r.ratio);
        jr["lhs"] = num(r.lhs);
        jr["rhs_core"] = num(r.rhs_core);
        jr["ratio"] = num(r.ratio);
        jr["with_moment"] = r.with_moment;
        jr["policy"] = to_string(r.policy);
      }
      reps.push_back(jr);
    }
    summary["spectral"] = {{"aliasing_warning", s.aliasing_warning}, {"reports", reps}};
    if (any)
      checks.push_back(verdict("spectral", ok, worst, std::numeric_limits<double>::infinity(),
                               "max inequality ratio (empirical constant)"));
    else
      checks.push_back(skipped("spectral", "theta outside admissible range"));
  }

  summary["metrics"] = metrics;
  json cj = json::array();
  for (const auto& c : checks) cj.push_back(check_json(c));
  summary["checks"] = cj;
  summary["complete"] = out.complete;
  summary["all_passed"] = out.all_passed();
  out.summary = std::move(summary);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return out;
}

std::vector<RunOutcome> run_all(const std::vector<ExperimentConfig>& cfgs, std::size_t parallel) {
  std::vector<RunOutcome> results(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        results[i] = run_experiment(cfgs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t k = std::clamp<std::size_t>(parallel, 1, std::max<std::size_t>(cfgs.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < k; ++w) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::string csv_header(const std::vector<double>& R_list) {
  std::string h = "t,E_u";
  for (double R : R_list) h += ",E_R@" + format_number(R);
  h += ",l2_u,pair_ut_u,pair_ut_xgrad,S_accum";
  for (double R : R_list) h += ",wext@" + format_number(R);
  h += ",morawetz_residual";
  return h;
}

namespace {

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << s;
}

std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_artifacts(const RunOutcome& out, const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "config.json", to_json(out.config).dump(2) + "\n");
  if (out.config.write_csv) {
    std::string s = csv_header(out.record.R_list) + "\n";
    for (const auto& e : out.record.entries) {
      s += csv_num(e.t) + "," + csv_num(e.E_u);
      for (double v : e.E_R) s += "," + csv_num(v);
      s += "," + csv_num(e.l2_u) + "," + csv_num(e.pair_ut_u) + "," + csv_num(e.pair_ut_xgrad) +
           "," + csv_num(e.S_accum);
      for (double v : e.weighted_ext) s += "," + csv_num(v);
      s += "," + csv_num(e.morawetz_residual) + "\n";
    }
    write_text(dir / "diagnostics.csv", s);
  }
  write_text(dir / "summary.json", out.summary.dump(2) + "\n");
  const double sps = out.wall_seconds > 0.0 ? double(out.steps) / out.wall_seconds : 0.0;
  const json timing = {{"wall_seconds", out.wall_seconds}, {"steps", out.steps},
                       {"steps_per_second", sps}};
  write_text(dir / "timing.json", timing.dump(2) + "\n");
}

int report_run(const fs::path& dir, std::string& text) {
  const fs::path sp = dir / "summary.json";
  const fs::path cp = dir / "diagnostics.csv";
  if (!fs::exists(sp) || !fs::exists(cp)) {
    text = "incomplete run: " + dir.string() + " lacks summary.json or diagnostics.csv\n";
    return kExitIncomplete;
  }
  json summary;
  try {
    std::ifstream in(sp);
    summary = json::parse(in);
  } catch (const json::exception&) {
    text = "incomplete run: summary.json is unreadable\n";
    return kExitIncomplete;
  }
  if (!summary.value("complete", false)) {
    text = "incomplete run: the solver did not reach T_final\n";
    return kExitIncomplete;
  }

  std::ifstream in(cp);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  auto col = [&](const std::string& prefix) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i].rfind(prefix, 0) == 0) return std::ptrdiff_t(i);
    return -1;
  };
  const auto iER = col("E_R@");
  const auto iW = col("wext@");
  const auto iM = col("morawetz_residual");
  if (iER < 0 || iW < 0 || iM < 0) {
    text = "incomplete run: diagnostics.csv header is malformed\n";
    return kExitIncomplete;
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> r;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) r.push_back(std::strtod(c.c_str(), nullptr));
    if (r.size() != cols.size()) {
      text = "incomplete run: truncated row in diagnostics.csv\n";
      return kExitIncomplete;
    }
    rows.push_back(std::move(r));
  }

  const double L = summary["profile"]["L"].get<double>();
  const double c_m = summary["profile"]["c_m"].get<double>();
  const double eta = summary["profile"]["eta"].get<double>();
  const double I0 = summary["data_norms"]["I0_sq"].get<double>();
  const double R = std::strtod(cols[std::size_t(iER)].substr(4).c_str(), nullptr);
  const double a = R / c_m;
  const double bound = (2.0 + L) * I0;

  std::string f1 = "# t E_R@" + format_number(R) + "\n";
  std::string f2 = "# t (t-a)^(1-eta)E_R a=" + format_number(a) + " eta=" + format_number(eta) +
                   " (0 for t <= a)\n";
  std::string f3 = "# t morawetz_residual\n";
  std::string f4 = "# t wext@" + format_number(R) + "/((2+L)I0^2)\n";
  for (const auto& r : rows) {
    const double t = r[0];
    const double ER = r[std::size_t(iER)];
    const double q = t > a ? std::pow(t - a, 1.0 - eta) * ER : 0.0;
    const double w = bound > 0.0 ? r[std::size_t(iW)] / bound : 0.0;
    f1 += csv_num(t) + " " + csv_num(ER) + "\n";
    f2 += csv_num(t) + " " + csv_num(q) + "\n";
    f3 += csv_num(t) + " " + csv_num(r[std::size_t(iM)]) + "\n";
    f4 += csv_num(t) + " " + csv_num(w) + "\n";
  }
  write_text(dir / "plot_local_energy.dat", f1);
  write_text(dir / "plot_scaled_local_energy.dat", f2);
  write_text(dir / "plot_morawetz_residual.dat", f3);
  write_text(dir / "plot_weighted_exterior.dat", f4);

  std::ostringstream os;
  os << "run        " << summary.value("name", "?") << "\n";
  os << "profile    " << summary["profile"]["dim_mode"].get<std::string>() << " "
     << summary["profile"]["family"].get<std::string>() << " L=" << format_number(L)
     << " a=" << format_number(summary["profile"]["a"].get<double>())
     << " eta=" << format_number(eta) << "\n";
  os << "samples    " << rows.size() << "\n";
  os << "I0^2       " << format_number(I0) << "\n";
  for (const auto& c : summary["checks"]) {
    char buf[160];
    const std::string st = c["status"].get<std::string>();
    std::string v = "-";
    if (c.contains("value") && c["value"].is_number()) v = format_number(c["value"].get<double>());
    std::snprintf(buf, sizeof buf, "%-16s %-40s %s\n", c["name"].get<std::string>().c_str(),
                  st.c_str(), v.c_str());
    os << buf;
  }
  os << "overall    " << (summary.value("all_passed", false) ? "pass" : "fail") << "\n";
  text = os.str();
  write_text(dir / "report.txt", text);
  return kExitOk;
}

}  // namespace wavedecay
