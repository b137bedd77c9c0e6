#include <cmath>
#include <fstream>
#include <set>

#include "runner.hpp"

namespace runner {

namespace {

using nslab::OrderedJson;

bool check_keys(const OrderedJson& j, const std::set<std::string>& allowed,
                const std::string& where, std::string& err) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      err = "unknown key \"" + it.key() + "\" in " + where;
      return false;
    }
  }
  return true;
}

bool want_number(const OrderedJson& j, const char* key, const std::string& where,
                 double& out, std::string& err) {
  if (!j.contains(key)) return true;
  if (!j[key].is_number()) {
    err = where + "." + key + " must be a number";
    return false;
  }
  out = j[key].get<double>();
  return true;
}

bool want_int(const OrderedJson& j, const char* key, const std::string& where,
              int& out, std::string& err) {
  if (!j.contains(key)) return true;
  if (!j[key].is_number_integer()) {
    err = where + "." + key + " must be an integer";
    return false;
  }
  out = j[key].get<int>();
  return true;
}

bool want_string(const OrderedJson& j, const char* key, const std::string& where,
                 std::string& out, std::string& err) {
  if (!j.contains(key)) return true;
  if (!j[key].is_string()) {
    err = where + "." + key + " must be a string";
    return false;
  }
  out = j[key].get<std::string>();
  return true;
}

const std::set<std::string> kPresets = {
    "zero", "taylor_green", "random_solenoidal", "bump",
    "harmonic_fixture", "cubic_fixture"};

const std::set<std::string> kNorms = {"l2", "h1semi", "linf", "l4", "l6"};

const std::set<std::string> kTolerances = {
    "ee_defect", "picard_tol", "lambda_max", "tail_alarm",
    "series_tol", "dim_tol", "slope_tol"};

}  // namespace

std::optional<ExperimentConfig> load_config(const std::string& path, std::string& err) {
  std::ifstream in(path);
  if (!in) {
    err = "cannot open config: " + path;
    return std::nullopt;
  }
  OrderedJson doc = OrderedJson::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    err = "config is not a JSON object: " + path;
    return std::nullopt;
  }

  ExperimentConfig cfg;
  cfg.echo = doc;
  if (!check_keys(doc,
                  {"grid", "mesh", "initial_data", "eps_ladder", "norms", "out",
                   "tolerances"},
                  "config", err))
    return std::nullopt;

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (!g.is_object() || !check_keys(g, {"L", "N"}, "grid", err)) {
      if (err.empty()) err = "grid must be an object";
      return std::nullopt;
    }
    if (!want_number(g, "L", "grid", cfg.grid.L, err)) return std::nullopt;
    if (!want_int(g, "N", "grid", cfg.grid.N, err)) return std::nullopt;
  }
  try {
    nslab::validate(cfg.grid);
  } catch (const std::exception& e) {
    err = e.what();
    return std::nullopt;
  }

  if (doc.contains("mesh")) {
    const auto& m = doc["mesh"];
    if (!m.is_object() || !check_keys(m, {"T", "M", "scheme"}, "mesh", err)) {
      if (err.empty()) err = "mesh must be an object";
      return std::nullopt;
    }
    if (!want_number(m, "T", "mesh", cfg.mesh_t, err)) return std::nullopt;
    if (!want_int(m, "M", "mesh", cfg.mesh_m, err)) return std::nullopt;
    if (!want_string(m, "scheme", "mesh", cfg.scheme, err)) return std::nullopt;
  }
  if (!(cfg.mesh_t > 0) || cfg.mesh_m < 1) {
    err = "mesh requires T > 0 and M >= 1";
    return std::nullopt;
  }
  if (cfg.scheme != "uniform") {
    err = "unsupported mesh scheme \"" + cfg.scheme + "\" (only \"uniform\")";
    return std::nullopt;
  }

  if (doc.contains("initial_data")) {
    const auto& d = doc["initial_data"];
    if (!d.is_object() ||
        !check_keys(d, {"preset", "amplitude", "seed"}, "initial_data", err)) {
      if (err.empty()) err = "initial_data must be an object";
      return std::nullopt;
    }
    if (!want_string(d, "preset", "initial_data", cfg.preset, err)) return std::nullopt;
    if (!want_number(d, "amplitude", "initial_data", cfg.amplitude, err))
      return std::nullopt;
    if (d.contains("seed")) {
      if (!d["seed"].is_number_unsigned()) {
        err = "initial_data.seed must be a nonnegative integer";
        return std::nullopt;
      }
      cfg.seed = d["seed"].get<std::uint64_t>();
    }
  }
  if (!kPresets.count(cfg.preset)) {
    err = "unknown initial_data.preset \"" + cfg.preset + "\"";
    return std::nullopt;
  }
  if (!std::isfinite(cfg.amplitude) || cfg.amplitude < 0) {
    err = "initial_data.amplitude must be finite and nonnegative";
    return std::nullopt;
  }

  if (doc.contains("eps_ladder")) {
    const auto& e = doc["eps_ladder"];
    if (!e.is_array()) {
      err = "eps_ladder must be an array of numbers";
      return std::nullopt;
    }
    for (const auto& v : e) {
      if (!v.is_number()) {
        err = "eps_ladder must be an array of numbers";
        return std::nullopt;
      }
      cfg.eps_ladder.push_back(v.get<double>());
    }
    for (std::size_t i = 0; i < cfg.eps_ladder.size(); ++i) {
      if (!(cfg.eps_ladder[i] > 0) ||
          (i > 0 && !(cfg.eps_ladder[i] < cfg.eps_ladder[i - 1]))) {
        err = "eps_ladder must be positive and strictly decreasing";
        return std::nullopt;
      }
    }
  }

  if (doc.contains("norms")) {
    const auto& n = doc["norms"];
    if (!n.is_array() || n.empty()) {
      err = "norms must be a nonempty array of names";
      return std::nullopt;
    }
    cfg.norms.clear();
    for (const auto& v : n) {
      if (!v.is_string() || !kNorms.count(v.get<std::string>())) {
        err = "norms entries must come from {l2, h1semi, linf, l4, l6}";
        return std::nullopt;
      }
      cfg.norms.push_back(v.get<std::string>());
    }
  }

  if (!want_string(doc, "out", "config", cfg.out_dir, err)) return std::nullopt;

  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    if (!t.is_object()) {
      err = "tolerances must be an object";
      return std::nullopt;
    }
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (!kTolerances.count(it.key())) {
        err = "unknown tolerance \"" + it.key() + "\"";
        return std::nullopt;
      }
      if (!it.value().is_number() || !(it.value().get<double>() > 0)) {
        err = "tolerance \"" + it.key() + "\" must be a positive number";
        return std::nullopt;
      }
      cfg.tolerances[it.key()] = it.value().get<double>();
    }
  }

  return cfg;
}

}  // namespace runner
