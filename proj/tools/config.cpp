#include <algorithm>
#include <cmath>
#include <set>

#include "cli.hpp"
#include "sist/analytic.hpp"
#include "sist/errors.hpp"
#include "sist/io.hpp"

namespace sist::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kRunKeys = {
    "family", "M",       "h",       "method", "richardson", "tol",  "degeneracy_tol", "error_bound",
    "max_nodes", "T",    "sweep",   "threads", "gap_threshold", "max_levels", "fields", "measures",
    "N",      "bins",    "T_scan",  "gamma_limit", "out"};

double num(const json& j, const char* key) {
  if (!j[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

std::size_t count(const json& j, const char* key, std::size_t minimum) {
  const json& v = j[key];
  if (!v.is_number_integer() && !(v.is_number() && std::floor(v.get<double>()) == v.get<double>()))
    throw ConfigError(std::string("'") + key + "' must be an integer");
  const double d = v.get<double>();
  if (d < static_cast<double>(minimum)) throw ConfigError(std::string("'") + key + "' must be >= " + std::to_string(minimum));
  return static_cast<std::size_t>(d);
}

bool flag(const json& j, const char* key) {
  if (!j[key].is_boolean()) throw ConfigError(std::string("'") + key + "' must be true or false");
  return j[key].get<bool>();
}

std::vector<double> numbers(const json& j, const char* key) {
  const json& v = j[key];
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(std::string("'") + key + "' entries must be numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw ConfigError(std::string("'") + key + "' must be a number or an array of numbers");
  }
  for (double t : out)
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError(std::string("'") + key + "' values must be positive");
  return out;
}

// JSON has no infinity; an absent or null bound means unbounded.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

RunConfig parse_config(const json& input) {
  if (!input.is_object()) throw ConfigError("configuration must be a JSON object");
  const json& j = input.contains("config") && input.contains("tool_version") ? input["config"] : input;
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");

  RunConfig c;
  try {
    c.shape = shape_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  const std::vector<std::string> shape_params = shape_keys(family_of(c.shape));
  for (const auto& [key, value] : j.items()) {
    if (kRunKeys.count(key) == 0 && std::find(shape_params.begin(), shape_params.end(), key) == shape_params.end())
      throw ConfigError("unknown configuration key '" + key + "'");
  }
  try {
    validate(c.shape);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("M")) c.M = count(j, "M", 1);
  if (j.contains("h")) c.h = num(j, "h");
  if (!(c.h > 0.0)) throw ConfigError("'h' must be positive");
  if (j.contains("method")) {
    if (!j["method"].is_string()) throw ConfigError("'method' must be a string");
    c.method = j["method"].get<std::string>();
  }
  if (c.method != "auto" && c.method != "analytic" && c.method != "grid")
    throw ConfigError("'method' must be one of auto, analytic, grid");
  if (j.contains("richardson")) c.richardson = flag(j, "richardson");
  if (j.contains("tol")) c.tol = num(j, "tol");
  if (!(c.tol > 0.0)) throw ConfigError("'tol' must be positive");
  if (j.contains("degeneracy_tol")) c.degeneracy_tol = num(j, "degeneracy_tol");
  if (!(c.degeneracy_tol >= 0.0 && c.degeneracy_tol < 1.0)) throw ConfigError("'degeneracy_tol' must lie in [0, 1)");
  if (j.contains("error_bound") && !j["error_bound"].is_null()) c.error_bound = num(j, "error_bound");
  if (!(c.error_bound > 0.0)) throw ConfigError("'error_bound' must be positive");
  if (j.contains("max_nodes")) c.max_nodes = count(j, "max_nodes", 1);
  if (j.contains("T")) c.T = numbers(j, "T");
  if (j.contains("sweep") && !j["sweep"].is_null()) {
    const json& s = j["sweep"];
    if (!s.is_object()) throw ConfigError("'sweep' must be an object with from, to, steps");
    for (const auto& [key, value] : s.items())
      if (key != "from" && key != "to" && key != "steps") throw ConfigError("unknown sweep key '" + key + "'");
    if (!s.contains("from") || !s.contains("to")) throw ConfigError("'sweep' needs 'from' and 'to'");
    SweepRange r;
    r.from = num(s, "from");
    r.to = num(s, "to");
    if (s.contains("steps")) r.steps = count(s, "steps", 2);
    c.sweep = r;
  }
  if (j.contains("threads")) c.threads = static_cast<unsigned>(count(j, "threads", 0));
  if (j.contains("gap_threshold")) c.gap_threshold = num(j, "gap_threshold");
  if (!(c.gap_threshold > 0.0)) throw ConfigError("'gap_threshold' must be positive");
  if (j.contains("max_levels")) c.max_levels = count(j, "max_levels", 1);
  if (j.contains("fields")) c.fields = flag(j, "fields");
  if (j.contains("measures")) c.measures = flag(j, "measures");
  if (j.contains("N")) c.N = count(j, "N", 1);
  if (j.contains("bins")) c.bins = count(j, "bins", 1);
  if (j.contains("T_scan")) c.T_scan = numbers(j, "T_scan");
  if (j.contains("gamma_limit") && !j["gamma_limit"].is_null()) c.gamma_limit = num(j, "gamma_limit");
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("'out' must be a string");
    c.out = j["out"].get<std::string>();
  }
  if (c.method == "analytic" && !has_analytic_spectrum(c.shape))
    throw ConfigError("no closed-form spectrum for family " + std::string(family_name(family_of(c.shape))));
  if (c.max_levels < c.M) throw ConfigError("'max_levels' must be at least M");
  return c;
}

json to_json(const RunConfig& c) {
  json j = shape_to_json(c.shape);
  j["M"] = c.M;
  j["h"] = c.h;
  j["method"] = c.method;
  j["richardson"] = c.richardson;
  j["tol"] = c.tol;
  j["degeneracy_tol"] = c.degeneracy_tol;
  j["error_bound"] = finite_or_null(c.error_bound);
  j["max_nodes"] = c.max_nodes;
  j["T"] = c.T;
  j["sweep"] = c.sweep ? json{{"from", c.sweep->from}, {"to", c.sweep->to}, {"steps", c.sweep->steps}} : json(nullptr);
  j["threads"] = c.threads;
  j["gap_threshold"] = c.gap_threshold;
  j["max_levels"] = c.max_levels;
  j["fields"] = c.fields;
  j["measures"] = c.measures;
  j["N"] = c.N;
  j["bins"] = c.bins;
  j["T_scan"] = c.T_scan;
  j["gamma_limit"] = c.gamma_limit ? json(*c.gamma_limit) : json(nullptr);
  j["out"] = c.out;
  return j;
}

SweepConfig make_point_config(const RunConfig& c) {
  SweepConfig s;
  s.base = c.shape;
  s.M = c.M;
  s.T = c.T;
  s.max_levels = c.max_levels;
  s.h = c.h;
  s.richardson = c.richardson;
  s.force_grid = c.method == "grid";
  s.measures = c.measures;
  s.refinement.solver.tol = c.tol;
  s.refinement.solver.degeneracy_tol = c.degeneracy_tol;
  s.refinement.error_bound = c.error_bound;
  s.refinement.max_nodes = c.max_nodes;
  s.threads = c.threads;
  s.gap_threshold = c.gap_threshold;
  return s;
}

SweepConfig make_sweep_config(const RunConfig& c) {
  if (!c.sweep) throw ConfigError("this command needs a 'sweep' block with from, to, steps");
  SweepConfig s = make_point_config(c);
  s.gamma_from = c.sweep->from;
  s.gamma_to = c.sweep->to;
  s.steps = c.sweep->steps;
  return s;
}

}  // namespace sist::cli
