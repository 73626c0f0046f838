#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sist/geometry.hpp"
#include "sist/sweep.hpp"

namespace sist::cli {

struct SweepRange {
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 2;
};

/// Everything a run needs; the JSON form (see README) is flat apart from
/// the optional "sweep" block, and unknown keys are rejected.
struct RunConfig {
  ShapeConfig shape;
  std::size_t M = 20;
  double h = 0.01;
  std::string method = "auto";  ///< auto | analytic | grid
  bool richardson = true;
  double tol = 1e-7;
  double degeneracy_tol = 1e-3;
  double error_bound = std::numeric_limits<double>::infinity();
  std::size_t max_nodes = 2'000'000;
  std::vector<double> T;
  std::optional<SweepRange> sweep;
  unsigned threads = 0;
  double gap_threshold = 0.01;
  std::size_t max_levels = 2048;
  bool fields = false;
  bool measures = false;
  std::size_t N = 100;
  std::size_t bins = 20;
  std::vector<double> T_scan;
  std::optional<double> gamma_limit;
  std::string out = "out";
};

/// Strict parse; accepts either a config object or a run manifest (its
/// "config" member). Throws ConfigError.
RunConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);

/// Library settings for a single shape (range left unset).
SweepConfig make_point_config(const RunConfig& c);
/// Library sweep settings; throws ConfigError without a sweep block.
SweepConfig make_sweep_config(const RunConfig& c);

/// Full command-line entry point; returns the process exit code
/// (0 success, 1 failed validation, 2 configuration error, 3 convergence or
/// refinement failure).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Built-in oracle checks; prints one line per check and returns true when all pass.
bool run_validation(std::ostream& out);

}  // namespace sist::cli
