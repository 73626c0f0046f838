#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "sist/analytic.hpp"
#include "sist/eigensolver.hpp"
#include "sist/errors.hpp"
#include "sist/io.hpp"
#include "sist/levelstats.hpp"
#include "sist/measures.hpp"
#include "sist/thermo.hpp"
#include "sist/weyl.hpp"

#ifndef SIST_VERSION
#define SIST_VERSION "0.0.0"
#endif

namespace sist::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Output directory, file list and manifest bookkeeping for one command.
class Run {
 public:
  Run(RunConfig cfg, std::map<std::string, std::string> inputs)
      : cfg_(std::move(cfg)), inputs_(std::move(inputs)), dir_(resolve_output_dir(cfg_.out)),
        start_(std::chrono::steady_clock::now()) {}

  const RunConfig& cfg() const { return cfg_; }

  fs::path path(const std::string& name) {
    outputs_.push_back(name);
    return dir_ / name;
  }

  void csv(const std::string& name, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    write_csv(path(name), header, rows);
  }

  void json_file(const std::string& name, const json& j) {
    std::ofstream os(path(name));
    if (!os) throw Error("cannot write " + (dir_ / name).string());
    os << j.dump(2) << '\n';
  }

  void field(const std::string& stem, const GridField& f, const json& extra) {
    write_field(dir_ / stem, f, extra);
    outputs_.push_back(stem + ".bin");
    outputs_.push_back(stem + ".json");
  }

  void finish(std::ostream& out) {
    RunManifest m;
    m.tool_version = SIST_VERSION;
    m.config = to_json(cfg_);
    m.input_hashes = inputs_;
    m.outputs = outputs_;
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_manifest(dir_, m);
    out << "wrote " << outputs_.size() << " file(s) and manifest.json to " << dir_.string() << '\n';
  }

 private:
  RunConfig cfg_;
  std::map<std::string, std::string> inputs_;
  fs::path dir_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

RefinementOptions refinement_of(const RunConfig& c) {
  RefinementOptions r;
  r.solver.tol = c.tol;
  r.solver.degeneracy_tol = c.degeneracy_tol;
  r.error_bound = c.error_bound;
  r.max_nodes = c.max_nodes;
  return r;
}

bool use_analytic(const RunConfig& c) {
  return c.method == "analytic" || (c.method == "auto" && !c.fields && has_analytic_spectrum(c.shape));
}

// Spectrum of the configured shape, with eigenfields from the finest grid
// when requested (fields force a grid solve).
ModeSet compute_modes(const RunConfig& c, std::size_t M, bool fields) {
  if (!fields && use_analytic(c)) {
    ModeSet m;
    m.spectrum = analytic_spectrum(c.shape, static_cast<int>(M));
    return m;
  }
  RefinementOptions r = refinement_of(c);
  r.solver.want_fields = fields;
  if (c.richardson) return converged_modes(c.shape, M, c.h, r);
  ModeSet m = solve_on_grid(c.shape, M, c.h, r.solver);
  return m;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::string stem_for(const std::string& prefix, std::size_t i) {
  std::ostringstream os;
  os << prefix << std::setw(4) << std::setfill('0') << i;
  return os.str();
}

void cmd_spectrum(Run& run, std::ostream& out) {
  const RunConfig& c = run.cfg();
  const ModeSet m = compute_modes(c, c.M, c.fields);
  const Spectrum& s = m.spectrum;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.size(); ++i) rows.push_back({static_cast<double>(i + 1), s.k[i], s.error[i]});
  run.csv("spectrum.csv", {"i", "k", "error_estimate"}, rows);
  for (std::size_t i = 0; i < m.fields.size(); ++i)
    run.field(stem_for("field_", i + 1), m.fields[i].field, {{"level", i + 1}, {"k", m.fields[i].k}});
  out << method_name(s.method) << " spectrum, " << s.size() << " levels, k_1 = " << format_double(s.k.front()) << '\n';
}

void cmd_weyl(Run& run, std::ostream& out) {
  const RunConfig& c = run.cfg();
  const Spectrum s = compute_modes(c, c.M, false).spectrum;
  const SizeParameters z = size_params(c.shape);
  const int dim = dimension(c.shape);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.size(); ++i)
    rows.push_back({static_cast<double>(i + 1), s.k[i], weyl_level(static_cast<int>(i + 1), z, dim)});
  run.csv("weyl.csv", {"i", "k_actual", "k_weyl"}, rows);
  out << "Weyl comparison for " << s.size() << " levels\n";
}

void cmd_measures(Run& run, std::ostream& out) {
  const RunConfig& c = run.cfg();
  std::vector<double> gammas;
  if (c.sweep) {
    const SweepConfig sc = make_sweep_config(c);
    const double lo = std::min(sc.gamma_from, sc.gamma_to);
    const double hi = std::max(sc.gamma_from, sc.gamma_to);
    for (std::size_t i = 0; i < sc.steps; ++i)
      gammas.push_back(i + 1 == sc.steps ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(sc.steps - 1));
  } else {
    gammas.push_back(shape_variable(c.shape));
  }
  std::vector<double> rin, dh;
  for (double g : gammas) {
    const ShapeConfig shape = with_shape_variable(c.shape, g);
    validate(shape);
    rin.push_back(inscribed_radius(shape));
    if (family_of(shape) == Family::NestedSquares) {
      const DomainMask q = quadrant_region(shape, c.h);
      dh.push_back(hausdorff_distance(q, equal_area_disk(q)));
    } else {
      dh.push_back(kNaN);
    }
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < gammas.size(); ++i)
    rows.push_back({gammas[i], rin[i], 1.0 / rin[i], dh[i], rin[i] / rin[0], rin[0] / rin[i], dh[i] / dh[0]});
  run.csv("measures.csv", {"gamma", "r_in", "inv_r_in", "d_H", "r_in_norm", "inv_r_in_norm", "d_H_norm"}, rows);
  out << "measures at " << gammas.size() << " point(s)\n";
}

void cmd_levelstats(Run& run, std::ostream& out) {
  const RunConfig& c = run.cfg();
  const Spectrum s = compute_modes(c, c.M, false).spectrum;
  const DistinctLevels d = distinct_levels(s);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < d.size(); ++i) rows.push_back({d.k[i], static_cast<double>(d.multiplicity[i])});
  run.csv("distinct.csv", {"k", "multiplicity"}, rows);
  rows.clear();
  const std::vector<double> ms = mean_spacing_series(d);
  for (std::size_t i = 0; i < ms.size(); ++i) rows.push_back({static_cast<double>(i + 1), ms[i]});
  run.csv("mean_spacing.csv", {"i", "mean_spacing"}, rows);
  rows.clear();
  const Histogram hist = spacing_histogram(d, c.bins);
  for (std::size_t b = 0; b < hist.counts.size(); ++b)
    rows.push_back({hist.edges[b], hist.edges[b + 1], static_cast<double>(hist.counts[b])});
  run.csv("histogram.csv", {"bin_lo", "bin_hi", "count"}, rows);
  out << d.size() << " distinct levels from " << s.size();
  if (c.N < d.size())
    out << "; mean spacing over " << c.N << " gaps = " << format_double(mean_spacing(d, c.N));
  else
    out << "; too few distinct levels for N = " << c.N << " (raise M)";
  out << '\n';
}

void cmd_thermo(Run& run, std::ostream& out) {
  const RunConfig& c = run.cfg();
  if (c.T.empty()) throw ConfigError("thermo needs at least one temperature 'T'");
  std::vector<SweepPoint> points;
  if (c.sweep) {
    points = run_sweep(make_sweep_config(c)).points;
  } else {
    points.push_back(evaluate_point(make_point_config(c), shape_variable(c.shape)));
  }
  const int dim = dimension(c.shape);
  std::vector<std::vector<double>> rows;
  for (const auto& p : points)
    for (const auto& st : p.thermo)
      rows.push_back({p.gamma, st.T, st.Z, st.lnZ, st.F_over_T(), st.S, st.U_over_T(), static_cast<double>(st.M), st.tail,
                      effective_volume(st, dim)});
  run.csv("thermo.csv", {"gamma", "T", "Z", "lnZ", "F_over_T", "S", "U_over_T", "M", "tail", "V_eff"}, rows);

  if (c.fields) {
    // Thermal densities from grid eigenfields of the configured shape.
    const SweepPoint& p = points.front();
    std::size_t need = 0;
    for (const auto& st : p.thermo) need = std::max(need, st.M);
    RunConfig gc = c;
    gc.shape = p.shape;
    const ModeSet m = compute_modes(gc, need, true);
    for (std::size_t t = 0; t < p.thermo.size(); ++t) {
      const ThermoState& st = p.thermo[t];
      const GridField n = thermal_density(std::span<const EigenField>(m.fields.data(), st.M), st.p);
      run.field(stem_for("density_T", t + 1), n, {{"T", st.T}, {"levels", st.M}, {"integral", n.integral()}});
    }
  }
  out << "thermodynamics at " << points.size() << " shape(s) and " << c.T.size() << " temperature(s)\n";
}

void write_sweep_tables(Run& run, const SweepResult& sr) {
  const std::size_t M = sr.config.M;
  std::vector<std::vector<double>> k, p, sc, st, z, th;
  for (std::size_t g = 0; g < sr.gamma.size(); ++g) {
    const SweepPoint& pt = sr.points[g];
    const ThermoState& ts = pt.thermo.front();
    const std::vector<double> contrib = entropy_decomposition(ts);
    std::vector<double> rk{sr.gamma[g]}, rp{sr.gamma[g]}, rs{sr.gamma[g]};
    for (std::size_t i = 0; i < M; ++i) {
      rk.push_back(pt.spectrum.k[i]);
      rp.push_back(i < ts.p.size() ? ts.p[i] : 0.0);
      rs.push_back(i < contrib.size() ? contrib[i] : 0.0);
    }
    k.push_back(std::move(rk));
    p.push_back(std::move(rp));
    sc.push_back(std::move(rs));
    st.push_back({sr.gamma[g], ts.S});
    z.push_back({sr.gamma[g], ts.Z});
    th.push_back({sr.gamma[g], ts.Z, ts.lnZ, ts.F_over_T(), ts.S, ts.U_over_T()});
  }
  std::vector<std::string> hk{"gamma"}, hp{"gamma"}, hs{"gamma"};
  for (const auto& n : numbered("k_", M)) hk.push_back(n);
  for (const auto& n : numbered("p_", M)) hp.push_back(n);
  for (const auto& n : numbered("S_", M)) hs.push_back(n);
  run.csv("k.csv", hk, k);
  run.csv("p.csv", hp, p);
  run.csv("S_contrib.csv", hs, sc);
  run.csv("S_total.csv", {"gamma", "S_total"}, st);
  run.csv("Z.csv", {"gamma", "Z"}, z);
  run.csv("thermo.csv", {"gamma", "Z", "lnZ", "F_over_T", "S", "U_over_T"}, th);

  json ev = json::array();
  for (const auto& e : sr.tracking.events)
    ev.push_back({{"kind", std::string(event_name(e.kind))},
                  {"gamma", e.gamma},
                  {"gap", e.gap},
                  {"level_a", e.level_a},
                  {"level_b", e.level_b}});
  run.json_file("events.json", ev);

  if (sr.config.measures) {
    const std::vector<double> k1 = sr.level_series(0);
    const double k0 = k1.front();
    const double r0 = *sr.points.front().r_in;
    const double d0 = sr.points.front().d_H.value_or(kNaN);
    std::vector<std::vector<double>> rows;
    for (std::size_t g = 0; g < sr.gamma.size(); ++g) {
      const SweepPoint& pt = sr.points[g];
      const double dh = pt.d_H.value_or(kNaN);
      rows.push_back({sr.gamma[g], k1[g], *pt.r_in, dh, k1[g] / k0, r0 / *pt.r_in, dh / d0});
    }
    run.csv("normalized.csv", {"gamma", "k_1", "r_in", "d_H", "k_1_norm", "inv_r_in_norm", "d_H_norm"}, rows);
  }
}

void cmd_sweep(Run& run, std::ostream& out) {
  const RunConfig& c = run.cfg();
  if (c.T.size() != 1) throw ConfigError("sweep needs exactly one temperature 'T'");
  const SweepResult sr = run_sweep(make_sweep_config(c));
  write_sweep_tables(run, sr);
  std::size_t crossings = 0;
  for (const auto& e : sr.tracking.events) crossings += e.kind != EventKind::AmbiguousPairing;
  out << "sweep over " << sr.gamma.size() << " points, " << crossings << " crossing event(s)\n";
}

void cmd_avalanche(Run& run, std::ostream& out) {
  const RunConfig& c = run.cfg();
  SweepConfig sc = make_sweep_config(c);
  double T = 0.0;
  bool calibrated = false;
  if (!c.T_scan.empty()) {
    const double limit = c.gamma_limit.value_or(std::numeric_limits<double>::infinity());
    const auto best = calibrate_temperature(sc, c.T_scan, limit);
    if (!best) throw RefinementNeededError("no temperature in T_scan gives an interior entropy minimum within the limit");
    T = best->T;
    calibrated = true;
  } else {
    if (c.T.size() != 1) throw ConfigError("avalanche needs exactly one temperature 'T' or a 'T_scan'");
    T = c.T.front();
  }
  sc.T = {T};
  const SweepResult sr = run_sweep(sc);
  const AvalancheReport rep = detect_avalanche(sr, 0);
  write_sweep_tables(run, sr);

  const std::vector<double> p1 = sr.probability_series(0, 0);
  const std::vector<double> S = sr.thermo_series(0, &ThermoState::S);
  const std::vector<double> lnZ = sr.thermo_series(0, &ThermoState::lnZ);
  std::vector<std::vector<double>> rows;
  for (std::size_t g = 0; g < sr.gamma.size(); ++g) {
    double inside = 0.0;
    for (const auto& iv : rep.intervals)
      if (sr.gamma[g] >= iv.first && sr.gamma[g] <= iv.second) inside = 1.0;
    rows.push_back({sr.gamma[g], p1[g], S[g], lnZ[g], rep.dp1[g], rep.dS[g], rep.dlnZ[g], inside});
  }
  run.csv("avalanche.csv", {"gamma", "p_1", "S_total", "lnZ", "dp1_dgamma", "dS_dgamma", "dlnZ_dgamma", "in_avalanche"},
          rows);
  json iv = json::array();
  for (const auto& [a, b] : rep.intervals) iv.push_back({a, b});
  run.json_file("avalanche.json", {{"T", T},
                                   {"calibrated", calibrated},
                                   {"intervals", iv},
                                   {"argmax_p1", rep.argmax_p1},
                                   {"interior_p1_max", rep.interior_p1_max},
                                   {"argmin_S", rep.argmin_S},
                                   {"interior_S_min", rep.interior_S_min}});
  out << "T = " << format_double(T) << (calibrated ? " (calibrated)" : "") << ", " << rep.intervals.size()
      << " avalanche interval(s)";
  for (const auto& [a, b] : rep.intervals) out << " [" << format_double(a) << ", " << format_double(b) << "]";
  out << ", argmax p_1 at " << format_double(rep.argmax_p1) << '\n';
}

// Command-line values that override the config file, keyed by config name.
struct Overrides {
  std::map<std::string, double> num;
  std::map<std::string, std::string> str;
  std::vector<double> T, T_scan;
  bool fields = false;
  bool measures = false;
  bool no_richardson = false;
  std::string config_path;
  std::vector<std::pair<std::string, CLI::Option*>> num_opts, str_opts;
  std::vector<CLI::Option*> T_opts, T_scan_opts;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->set_help_flag("--help,-?", "print this help and exit");
  sub->add_option("--config,-c", o.config_path, "JSON config or a previous run's manifest.json")->check(CLI::ExistingFile);
  for (const char* key : {"out", "family", "method"})
    o.str_opts.emplace_back(key, sub->add_option(std::string("--") + key, o.str[key]));
  for (const char* key : {"L", "l", "R", "r", "s", "a_out", "a_in", "theta", "a", "b", "M", "h", "tol", "degeneracy_tol",
                          "error_bound", "max_nodes", "threads", "gap_threshold", "max_levels", "N", "bins", "gamma_limit",
                          "from", "to", "steps"})
    o.num_opts.emplace_back(key, sub->add_option(std::string("--") + key, o.num[key]));
  o.T_opts.push_back(sub->add_option("--T", o.T, "temperature(s)"));
  o.T_scan_opts.push_back(sub->add_option("--T_scan", o.T_scan, "temperatures to scan for calibration"));
  sub->add_flag("--fields", o.fields, "dump eigenfields / thermal densities");
  sub->add_flag("--measures", o.measures, "attach r_in and d_H to sweep points");
  sub->add_flag("--no-richardson", o.no_richardson, "single grid solve without the h/2 estimate");
}

json merged_config(const Overrides& o, std::map<std::string, std::string>& inputs) {
  json j = json::object();
  if (!o.config_path.empty()) {
    std::ifstream is(o.config_path);
    std::stringstream ss;
    ss << is.rdbuf();
    inputs["config"] = sha256_hex(ss.str());
    try {
      j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("cannot parse ") + o.config_path + ": " + e.what());
    }
    if (j.is_object() && j.contains("config") && j.contains("tool_version")) j = json(j["config"]);
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  }
  for (const auto& [key, opt] : o.str_opts)
    if (opt->count() > 0) j[key] = o.str.at(key);
  for (const auto& [key, opt] : o.num_opts) {
    if (opt->count() == 0) continue;
    const double v = o.num.at(key);
    if (key == "from" || key == "to" || key == "steps") {
      if (!j.contains("sweep") || !j["sweep"].is_object()) j["sweep"] = json::object();
      j["sweep"][key] = v;
    } else {
      j[key] = v;
    }
  }
  auto given = [](const std::vector<CLI::Option*>& opts) {
    for (const auto* opt : opts)
      if (opt->count() > 0) return true;
    return false;
  };
  if (given(o.T_opts)) j["T"] = o.T;
  if (given(o.T_scan_opts)) j["T_scan"] = o.T_scan;
  if (o.fields) j["fields"] = true;
  if (o.measures) j["measures"] = true;
  if (o.no_richardson) j["richardson"] = false;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet spectra, shape measures and thermodynamics of size-invariant domains", "sist"};
  app.set_version_flag("--version", SIST_VERSION);
  app.require_subcommand(1);

  using Handler = std::function<void(Run&, std::ostream&)>;
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"spectrum", "lowest Dirichlet levels (CSV i, k, error estimate)", cmd_spectrum},
      {"weyl", "levels against the Weyl prediction", cmd_weyl},
      {"measures", "inscribed radius and Hausdorff distance", cmd_measures},
      {"levelstats", "distinct levels, mean spacing, spacing histogram", cmd_levelstats},
      {"thermo", "canonical thermodynamics", cmd_thermo},
      {"sweep", "shape-variable sweep with level tracking", cmd_sweep},
      {"avalanche", "avalanche intervals along a sweep", cmd_avalanche},
  };
  Overrides o;
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& [name, help, handler] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, o);
    subs.emplace_back(sub, handler);
  }
  CLI::App* validate_cmd = app.add_subcommand("validate", "run the built-in oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n";
    const auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return 2;
  }

  try {
    if (validate_cmd->parsed()) return run_validation(out) ? 0 : 1;
    for (const auto& [sub, handler] : subs) {
      if (!sub->parsed()) continue;
      std::map<std::string, std::string> inputs;
      const RunConfig cfg = parse_config(merged_config(o, inputs));
      Run r(cfg, std::move(inputs));
      handler(r, out);
      r.finish(out);
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateGeometryError& e) {
    err << "degenerate geometry: " << e.what() << '\n';
    return 2;
  } catch (const InsufficientLevelsError& e) {
    err << "not enough levels: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    err << "convergence failure: " << e.what() << '\n';
    return 3;
  } catch (const RefinementNeededError& e) {
    err << "refinement needed: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace sist::cli
