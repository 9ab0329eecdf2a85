// Command-line harness: configure an objective and an algorithm, execute the
// run, and emit machine-readable traces for plotting and reproduction.
//
// Subcommands:
//   run       one minimization run, CSV trace `k,f,grad_norm,v_norm,reset`
//   detect    frictionless detection pass, one CSV row per candidate
//   combined  detection + local minimization from one or more starts
//   analyze   per-mode table `omega,theta,phi,first_reset_estimate`
//
// A single JSON config (--config) plus flag overrides (flags win) drives every
// run; the effective config is echoed into the output header so any output
// file can be re-run byte-for-byte. All randomness derives from one 64-bit
// seed. Exit codes: 0 success, 1 divergence (or an empty combined search),
// 2 configuration error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conslaw/conslaw.hpp"

using json = nlohmann::ordered_json;
using namespace conslaw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiverged = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

json vec_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// "3" broadcasts to a constant vector; "1,2,3" is taken verbatim.
json parse_vecspec(const std::string& text) {
  auto parse_one = [](const std::string& s) {
    try {
      size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + s + "'");
    }
  };
  if (text.find(',') == std::string::npos) return parse_one(text);
  json arr = json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) arr.push_back(parse_one(item));
  return arr;
}

Vector resolve_vector(const json& spec, int dim, const char* what) {
  if (spec.is_number()) return Vector::Constant(dim, spec.get<double>());
  if (spec.is_array()) {
    if (static_cast<int>(spec.size()) != dim)
      throw ConfigError(std::string(what) + ": expected " +
                        std::to_string(dim) + " components, got " +
                        std::to_string(spec.size()));
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
      if (!spec[i].is_number())
        throw ConfigError(std::string(what) + ": non-numeric component");
      v[i] = spec[i].get<double>();
    }
    return v;
  }
  throw ConfigError(std::string(what) + ": expected a number or an array");
}

// ---------------------------------------------------------------------------
// Objective registry

struct BuiltObjective {
  Objective f;
  json canonical;  // the parameter object echoed into output headers
};

BuiltObjective make_objective(const json& spec, std::uint64_t seed) {
  if (!spec.is_object() || !spec.contains("name") || !spec["name"].is_string())
    throw ConfigError("objective: expected an object with a 'name'");
  const std::string name = spec["name"].get<std::string>();

  auto get_int = [&spec](const char* key, int fallback) {
    if (!spec.contains(key)) return fallback;
    if (!spec[key].is_number_integer() || spec[key].get<long>() <= 0)
      throw ConfigError(std::string("objective.") + key +
                        ": expected a positive integer");
    return spec[key].get<int>();
  };
  auto get_double = [&spec](const char* key, double fallback) {
    if (!spec.contains(key)) return fallback;
    if (!spec[key].is_number())
      throw ConfigError(std::string("objective.") + key +
                        ": expected a number");
    return spec[key].get<double>();
  };

  BuiltObjective out;
  out.canonical["name"] = name;
  try {
    if (name == "quadratic-random") {
      int dim = get_int("dim", 500);
      out.f = quadratic(QuadraticSpec::random_spd(dim, seed));
      out.canonical["dim"] = dim;
    } else if (name == "quadratic-nesterov") {
      int dim = get_int("dim", 1000);
      out.f = quadratic(nesterov_worst_case(dim));
      out.canonical["dim"] = dim;
    } else if (name == "quadratic-diag") {
      if (!spec.contains("diag"))
        throw ConfigError("objective quadratic-diag requires 'diag'");
      json d = spec["diag"];
      if (d.is_number()) d = json::array({d});
      Vector eigs = resolve_vector(d, static_cast<int>(d.size()), "diag");
      if ((eigs.array() < 0.0).any())
        throw ConfigError("quadratic-diag: entries must be nonnegative");
      out.f = quadratic(
          QuadraticSpec(Matrix(eigs.asDiagonal()), Vector::Zero(eigs.size())));
      out.canonical["diag"] = vec_to_json(eigs);
    } else if (name == "lse") {
      int dim = get_int("dim", 50);
      int terms = get_int("terms", 200);
      double rho = get_double("rho", 5.0);
      out.f = random_log_sum_exp(dim, terms, rho, seed);
      out.canonical["dim"] = dim;
      out.canonical["terms"] = terms;
      out.canonical["rho"] = rho;
    } else if (name == "styblinski-tang") {
      int dim = get_int("dim", 10);
      out.f = styblinski_tang(dim);
      out.canonical["dim"] = dim;
    } else if (name == "shekel") {
      int m = get_int("m", 5);
      out.f = shekel(ShekelSpec(m));
      out.canonical["m"] = m;
    } else if (name == "piecewise-cosine") {
      out.f = piecewise_cosine_1d();
    } else if (name == "sine-bowl") {
      out.f = sine_bowl_2d();
    } else if (name == "linear") {
      int dim = get_int("dim", 2);
      Vector slope = spec.contains("slope")
                         ? resolve_vector(spec["slope"], dim, "slope")
                         : Vector::Ones(dim);
      out.f = linear(slope);
      out.canonical["dim"] = dim;
      out.canonical["slope"] = vec_to_json(slope);
    } else {
      throw ConfigError("unknown objective '" + name + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("objective: ") + e.what());
  }
  return out;
}

// Step-size fallback from the hessian at x: 1/sqrt(L) for the conservation
// dynamics, 1/L for the gradient-based baselines, with L the largest hessian
// eigenvalue.
enum class StepKind { conservation, baseline };

double default_step(const Objective& f, const Vector& x, StepKind kind) {
  if (!f.has_hessian())
    throw ConfigError(
        "no step size given and the objective has no hessian; pass --h");
  Eigen::SelfAdjointEigenSolver<Matrix> es(f.hessian(x));
  if (es.info() != Eigen::Success)
    throw ConfigError("hessian eigen-decomposition failed; pass --h");
  double L = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(L > 0.0))
    throw ConfigError("hessian vanishes at the start point; pass --h");
  return kind == StepKind::conservation ? 1.0 / std::sqrt(L) : 1.0 / L;
}

// ---------------------------------------------------------------------------
// Option plumbing

struct Options {
  std::string config_path;
  std::string out_path;
  json flags = json::object();            // top-level overrides
  json objective_flags = json::object();  // objective.* overrides
};

json load_config(const Options& opt) {
  json cfg = json::object();
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot open config file " + opt.config_path);
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be an object");
  }
  for (auto& [key, value] : opt.flags.items()) cfg[key] = value;
  if (!opt.objective_flags.empty()) {
    if (!cfg.contains("objective") || !cfg["objective"].is_object())
      cfg["objective"] = json::object();
    for (auto& [key, value] : opt.objective_flags.items())
      cfg["objective"][key] = value;
  }
  return cfg;
}

std::uint64_t get_seed(const json& cfg) {
  if (!cfg.contains("seed")) return 42;
  if (!cfg["seed"].is_number_integer())
    throw ConfigError("seed: expected an integer");
  return cfg["seed"].get<std::uint64_t>();
}

double get_number(const json& cfg, const char* key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg[key].is_number())
    throw ConfigError(std::string(key) + ": expected a number");
  return cfg[key].get<double>();
}

long get_integer(const json& cfg, const char* key, long fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg[key].is_number_integer())
    throw ConfigError(std::string(key) + ": expected an integer");
  return cfg[key].get<long>();
}

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;
  bool to_file = false;

  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw ConfigError("cannot open output file " + path);
      stream = &file;
      to_file = true;
    }
  }
  std::ostream& os() { return *stream; }
  // run summaries go to stdout unless the CSV itself occupies it
  std::ostream& summary() { return to_file ? std::cout : std::cerr; }
};

void write_header(std::ostream& os, const char* subcommand, const json& cfg,
                  std::uint64_t seed) {
  os << "# conslaw " << subcommand << "\n";
  os << "# config: " << cfg.dump() << "\n";
  os << "# seed: " << seed << "\n";
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_run(const Options& opt) {
  json cfg = load_config(opt);
  const std::uint64_t seed = get_seed(cfg);

  if (!cfg.contains("algorithm") || !cfg["algorithm"].is_string())
    throw ConfigError(
        "run requires an algorithm (gd, heavy-ball, nesterov, ade)");
  const std::string algorithm = cfg["algorithm"].get<std::string>();

  BuiltObjective built =
      make_objective(cfg.value("objective", json::object()), seed);
  const Objective& f = built.f;

  Vector x0 = cfg.contains("x0") ? resolve_vector(cfg["x0"], f.dim, "x0")
                                 : Vector::Zero(f.dim);
  const double h = cfg.contains("h")
                       ? get_number(cfg, "h", 0.0)
                       : default_step(f, x0,
                                      algorithm == "ade"
                                          ? StepKind::conservation
                                          : StepKind::baseline);
  const double eps = get_number(cfg, "eps", 1e-6);
  const long maxiter = get_integer(cfg, "maxiter", 100000);
  const long every = get_integer(cfg, "every", 1);

  json echo;
  echo["algorithm"] = algorithm;
  echo["objective"] = built.canonical;
  echo["h"] = h;
  echo["eps"] = eps;
  echo["maxiter"] = maxiter;
  echo["every"] = every;
  echo["seed"] = seed;
  echo["x0"] = vec_to_json(x0);

  RunTrace trace;
  try {
    if (algorithm == "ade") {
      RunConfig rc;
      rc.h = h;
      rc.eps = eps;
      rc.maxiter = maxiter;
      rc.record_every = every;
      if (cfg.contains("v0")) {
        rc.v0 = resolve_vector(cfg["v0"], f.dim, "v0");
        echo["v0"] = vec_to_json(rc.v0);
      }
      trace = ade_minimize(f, x0, rc);
    } else {
      BaselineConfig bc;
      bc.h = h;
      bc.eps = eps;
      bc.maxiter = maxiter;
      bc.record_every = every;
      if (cfg.contains("gamma")) {
        bc.gamma = get_number(cfg, "gamma", 0.0);
        echo["gamma"] = *bc.gamma;
      }
      if (cfg.contains("kappa")) {
        bc.kappa = get_number(cfg, "kappa", 0.0);
        echo["kappa"] = *bc.kappa;
      }
      if (algorithm == "gd") {
        trace = gradient_descent(f, x0, bc);
      } else if (algorithm == "heavy-ball") {
        if (!bc.gamma) throw ConfigError("heavy-ball requires --gamma");
        trace = heavy_ball(f, x0, bc);
      } else if (algorithm == "nesterov") {
        trace = nesterov_agd(f, x0, bc);
      } else {
        throw ConfigError("unknown algorithm '" + algorithm + "'");
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  Output out(opt.out_path);
  write_header(out.os(), "run", echo, seed);
  out.os() << "k,f,grad_norm,v_norm,reset\n";
  for (const auto& r : trace.records)
    out.os() << r.k << ',' << fmt(r.f) << ',' << fmt(r.grad_norm) << ','
             << fmt(r.v_norm) << ',' << (r.reset ? 1 : 0) << '\n';

  out.summary() << "iterations=" << trace.iterations
                << " termination=" << to_string(trace.termination)
                << " final_f=" << fmt(f.value(trace.final_state.x)) << "\n";
  return trace.termination == Termination::diverged ? kExitDiverged : kExitOk;
}

int cmd_detect(const Options& opt) {
  json cfg = load_config(opt);
  const std::uint64_t seed = get_seed(cfg);
  BuiltObjective built =
      make_objective(cfg.value("objective", json::object()), seed);
  const Objective& f = built.f;

  Vector x0 = cfg.contains("x0") ? resolve_vector(cfg["x0"], f.dim, "x0")
                                 : Vector::Zero(f.dim);
  const double h = cfg.contains("h")
                       ? get_number(cfg, "h", 0.0)
                       : default_step(f, x0, StepKind::conservation);
  const long n = get_integer(cfg, "n_steps", 1000);

  RunConfig rc;
  rc.h = h;
  rc.seed = seed;
  rc.v0 =
      cfg.contains("v0") ? resolve_vector(cfg["v0"], f.dim, "v0") : Vector();

  CandidateSet cs;
  try {
    cs = ec_detect(f, x0, rc, n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  json echo;
  echo["objective"] = built.canonical;
  echo["h"] = h;
  echo["n_steps"] = n;
  echo["seed"] = seed;
  echo["x0"] = vec_to_json(x0);
  echo["v0"] = vec_to_json(cs.source_run.v0);  // heuristic choice made explicit

  Output out(opt.out_path);
  write_header(out.os(), "detect", echo, seed);
  out.os() << "# status: " << to_string(cs.status) << "\n";
  out.os() << "# steps: " << cs.steps_taken << "\n";
  out.os() << "step_index";
  for (int i = 1; i <= f.dim; ++i) out.os() << ",x" << i;
  out.os() << ",f\n";
  for (const auto& c : cs.candidates) {
    out.os() << c.step_index;
    for (int i = 0; i < f.dim; ++i) out.os() << ',' << fmt(c.position[i]);
    out.os() << ',' << fmt(c.f) << '\n';
  }

  if (cs.candidates.empty())
    std::cerr << "warning: no speed maxima detected along the trajectory\n";
  if (cs.status == DetectStatus::halted_domain)
    std::cerr << "warning: trajectory left the objective domain after step "
              << cs.steps_taken << "\n";
  out.summary() << "candidates=" << cs.candidates.size()
                << " status=" << to_string(cs.status)
                << " steps=" << cs.steps_taken << "\n";
  return cs.status == DetectStatus::diverged ? kExitDiverged : kExitOk;
}

int cmd_combined(const Options& opt) {
  json cfg = load_config(opt);
  const std::uint64_t seed = get_seed(cfg);
  BuiltObjective built =
      make_objective(cfg.value("objective", json::object()), seed);
  const Objective& f = built.f;

  std::vector<Vector> starts;
  if (cfg.contains("starts")) {
    if (!cfg["starts"].is_array() || cfg["starts"].empty())
      throw ConfigError("starts: expected a non-empty array");
    for (const auto& s : cfg["starts"])
      starts.push_back(resolve_vector(s, f.dim, "starts[i]"));
  } else {
    starts.push_back(cfg.contains("x0") ? resolve_vector(cfg["x0"], f.dim, "x0")
                                        : Vector::Zero(f.dim));
  }

  const double h =
      cfg.contains("h")
          ? get_number(cfg, "h", 0.0)
          : default_step(f, starts.front(), StepKind::conservation);
  const double eps = get_number(cfg, "eps", 1e-6);
  const long maxiter = get_integer(cfg, "maxiter", 100000);
  const long n = get_integer(cfg, "n_steps", 1000);

  RunConfig det;
  det.h = h;
  det.seed = seed;
  det.v0 =
      cfg.contains("v0") ? resolve_vector(cfg["v0"], f.dim, "v0") : Vector();
  RunConfig loc;
  loc.h = h;
  loc.eps = eps;
  loc.maxiter = maxiter;

  CombinedResult res;
  try {
    res = combined_search(f, starts, det, n, loc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  }

  json echo;
  echo["objective"] = built.canonical;
  echo["h"] = h;
  echo["eps"] = eps;
  echo["maxiter"] = maxiter;
  echo["n_steps"] = n;
  echo["seed"] = seed;
  json jstarts = json::array();
  for (const auto& s : starts) jstarts.push_back(vec_to_json(s));
  echo["starts"] = jstarts;
  if (cfg.contains("v0")) echo["v0"] = vec_to_json(det.v0);

  Output out(opt.out_path);
  write_header(out.os(), "combined", echo, seed);
  for (const auto& w : res.warnings) out.os() << "# warning: " << w << "\n";
  out.os() << "record,start,step,f";
  for (int i = 1; i <= f.dim; ++i) out.os() << ",x" << i;
  out.os() << "\n";
  auto row = [&](const char* kind, int start, long step, double fv,
                 const Vector& x) {
    out.os() << kind << ',' << start << ',' << step << ',' << fmt(fv);
    for (int i = 0; i < f.dim; ++i) out.os() << ',' << fmt(x[i]);
    out.os() << '\n';
  };
  for (const auto& c : res.candidates)
    row("candidate", c.start_index, c.step_index, c.f, c.position);
  const LocalMinimum* best = nullptr;
  for (const auto& m : res.minima) {
    row("minimum", m.start_index, m.candidate_step, m.f, m.position);
    if (!best || m.f < best->f) best = &m;
  }
  row("global", best->start_index, best->candidate_step, res.f_min, res.argmin);

  out.summary() << "global_f=" << fmt(res.f_min)
                << " minima=" << res.minima.size()
                << " candidates=" << res.candidates.size() << "\n";
  return kExitOk;
}

int cmd_analyze(const Options& opt) {
  json cfg = load_config(opt);
  const std::uint64_t seed = get_seed(cfg);
  BuiltObjective built =
      make_objective(cfg.value("objective", json::object()), seed);
  const Objective& f = built.f;

  Vector at = cfg.contains("at")   ? resolve_vector(cfg["at"], f.dim, "at")
              : cfg.contains("x0") ? resolve_vector(cfg["x0"], f.dim, "x0")
                                   : Vector::Zero(f.dim);
  if (!f.has_hessian())
    throw ConfigError("analyze requires an objective with a hessian");
  const double h = cfg.contains("h")
                       ? get_number(cfg, "h", 0.0)
                       : default_step(f, at, StepKind::conservation);
  if (h <= 0.0) throw ConfigError("h must be positive");

  BlockDiagonalization bd;
  try {
    bd = block_diagonalize(build_transfer(f.hessian(at), h));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  json echo;
  echo["objective"] = built.canonical;
  echo["h"] = h;
  echo["at"] = vec_to_json(at);
  echo["seed"] = seed;

  Output out(opt.out_path);
  write_header(out.os(), "analyze", echo, seed);
  out.os() << "omega,theta,phi,first_reset_estimate\n";
  for (const auto& mb : bd.modes) {
    out.os() << fmt(mb.omega) << ',';
    if (mb.theta) out.os() << fmt(*mb.theta);
    out.os() << ',';
    if (mb.phi) out.os() << fmt(*mb.phi);
    out.os() << ',';
    if (mb.omega > 0.0)
      out.os() << fmt(0.5 * std::numbers::pi / (h * mb.omega));
    else
      out.os() << "inf";  // drift mode, nothing oscillates
    out.os() << '\n';
  }
  out.summary() << "modes=" << bd.modes.size() << "\n";
  return kExitOk;
}

void add_common_options(CLI::App* sub, Options& opt) {
  sub->set_help_flag("--help", "print help and exit");  // keep --h for the step
  sub->add_option("--config", opt.config_path, "JSON config file");
  sub->add_option("--out", opt.out_path,
                  "output file path (default: standard output)");

  auto num_flag = [sub, &opt](const char* flag, const char* key,
                              const char* help) {
    sub->add_option_function<double>(
        flag, [&opt, key](double v) { opt.flags[key] = v; }, help);
  };
  auto int_flag = [sub, &opt](const char* flag, const char* key,
                              const char* help) {
    sub->add_option_function<long>(
        flag, [&opt, key](long v) { opt.flags[key] = v; }, help);
  };
  auto vec_flag = [sub, &opt](const char* flag, const char* key,
                              const char* help) {
    sub->add_option_function<std::string>(
        flag,
        [&opt, key](const std::string& s) { opt.flags[key] = parse_vecspec(s); },
        help);
  };

  num_flag("--h", "h", "step size (default 1/sqrt(L) when a hessian exists)");
  num_flag("--eps", "eps", "gradient-norm stopping tolerance");
  int_flag("--maxiter", "maxiter", "iteration cap");
  int_flag("--n", "n_steps", "detection steps");
  int_flag("--every", "every", "record every k-th iteration in the trace");
  int_flag("--seed", "seed", "64-bit seed for all randomness");
  vec_flag("--x0", "x0", "start point: scalar broadcast or comma list");
  vec_flag("--v0", "v0", "initial velocity: scalar broadcast or comma list");
  vec_flag("--at", "at", "evaluation point for the hessian");
  num_flag("--gamma", "gamma", "heavy-ball momentum coefficient");
  num_flag("--kappa", "kappa", "strong-convexity ratio mu/L for nesterov");
  sub->add_option_function<std::vector<std::string>>(
      "--start",
      [&opt](const std::vector<std::string>& items) {
        json arr = json::array();
        for (const auto& s : items) arr.push_back(parse_vecspec(s));
        opt.flags["starts"] = arr;
      },
      "start point for combined search (repeatable)");

  sub->add_option_function<std::string>(
      "--objective",
      [&opt](const std::string& s) { opt.objective_flags["name"] = s; },
      "objective name (quadratic-random, quadratic-nesterov, quadratic-diag, "
      "lse, styblinski-tang, shekel, piecewise-cosine, sine-bowl, linear)");
  sub->add_option_function<long>(
      "--dim", [&opt](long v) { opt.objective_flags["dim"] = v; },
      "objective dimension");
  sub->add_option_function<long>(
      "--m", [&opt](long v) { opt.objective_flags["m"] = v; },
      "shekel term count (5, 7 or 10)");
  sub->add_option_function<long>(
      "--terms", [&opt](long v) { opt.objective_flags["terms"] = v; },
      "lse term count");
  sub->add_option_function<double>(
      "--rho", [&opt](double v) { opt.objective_flags["rho"] = v; },
      "lse smoothing parameter");
  sub->add_option_function<std::string>(
      "--diag",
      [&opt](const std::string& s) {
        opt.objective_flags["diag"] = parse_vecspec(s);
      },
      "quadratic-diag eigenvalues, comma list");
  sub->add_option_function<std::string>(
      "--slope",
      [&opt](const std::string& s) {
        opt.objective_flags["slope"] = parse_vecspec(s);
      },
      "linear objective slope");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conservation-law optimization runs and analysis"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  Options run_opt, detect_opt, combined_opt, analyze_opt;
  CLI::App* run = app.add_subcommand("run", "execute one minimization run");
  run->add_option_function<std::string>(
      "--algorithm",
      [&run_opt](const std::string& s) { run_opt.flags["algorithm"] = s; },
      "gd, heavy-ball, nesterov or ade");
  add_common_options(run, run_opt);

  CLI::App* detect =
      app.add_subcommand("detect", "record speed maxima along a trajectory");
  add_common_options(detect, detect_opt);

  CLI::App* combined = app.add_subcommand(
      "combined", "detection plus local minimization, global comparison");
  add_common_options(combined, combined_opt);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "per-mode phase angles and reset estimates");
  add_common_options(analyze, analyze_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (detect->parsed()) return cmd_detect(detect_opt);
    if (combined->parsed()) return cmd_combined(combined_opt);
    if (analyze->parsed()) return cmd_analyze(analyze_opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
