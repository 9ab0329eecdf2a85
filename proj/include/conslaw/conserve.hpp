#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "conslaw/integrate.hpp"
#include "conslaw/objective.hpp"
#include "conslaw/trace.hpp"
#include "conslaw/types.hpp"

namespace conslaw {

struct RunConfig {
  double h = 0.1;
  long maxiter = 10000;
  double eps = 1e-6;  // gradient-norm stopping tolerance
  Vector v0;          // empty means "unspecified"
  std::uint64_t seed = 0;  // feeds the default detection-velocity heuristic
  long record_every = 1;
  bool record_positions = false;

  void validate() const {
    detail::require(h > 0.0, "RunConfig: h must be positive");
    detail::require(eps > 0.0, "RunConfig: eps must be positive");
    detail::require(maxiter >= 1, "RunConfig: maxiter must be >= 1");
    detail::require(record_every >= 1, "RunConfig: record_every must be >= 1");
  }
};

/// Dissipates energy by zeroing the velocity whenever the candidate speed
/// fails to exceed the current speed. One iteration:
///
///   v_iter = v - h ∇f(x);  v = (‖v_iter‖ <= ‖v‖) ? 0 : v_iter;  x += h v
///
/// Stops when ‖∇f(x)‖ <= eps or at maxiter. A reset iteration leaves x in
/// place, and the step right after a reset is always accepted unless the
/// gradient vanishes.
inline RunTrace ade_minimize(const Objective& f, const Vector& x0,
                             const RunConfig& cfg) {
  cfg.validate();
  detail::check_start(f, x0);
  if (cfg.v0.size() > 0)
    detail::require(cfg.v0.isZero(0.0),
                    "ade_minimize: v0 must be the zero vector");

  RunTrace tr;
  detail::TraceRecorder record{tr, cfg.record_every, cfg.record_positions};

  Vector x = x0;
  Vector v = Vector::Zero(f.dim);
  Vector viter(f.dim), xn(f.dim);
  Vector g = f.gradient(x);
  long k = 0;
  while (true) {
    if (!g.allFinite()) {
      tr.termination = Termination::diverged;
      break;
    }
    const double gn = g.norm();
    if (gn <= cfg.eps) {
      tr.termination = Termination::converged;
      break;
    }
    if (k >= cfg.maxiter) {
      tr.termination = Termination::maxiter;
      break;
    }
    viter = v - cfg.h * g;
    if (!viter.allFinite()) {
      tr.termination = Termination::diverged;
      break;
    }
    const bool reset = viter.norm() <= v.norm();
    if (reset)
      v.setZero();
    else
      v.swap(viter);
    record(k, f.value(x), gn, v.norm(), reset, x);
    if (!reset) {
      xn = x + cfg.h * v;
      if (!xn.allFinite()) {
        tr.termination = Termination::diverged;
        break;
      }
      x.swap(xn);
      g = f.gradient(x);
    }
    ++k;
  }
  tr.iterations = k;
  tr.final_state = PhaseState(std::move(x), std::move(v));
  return tr;
}

enum class DetectStatus {
  completed,      // ran all n steps
  halted_domain,  // trajectory left the objective's domain; partial result
  diverged        // non-finite state; partial result
};

inline const char* to_string(DetectStatus s) {
  switch (s) {
    case DetectStatus::completed: return "completed";
    case DetectStatus::halted_domain: return "halted-domain";
    default: return "diverged";
  }
}

struct Candidate {
  Vector position;
  long step_index;
  double f;
};

struct CandidateSet {
  std::vector<Candidate> candidates;
  RunConfig source_run;
  long steps_taken = 0;
  DetectStatus status = DetectStatus::completed;
};

/// Picks a detection velocity when the caller leaves v0 unspecified:
/// 100 seeded probes uniform in the per-coordinate box x0 ± 5 estimate the
/// local range of f; the magnitude sqrt(2 · range) is enough kinetic energy
/// to climb the barriers seen by the probes, aimed at the lowest probe.
inline Vector default_detect_velocity(const Objective& f, const Vector& x0,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-5.0, 5.0);
  double flo = std::numeric_limits<double>::infinity();
  double fhi = -std::numeric_limits<double>::infinity();
  Vector best = x0;
  Vector p(x0.size());
  for (int i = 0; i < 100; ++i) {
    for (Eigen::Index j = 0; j < x0.size(); ++j) p[j] = x0[j] + offset(rng);
    double fp;
    try {
      fp = f.value(p);
    } catch (const std::domain_error&) {
      continue;
    }
    if (!std::isfinite(fp)) continue;
    if (fp < flo) {
      flo = fp;
      best = p;
    }
    fhi = std::max(fhi, fp);
  }
  const double margin = fhi - flo;
  if (!std::isfinite(margin) || margin <= 0.0) return Vector::Unit(x0.size(), 0);
  Vector dir = best - x0;
  const double len = dir.norm();
  if (len == 0.0) return std::sqrt(2.0 * margin) * Vector::Unit(x0.size(), 0);
  return std::sqrt(2.0 * margin) * dir / len;
}

/// Frictionless detection pass: integrates n symplectic Euler steps with no
/// velocity reset and records x_k whenever the speed has a local maximum,
/// ‖v_k‖ >= ‖v_{k+1}‖ and ‖v_k‖ >= ‖v_{k-1}‖ for k in 1..n-1. A run of
/// consecutive equal speeds records only the first index of the plateau.
/// f is evaluated only for recorded candidates.
inline CandidateSet ec_detect(const Objective& f, const Vector& x0,
                              const RunConfig& cfg, long n) {
  cfg.validate();
  detail::check_start(f, x0);
  detail::require(n >= 2, "ec_detect: n must be >= 2");

  CandidateSet result;
  result.source_run = cfg;
  Vector v0 = cfg.v0.size() > 0 ? cfg.v0
                                : default_detect_velocity(f, x0, cfg.seed);
  result.source_run.v0 = v0;

  PhaseState cur(x0, v0);
  double speed_prev = 0.0;  // ‖v_{k-1}‖, meaningful once k >= 1
  double speed_cur = cur.v.norm();
  bool in_plateau = false;  // previous index satisfied the peak condition
  for (long step = 1; step <= n; ++step) {
    PhaseState next;
    try {
      next = symplectic_euler_step(f, cur, cfg.h);
    } catch (const IntegrationError&) {
      result.status = DetectStatus::diverged;
      break;
    } catch (const std::domain_error&) {
      result.status = DetectStatus::halted_domain;
      break;
    }
    const double speed_next = next.v.norm();
    const long k = step - 1;
    if (k >= 1) {
      const bool peak = speed_cur >= speed_next && speed_cur >= speed_prev;
      if (peak) {
        if (!(in_plateau && speed_cur == speed_prev))
          result.candidates.push_back({cur.x, k, f.value(cur.x)});
        in_plateau = true;
      } else {
        in_plateau = false;
      }
    }
    speed_prev = speed_cur;
    speed_cur = speed_next;
    cur = std::move(next);
    result.steps_taken = step;
  }
  return result;
}

struct CombinedCandidate {
  Vector position;
  long step_index;
  double f;
  int start_index;
};

struct LocalMinimum {
  Vector position;
  double f;
  int start_index;      // start whose detection produced the seed candidate
  long candidate_step;  // step index of that candidate
  Termination termination;
};

struct CombinedResult {
  Vector argmin;
  double f_min = std::numeric_limits<double>::quiet_NaN();
  std::vector<CombinedCandidate> candidates;
  std::vector<LocalMinimum> minima;
  std::vector<std::string> warnings;
};

/// Detection from every start, then dissipative minimization seeded at every
/// detected candidate (v0 = 0), then comparison. Local results whose
/// positions differ by less than 1e-4·sqrt(dim) are merged, keeping the
/// lower f. Diverged local runs are excluded with a warning record.
inline CombinedResult combined_search(const Objective& f,
                                      const std::vector<Vector>& starts,
                                      const RunConfig& cfg_detect, long n,
                                      const RunConfig& cfg_local) {
  detail::require(!starts.empty(), "combined_search: at least one start");
  CombinedResult result;

  for (int si = 0; si < static_cast<int>(starts.size()); ++si) {
    CandidateSet cs = ec_detect(f, starts[si], cfg_detect, n);
    if (cs.status != DetectStatus::completed)
      result.warnings.push_back("detection from start " + std::to_string(si) +
                                " ended early: " + to_string(cs.status));
    for (auto& c : cs.candidates)
      result.candidates.push_back(
          {std::move(c.position), c.step_index, c.f, si});
  }
  if (result.candidates.empty())
    throw std::runtime_error("combined_search: no candidates");

  RunConfig local = cfg_local;
  local.v0 = Vector();  // dissipative stage starts from rest
  const double merge_tol = 1e-4 * std::sqrt(static_cast<double>(f.dim));
  for (const auto& cand : result.candidates) {
    RunTrace t = ade_minimize(f, cand.position, local);
    if (t.termination == Termination::diverged) {
      result.warnings.push_back(
          "local run from candidate at step " +
          std::to_string(cand.step_index) + " (start " +
          std::to_string(cand.start_index) + ") diverged; excluded");
      continue;
    }
    const double fv = f.value(t.final_state.x);
    bool merged = false;
    for (auto& m : result.minima) {
      if ((m.position - t.final_state.x).norm() < merge_tol) {
        if (fv < m.f) {
          m.position = t.final_state.x;
          m.f = fv;
          m.start_index = cand.start_index;
          m.candidate_step = cand.step_index;
          m.termination = t.termination;
        }
        merged = true;
        break;
      }
    }
    if (!merged)
      result.minima.push_back({t.final_state.x, fv, cand.start_index,
                               cand.step_index, t.termination});
  }
  if (result.minima.empty())
    throw std::runtime_error("combined_search: every local run diverged");

  const LocalMinimum* best = &result.minima.front();
  for (const auto& m : result.minima)
    if (m.f < best->f) best = &m;
  result.argmin = best->position;
  result.f_min = best->f;
  return result;
}

/// First-reset step estimate n ~ (π/2)·sqrt(L/mu) for eigenvalue extremes
/// L >= mu > 0 of the hessian at the minimum.
inline double iteration_estimate(double L, double mu) {
  detail::require(mu > 0.0, "iteration_estimate: mu must be positive");
  detail::require(mu <= L, "iteration_estimate: mu must not exceed L");
  return 0.5 * std::numbers::pi * std::sqrt(L / mu);
}

}  // namespace conslaw
