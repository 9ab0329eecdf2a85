#pragma once

#include <vector>

#include "conslaw/integrate.hpp"
#include "conslaw/types.hpp"

namespace conslaw {

enum class Termination { converged, maxiter, diverged };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::maxiter: return "maxiter";
    default: return "diverged";
  }
}

/// One row per executed iteration. `f`, `grad_norm` are taken at the iterate
/// the iteration starts from; `v_norm` and `reset` describe the velocity
/// decision made during the iteration (so reset implies v_norm == 0).
struct TraceRecord {
  long k;
  double f;
  double grad_norm;
  double v_norm;
  bool reset;
};

/// Per-run record stream. `records` holds one entry per executed iteration
/// subject to the recording stride; `iterations` counts every executed
/// iteration regardless. `final_state` is the last finite state reached,
/// also when the run diverged.
struct RunTrace {
  std::vector<TraceRecord> records;
  std::vector<Vector> positions;  // parallel to records when requested
  long iterations = 0;
  PhaseState final_state;
  Termination termination = Termination::maxiter;
};

namespace detail {

inline void check_start(const Objective& f, const Vector& x0) {
  require(x0.size() == f.dim, "start point dimension mismatch");
  require(x0.allFinite(), "start point must be finite");
}

struct TraceRecorder {
  RunTrace& trace;
  long every;
  bool positions;

  void operator()(long k, double fval, double gnorm, double vnorm, bool reset,
                  const Vector& x) {
    if (k % every != 0) return;
    trace.records.push_back({k, fval, gnorm, vnorm, reset});
    if (positions) trace.positions.push_back(x);
  }
};

}  // namespace detail

}  // namespace conslaw
