#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "conslaw/objective.hpp"
#include "conslaw/types.hpp"

namespace conslaw {

/// Position-velocity pair. Construction rejects length mismatch and
/// non-finite components, so a PhaseState is always a valid phase point.
struct PhaseState {
  Vector x;
  Vector v;

  PhaseState() = default;
  PhaseState(Vector x_, Vector v_) : x(std::move(x_)), v(std::move(v_)) {
    detail::require(x.size() == v.size(),
                    "PhaseState: x and v must have equal length");
    detail::require(x.allFinite() && v.allFinite(),
                    "PhaseState: non-finite component");
  }

  Eigen::Index dim() const { return x.size(); }
};

/// Raised when a step consumes or produces a non-finite quantity. Carries
/// the offending raw phase coordinates (which may themselves be non-finite,
/// hence not a PhaseState).
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Vector x, Vector v)
      : std::runtime_error(what), x_(std::move(x)), v_(std::move(v)) {}

  const Vector& x() const { return x_; }
  const Vector& v() const { return v_; }

 private:
  Vector x_;
  Vector v_;
};

struct Energy {
  double kinetic;    // ½‖v‖²
  double potential;  // f(x)
  double total;      // kinetic + potential
};

namespace detail {

inline void check_step_args(const Objective& f, const PhaseState& s, double h) {
  require(h > 0.0, "integrator step size must be positive");
  require(s.dim() == f.dim, "state dimension does not match objective");
}

}  // namespace detail

/// First-order symplectic Euler step: kick with the old position's gradient,
/// then drift with the new velocity.
///
///   v' = v - h ∇f(x)
///   x' = x + h v'
inline PhaseState symplectic_euler_step(const Objective& f, const PhaseState& s,
                                        double h) {
  detail::check_step_args(f, s, h);
  Vector g = f.gradient(s.x);
  if (!g.allFinite())
    throw IntegrationError("symplectic_euler_step: non-finite gradient", s.x,
                           s.v);
  Vector v = s.v - h * g;
  Vector x = s.x + h * v;
  if (!v.allFinite() || !x.allFinite())
    throw IntegrationError("symplectic_euler_step: non-finite state",
                           std::move(x), std::move(v));
  return PhaseState(std::move(x), std::move(v));
}

/// Second-order, time-symmetric Stormer-Verlet step
/// (half-kick / drift / half-kick).
inline PhaseState stormer_verlet_step(const Objective& f, const PhaseState& s,
                                      double h) {
  detail::check_step_args(f, s, h);
  Vector g = f.gradient(s.x);
  if (!g.allFinite())
    throw IntegrationError("stormer_verlet_step: non-finite gradient", s.x,
                           s.v);
  Vector vh = s.v - 0.5 * h * g;
  Vector x = s.x + h * vh;
  if (!vh.allFinite() || !x.allFinite())
    throw IntegrationError("stormer_verlet_step: non-finite state",
                           std::move(x), std::move(vh));
  Vector g1 = f.gradient(x);
  if (!g1.allFinite())
    throw IntegrationError("stormer_verlet_step: non-finite gradient",
                           std::move(x), std::move(vh));
  Vector v = vh - 0.5 * h * g1;
  if (!v.allFinite())
    throw IntegrationError("stormer_verlet_step: non-finite state",
                           std::move(x), std::move(v));
  return PhaseState(std::move(x), std::move(v));
}

/// Total energy H(x, v) = ½‖v‖² + f(x).
inline Energy energy(const Objective& f, const PhaseState& s) {
  Energy e;
  e.kinetic = 0.5 * s.v.squaredNorm();
  e.potential = f.value(s.x);
  e.total = e.kinetic + e.potential;
  return e;
}

}  // namespace conslaw
