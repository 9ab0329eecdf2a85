#pragma once

#include <cmath>
#include <optional>

#include "conslaw/objective.hpp"
#include "conslaw/trace.hpp"
#include "conslaw/types.hpp"

namespace conslaw {

struct BaselineConfig {
  double h = 0.1;
  std::optional<double> gamma;  // heavy-ball momentum coefficient
  std::optional<double> kappa;  // Nesterov strong-convexity ratio mu/L
  long maxiter = 10000;
  double eps = 1e-6;  // gradient-norm stopping tolerance
  long record_every = 1;
  bool record_positions = false;

  void validate() const {
    detail::require(h > 0.0, "BaselineConfig: h must be positive");
    detail::require(eps > 0.0, "BaselineConfig: eps must be positive");
    detail::require(maxiter >= 1, "BaselineConfig: maxiter must be >= 1");
    detail::require(record_every >= 1,
                    "BaselineConfig: record_every must be >= 1");
    if (gamma)
      detail::require(*gamma >= 0.0 && *gamma < 1.0,
                      "BaselineConfig: gamma must lie in [0, 1)");
    if (kappa)
      detail::require(*kappa > 0.0 && *kappa <= 1.0,
                      "BaselineConfig: kappa must lie in (0, 1]");
  }
};

/// The alpha-recurrence of the accelerated scheme:
/// alpha_{k+1}² = (1 - alpha_{k+1}) alpha_k² + alpha_{k+1} kappa, solved for
/// the root in (0, 1); gamma_k = alpha_k (1 - alpha_k) / (alpha_k² + alpha_{k+1}).
/// alpha_0 = sqrt(kappa) when kappa > 0 (the constant-gamma scheme) and 1 in
/// the kappa = 0 limit.
class NesterovSchedule {
 public:
  explicit NesterovSchedule(std::optional<double> kappa)
      : kappa_(kappa.value_or(0.0)),
        alpha_(kappa ? std::sqrt(*kappa) : 1.0) {}

  double kappa() const { return kappa_; }
  double alpha() const { return alpha_; }

  /// Advances alpha_k -> alpha_{k+1} and returns gamma_k.
  double advance() {
    const double a2 = alpha_ * alpha_;
    const double b = a2 - kappa_;
    const double next = 0.5 * (-b + std::sqrt(b * b + 4.0 * a2));
    const double gamma = alpha_ * (1.0 - alpha_) / (a2 + next);
    alpha_ = next;
    return gamma;
  }

 private:
  double kappa_;
  double alpha_;
};

/// Plain gradient iteration x_{k+1} = x_k - h ∇f(x_k). Stops when
/// ‖∇f(x_k)‖ <= eps (checked before each step) or at maxiter.
inline RunTrace gradient_descent(const Objective& f, const Vector& x0,
                                 const BaselineConfig& cfg) {
  cfg.validate();
  detail::check_start(f, x0);
  RunTrace tr;
  detail::TraceRecorder record{tr, cfg.record_every, cfg.record_positions};

  Vector x = x0;
  long k = 0;
  while (true) {
    Vector g = f.gradient(x);
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
    record(k, f.value(x), gn, 0.0, false, x);
    Vector xn = x - cfg.h * g;
    if (!xn.allFinite()) {
      tr.termination = Termination::diverged;
      break;
    }
    x.swap(xn);
    ++k;
  }
  tr.iterations = k;
  tr.final_state = PhaseState(std::move(x), Vector::Zero(f.dim));
  return tr;
}

/// Polyak heavy ball: x_{k+1} = x_k - h ∇f(x_k) + γ (x_k - x_{k-1}) with
/// x_{-1} = x_0. Requires cfg.gamma.
inline RunTrace heavy_ball(const Objective& f, const Vector& x0,
                           const BaselineConfig& cfg) {
  cfg.validate();
  detail::check_start(f, x0);
  detail::require(cfg.gamma.has_value(), "heavy_ball: gamma must be set");
  const double gamma = *cfg.gamma;
  RunTrace tr;
  detail::TraceRecorder record{tr, cfg.record_every, cfg.record_positions};

  Vector x = x0, xprev = x0;
  long k = 0;
  while (true) {
    Vector g = f.gradient(x);
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
    record(k, f.value(x), gn, 0.0, false, x);
    Vector xn = x - cfg.h * g + gamma * (x - xprev);
    if (!xn.allFinite()) {
      tr.termination = Termination::diverged;
      break;
    }
    xprev.swap(x);
    x.swap(xn);
    ++k;
  }
  tr.iterations = k;
  tr.final_state = PhaseState(std::move(x), Vector::Zero(f.dim));
  return tr;
}

/// Accelerated gradient with extrapolation
///   y_{k+1} = x_k - h ∇f(x_k),  x_{k+1} = y_{k+1} + γ_k (y_{k+1} - y_k),
/// γ_k from NesterovSchedule (h plays the role of 1/L). y_0 = x_0. The
/// strongly convex variant is selected by supplying cfg.kappa.
inline RunTrace nesterov_agd(const Objective& f, const Vector& x0,
                             const BaselineConfig& cfg) {
  cfg.validate();
  detail::check_start(f, x0);
  RunTrace tr;
  detail::TraceRecorder record{tr, cfg.record_every, cfg.record_positions};
  NesterovSchedule schedule(cfg.kappa);

  Vector x = x0, y = x0;
  long k = 0;
  while (true) {
    Vector g = f.gradient(x);
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
    record(k, f.value(x), gn, 0.0, false, x);
    Vector yn = x - cfg.h * g;
    const double gamma = schedule.advance();
    Vector xn = yn + gamma * (yn - y);
    if (!yn.allFinite() || !xn.allFinite()) {
      tr.termination = Termination::diverged;
      break;
    }
    y.swap(yn);
    x.swap(xn);
    ++k;
  }
  tr.iterations = k;
  tr.final_state = PhaseState(std::move(x), Vector::Zero(f.dim));
  return tr;
}

}  // namespace conslaw
