#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conslaw/types.hpp"

namespace conslaw {

/// One symplectic Euler step on the linearized system around a minimum with
/// hessian A, as a single 2n×2n linear map on (y, v):
///
///   M = [ I - h²A   hI ]
///       [   -hA      I ]
///
/// M is symplectic: det(M) = 1.
struct TransferMatrix {
  Matrix M;
  double h;
  Matrix A;
};

inline TransferMatrix build_transfer(const Matrix& a, double h) {
  detail::require(h > 0.0, "build_transfer: h must be positive");
  detail::require(a.rows() == a.cols(), "build_transfer: A must be square");
  detail::require(a == a.transpose(), "build_transfer: A must be symmetric");
  const Eigen::Index n = a.rows();
  TransferMatrix tm;
  tm.h = h;
  tm.A = a;
  tm.M.resize(2 * n, 2 * n);
  tm.M.topLeftCorner(n, n) = Matrix::Identity(n, n) - h * h * a;
  tm.M.topRightCorner(n, n) = h * Matrix::Identity(n, n);
  tm.M.bottomLeftCorner(n, n) = -h * a;
  tm.M.bottomRightCorner(n, n) = Matrix::Identity(n, n);
  return tm;
}

/// Applies M to (y, v) with the same arithmetic as the linearized step:
/// v' = v - h(Ay), y' = y + hv'. Bit-identical to that step by construction.
inline std::pair<Vector, Vector> apply_transfer(const TransferMatrix& tm,
                                                const Vector& y,
                                                const Vector& v) {
  Vector vn = v - tm.h * (tm.A * y);
  Vector yn = y + tm.h * vn;
  return {std::move(yn), std::move(vn)};
}

/// 2×2 block of one eigen-direction of A with eigenvalue ω²:
///
///   T = [ 1 - ω²h²   h ]
///       [   -ω²h     1 ]
///
/// For 0 < hω < √2 the phase angles θ, φ (cos θ = 1 - h²ω²/2, cos φ = hω/2)
/// both lie in (0, π/2) and satisfy 2φ + θ = π; outside that window they are
/// absent.
struct ModeBlock {
  double omega = 0.0;
  double h = 0.0;
  std::optional<double> theta;
  std::optional<double> phi;
  Eigen::Matrix2d T;
};

/// Phase angles of one mode: theta = arccos(1 - h²ω²/2), phi = arccos(hω/2).
/// Requires 0 < hω < √2.
inline std::pair<double, double> phase_angles(double omega, double h) {
  const double u = h * omega;
  detail::require(u > 0.0 && u < std::numbers::sqrt2,
                  "phase_angles: requires 0 < h*omega < sqrt(2)");
  const double theta = std::acos(1.0 - 0.5 * u * u);
  const double phi = std::acos(0.5 * u);
  return {theta, phi};
}

inline ModeBlock make_mode_block(double omega, double h) {
  detail::require(omega >= 0.0, "make_mode_block: omega must be >= 0");
  detail::require(h > 0.0, "make_mode_block: h must be positive");
  ModeBlock mb;
  mb.omega = omega;
  mb.h = h;
  const double w2 = omega * omega;
  mb.T << 1.0 - w2 * h * h, h, -w2 * h, 1.0;
  const double u = h * omega;
  if (u > 0.0 && u < std::numbers::sqrt2) {
    auto [theta, phi] = phase_angles(omega, h);
    mb.theta = theta;
    mb.phi = phi;
  }
  return mb;
}

/// Orthogonal block diagonalization of a transfer matrix: one ModeBlock per
/// eigenvalue ω_i² of A (ascending), with U = diag(U1, U1)·Π pairing each
/// (y_i, v_i) coordinate so that Uᵀ M U = blockdiag(T_1, ..., T_n).
struct BlockDiagonalization {
  std::vector<ModeBlock> modes;
  Matrix U1;  // eigenvectors of A, columns ascending by eigenvalue

  Matrix U() const {
    const Eigen::Index n = U1.rows();
    Matrix u = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u.col(2 * i).head(n) = U1.col(i);
      u.col(2 * i + 1).tail(n) = U1.col(i);
    }
    return u;
  }
};

inline BlockDiagonalization block_diagonalize(const TransferMatrix& tm) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(tm.A);
  detail::require(solver.info() == Eigen::Success,
                  "block_diagonalize: eigen-decomposition failed");
  BlockDiagonalization bd;
  bd.U1 = solver.eigenvectors();
  const Vector& eigs = solver.eigenvalues();
  bd.modes.reserve(eigs.size());
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    double lambda = eigs[i];
    // A is PSD by contract; absorb round-off negatives.
    if (lambda < 0.0) {
      detail::require(lambda > -1e-12,
                      "block_diagonalize: A has a negative eigenvalue");
      lambda = 0.0;
    }
    bd.modes.push_back(make_mode_block(std::sqrt(lambda), tm.h));
  }
  return bd;
}

/// Eigenvalues λ = 1 - h²ω²/2 ± i·hω·sqrt(1 - h²ω²/4) of a mode block; both
/// lie on the unit circle for 0 < hω < 2 (they are e^{±iθ}).
inline std::pair<std::complex<double>, std::complex<double>> block_eigenvalues(
    const ModeBlock& mb) {
  const double u = mb.h * mb.omega;
  detail::require(u > 0.0 && u < 2.0,
                  "block_eigenvalues: requires 0 < h*omega < 2");
  const double re = 1.0 - 0.5 * u * u;
  const double im = u * std::sqrt(1.0 - 0.25 * u * u);
  return {{re, im}, {re, -im}};
}

/// Closed-form k-th power of a mode block,
///
///   T^k = 1/sin φ · [ -sin(kθ - φ)      sin(kθ)/ω   ]
///                   [ -ω sin(kθ)        sin(kθ + φ) ]
///
/// valid on the phase-angle window; the ω = 0 drift block is handled exactly
/// as T^k = [[1, kh], [0, 1]].
inline Eigen::Matrix2d block_power_closed_form(const ModeBlock& mb, long k) {
  detail::require(k >= 0, "block_power_closed_form: k must be >= 0");
  Eigen::Matrix2d p;
  if (mb.omega == 0.0) {
    p << 1.0, static_cast<double>(k) * mb.h, 0.0, 1.0;
    return p;
  }
  detail::require(mb.theta.has_value() && mb.phi.has_value(),
                  "block_power_closed_form: requires 0 < h*omega < sqrt(2)");
  const double kt = static_cast<double>(k) * *mb.theta;
  const double phi = *mb.phi;
  const double s = std::sin(phi);
  p << -std::sin(kt - phi) / s, std::sin(kt) / (mb.omega * s),
      -mb.omega * std::sin(kt) / s, std::sin(kt + phi) / s;
  return p;
}

/// Small-hω phase approximation θ ≈ hω, φ ≈ π/2 with its error bound, plus
/// the approximate k-step mode evolution. `evolution` reproduces the
/// published matrix
///
///   [  cos(khω)      sin(khω)/ω ]
///   [ -ω sin(khω)   -cos(khω)   ]
///
/// whose (2,2) sign is inconsistent with the k = 0 identity;
/// `evolution_identity_consistent` flips it to +cos(khω). Accepted only for
/// hω < 0.1, where the cubic remainder bound applies.
struct PhaseApproximation {
  double omega;
  double h;
  double theta;             // = h·omega
  double phi;               // = π/2
  double theta_error_bound;  // |arccos-exact θ - hω| is below this

  Eigen::Matrix2d evolution(long k) const {
    const double a = static_cast<double>(k) * h * omega;
    Eigen::Matrix2d m;
    m << std::cos(a), std::sin(a) / omega, -omega * std::sin(a), -std::cos(a);
    return m;
  }

  Eigen::Matrix2d evolution_identity_consistent(long k) const {
    Eigen::Matrix2d m = evolution(k);
    m(1, 1) = -m(1, 1);
    return m;
  }
};

inline PhaseApproximation approximate_phase(double omega, double h) {
  detail::require(omega > 0.0 && h > 0.0,
                  "approximate_phase: omega and h must be positive");
  const double u = h * omega;
  detail::require(u < 0.1, "approximate_phase: requires h*omega < 0.1");
  PhaseApproximation pa;
  pa.omega = omega;
  pa.h = h;
  pa.theta = u;
  pa.phi = 0.5 * std::numbers::pi;
  // theta_exact = 2 arcsin(u/2) = u + u³/24 + 3u⁵/640 + ...
  pa.theta_error_bound = (u * u * u / 24.0) * (1.0 + u * u);
  return pa;
}

/// Per-step contraction factor e^{-tan(ξ)·hω} of an ill-conditioned mode as
/// its phase ξ = khω approaches π/2. Monotone decreasing in ξ on (0, π/2).
inline double decay_coefficient(double xi, double omega, double h) {
  detail::require(xi > 0.0 && xi < 0.5 * std::numbers::pi,
                  "decay_coefficient: requires 0 < xi < pi/2");
  detail::require(omega > 0.0 && h > 0.0,
                  "decay_coefficient: omega and h must be positive");
  return std::exp(-std::tan(xi) * h * omega);
}

/// Reference solutions of the three continuous flows on f(x) = x²/200.
enum class DemoMethod { gradient, momentum, conservation };

struct DemoPoint {
  double x;
  double v;  // true derivative dx/dt
  double f;
};

/// Closed-form solutions: gradient flow x₀e^{-t/100}; critically damped
/// momentum flow (γ = 1/5) x₀(1 + t/10)e^{-t/10}; frictionless conservation
/// flow x₀cos(t/10). The velocity reported is the exact derivative of x(t);
/// note the published conservation velocity x₀sin(t/10) is not that
/// derivative.
inline DemoPoint analytic_demo_1d(DemoMethod method, double x0, double t) {
  detail::require(t >= 0.0, "analytic_demo_1d: t must be >= 0");
  DemoPoint p{};
  switch (method) {
    case DemoMethod::gradient:
      p.x = x0 * std::exp(-t / 100.0);
      p.v = -p.x / 100.0;
      break;
    case DemoMethod::momentum:
      p.x = x0 * (1.0 + t / 10.0) * std::exp(-t / 10.0);
      p.v = -(x0 * t / 100.0) * std::exp(-t / 10.0);
      break;
    case DemoMethod::conservation:
      p.x = x0 * std::cos(t / 10.0);
      p.v = -(x0 / 10.0) * std::sin(t / 10.0);
      break;
  }
  p.f = p.x * p.x / 200.0;
  return p;
}

/// Stopping time of the conservation demo: |v| peaks first at t = 5π
/// (a quarter period of the ω = 1/10 oscillation).
inline constexpr double analytic_demo_stop_time = 5.0 * std::numbers::pi;

}  // namespace conslaw
