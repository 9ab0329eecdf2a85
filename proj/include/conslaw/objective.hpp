#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "conslaw/types.hpp"

namespace conslaw {

/// A scalar field together with its first derivative and, where cheap to
/// provide, its second. Instances are immutable after construction and hold
/// no mutable state, so they may be evaluated from several threads at once.
struct Objective {
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;  // empty when unavailable

  bool has_hessian() const { return static_cast<bool>(hessian); }
};

/// Symmetric positive-semidefinite quadratic form ½xᵀAx + bᵀx.
///
/// The stored matrix always equals its own transpose bit-for-bit; inputs are
/// symmetrized with 0.5*(A + Aᵀ), which is the identity on symmetric input
/// and repairs round-off asymmetry from products like QΛQᵀ.
class QuadraticSpec {
 public:
  QuadraticSpec(Matrix a, Vector b) : b_(std::move(b)) {
    detail::require(a.rows() == a.cols(), "QuadraticSpec: A must be square");
    detail::require(a.rows() == b_.size(),
                    "QuadraticSpec: dimension mismatch between A and b");
    a_ = 0.5 * (a + a.transpose());
  }

  /// Builds A = B diag(eigenvalues) Bᵀ from an orthogonal basis B. The
  /// provided spectrum must be nonnegative.
  static QuadraticSpec from_spectrum(const Vector& eigenvalues,
                                     const Matrix& basis, Vector b) {
    detail::require(basis.rows() == basis.cols(),
                    "QuadraticSpec: basis must be square");
    detail::require(basis.rows() == eigenvalues.size(),
                    "QuadraticSpec: spectrum/basis dimension mismatch");
    detail::require((eigenvalues.array() >= 0.0).all(),
                    "QuadraticSpec: spectrum must be nonnegative");
    Matrix a = basis * eigenvalues.asDiagonal() * basis.transpose();
    return QuadraticSpec(std::move(a), std::move(b));
  }

  /// Random SPD instance: eigenvalues log-uniform in [1e-6, 1] with the
  /// smallest pinned to exactly 1e-6 and the largest to exactly 1, conjugated
  /// by the Q factor of a seeded Gaussian matrix; b is standard Gaussian.
  /// The condition number is therefore exactly 1e6.
  static QuadraticSpec random_spd(int dim, std::uint64_t seed) {
    detail::require(dim >= 2, "QuadraticSpec::random_spd: dim must be >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Matrix raw(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i) raw(i, j) = gauss(rng);
    Matrix q = Eigen::HouseholderQR<Matrix>(raw).householderQ();

    const double lo = 1e-6, hi = 1.0;
    Vector eigs(dim);
    for (int i = 0; i < dim; ++i)
      eigs[i] = lo * std::exp(unit(rng) * std::log(hi / lo));
    std::sort(eigs.begin(), eigs.end());
    eigs[0] = lo;
    eigs[dim - 1] = hi;

    Vector b(dim);
    for (int i = 0; i < dim; ++i) b[i] = gauss(rng);
    return from_spectrum(eigs, q, std::move(b));
  }

  const Matrix& A() const { return a_; }
  const Vector& b() const { return b_; }
  int dim() const { return static_cast<int>(b_.size()); }

 private:
  Matrix a_;
  Vector b_;
};

/// The tridiagonal chain with 2 on the diagonal and -1 off it, b = 0.
inline QuadraticSpec nesterov_worst_case(int n) {
  detail::require(n >= 2, "nesterov_worst_case: n must be >= 2");
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0;
    if (i + 1 < n) {
      a(i, i + 1) = -1.0;
      a(i + 1, i) = -1.0;
    }
  }
  return QuadraticSpec(std::move(a), Vector::Zero(n));
}

/// Closed-form spectrum of the chain: lambda_k = 4 sin²(kπ/(2(n+1))),
/// ascending.
inline Vector nesterov_worst_case_spectrum(int n) {
  detail::require(n >= 2, "nesterov_worst_case_spectrum: n must be >= 2");
  Vector eigs(n);
  for (int k = 1; k <= n; ++k) {
    double s = std::sin(0.5 * k * std::numbers::pi / (n + 1));
    eigs[k - 1] = 4.0 * s * s;
  }
  return eigs;
}

inline Objective quadratic(const QuadraticSpec& spec) {
  struct Data {
    Matrix a;
    Vector b;
    Eigen::SparseMatrix<double> sparse;
    bool use_sparse = false;
  };
  auto d = std::make_shared<Data>();
  d->a = spec.A();
  d->b = spec.b();
  const int n = spec.dim();
  // Large mostly-zero matrices (e.g. the tridiagonal chain) get a compressed
  // form so one gradient costs O(nnz) instead of O(n²).
  if (n >= 128) {
    const auto nnz = (d->a.array() != 0.0).count();
    if (4 * nnz < static_cast<Eigen::Index>(n) * n) {
      d->sparse = d->a.sparseView();
      d->use_sparse = true;
    }
  }

  Objective f;
  f.dim = n;
  f.value = [d](const Vector& x) {
    Vector ax = d->use_sparse ? Vector(d->sparse * x) : Vector(d->a * x);
    return 0.5 * x.dot(ax) + d->b.dot(x);
  };
  f.gradient = [d](const Vector& x) {
    Vector g = d->use_sparse ? Vector(d->sparse * x) : Vector(d->a * x);
    g += d->b;
    return g;
  };
  f.hessian = [d](const Vector&) { return d->a; };
  return f;
}

/// Softmax weights s_i = exp((⟨a_i,x⟩-b_i)/ρ) / Σ_j exp(...), evaluated with
/// max-subtraction. The a_i are the columns of A.
inline Vector log_sum_exp_weights(const Matrix& a, const Vector& b, double rho,
                                  const Vector& x) {
  Vector z = (a.transpose() * x - b) / rho;
  double zmax = z.maxCoeff();
  Vector s = (z.array() - zmax).exp();
  s /= s.sum();
  return s;
}

/// f(x) = ρ log Σ_i exp((⟨a_i,x⟩ - b_i)/ρ) with a_i the columns of the d×m
/// matrix A and b of length m.
inline Objective log_sum_exp(Matrix a, Vector b, double rho) {
  detail::require(rho > 0.0, "log_sum_exp: rho must be positive");
  detail::require(a.cols() == b.size(),
                  "log_sum_exp: column count of A must equal length of b");
  struct Data {
    Matrix a;
    Vector b;
    double rho;
  };
  auto d = std::make_shared<Data>();
  d->a = std::move(a);
  d->b = std::move(b);
  d->rho = rho;

  Objective f;
  f.dim = static_cast<int>(d->a.rows());
  f.value = [d](const Vector& x) {
    Vector z = (d->a.transpose() * x - d->b) / d->rho;
    double zmax = z.maxCoeff();
    return d->rho * (zmax + std::log((z.array() - zmax).exp().sum()));
  };
  f.gradient = [d](const Vector& x) {
    return Vector(d->a * log_sum_exp_weights(d->a, d->b, d->rho, x));
  };
  f.hessian = [d](const Vector& x) {
    Vector s = log_sum_exp_weights(d->a, d->b, d->rho, x);
    Vector as = d->a * s;
    Matrix h = (d->a * s.asDiagonal() * d->a.transpose() - as * as.transpose()) /
               d->rho;
    return Matrix(0.5 * (h + h.transpose()));
  };
  return f;
}

/// Seeded Gaussian data for the log-sum-exp landscape (entries i.i.d. N(0,1)).
inline Objective random_log_sum_exp(int d, int m, double rho,
                                    std::uint64_t seed) {
  detail::require(d >= 1 && m >= 1, "random_log_sum_exp: bad dimensions");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(d, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < d; ++i) a(i, j) = gauss(rng);
  Vector b(m);
  for (int i = 0; i < m; ++i) b[i] = gauss(rng);
  return log_sum_exp(std::move(a), std::move(b), rho);
}

/// f(x) = ½ Σ_i (x_i⁴ - 16 x_i² + 5 x_i). Separable; per-coordinate minima
/// near -2.903534 (lower) and 2.7486 (higher).
inline Objective styblinski_tang(int d) {
  detail::require(d >= 1, "styblinski_tang: dimension must be >= 1");
  Objective f;
  f.dim = d;
  f.value = [](const Vector& x) {
    double s = 0.0;
    for (double xi : x) {
      double x2 = xi * xi;
      s += x2 * x2 - 16.0 * x2 + 5.0 * xi;
    }
    return 0.5 * s;
  };
  f.gradient = [](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      g[i] = 2.0 * x[i] * x[i] * x[i] - 16.0 * x[i] + 2.5;
    return g;
  };
  f.hessian = [](const Vector& x) {
    Matrix h = Matrix::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      h(i, i) = 6.0 * x[i] * x[i] - 16.0;
    return h;
  };
  return f;
}

/// Fixed data of the four-dimensional Shekel family.
class ShekelSpec {
 public:
  explicit ShekelSpec(int m) : m_(m) {
    detail::require(m == 5 || m == 7 || m == 10,
                    "ShekelSpec: m must be one of 5, 7, 10");
    beta_.resize(10);
    const double bvals[10] = {1, 2, 2, 4, 4, 6, 3, 7, 5, 5};
    for (int i = 0; i < 10; ++i) beta_[i] = bvals[i] / 10.0;
    c_.resize(4, 10);
    c_ << 4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0,  //
        4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6,    //
        4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0,    //
        4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6;
  }

  int m() const { return m_; }
  const Vector& beta() const { return beta_; }
  const Matrix& C() const { return c_; }

 private:
  int m_;
  Vector beta_;
  Matrix c_;
};

/// f(x) = -Σ_{i<m} (‖x - c_i‖² + β_i)⁻¹ on ℝ⁴; strictly negative everywhere.
inline Objective shekel(const ShekelSpec& spec) {
  auto d = std::make_shared<ShekelSpec>(spec);
  Objective f;
  f.dim = 4;
  f.value = [d](const Vector& x) {
    double s = 0.0;
    for (int i = 0; i < d->m(); ++i) {
      double dist2 = (x - d->C().col(i)).squaredNorm();
      s += 1.0 / (dist2 + d->beta()[i]);
    }
    return -s;
  };
  f.gradient = [d](const Vector& x) {
    Vector g = Vector::Zero(4);
    for (int i = 0; i < d->m(); ++i) {
      Vector diff = x - d->C().col(i);
      double denom = diff.squaredNorm() + d->beta()[i];
      g += 2.0 * diff / (denom * denom);
    }
    return g;
  };
  return f;
}

/// Piecewise cosine on [0, 6π]: 2cos x, then cos x + 1, then 3cos x - 1.
/// Value and first derivative are continuous at the junctions 2π and 4π;
/// |f''| <= 3. Evaluation outside [0, 6π] raises std::domain_error.
inline Objective piecewise_cosine_1d() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto branch = [](double x) -> int {
    if (x < 0.0 || x > 3.0 * two_pi)
      throw std::domain_error("piecewise_cosine_1d: x outside [0, 6*pi]");
    if (x <= two_pi) return 0;
    if (x <= 2.0 * two_pi) return 1;
    return 2;
  };
  Objective f;
  f.dim = 1;
  f.value = [branch](const Vector& x) {
    switch (branch(x[0])) {
      case 0: return 2.0 * std::cos(x[0]);
      case 1: return std::cos(x[0]) + 1.0;
      default: return 3.0 * std::cos(x[0]) - 1.0;
    }
  };
  f.gradient = [branch](const Vector& x) {
    Vector g(1);
    switch (branch(x[0])) {
      case 0: g[0] = -2.0 * std::sin(x[0]); break;
      case 1: g[0] = -std::sin(x[0]); break;
      default: g[0] = -3.0 * std::sin(x[0]); break;
    }
    return g;
  };
  f.hessian = [branch](const Vector& x) {
    Matrix h(1, 1);
    switch (branch(x[0])) {
      case 0: h(0, 0) = -2.0 * std::cos(x[0]); break;
      case 1: h(0, 0) = -std::cos(x[0]); break;
      default: h(0, 0) = -3.0 * std::cos(x[0]); break;
    }
    return h;
  };
  return f;
}

/// f(x₁,x₂) = ½[(x₁-4)² + (x₂-4)² + 8 sin(x₁+2x₂)]. Nominal domain is
/// [0,8]², but evaluation is defined everywhere since trajectories may
/// overshoot it.
inline Objective sine_bowl_2d() {
  Objective f;
  f.dim = 2;
  f.value = [](const Vector& x) {
    double d1 = x[0] - 4.0, d2 = x[1] - 4.0;
    return 0.5 * (d1 * d1 + d2 * d2 + 8.0 * std::sin(x[0] + 2.0 * x[1]));
  };
  f.gradient = [](const Vector& x) {
    double c = std::cos(x[0] + 2.0 * x[1]);
    Vector g(2);
    g[0] = (x[0] - 4.0) + 4.0 * c;
    g[1] = (x[1] - 4.0) + 8.0 * c;
    return g;
  };
  f.hessian = [](const Vector& x) {
    double s = std::sin(x[0] + 2.0 * x[1]);
    Matrix h(2, 2);
    h(0, 0) = 1.0 - 4.0 * s;
    h(0, 1) = -8.0 * s;
    h(1, 0) = -8.0 * s;
    h(1, 1) = 1.0 - 16.0 * s;
    return h;
  };
  return f;
}

/// f(x) = ⟨g, x⟩. Used as the no-interior-minimum edge case.
inline Objective linear(Vector slope) {
  auto d = std::make_shared<Vector>(std::move(slope));
  Objective f;
  f.dim = static_cast<int>(d->size());
  f.value = [d](const Vector& x) { return d->dot(x); };
  f.gradient = [d](const Vector&) { return *d; };
  f.hessian = [d](const Vector&) {
    return Matrix(Matrix::Zero(d->size(), d->size()));
  };
  return f;
}

/// Central-difference gradient, the test oracle. The perturbation of
/// coordinate i is step·(1+|x_i|).
inline Vector finite_difference_gradient(const Objective& f, const Vector& x,
                                         double step) {
  detail::require(step > 0.0, "finite_difference_gradient: step must be > 0");
  Vector g(x.size());
  Vector xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double hi = step * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + hi;
    xm[i] = x[i] - hi;
    g[i] = (f.value(xp) - f.value(xm)) / (2.0 * hi);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

}  // namespace conslaw
