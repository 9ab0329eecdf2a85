#pragma once

#include <cmath>
#include <random>

#include "conslaw/objective.hpp"

namespace conslaw::testing {

// Relative mismatch between the analytic gradient and central differences,
// measured on the scale of the gradient (or 1 near stationary points).
inline double gradient_check_error(const Objective& f, const Vector& x,
                                   double step = 1e-5) {
  Vector g = f.gradient(x);
  Vector fd = finite_difference_gradient(f, x, step);
  double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  return (g - fd).cwiseAbs().maxCoeff() / scale;
}

// Shifted copy f(x + c), used by translation-invariance properties.
inline Objective translate(const Objective& f, const Vector& c) {
  Objective g;
  g.dim = f.dim;
  g.value = [f, c](const Vector& x) { return f.value(x + c); };
  g.gradient = [f, c](const Vector& x) { return f.gradient(x + c); };
  if (f.has_hessian())
    g.hessian = [f, c](const Vector& x) { return f.hessian(x + c); };
  return g;
}

// Objective plus a constant, for shift-invariance of detection indices.
inline Objective add_constant(const Objective& f, double c) {
  Objective g = f;
  g.value = [f, c](const Vector& x) { return f.value(x) + c; };
  return g;
}

inline Vector random_vector(std::mt19937_64& rng, int dim, double lo,
                            double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

}  // namespace conslaw::testing
