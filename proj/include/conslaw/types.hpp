#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace conslaw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {

inline void require(bool condition, const char* what) {
  if (!condition) throw std::invalid_argument(what);
}

}  // namespace detail

}  // namespace conslaw
