#pragma once

// Shannon-entropy helpers shared by every module. All logarithms are base 2.

#include <cmath>
#include <stdexcept>

namespace xdiscord {

/// x log2(x) with the 0 log 0 = 0 convention taken by branch.
inline double xlog2x(double x) noexcept {
  return x > 0.0 ? x * std::log2(x) : 0.0;
}

/// Binary entropy H(x) = -x log2 x - (1-x) log2(1-x), H(0) = H(1) = 0.
inline double binary_entropy(double x) {
  constexpr double tol = 1e-12;
  if (!(x >= -tol && x <= 1.0 + tol)) {
    throw std::domain_error("binary_entropy: argument outside [0,1]");
  }
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -xlog2x(x) - xlog2x(1.0 - x);
}

/// 1/2 (1+x) log2(1+x) + 1/2 (1-x) log2(1-x).
///
/// This is the expanded form in which marginal entropies enter the mutual
/// information: a qubit with Bloch z-component x has entropy
/// 1 - marginal_log_term(x).
inline double marginal_log_term(double x) noexcept {
  return 0.5 * xlog2x(1.0 + x) + 0.5 * xlog2x(1.0 - x);
}

/// Von Neumann entropy of diag((1+x)/2, (1-x)/2).
inline double qubit_entropy(double x) noexcept {
  return 1.0 - marginal_log_term(x);
}

}  // namespace xdiscord
