#pragma once

// Two-qubit X-states in Bloch and matrix form.
//
//   rho = 1/4 (I⊗I + r σ3⊗I + s I⊗σ3 + Σ c_i σ_i⊗σ_i)
//
// The region of physical parameters is cut out by two inequalities,
//   1 - c3 >= sqrt((r-s)^2 + (c1+c2)^2),
//   1 + c3 >= sqrt((r+s)^2 + (c1-c2)^2),
// which are exactly the conditions for the four eigenvalues to be >= 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <string>

#include <Eigen/Dense>

#include "xdiscord/entropy.hpp"
#include "xdiscord/errors.hpp"

namespace xdiscord {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::Matrix4cd;

/// Violations of the region inequalities up to this size are projected back
/// onto the boundary; larger ones are rejected.
inline constexpr double kPhysicalityTolerance = 1e-10;
inline constexpr double kMatrixTolerance = 1e-12;

struct BlochX {
  double r = 0.0;
  double s = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  friend bool operator==(const BlochX&, const BlochX&) = default;
};

/// The r <-> s exchange, i.e. the same state with the two qubits relabelled.
inline BlochX swap_parties(const BlochX& p) noexcept {
  return {p.s, p.r, p.c1, p.c2, p.c3};
}

/// Signed slack of the two region inequalities (>= 0 inside the region).
struct RegionSlack {
  double first;   // 1 - c3 - sqrt((r-s)^2 + (c1+c2)^2)
  double second;  // 1 + c3 - sqrt((r+s)^2 + (c1-c2)^2)
};

inline RegionSlack region_slack(const BlochX& p) noexcept {
  return {1.0 - p.c3 - std::hypot(p.r - p.s, p.c1 + p.c2),
          1.0 + p.c3 - std::hypot(p.r + p.s, p.c1 - p.c2)};
}

inline bool is_physical(const BlochX& p, double tol = 0.0) noexcept {
  const auto slack = region_slack(p);
  return slack.first >= -tol && slack.second >= -tol;
}

/// Returns p itself when physical, the projection onto the region when the
/// violation is within kPhysicalityTolerance, and throws PhysicalityError
/// otherwise.
inline BlochX validate_physical(const BlochX& p) {
  for (double v : {p.r, p.s, p.c1, p.c2, p.c3}) {
    if (!std::isfinite(v)) {
      throw PhysicalityError("finite parameters", std::numeric_limits<double>::infinity());
    }
  }
  const auto slack = region_slack(p);
  if (slack.first < -kPhysicalityTolerance) {
    throw PhysicalityError("1 - c3 >= sqrt((r-s)^2 + (c1+c2)^2)", -slack.first);
  }
  if (slack.second < -kPhysicalityTolerance) {
    throw PhysicalityError("1 + c3 >= sqrt((r+s)^2 + (c1-c2)^2)", -slack.second);
  }
  if (slack.first >= 0.0 && slack.second >= 0.0) return p;

  // The two inequalities constrain independent coordinate pairs
  // (r-s, c1+c2) and (r+s, c1-c2); shrink each pair onto its circle.
  const double c3 = std::clamp(p.c3, -1.0, 1.0);
  double u1 = p.r - p.s, v1 = p.c1 + p.c2;
  double u2 = p.r + p.s, v2 = p.c1 - p.c2;
  const auto shrink = [](double& u, double& v, double radius) {
    const double norm = std::hypot(u, v);
    if (norm > radius) {
      const double k = norm > 0.0 ? radius / norm : 0.0;
      u *= k;
      v *= k;
    }
  };
  shrink(u1, v1, 1.0 - c3);
  shrink(u2, v2, 1.0 + c3);
  return {0.5 * (u1 + u2), 0.5 * (u2 - u1), 0.5 * (v1 + v2), 0.5 * (v1 - v2), c3};
}

/// Hermitian 4x4 matrix supported on the diagonal and anti-diagonal.
/// Stored as the diagonal plus the two upper corners (0,3) and (1,2).
class XDensityMatrix {
 public:
  XDensityMatrix(std::array<double, 4> diag, Complex corner03, Complex corner12)
      : diag_(diag), corner03_(corner03), corner12_(corner12) {
    validate();
  }

  /// Validates the X pattern (off-pattern entries exactly zero), Hermiticity,
  /// unit trace and positive semidefiniteness.
  static XDensityMatrix from_dense(const DenseMatrix& m) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const bool on_pattern = (i == j) || (i + j == 3);
        if (!on_pattern && m(i, j) != Complex(0.0, 0.0)) {
          throw InvalidStateError("not an X-state: entry (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ") is nonzero");
        }
        if (std::abs(m(i, j) - std::conj(m(j, i))) > kMatrixTolerance) {
          throw InvalidStateError("matrix is not Hermitian at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")");
        }
      }
    }
    return XDensityMatrix({m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real()},
                          m(0, 3), m(1, 2));
  }

  const std::array<double, 4>& diag() const noexcept { return diag_; }
  Complex corner03() const noexcept { return corner03_; }
  Complex corner12() const noexcept { return corner12_; }

  DenseMatrix dense() const {
    DenseMatrix m = DenseMatrix::Zero();
    for (int i = 0; i < 4; ++i) m(i, i) = diag_[i];
    m(0, 3) = corner03_;
    m(3, 0) = std::conj(corner03_);
    m(1, 2) = corner12_;
    m(2, 1) = std::conj(corner12_);
    return m;
  }

  /// Eigenvalues of the {|00>,|11>} and {|01>,|10>} blocks, unsorted.
  std::array<double, 4> block_eigenvalues() const noexcept {
    const auto pair = [](double a, double d, double corner) {
      const double mean = 0.5 * (a + d);
      const double rad = std::hypot(0.5 * (a - d), corner);
      return std::array<double, 2>{mean + rad, mean - rad};
    };
    const auto outer = pair(diag_[0], diag_[3], std::abs(corner03_));
    const auto inner = pair(diag_[1], diag_[2], std::abs(corner12_));
    return {outer[0], outer[1], inner[0], inner[1]};
  }

 private:
  void validate() const {
    double trace = 0.0;
    for (double d : diag_) {
      if (!std::isfinite(d)) throw InvalidStateError("non-finite diagonal entry");
      if (d < -kMatrixTolerance) throw InvalidStateError("negative diagonal entry");
      trace += d;
    }
    if (!std::isfinite(corner03_.real()) || !std::isfinite(corner03_.imag()) ||
        !std::isfinite(corner12_.real()) || !std::isfinite(corner12_.imag())) {
      throw InvalidStateError("non-finite corner entry");
    }
    if (std::abs(trace - 1.0) > kMatrixTolerance) {
      throw InvalidStateError("trace is " + std::to_string(trace) + ", expected 1");
    }
    for (double e : block_eigenvalues()) {
      if (e < -kMatrixTolerance) {
        throw InvalidStateError("matrix is not positive semidefinite (eigenvalue " +
                                std::to_string(e) + ")");
      }
    }
  }

  std::array<double, 4> diag_;
  Complex corner03_;
  Complex corner12_;
};

inline XDensityMatrix bloch_to_matrix(const BlochX& input) {
  const BlochX p = validate_physical(input);
  return XDensityMatrix({0.25 * (1.0 + p.r + p.s + p.c3), 0.25 * (1.0 + p.r - p.s - p.c3),
                         0.25 * (1.0 - p.r + p.s - p.c3), 0.25 * (1.0 - p.r - p.s + p.c3)},
                        Complex(0.25 * (p.c1 - p.c2), 0.0), Complex(0.25 * (p.c1 + p.c2), 0.0));
}

/// Result of reading Bloch parameters off a matrix. The phases are the angles
/// that were rotated out of the (1,4) and (2,3) corners by a local diagonal
/// unitary; they are zero for real input.
struct BlochConversion {
  BlochX bloch;
  double phase03 = 0.0;
  double phase12 = 0.0;
};

namespace detail {

// Smallest rotation that brings z onto the real axis; real input is left alone.
inline std::pair<double, double> realify(Complex z) noexcept {
  if (z.imag() == 0.0) return {z.real(), 0.0};
  const double mag = std::abs(z);
  const double angle = std::arg(z);
  if (std::abs(angle) <= 0.5 * std::numbers::pi) return {mag, angle};
  return {-mag, angle > 0.0 ? angle - std::numbers::pi : angle + std::numbers::pi};
}

}  // namespace detail

inline BlochConversion matrix_to_bloch(const XDensityMatrix& m) {
  const auto& d = m.diag();
  const auto [k03, phase03] = detail::realify(m.corner03());
  const auto [k12, phase12] = detail::realify(m.corner12());
  BlochConversion out;
  out.bloch.r = d[0] + d[1] - d[2] - d[3];
  out.bloch.s = d[0] - d[1] + d[2] - d[3];
  out.bloch.c3 = d[0] - d[1] - d[2] + d[3];
  out.bloch.c1 = 2.0 * (k03 + k12);
  out.bloch.c2 = 2.0 * (k12 - k03);
  out.bloch = validate_physical(out.bloch);
  out.phase03 = phase03;
  out.phase12 = phase12;
  return out;
}

/// Eigenvalues in the labelled order lambda_1..lambda_4:
///   lambda_{1,2} = 1/4 (1 - c3 ± sqrt((r-s)^2 + (c1+c2)^2)),
///   lambda_{3,4} = 1/4 (1 + c3 ± sqrt((r+s)^2 + (c1-c2)^2)).
/// Values within 1e-12 of [0,1] are clamped into it.
inline std::array<double, 4> labelled_eigenvalues(const BlochX& p) noexcept {
  const double inner = std::hypot(p.r - p.s, p.c1 + p.c2);
  const double outer = std::hypot(p.r + p.s, p.c1 - p.c2);
  std::array<double, 4> lam{0.25 * (1.0 - p.c3 + inner), 0.25 * (1.0 - p.c3 - inner),
                            0.25 * (1.0 + p.c3 + outer), 0.25 * (1.0 + p.c3 - outer)};
  for (double& l : lam) {
    if (l < 0.0 && l > -kMatrixTolerance) l = 0.0;
    if (l > 1.0 && l < 1.0 + kMatrixTolerance) l = 1.0;
  }
  return lam;
}

struct Spectrum {
  std::array<double, 4> lambda;  // descending
};

inline Spectrum spectrum(const BlochX& p) {
  Spectrum out{labelled_eigenvalues(p)};
  std::sort(out.lambda.begin(), out.lambda.end(), std::greater<>());
  return out;
}

/// Bloch z-components of the two marginals, rho^a = diag((1+r)/2, (1-r)/2)
/// and rho^b = diag((1+s)/2, (1-s)/2).
inline std::pair<double, double> marginals(const BlochX& p) noexcept { return {p.r, p.s}; }

/// Sum of lambda_i log2 lambda_i over the spectrum (= -S(rho)).
inline double spectrum_log_sum(const BlochX& p) noexcept {
  double sum = 0.0;
  for (double l : labelled_eigenvalues(p)) sum += xlog2x(l);
  return sum;
}

/// I(rho) = S(rho^a) + S(rho^b) - S(rho), in bits.
inline double mutual_information(const BlochX& p) {
  return 2.0 - marginal_log_term(p.r) - marginal_log_term(p.s) + spectrum_log_sum(p);
}

}  // namespace xdiscord
