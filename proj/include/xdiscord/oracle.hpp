#pragma once

// Brute-force classical correlation: sweep von Neumann measurements on qubit b
// directly over the sphere of directions (z1, z2, z3), without the reduction
// to one variable. Used to certify discord.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "xdiscord/entropy.hpp"
#include "xdiscord/xstate.hpp"

namespace xdiscord {

struct MeasurementPoint {
  double z1 = 0.0;
  double z2 = 0.0;
  double z3 = 1.0;

  /// (z1, z2) = sqrt(1 - z3^2) (cos phi, sin phi).
  static MeasurementPoint from_angles(double z3, double phi) noexcept {
    const double rho = std::sqrt(std::max(0.0, 1.0 - z3 * z3));
    return {rho * std::cos(phi), rho * std::sin(phi), z3};
  }

  double norm() const noexcept { return std::sqrt(z1 * z1 + z2 * z2 + z3 * z3); }
};

struct ConditionalEnsemble {
  double p0 = 0.5;
  double p1 = 0.5;
  double eig0_plus = 0.5;
  double eig0_minus = 0.5;
  double eig1_plus = 0.5;
  double eig1_minus = 0.5;
};

using Rotation3 = std::array<std::array<double, 3>, 3>;

/// Row i holds the coefficients of V^† σ_i V in the basis (σ1, σ2, σ3) for
/// V = t I + i Σ y_k σ_k with t^2 + |y|^2 = 1.
inline Rotation3 conjugate_paulis(double t, const std::array<double, 3>& y) {
  const double norm2 = t * t + y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("conjugate_paulis: (t, y) must lie on the unit 3-sphere");
  }
  const double t2 = t * t, a = y[0], b = y[1], c = y[2];
  return {{{t2 + a * a - b * b - c * c, 2.0 * (t * c + a * b), 2.0 * (-t * b + a * c)},
           {2.0 * (-t * c + a * b), t2 + b * b - c * c - a * a, 2.0 * (t * a + b * c)},
           {2.0 * (t * b + a * c), 2.0 * (-t * a + b * c), t2 + c * c - a * a - b * b}}};
}

/// Measurement direction of B0 = V|0><0|V^†: z_i is the σ3 coefficient of
/// V^† σ_i V, i.e. the third column of conjugate_paulis.
inline MeasurementPoint measurement_direction(double t, const std::array<double, 3>& y) {
  const auto m = conjugate_paulis(t, y);
  return {m[0][2], m[1][2], m[2][2]};
}

inline ConditionalEnsemble conditional_ensemble(const BlochX& p, const MeasurementPoint& m) {
  if (std::abs(m.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("conditional_ensemble: measurement direction is not a unit vector");
  }
  const double theta = p.c1 * p.c1 * m.z1 * m.z1 + p.c2 * p.c2 * m.z2 * m.z2 + p.c3 * p.c3 * m.z3 * m.z3;
  const double cross = 2.0 * p.r * m.z3 * p.c3;
  ConditionalEnsemble e;
  e.p0 = 0.5 * (1.0 + p.s * m.z3);
  e.p1 = 0.5 * (1.0 - p.s * m.z3);

  const auto pair = [](double weight, double radicand, double& plus, double& minus) {
    if (weight < 1e-14) {
      plus = 1.0;
      minus = 0.0;
      return;
    }
    const double w = 2.0 * weight;  // 1 ± s z3
    const double root = std::min(std::sqrt(std::max(0.0, radicand)), w);
    plus = (w + root) / (2.0 * w);
    minus = (w - root) / (2.0 * w);
  };
  pair(e.p0, p.r * p.r + cross + theta, e.eig0_plus, e.eig0_minus);
  pair(e.p1, p.r * p.r - cross + theta, e.eig1_plus, e.eig1_minus);
  return e;
}

/// S(rho | {B_k}) = p0 S(rho_0) + p1 S(rho_1) in bits; an empty branch
/// contributes zero.
inline double conditional_entropy(const BlochX& p, const MeasurementPoint& m) {
  const auto e = conditional_ensemble(p, m);
  double h = 0.0;
  if (e.p0 >= 1e-14) h += e.p0 * binary_entropy(std::clamp(e.eig0_plus, 0.0, 1.0));
  if (e.p1 >= 1e-14) h += e.p1 * binary_entropy(std::clamp(e.eig1_plus, 0.0, 1.0));
  return h;
}

/// The two-variable objective G(theta, z3) with theta = Σ (c_i z_i)^2 left
/// free. Increasing in theta.
inline double g_theta(const BlochX& p, double z3, double theta) noexcept {
  const auto term = [](double w, double root) {
    if (w <= 0.0) return 0.0;
    double v = 0.0;
    for (double n : {w + root, w - root}) {
      if (n > 1e-14) v += 0.25 * n * std::log2(n / w);
    }
    return v;
  };
  const double a = 1.0 + p.s * z3;
  const double b = 1.0 - p.s * z3;
  const double rp = std::min(std::sqrt(std::max(0.0, p.r * p.r + 2.0 * p.r * p.c3 * z3 + theta)), std::max(a, 0.0));
  const double rm = std::min(std::sqrt(std::max(0.0, p.r * p.r - 2.0 * p.r * p.c3 * z3 + theta)), std::max(b, 0.0));
  return term(a, rp) + term(b, rm);
}

/// max over the circle z1^2 + z2^2 = 1 - z3^2 of Σ (c_i z_i)^2, by sweeping
/// the circle on a grid that contains both axes.
inline double theta_max_check(const BlochX& p, double z3, int samples = 4096) {
  double best = -1.0;
  const int n = std::max(samples - samples % 4, 4);
  for (int k = 0; k < n; ++k) {
    const auto m = MeasurementPoint::from_angles(z3, 2.0 * std::numbers::pi * k / n);
    // Snap the axis points so sin/cos rounding does not leak into the maximum.
    double z1 = m.z1, z2 = m.z2;
    if (k % (n / 4) == 0) {
      const double rho = std::sqrt(std::max(0.0, 1.0 - z3 * z3));
      const int quarter = k / (n / 4);
      z1 = quarter == 0 ? rho : quarter == 2 ? -rho : 0.0;
      z2 = quarter == 1 ? rho : quarter == 3 ? -rho : 0.0;
    }
    best = std::max(best, p.c1 * p.c1 * z1 * z1 + p.c2 * p.c2 * z2 * z2 + p.c3 * p.c3 * z3 * z3);
  }
  return best;
}

struct OracleResult {
  double value = 0.0;  // S(rho^a) - min conditional entropy
  double min_conditional_entropy = 0.0;
  MeasurementPoint argmax;
  double z3 = 1.0;
  double phi = 0.0;
};

struct OracleOptions {
  int grid_n = 256;
  int refine_iterations = 30;
  unsigned threads = 1;
};

namespace detail {

struct GridBest {
  double h = std::numeric_limits<double>::infinity();
  int i = 0;
  int j = 0;
};

// Golden-section minimisation of f on [lo, hi], endpoints included.
template <class Fn>
double golden_min(Fn&& f, double lo, double hi, int steps = 60) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < steps; ++k) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  double best = 0.5 * (lo + hi), fbest = f(best);
  for (double x : {lo, hi}) {
    if (const double fx = f(x); fx < fbest) {
      best = x;
      fbest = fx;
    }
  }
  return best;
}

}  // namespace detail

/// Sweeps z3 in [0,1], phi in [0, pi/2] on a grid_n x grid_n grid (the
/// objective is even in each z_i), then refines the best cell by alternating
/// golden-section searches. Rows may be split over threads; the reduction is
/// ordered so the result does not depend on the thread count.
inline OracleResult oracle_classical_correlation(const BlochX& input, const OracleOptions& options = {}) {
  const BlochX p = validate_physical(input);
  const int n = options.grid_n;
  if (n < 64) throw std::invalid_argument("oracle_classical_correlation: grid_n must be >= 64");
  const double dz = 1.0 / (n - 1);
  const double dphi = 0.5 * std::numbers::pi / (n - 1);
  const auto h_at = [&p](double z3, double phi) {
    return conditional_entropy(p, MeasurementPoint::from_angles(z3, phi));
  };

  std::vector<detail::GridBest> rows(n);
  const auto sweep_rows = [&](int first, int stride) {
    for (int i = first; i < n; i += stride) {
      detail::GridBest best;
      best.i = i;
      for (int j = 0; j < n; ++j) {
        const double h = h_at(i * dz, j * dphi);
        if (h < best.h) {
          best.h = h;
          best.j = j;
        }
      }
      rows[i] = best;
    }
  };
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    sweep_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(sweep_rows, static_cast<int>(t), static_cast<int>(threads));
  }
  detail::GridBest best = rows.front();
  for (const auto& row : rows) {
    if (row.h < best.h) best = row;
  }

  double z3 = best.i * dz;
  double phi = best.j * dphi;
  double h = best.h;
  const double z_lo = std::max(0.0, z3 - dz), z_hi = std::min(1.0, z3 + dz);
  const double phi_lo = std::max(0.0, phi - dphi), phi_hi = std::min(0.5 * std::numbers::pi, phi + dphi);
  double rz = z3, rphi = phi;
  for (int it = 0; it < options.refine_iterations; ++it) {
    rz = detail::golden_min([&](double z) { return h_at(z, rphi); }, z_lo, z_hi);
    rphi = detail::golden_min([&](double f) { return h_at(rz, f); }, phi_lo, phi_hi);
  }
  if (const double hr = h_at(rz, rphi); hr < h) {
    h = hr;
    z3 = rz;
    phi = rphi;
  }

  OracleResult out;
  out.min_conditional_entropy = h;
  out.value = qubit_entropy(p.r) - h;
  out.z3 = z3;
  out.phi = phi;
  out.argmax = MeasurementPoint::from_angles(z3, phi);
  return out;
}

}  // namespace xdiscord
