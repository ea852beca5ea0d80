#pragma once

// Independent reference computations and state generators shared by the unit
// tests and the acceptance binary. Nothing here calls into the code under test
// for the quantity being checked.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <tuple>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "xdiscord/xdiscord.hpp"

namespace xtest {

using xdiscord::BlochX;
using xdiscord::Complex;
using xdiscord::DenseMatrix;

inline double plog2(double x) { return x > 0.0 ? x * std::log(x) / std::numbers::ln2 : 0.0; }

/// Bell-diagonal discord written out term by term (Luo's closed form).
inline double bell_diagonal_discord(double c1, double c2, double c3) {
  const double big = std::max({std::abs(c1), std::abs(c2), std::abs(c3)});
  return 0.25 * plog2(1.0 - c3 + c1 + c2) + 0.25 * plog2(1.0 - c3 - c1 - c2) +
         0.25 * plog2(1.0 + c3 + c1 - c2) + 0.25 * plog2(1.0 + c3 - c1 + c2) -
         0.5 * plog2(1.0 + big) - 0.5 * plog2(1.0 - big);
}

inline Eigen::Matrix2cd pauli(int i) {
  Eigen::Matrix2cd m;
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline DenseMatrix kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  DenseMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

/// 1/4 (I⊗I + r σ3⊗I + s I⊗σ3 + Σ c_i σ_i⊗σ_i) built from Kronecker products.
inline DenseMatrix pauli_expansion(const BlochX& p) {
  DenseMatrix m = kron(pauli(0), pauli(0)) + p.r * kron(pauli(3), pauli(0)) + p.s * kron(pauli(0), pauli(3)) +
                  p.c1 * kron(pauli(1), pauli(1)) + p.c2 * kron(pauli(2), pauli(2)) +
                  p.c3 * kron(pauli(3), pauli(3));
  return 0.25 * m;
}

/// Descending eigenvalues from a dense Hermitian solver.
inline std::array<double, 4> dense_eigenvalues(const DenseMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(3), es.eigenvalues()(2), es.eigenvalues()(1), es.eigenvalues()(0)};
}

inline double dense_entropy(const DenseMatrix& m) {
  double s = 0.0;
  for (double l : dense_eigenvalues(m)) s -= plog2(std::max(0.0, l));
  return s;
}

/// a |psi-><psi-| + (1-a)/4 I.
inline DenseMatrix werner_matrix(double a) {
  Eigen::Vector4cd psi(0, 1, -1, 0);
  psi /= std::sqrt(2.0);
  return a * psi * psi.adjoint() + 0.25 * (1.0 - a) * DenseMatrix::Identity();
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double sym() { return uniform(-1.0, 1.0); }
  bool coin() { return uniform(0.0, 1.0) < 0.5; }

 private:
  std::mt19937_64 engine_;
};

inline BlochX random_physical(Rng& g) {
  for (;;) {
    BlochX p{g.sym(), g.sym(), g.sym(), g.sym(), g.sym()};
    if (xdiscord::is_physical(p)) return p;
  }
}

/// (c1, c2) with max(|c1|, |c2|) = c and random signs and ordering.
inline std::pair<double, double> correlations_with_max(Rng& g, double c) {
  const double other = g.uniform(-c, c);
  const double lead = g.coin() ? c : -c;
  return g.coin() ? std::pair{lead, other} : std::pair{other, lead};
}

enum class Case { A, B, C, D };

/// Conditional sampling inside one of the closed-form regions, followed by
/// rejection against physicality.
inline BlochX sample_in_case(Rng& g, Case which) {
  for (;;) {
    BlochX p;
    switch (which) {
      case Case::A:
      case Case::B: {
        const double sign = which == Case::A ? 1.0 : -1.0;
        p.s = sign * g.uniform(0.0, 1.0);
        p.c3 = g.sym();
        p.r = -sign * std::copysign(g.uniform(0.0, 1.0), p.c3);  // r c3 <= 0 in A, >= 0 in B
        const double bound = p.c3 * p.c3 - p.s * p.r * p.c3;
        if (bound < 0.0) continue;
        const double c = g.uniform(0.0, std::sqrt(bound));
        std::tie(p.c1, p.c2) = correlations_with_max(g, c);
        break;
      }
      case Case::C: {
        p.r = 0.0;
        p.c3 = g.sym();
        if (g.coin()) {
          p.s = g.sym();
          std::tie(p.c1, p.c2) = correlations_with_max(g, g.uniform(0.0, std::abs(p.c3)));
        } else {
          p.s = 0.0;
          std::tie(p.c1, p.c2) = correlations_with_max(g, g.uniform(0.0, 1.0));
        }
        break;
      }
      case Case::D: {
        const double radius = std::sqrt(2.0 / 3.0) * std::sqrt(g.uniform(0.0, 1.0));
        const double angle = g.uniform(0.0, 0.5 * std::numbers::pi);
        p.r = radius * std::cos(angle);
        const double c = radius * std::sin(angle);
        p.c3 = -c;
        if (g.coin()) {
          p.r = -p.r;
          p.c3 = c;
        }
        p.s = p.r * p.c3;
        std::tie(p.c1, p.c2) = correlations_with_max(g, c);
        break;
      }
    }
    if (xdiscord::is_physical(p)) return p;
  }
}

inline Complex random_phase(Rng& g) { return std::polar(1.0, g.uniform(-std::numbers::pi, std::numbers::pi)); }

/// Rank-two X-state in case I (inner block empty), II (outer block empty) or
/// III (one pure component in each block). Eigenvalues stay above 1e-6 so the
/// rank is unambiguous.
inline xdiscord::XDensityMatrix random_rank_two(Rng& g, xdiscord::RankTwoCase which) {
  using xdiscord::RankTwoCase;
  for (;;) {
    std::array<double, 4> d{};
    Complex k03 = 0.0, k12 = 0.0;
    if (which == RankTwoCase::I || which == RankTwoCase::II) {
      const double x = g.uniform(0.05, 0.95);
      const double frac = g.uniform(0.0, 0.95);  // |k| / sqrt(p q)
      const Complex k = frac * std::sqrt(x * (1.0 - x)) * random_phase(g);
      if (which == RankTwoCase::I) {
        d = {x, 0.0, 0.0, 1.0 - x};
        k03 = k;
      } else {
        d = {0.0, x, 1.0 - x, 0.0};
        k12 = k;
      }
    } else {
      const double w0 = g.uniform(0.05, 0.95);
      const double x = g.uniform(0.02, 0.98), y = g.uniform(0.02, 0.98);
      d = {w0 * x, (1.0 - w0) * y, (1.0 - w0) * (1.0 - y), w0 * (1.0 - x)};
      k03 = std::sqrt(d[0] * d[3]) * random_phase(g);
      k12 = std::sqrt(d[1] * d[2]) * random_phase(g);
    }
    try {
      xdiscord::XDensityMatrix m(d, k03, k12);
      auto lam = xdiscord::labelled_eigenvalues(xdiscord::matrix_to_bloch(m).bloch);
      int big = 0;
      for (double l : lam) big += l > 1e-6 ? 1 : 0;
      if (big == 2) return m;
    } catch (const std::exception&) {
      // rounding on the boundary; draw again
    }
  }
}

}  // namespace xtest
