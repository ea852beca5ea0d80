#pragma once

// Wootters concurrence, entanglement of formation, and the Koashi-Winter
// check C(rho^ab) + E(rho^bc) = S(rho^b) for rank-two X-states.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "xdiscord/discord.hpp"
#include "xdiscord/entropy.hpp"
#include "xdiscord/errors.hpp"
#include "xdiscord/xstate.hpp"

namespace xdiscord {

struct ConcurrenceReport {
  std::array<double, 4> mu{};  // descending
  double concurrence = 0.0;
  double eof = 0.0;
  bool clamped = false;  // a slightly negative eigenvalue of rho rho~ was set to 0
};

/// E = H((1 + sqrt(1 - C^2)) / 2).
inline double eof_from_concurrence(double con) {
  const double root = std::sqrt(std::max(0.0, 1.0 - con * con));
  return binary_entropy(0.5 * (1.0 + root));
}

namespace detail {

inline ConcurrenceReport finish_report(std::array<double, 4> mu, bool clamped) {
  std::sort(mu.begin(), mu.end(), std::greater<>());
  ConcurrenceReport out;
  out.mu = mu;
  out.clamped = clamped;
  out.concurrence = std::clamp(mu[0] - mu[1] - mu[2] - mu[3], 0.0, 1.0);
  out.eof = eof_from_concurrence(out.concurrence);
  return out;
}

inline DenseMatrix spin_flip(const DenseMatrix& rho) {
  // σy ⊗ σy is real: it maps |00> -> -|11>, |01> -> |10> and back.
  DenseMatrix y = DenseMatrix::Zero();
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  return y * rho.conjugate() * y;
}

inline bool is_x_patterned(const DenseMatrix& m, double tol) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j && i + j != 3 && std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Closed form for X-states: the spectrum of rho rho~ splits into the
/// {|00>,|11>} and {|01>,|10>} blocks, giving
/// mu = sqrt(rho11 rho44) ± |rho14| and sqrt(rho22 rho33) ± |rho23|.
inline ConcurrenceReport concurrence(const XDensityMatrix& m) {
  const auto& d = m.diag();
  const double g03 = std::sqrt(std::max(0.0, d[0] * d[3]));
  const double g12 = std::sqrt(std::max(0.0, d[1] * d[2]));
  const double k03 = std::abs(m.corner03());
  const double k12 = std::abs(m.corner12());
  return detail::finish_report({g03 + k03, std::abs(g03 - k03), g12 + k12, std::abs(g12 - k12)}, false);
}

/// General 4x4 route through the Hermitian matrix sqrt(rho) rho~ sqrt(rho),
/// which has the same spectrum as rho rho~.
inline ConcurrenceReport concurrence_dense(const DenseMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho);
  Eigen::Vector4d w = es.eigenvalues();
  for (int i = 0; i < 4; ++i) w(i) = std::sqrt(std::max(0.0, w(i)));
  const DenseMatrix root = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  const DenseMatrix r = root * detail::spin_flip(rho) * root;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> er(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
  std::array<double, 4> mu{};
  bool clamped = false;
  for (int i = 0; i < 4; ++i) {
    double v = er.eigenvalues()(i);
    if (v < 0.0) {
      clamped = true;
      v = 0.0;
    }
    mu[i] = std::sqrt(v);
  }
  return detail::finish_report(mu, clamped);
}

/// Closed form when rho is X-patterned (within 1e-15), dense route otherwise.
inline ConcurrenceReport concurrence_of(const DenseMatrix& rho) {
  if (detail::is_x_patterned(rho, 1e-15)) {
    DenseMatrix x = rho;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j && i + j != 3) x(i, j) = 0.0;
      }
    }
    try {
      return concurrence(XDensityMatrix::from_dense(x));
    } catch (const InvalidStateError&) {
      // Rounding pushed the trace or hermiticity past the X-state checks.
    }
  }
  return concurrence_dense(rho);
}

enum class RankTwoCase { I, II, III };

constexpr std::string_view to_string(RankTwoCase c) noexcept {
  switch (c) {
    case RankTwoCase::I: return "I";
    case RankTwoCase::II: return "II";
    case RankTwoCase::III: return "III";
  }
  return "III";
}

struct Eigenpair {
  double weight = 0.0;
  Eigen::Vector4cd state = Eigen::Vector4cd::Zero();
};

/// Coefficients of the two eigenvectors in the form used for case III:
/// |phi0> = a0|00> + b0|11> (weight omega0 = (1+c3)/2) and
/// |phi1> = a1|10> - b1|01> (weight omega1 = (1-c3)/2).
struct CaseThreeCoefficients {
  double omega0 = 0.0;
  double omega1 = 0.0;
  Complex a0, b0, a1, b1;
};

struct RankTwoDecomposition {
  RankTwoCase case_tag = RankTwoCase::I;
  BlochX bloch;
  std::array<Eigenpair, 2> eigenpairs;
  Eigen::Matrix<Complex, 8, 1> purification;  // index 4a + 2b + c
  DenseMatrix rho_bc;
  std::optional<CaseThreeCoefficients> coefficients;
  std::vector<std::string> warnings;
};

inline constexpr double kRankThreshold = 1e-10;

namespace detail {

// Eigenpairs of the Hermitian block [[p, k], [conj(k), d]] embedded at basis
// indices (i, j). The second component is kept real and >= 0, so the sign
// (or phase) of the corner sits on the first component.
inline std::array<Eigenpair, 2> block_eigenpairs(double p, double d, Complex k, int i, int j) {
  const double delta = 0.5 * (p - d);
  const double mag = std::abs(k);
  const double rad = std::hypot(delta, mag);
  const double mean = 0.5 * (p + d);
  std::array<Eigenpair, 2> out;
  out[0].weight = mean + rad;
  out[1].weight = mean - rad;
  if (mag == 0.0) {
    // Diagonal block: the basis vectors themselves.
    const bool first_larger = p >= d;
    out[0].state(first_larger ? i : j) = 1.0;
    out[1].state(first_larger ? j : i) = 1.0;
    return out;
  }
  const Complex phase = k / mag;
  const auto fill = [&](Eigenpair& e, double x) {
    const double norm = std::hypot(x, mag);
    e.state(i) = phase * (x / norm);
    e.state(j) = mag / norm;
  };
  // delta ± rad, with the cancelling sign rewritten as -mag^2 / (delta ∓ rad).
  const double big = delta >= 0.0 ? delta + rad : delta - rad;
  const double small = -mag * mag / big;
  fill(out[0], delta >= 0.0 ? big : small);
  fill(out[1], delta >= 0.0 ? small : big);
  return out;
}

}  // namespace detail

/// Splits a rank-two X-state into its two eigenpairs, purifies it with a third
/// qubit c, and traces out a to get the complementary state rho^bc.
inline RankTwoDecomposition rank_two_classify(const XDensityMatrix& m) {
  RankTwoDecomposition out;
  out.bloch = matrix_to_bloch(m).bloch;
  const auto& d = m.diag();
  const auto outer = detail::block_eigenpairs(d[0], d[3], m.corner03(), 0, 3);  // lambda3, lambda4
  const auto inner = detail::block_eigenpairs(d[1], d[2], m.corner12(), 1, 2);  // lambda1, lambda2
  const std::array<double, 4> lam{inner[0].weight, inner[1].weight, outer[0].weight, outer[1].weight};

  int rank = 0;
  std::array<bool, 4> nonzero{};
  for (int k = 0; k < 4; ++k) {
    nonzero[k] = lam[k] > kRankThreshold;
    rank += nonzero[k] ? 1 : 0;
  }
  if (rank != 2) {
    throw RankError(rank, "state has rank " + std::to_string(rank) + ", expected rank two");
  }
  if (!nonzero[0] && !nonzero[1]) {
    out.case_tag = RankTwoCase::I;
    out.eigenpairs = outer;
  } else if (!nonzero[2] && !nonzero[3]) {
    out.case_tag = RankTwoCase::II;
    out.eigenpairs = inner;
  } else if (nonzero[0] && nonzero[2]) {
    out.case_tag = RankTwoCase::III;
    out.eigenpairs = {outer[0], inner[0]};
  } else {
    throw RankError(rank, "rank-two state with an unexpected zero pattern");
  }
  for (int k = 0; k < 4; ++k) {
    if (!nonzero[k] && std::abs(lam[k]) > 1e-12) {
      out.warnings.push_back("discarded eigenvalue " + std::to_string(lam[k]) + " is not numerically zero");
    }
    if (nonzero[k] && lam[k] < 1e-6) {
      out.warnings.push_back("retained eigenvalue " + std::to_string(lam[k]) + " is close to zero");
    }
  }
  for (auto& e : out.eigenpairs) e.weight = std::max(0.0, e.weight);

  out.purification.setZero();
  for (int k = 0; k < 2; ++k) {
    const double amp = std::sqrt(out.eigenpairs[k].weight);
    for (int ab = 0; ab < 4; ++ab) out.purification(2 * ab + k) = amp * out.eigenpairs[k].state(ab);
  }

  out.rho_bc.setZero();
  for (int a = 0; a < 2; ++a) {
    for (int bc = 0; bc < 4; ++bc) {
      for (int bc2 = 0; bc2 < 4; ++bc2) {
        out.rho_bc(bc, bc2) += out.purification(4 * a + bc) * std::conj(out.purification(4 * a + bc2));
      }
    }
  }

  if (out.case_tag == RankTwoCase::III) {
    const auto& v0 = out.eigenpairs[0].state;
    const auto& v1 = out.eigenpairs[1].state;
    out.coefficients = CaseThreeCoefficients{out.eigenpairs[0].weight, out.eigenpairs[1].weight,
                                             v0(0), v0(3), v1(2), -v1(1)};
  }
  return out;
}

/// Tr_c |Psi><Psi| for the stored purification.
inline DenseMatrix reduce_to_ab(const RankTwoDecomposition& d) {
  DenseMatrix out = DenseMatrix::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int c = 0; c < 2; ++c) out(i, j) += d.purification(2 * i + c) * std::conj(d.purification(2 * j + c));
    }
  }
  return out;
}

inline DenseMatrix complementary_state(const RankTwoDecomposition& d) { return d.rho_bc; }

struct KoashiWinterReport {
  RankTwoCase case_tag = RankTwoCase::I;
  double classical_correlation = 0.0;  // measurement on qubit a
  double entropy_b = 0.0;
  ConcurrenceReport bc;
  double residual = 0.0;
  double z_star = 1.0;
  Region region = Region::General;
  std::vector<std::string> warnings;
};

/// |C(rho^ab) + E(rho^bc) - S(rho^b)|. The classical correlation here has the
/// measurement on qubit a, obtained from the engine by exchanging r and s.
inline KoashiWinterReport koashi_winter_check(const XDensityMatrix& m) {
  const auto d = rank_two_classify(m);
  KoashiWinterReport out;
  out.case_tag = d.case_tag;
  out.warnings = d.warnings;
  const auto engine = discord(swap_parties(d.bloch));
  out.classical_correlation = engine.classical_correlation;
  out.z_star = engine.z_star;
  out.region = engine.region;
  out.entropy_b = qubit_entropy(d.bloch.s);
  out.bc = concurrence_of(complementary_state(d));
  out.residual = std::abs(out.classical_correlation + out.bc.eof - out.entropy_b);
  return out;
}

inline double koashi_winter_residual(const XDensityMatrix& m) { return koashi_winter_check(m).residual; }

}  // namespace xdiscord
