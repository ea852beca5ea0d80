#pragma once

// Quantum discord of X-states through the one-variable function F(z).
//
// Measuring qubit b with a von Neumann measurement along (z1, z2, z3), the
// largest measurement-averaged purity of qubit a is reached with z1 z2 = 0,
// which leaves a single variable z = |z3| in [0,1]:
//
//   F(z) = 1/4 Σ± (1 + sz ± H+) log2((1 + sz ± H+) / (1 + sz))
//        + 1/4 Σ± (1 - sz ± H-) log2((1 - sz ± H-) / (1 - sz)),
//   H±   = sqrt(c^2 (1 - z^2) + (r ± c3 z)^2),   c = max(|c1|, |c2|),
//
// and Q = 2 - 1/2(1+s)log2(1+s) - 1/2(1-s)log2(1-s) + Σ λ_i log2 λ_i - max F.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xdiscord/entropy.hpp"
#include "xdiscord/xstate.hpp"

namespace xdiscord {

struct FContext {
  BlochX p;
  double c;      // max(|c1|, |c2|)
  double c_big;  // max(|c1|, |c2|, |c3|)

  explicit FContext(const BlochX& input)
      : p(validate_physical(input)),
        c(std::max(std::abs(p.c1), std::abs(p.c2))),
        c_big(std::max(c, std::abs(p.c3))) {}
};

enum class Region { CaseA, CaseB, CaseC, CaseD, General };

constexpr std::string_view to_string(Region r) noexcept {
  switch (r) {
    case Region::CaseA: return "CaseA";
    case Region::CaseB: return "CaseB";
    case Region::CaseC: return "CaseC";
    case Region::CaseD: return "CaseD";
    case Region::General: return "General";
  }
  return "General";
}

inline std::optional<Region> region_from_string(std::string_view s) noexcept {
  for (Region r : {Region::CaseA, Region::CaseB, Region::CaseC, Region::CaseD, Region::General}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

namespace detail {

inline constexpr double kLn2 = std::numbers::ln2;

// n log2(n / d), zero when the numerator has vanished.
inline double xlog_ratio(double n, double d) noexcept {
  return n > 1e-14 ? n * std::log2(n / d) : 0.0;
}

struct Radicals {
  double a;   // 1 + s z
  double b;   // 1 - s z
  double hp;  // H+
  double hm;  // H-
};

inline Radicals radicals(const FContext& ctx, double z) noexcept {
  const auto& p = ctx.p;
  const double base = ctx.c * ctx.c * (1.0 - z * z);
  Radicals out;
  out.a = 1.0 + p.s * z;
  out.b = 1.0 - p.s * z;
  out.hp = std::sqrt(std::max(0.0, base + (p.r + p.c3 * z) * (p.r + p.c3 * z)));
  out.hm = std::sqrt(std::max(0.0, base + (p.r - p.c3 * z) * (p.r - p.c3 * z)));
  // Physicality guarantees H+ <= 1 + sz and H- <= 1 - sz; rounding can break it.
  out.hp = std::min(out.hp, std::max(out.a, 0.0));
  out.hm = std::min(out.hm, std::max(out.b, 0.0));
  return out;
}

// 1/4 [(w + h) log2((w + h)/w) + (w - h) log2((w - h)/w)]. A vanishing branch
// weight w contributes nothing (p_k S(rho_k) -> 0 with S bounded).
inline double branch(double w, double h) noexcept {
  if (w <= 0.0) return 0.0;
  return 0.25 * (xlog_ratio(w + h, w) + xlog_ratio(w - h, w));
}

// ln((w + h)/(w - h)) / h, continued to h = 0.
inline double log_ratio_over_h(double w, double h) noexcept {
  const double x = h / w;
  if (x < 1e-3) {
    const double x2 = x * x;
    return (2.0 / w) * (1.0 + x2 / 3.0 + x2 * x2 / 5.0 + x2 * x2 * x2 / 7.0);
  }
  return std::log((w + h) / (w - h)) / h;
}

}  // namespace detail

/// F(1) written out as in the region-(a) closed form; also the limit used at
/// z = 1 when one of 1 ± s vanishes.
inline double f_at_one(const FContext& ctx) noexcept {
  const auto& p = ctx.p;
  using detail::xlog_ratio;
  double v = 0.0;
  if (1.0 + p.s > 0.0) {
    v += 0.25 * xlog_ratio(1.0 + p.s + p.r + p.c3, 1.0 + p.s);
    v += 0.25 * xlog_ratio(1.0 + p.s - p.r - p.c3, 1.0 + p.s);
  }
  if (1.0 - p.s > 0.0) {
    v += 0.25 * xlog_ratio(1.0 - p.s + p.r - p.c3, 1.0 - p.s);
    v += 0.25 * xlog_ratio(1.0 - p.s - p.r + p.c3, 1.0 - p.s);
  }
  return v;
}

inline double f_value(const FContext& ctx, double z) noexcept {
  if (z == 1.0 && (std::abs(1.0 + ctx.p.s) < 1e-9 || std::abs(1.0 - ctx.p.s) < 1e-9)) {
    return f_at_one(ctx);
  }
  const auto rad = detail::radicals(ctx, z);
  return detail::branch(rad.a, rad.hp) + detail::branch(rad.b, rad.hm);
}

/// F'(z) for z in (0,1]. Where H± vanishes the H'± log(...) term is replaced
/// by its limit. Returns a non-finite value when a conditional state of the
/// measurement is pure (the logarithms genuinely diverge there).
inline double f_derivative(const FContext& ctx, double z) noexcept {
  const auto& p = ctx.p;
  const auto rad = detail::radicals(ctx, z);
  const double slope = p.c3 * p.c3 - ctx.c * ctx.c;
  const double np = p.r * p.c3 + slope * z;
  const double nm = -p.r * p.c3 + slope * z;

  double sum = 0.0;
  if (p.s != 0.0) {
    sum += p.s * (std::log(rad.a * rad.a - rad.hp * rad.hp) - std::log(rad.b * rad.b - rad.hm * rad.hm) +
                  2.0 * std::log(rad.b) - 2.0 * std::log(rad.a));
  }
  if (np != 0.0) sum += np * detail::log_ratio_over_h(rad.a, rad.hp);
  if (nm != 0.0) sum += nm * detail::log_ratio_over_h(rad.b, rad.hm);
  return sum / (4.0 * detail::kLn2);
}

/// F''(z), or nullopt when (1 ± sz)^2 - H±^2 or H± is below 1e-12 (the state
/// sits near the eigenvalue-zero boundary and Newton should not be trusted).
inline std::optional<double> f_second_derivative(const FContext& ctx, double z) noexcept {
  const auto& p = ctx.p;
  if (ctx.c_big == 0.0 && p.r == 0.0) return 0.0;  // H± = 0 and F vanishes identically
  const auto rad = detail::radicals(ctx, z);
  const double d_plus = rad.a * rad.a - rad.hp * rad.hp;
  const double d_minus = rad.b * rad.b - rad.hm * rad.hm;
  if (d_plus < 1e-12 || d_minus < 1e-12 || rad.hp < 1e-12 || rad.hm < 1e-12) {
    return std::nullopt;
  }
  const double c2 = ctx.c * ctx.c;
  const double slope = p.c3 * p.c3 - c2;
  const double hp1 = (p.r * p.c3 + slope * z) / rad.hp;
  const double hm1 = (-p.r * p.c3 + slope * z) / rad.hm;
  const double curvature = c2 * (slope - p.r * p.r);
  const double hp2 = curvature / (rad.hp * rad.hp * rad.hp);
  const double hm2 = curvature / (rad.hm * rad.hm * rad.hm);
  const double s = p.s;

  double sum = ((s * s + hp1 * hp1) * rad.a - 2.0 * s * rad.hp * hp1) / d_plus +
               ((s * s + hm1 * hm1) * rad.b + 2.0 * s * rad.hm * hm1) / d_minus -
               2.0 * s * s / (rad.a * rad.b);
  sum += 0.5 * hp2 * std::log((rad.a + rad.hp) / (rad.a - rad.hp));
  sum += 0.5 * hm2 * std::log((rad.b + rad.hm) / (rad.b - rad.hm));
  const double value = sum / (2.0 * detail::kLn2);
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

inline constexpr double kRegionTolerance = 1e-12;

/// Which closed form (if any) gives max F. Cases are tested in the order
/// A, B, C, D; equalities hold within 1e-12 and inequalities carry the same
/// slack.
inline Region classify_region(const FContext& ctx, double tol = kRegionTolerance) noexcept {
  const auto& p = ctx.p;
  const double c2 = ctx.c * ctx.c;
  const double c32 = p.c3 * p.c3;
  const double rc3 = p.r * p.c3;
  const auto zero = [tol](double x) { return std::abs(x) <= tol; };
  const auto nonneg = [tol](double x) { return x >= -tol; };

  if ((nonneg(p.s) && nonneg(-rc3) && nonneg(c32 - c2 - p.s * rc3)) ||
      (zero(p.s) && nonneg(c32 - c2))) {
    return Region::CaseA;
  }
  if (nonneg(-p.s) && nonneg(rc3) && nonneg(c32 - c2 - p.s * rc3)) return Region::CaseB;
  if (zero(p.r) && (nonneg(c32 - c2) || zero(p.s))) return Region::CaseC;
  if (zero(p.s - rc3) && nonneg(-p.s) && zero(c2 - c32) && nonneg(2.0 / 3.0 - c2 - p.r * p.r)) {
    return Region::CaseD;
  }
  return Region::General;
}

struct Maximum {
  double z_star = 1.0;
  double f_max = 0.0;
};

/// Closed-form max F for the analytic regions. For Region::General the
/// result is meaningless; use global_max.
inline Maximum analytic_max(const FContext& ctx, Region tag) noexcept {
  const auto& p = ctx.p;
  using detail::xlog_ratio;
  switch (tag) {
    case Region::CaseA:
    case Region::CaseB:
      return {1.0, f_at_one(ctx)};
    case Region::CaseC: {
      const double big = ctx.c_big;
      double v = 0.0;
      if (1.0 + p.s > 0.0) {
        v += 0.25 * xlog_ratio(1.0 + p.s + big, 1.0 + p.s);
        v += 0.25 * xlog_ratio(1.0 + p.s - big, 1.0 + p.s);
      }
      if (1.0 - p.s > 0.0) {
        v += 0.25 * xlog_ratio(1.0 - p.s + big, 1.0 - p.s);
        v += 0.25 * xlog_ratio(1.0 - p.s - big, 1.0 - p.s);
      }
      // C = |c3| puts the maximum at z = 1, C = c at z = 0.
      const double z = (p.c3 * p.c3 >= ctx.c * ctx.c) ? 1.0 : 0.0;
      return {z, v};
    }
    case Region::CaseD: {
      const double root = std::sqrt(p.r * p.r + ctx.c * ctx.c);
      return {0.0, 0.5 * xlog2x(1.0 + root) + 0.5 * xlog2x(1.0 - root)};
    }
    case Region::General:
      break;
  }
  return {1.0, f_at_one(ctx)};
}

enum class NewtonStatus { Converged, Abandoned, IterationLimit };

constexpr std::string_view to_string(NewtonStatus s) noexcept {
  switch (s) {
    case NewtonStatus::Converged: return "converged";
    case NewtonStatus::Abandoned: return "abandoned";
    case NewtonStatus::IterationLimit: return "iteration-limit";
  }
  return "abandoned";
}

struct NewtonRun {
  double seed = 1.0;
  std::vector<double> iterates;  // z_1, z_2, ... (the seed is not repeated)
  NewtonStatus status = NewtonStatus::Abandoned;
  int bisections = 0;
  double z = 1.0;
  double f = 0.0;
};

enum class Maximizer { ZeroEndpoint, OneEndpoint, Interior };

constexpr std::string_view to_string(Maximizer m) noexcept {
  switch (m) {
    case Maximizer::ZeroEndpoint: return "F(0)";
    case Maximizer::OneEndpoint: return "F(1)";
    case Maximizer::Interior: return "interior";
  }
  return "interior";
}

struct SolverTrace {
  double f_zero = 0.0;
  double f_one = 0.0;
  bool endpoint_tie = false;
  std::vector<std::pair<double, double>> sign_brackets;
  std::vector<NewtonRun> newton;  // newton.front() is the run seeded at z0 = 1
  bool golden_fallback = false;
  std::vector<std::string> notes;
  Maximizer chosen = Maximizer::OneEndpoint;
};

struct GlobalMax {
  double z_star = 1.0;
  double f_max = 0.0;
  SolverTrace trace;
};

struct GlobalMaxOptions {
  int scan_points = 201;
  int max_iterations = 100;
};

namespace detail {

inline double golden_section_max(const FContext& ctx, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f_value(ctx, x1);
  double f2 = f_value(ctx, x2);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f_value(ctx, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f_value(ctx, x1);
    }
  }
  // The bracket ends may hold the maximum when F is monotone on it.
  double best = 0.5 * (lo + hi);
  double fbest = f_value(ctx, best);
  for (double z : {lo, hi}) {
    const double fz = f_value(ctx, z);
    if (fz > fbest) {
      best = z;
      fbest = fz;
    }
  }
  return best;
}

struct Bracket {
  double lo;
  double hi;
  double g_lo;
};

// Newton on F' from `seed`. Steps must stay in [0,1] (in the bracket once
// `confined`) and must not increase |F'|; a rejected step bisects `bracket`
// when one is known and ends the run otherwise.
inline NewtonRun safeguarded_newton(const FContext& ctx, double seed, std::optional<Bracket> bracket,
                                    bool confined, int max_iterations) {
  NewtonRun run;
  run.seed = seed;
  double z = seed;
  double g = f_derivative(ctx, z);
  const auto tighten = [&](double at, double gat) {
    if (!bracket || at <= bracket->lo || at >= bracket->hi) return;
    if ((gat > 0.0) == (bracket->g_lo > 0.0)) {
      bracket->lo = at;
      bracket->g_lo = gat;
    } else {
      bracket->hi = at;
    }
  };

  if (!std::isfinite(g) && !bracket) {
    run.status = NewtonStatus::Abandoned;
    run.z = z;
    return run;
  }
  for (int k = 0; k < max_iterations; ++k) {
    std::optional<double> next;
    double g_next = 0.0;
    if (std::isfinite(g)) {
      if (const auto h = f_second_derivative(ctx, z); h && *h != 0.0) {
        const double candidate = z - g / *h;
        const double lo = confined ? bracket->lo : 0.0;
        const double hi = confined ? bracket->hi : 1.0;
        if (candidate >= lo && candidate <= hi) {
          const double gc = f_derivative(ctx, candidate);
          if (std::isfinite(gc) && std::abs(gc) <= std::abs(g)) {
            next = candidate;
            g_next = gc;
          }
        }
      }
    }
    if (!next) {
      if (!bracket) {
        run.status = NewtonStatus::Abandoned;
        run.z = z;
        return run;
      }
      next = 0.5 * (bracket->lo + bracket->hi);
      g_next = f_derivative(ctx, *next);
      confined = true;
      ++run.bisections;
    }
    tighten(*next, g_next);
    run.iterates.push_back(*next);
    const double step = std::abs(*next - z);
    z = *next;
    g = g_next;
    if (step < 1e-12 || std::abs(g) < 1e-13 ||
        (bracket && bracket->hi - bracket->lo < 1e-14)) {
      run.status = NewtonStatus::Converged;
      run.z = z;
      run.f = f_value(ctx, z);
      return run;
    }
  }
  run.status = NewtonStatus::IterationLimit;
  run.z = z;
  return run;
}

}  // namespace detail

/// Global maximum of F on [0,1]: compares F(0), F(1) and every critical point
/// reached by safeguarded Newton (seeded at z0 = 1 and inside each bracket
/// where a uniform scan of F' changes sign).
inline GlobalMax global_max(const FContext& ctx, const GlobalMaxOptions& options = {}) {
  GlobalMax out;
  auto& trace = out.trace;
  trace.f_zero = f_value(ctx, 0.0);
  trace.f_one = f_value(ctx, 1.0);
  trace.endpoint_tie = std::abs(trace.f_zero - trace.f_one) < 1e-12;

  const int n = std::max(options.scan_points, 3);
  std::vector<double> grid(n), slope(n), values(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = static_cast<double>(i) / (n - 1);
    values[i] = f_value(ctx, grid[i]);
    // F'(0) = 0 by evenness; the sign just right of 0 is what brackets need.
    slope[i] = f_derivative(ctx, i == 0 ? 1e-6 : grid[i]);
  }

  std::vector<detail::Bracket> brackets;
  std::vector<double> exact_roots;
  for (int i = 0; i + 1 < n; ++i) {
    const double g0 = slope[i];
    const double g1 = slope[i + 1];
    if (!std::isfinite(g0) || !std::isfinite(g1)) continue;
    if (g1 == 0.0 && i + 1 < n - 1) exact_roots.push_back(grid[i + 1]);
    if (g0 * g1 < 0.0) {
      brackets.push_back({i == 0 ? 1e-6 : grid[i], grid[i + 1], g0});
      trace.sign_brackets.emplace_back(grid[i], grid[i + 1]);
    }
  }

  // The run from z0 = 1 falls back on the bracket closest to 1.
  std::optional<detail::Bracket> seed_bracket;
  if (!brackets.empty()) seed_bracket = brackets.back();
  trace.newton.push_back(detail::safeguarded_newton(ctx, 1.0, seed_bracket, false, options.max_iterations));
  for (const auto& b : brackets) {
    trace.newton.push_back(
        detail::safeguarded_newton(ctx, 0.5 * (b.lo + b.hi), b, true, options.max_iterations));
  }

  std::size_t best_grid = 0;
  for (int i = 1; i < n; ++i) {
    if (values[i] > values[best_grid]) best_grid = i;
  }
  const auto grid_bracket = [&]() {
    const double lo = grid[best_grid == 0 ? 0 : best_grid - 1];
    const double hi = grid[std::min<std::size_t>(best_grid + 1, n - 1)];
    return std::pair{lo, hi};
  };

  struct Candidate {
    double z;
    double f;
    Maximizer kind;
  };
  std::vector<Candidate> candidates{{1.0, trace.f_one, Maximizer::OneEndpoint},
                                    {0.0, trace.f_zero, Maximizer::ZeroEndpoint}};
  for (auto& run : trace.newton) {
    if (run.status == NewtonStatus::IterationLimit) {
      const auto [lo, hi] = grid_bracket();
      run.z = detail::golden_section_max(ctx, lo, hi);
      run.f = f_value(ctx, run.z);
      trace.golden_fallback = true;
      trace.notes.push_back("newton from " + std::to_string(run.seed) +
                            " hit the iteration limit; golden-section refinement used");
    }
    if (run.status != NewtonStatus::Abandoned && run.z > 0.0 && run.z < 1.0) {
      candidates.push_back({run.z, run.f, Maximizer::Interior});
    }
  }
  for (double z : exact_roots) candidates.push_back({z, f_value(ctx, z), Maximizer::Interior});

  double best = candidates.front().f;
  for (const auto& c : candidates) best = std::max(best, c.f);

  if (values[best_grid] > best + 1e-12) {
    const auto [lo, hi] = grid_bracket();
    const double z = detail::golden_section_max(ctx, lo, hi);
    const double fz = f_value(ctx, z);
    const Maximizer kind = z >= 1.0   ? Maximizer::OneEndpoint
                           : z <= 0.0 ? Maximizer::ZeroEndpoint
                                      : Maximizer::Interior;
    candidates.push_back({z, fz, kind});
    best = std::max(best, fz);
    trace.golden_fallback = true;
    trace.notes.push_back("scan value exceeded every critical point; golden-section refinement used");
  }

  // Preference on ties: z = 1, then z = 0, then interior points in discovery order.
  for (const auto& c : candidates) {
    if (c.f >= best - 1e-12) {
      out.z_star = c.z;
      out.f_max = c.f;
      trace.chosen = c.kind;
      break;
    }
  }
  if (trace.endpoint_tie && trace.chosen == Maximizer::OneEndpoint) {
    trace.notes.push_back("F(0) and F(1) tie; reporting z = 1");
  }
  return out;
}

struct DiscordOptions {
  /// Also run global_max on analytic regions and record the gap.
  bool verify = false;
  GlobalMaxOptions solver{};
};

struct DiscordResult {
  BlochX bloch;
  double discord = 0.0;
  double classical_correlation = 0.0;
  double mutual_information = 0.0;
  double z_star = 1.0;
  double f_max = 0.0;
  Region region = Region::General;
  bool analytic = false;
  std::optional<SolverTrace> trace;
  std::optional<double> verification_gap;  // |analytic f_max - global f_max|
};

/// Q(rho) with the measurement on qubit b. Callers wanting the measurement on
/// qubit a pass swap_parties(p).
inline DiscordResult discord(const BlochX& input, const DiscordOptions& options = {}) {
  const FContext ctx(input);
  DiscordResult out;
  out.bloch = ctx.p;
  out.region = classify_region(ctx);
  if (out.region != Region::General) {
    const auto m = analytic_max(ctx, out.region);
    out.analytic = true;
    out.z_star = m.z_star;
    out.f_max = m.f_max;
    if (options.verify) {
      auto g = global_max(ctx, options.solver);
      out.verification_gap = std::abs(g.f_max - m.f_max);
      out.trace = std::move(g.trace);
    }
  } else {
    auto g = global_max(ctx, options.solver);
    out.z_star = g.z_star;
    out.f_max = g.f_max;
    out.trace = std::move(g.trace);
  }
  out.mutual_information = mutual_information(ctx.p);
  out.discord = 2.0 - marginal_log_term(ctx.p.s) + spectrum_log_sum(ctx.p) - out.f_max;
  out.classical_correlation = out.mutual_information - out.discord;
  return out;
}

}  // namespace xdiscord
