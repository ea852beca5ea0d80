// Acceptance checks AC1-AC7. Prints one PASS/FAIL line per criterion followed
// by indented detail lines; exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "support.hpp"
#include "xdiscord/cli.hpp"
#include "xdiscord/xdiscord.hpp"

namespace {

using namespace xdiscord;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
  std::string id;
  std::string title;
  std::vector<std::pair<bool, std::string>> checks;
  std::vector<std::string> notes;  // reported, not asserted

  void check(bool ok, std::string line) { checks.emplace_back(ok, std::move(line)); }
  void info(std::string line) { notes.push_back(std::move(line)); }

  bool passed() const {
    for (const auto& [ok, line] : checks) {
      if (!ok) return false;
    }
    return true;
  }

  void print() const {
    std::printf("%s %s: %s\n", id.c_str(), passed() ? "PASS" : "FAIL", title.c_str());
    for (const auto& [ok, line] : checks) std::printf("    [%s] %s\n", ok ? "ok" : "FAIL", line.c_str());
    for (const auto& line : notes) std::printf("    [info] %s\n", line.c_str());
    std::fflush(stdout);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Criterion ac1() {
  Criterion c{"AC1", "Example-2 regression", {}};
  const std::string text =
      "0.0783 0 0 0\n"
      "0 0.1250 0.1000 0\n"
      "0 0.1000 0.1250 0\n"
      "0 0 0 0.6717\n";
  const auto t0 = Clock::now();
  const auto conv = parse_state_text(text).resolve();
  const auto result = discord(conv.bloch);
  const double elapsed = seconds_since(t0);

  const auto& p = result.bloch;
  const double bloch_err = std::max({std::abs(p.r + 0.5934), std::abs(p.s + 0.5934), std::abs(p.c3 - 0.5),
                                     std::abs(p.c1 - 0.2), std::abs(p.c2 - 0.2)});
  c.check(bloch_err <= 5e-5, fmt("Bloch (r=s=-0.5934, c3=0.5, c1=c2=0.2): max deviation %.3g", bloch_err));

  const std::array<double, 4> expected{0.6717, 0.2250, 0.0783, 0.025};
  const auto lam = spectrum(p).lambda;
  double lam_err = 0.0;
  for (int i = 0; i < 4; ++i) lam_err = std::max(lam_err, std::abs(lam[i] - expected[i]));
  c.check(lam_err <= 5e-5, fmt("eigenvalues {0.025, 0.0783, 0.2250, 0.6717}: max deviation %.3g", lam_err));

  // Iterates from z0 = 1, compared to the number of decimals printed.
  const std::vector<std::pair<double, int>> printed{{0.9205, 4}, {0.8884, 4}, {0.8833, 4},
                                                    {0.8831, 4}, {0.88313, 5}, {0.883131, 6}};
  std::vector<double> iterates;
  if (result.trace && !result.trace->newton.empty()) iterates = result.trace->newton.front().iterates;
  // A converged run stops early; later iterates sit at the fixed point.
  while (!iterates.empty() && iterates.size() < printed.size()) iterates.push_back(iterates.back());
  int matched = 0;
  std::string listing;
  for (std::size_t k = 0; k < printed.size() && k < iterates.size(); ++k) {
    const double half_ulp = 0.5 * std::pow(10.0, -printed[k].second);
    const bool ok = std::abs(iterates[k] - printed[k].first) <= half_ulp;
    matched += ok ? 1 : 0;
    listing += fmt(" z%zu=%.7f(%s%.*f)", k + 1, iterates[k], ok ? "=" : "!=", printed[k].second, printed[k].first);
  }
  c.check(matched == static_cast<int>(printed.size()),
          fmt("Newton iterates from z0=1 match printed values: %d/6;", matched) + listing);

  c.check(std::abs(result.z_star - 0.88313) <= 1e-5, fmt("zhat = %.8f (target 0.88313 +- 1e-5)", result.z_star));
  c.check(std::abs(result.discord - 0.1328) <= 5e-5,
          fmt("Q = %.8f (target 0.1328 +- 5e-5, deviation %.3g)", result.discord, std::abs(result.discord - 0.1328)));
  c.check(elapsed < 0.010, fmt("runtime %.3f ms (< 10 ms)", elapsed * 1e3));
  return c;
}

Criterion ac2() {
  Criterion c{"AC2", "Bell-diagonal closed form on 10^4 states", {}};
  const auto t0 = Clock::now();
  const auto states = sample_states(20240601, 10000, SampleConstraint::BellDiagonal);
  double worst = 0.0;
  for (const auto& p : states) {
    const double q = discord(p).discord;
    worst = std::max(worst, std::abs(q - xtest::bell_diagonal_discord(p.c1, p.c2, p.c3)));
  }
  const double elapsed = seconds_since(t0);
  c.check(worst <= 1e-10, fmt("max |Q - closed form| = %.3g over %zu states (<= 1e-10)", worst, states.size()));
  c.check(elapsed < 5.0, fmt("runtime %.2f s (< 5 s)", elapsed));
  return c;
}

Criterion ac3() {
  Criterion c{"AC3", "closed-form regions (a)-(d) against the global maximizer", {}};
  const auto t0 = Clock::now();
  xtest::Rng g(7);
  const std::array<std::pair<xtest::Case, Region>, 4> cases{{{xtest::Case::A, Region::CaseA},
                                                             {xtest::Case::B, Region::CaseB},
                                                             {xtest::Case::C, Region::CaseC},
                                                             {xtest::Case::D, Region::CaseD}}};
  const char* names[] = {"a", "b", "c", "d"};
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto [which, tag] = cases[ci];
    double worst = 0.0;
    int sign_violations = 0;
    double worst_sign = 0.0;
    int classified_same = 0;
    for (int n = 0; n < 10000; ++n) {
      const auto p = xtest::sample_in_case(g, which);
      const FContext ctx(p);
      const auto closed = analytic_max(ctx, tag);
      const auto global = global_max(ctx);
      worst = std::max(worst, std::abs(closed.f_max - global.f_max));
      classified_same += classify_region(ctx) == tag ? 1 : 0;
      if (which == xtest::Case::C) continue;
      for (int k = 0; k <= 100; ++k) {
        const double d = f_derivative(ctx, k / 100.0);
        const bool ok = which == xtest::Case::D ? !(d > 1e-10) : !(d < -1e-10);
        if (!ok || std::isnan(d)) {
          ++sign_violations;
          worst_sign = std::max(worst_sign, std::isnan(d) ? INFINITY : std::abs(d));
        }
      }
    }
    c.check(worst <= 1e-9, fmt("case (%s): max |analytic_max - global_max| = %.3g over 10^4 states", names[ci], worst));
    if (which != xtest::Case::C) {
      c.check(sign_violations == 0, fmt("case (%s): F' sign condition (%s) violated at %d grid points (worst %.3g)",
                                        names[ci], which == xtest::Case::D ? "<= 1e-10" : ">= -1e-10",
                                        sign_violations, worst_sign));
    }
    c.info(fmt("case (%s): samples tagged %s by classify_region: %d/10000", names[ci],
               std::string(to_string(tag)).c_str(), classified_same));
  }
  const double elapsed = seconds_since(t0);
  c.check(elapsed < 60.0, fmt("runtime %.2f s (< 60 s)", elapsed));
  return c;
}

Criterion ac4() {
  Criterion c{"AC4", "brute-force oracle certifies the reduction (10^3 states, grid 512)", {}};
  const auto t0 = Clock::now();
  const auto states = sample_states(99, 1000);
  OracleOptions options;
  options.grid_n = 512;
  options.threads = std::max(1u, std::thread::hardware_concurrency());
  const double step = 0.5 * std::numbers::pi / (options.grid_n - 1);
  double worst = 0.0;
  int off_circle = 0;
  double worst_distance = 0.0;
  for (const auto& p : states) {
    const auto o = oracle_classical_correlation(p, options);
    worst = std::max(worst, std::abs(o.value - discord(p).classical_correlation));
    // Angular distance to the nearer of the great circles z1 = 0 and z2 = 0.
    const double dist = std::asin(std::min(1.0, std::min(std::abs(o.argmax.z1), std::abs(o.argmax.z2))));
    worst_distance = std::max(worst_distance, dist);
    if (dist > 2.0 * step) ++off_circle;
  }
  const double elapsed = seconds_since(t0);
  c.check(worst < 1e-5, fmt("max |oracle - (I - Q)| = %.3g (< 1e-5)", worst));
  c.check(off_circle == 0, fmt("argmax off the z1=0 / z2=0 great circles by > 2 grid steps: %d states "
                               "(worst %.3g rad, step %.3g rad)", off_circle, worst_distance, step));
  c.check(elapsed < 600.0, fmt("runtime %.1f s (< 10 min)", elapsed));
  return c;
}

DenseMatrix example3_matrix(double a) {
  Eigen::Vector4cd psi(0, 1, 1, 0);
  psi /= std::sqrt(2.0);
  DenseMatrix m = 2.0 * psi * psi.adjoint();
  m(0, 0) += 1.0 - a;
  m(3, 3) += a;
  return m / 3.0;
}

Criterion ac5() {
  Criterion c{"AC5", "Example-3: F' <= 0 on (0,1] and maximizer z = 0", {}};
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto conv = matrix_to_bloch(XDensityMatrix::from_dense(example3_matrix(a)));
    const FContext ctx(conv.bloch);
    const auto rows = detail::scan_rows(ctx, 101);
    double worst = -INFINITY;
    bool finite = true;
    for (const auto& r : rows) {
      if (r.z == 0.0) continue;
      if (std::isnan(r.df)) finite = false;
      worst = std::max(worst, r.df);
    }
    const auto result = discord(conv.bloch);
    c.check(finite && worst <= 1e-10, fmt("a=%.2f: max F' on (0,1] = %.3g", a, worst));
    c.check(rows.front().df == 0.0, fmt("a=%.2f: F'(0) = %.3g", a, rows.front().df));
    c.check(result.z_star == 0.0, fmt("a=%.2f: maximizer z* = %.3g (region %s)", a, result.z_star,
                                      std::string(to_string(result.region)).c_str()));
  }
  return c;
}

Criterion ac6() {
  Criterion c{"AC6", "Koashi-Winter relation on 10^3 rank-two states", {}};
  xtest::Rng g(2024);
  const std::array<RankTwoCase, 3> cases{RankTwoCase::I, RankTwoCase::II, RankTwoCase::III};
  double worst = 0.0;
  std::array<int, 3> counts{};
  int formula_total = 0, formula_bad = 0, formula_bad_c1_small = 0;
  double worst_formula = 0.0, worst_general = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const auto which = cases[n % 3];
    const auto m = xtest::random_rank_two(g, which);
    const auto report = koashi_winter_check(m);
    ++counts[static_cast<int>(report.case_tag)];
    worst = std::max(worst, report.residual);
    if (report.case_tag == RankTwoCase::III) {
      const auto p = rank_two_classify(m).bloch;
      const double con2 = report.bc.concurrence * report.bc.concurrence;
      const double literal = 0.5 * (1.0 + p.r * p.r - p.s * p.s - p.c3 * p.c3 - p.c1 * p.c1 + p.c2 * p.c2);
      const double general = 0.5 * (1.0 + p.r * p.r - p.s * p.s - p.c3 * p.c3 - std::abs(p.c1 * p.c1 - p.c2 * p.c2));
      ++formula_total;
      const double err = std::abs(con2 - literal);
      worst_formula = std::max(worst_formula, err);
      worst_general = std::max(worst_general, std::abs(con2 - general));
      if (err > 1e-10) {
        ++formula_bad;
        if (std::abs(p.c1) < std::abs(p.c2)) ++formula_bad_c1_small;
      }
    }
  }
  c.check(worst < 1e-8, fmt("max |C(ab) + E(bc) - S(b)| = %.3g (< 1e-8); cases I/II/III = %d/%d/%d", worst,
                            counts[0], counts[1], counts[2]));
  c.check(formula_bad == 0, fmt("case III: Con^2 = 1/2(1+r^2-s^2-c3^2-c1^2+c2^2) within 1e-10 fails on %d/%d states "
                                "(%d of them with |c1| < |c2|), worst %.3g",
                                formula_bad, formula_total, formula_bad_c1_small, worst_formula));
  c.info(fmt("case III against 1/2(1+r^2-s^2-c3^2-|c1^2-c2^2|): worst deviation %.3g", worst_general));
  return c;
}

Criterion ac7() {
  Criterion c{"AC7", "property suite", {}};
  const auto t0 = Clock::now();
  const auto states = sample_states(424242, 100000);
  double min_q = INFINITY;
  int negative = 0;
  for (const auto& p : states) {
    const double q = discord(p).discord;
    min_q = std::min(min_q, q);
    if (q < -1e-9) ++negative;
  }
  c.check(negative == 0, fmt("discord >= -1e-9 on 10^5 states: %d violations, min Q = %.3g", negative, min_q));

  xtest::Rng g(31337);
  double worst_fd = 0.0, worst_even = 0.0, worst_spec = 0.0;
  for (int n = 0; n < 2000; ++n) {
    const auto p = xtest::random_physical(g);
    const FContext ctx(p);
    for (int k = 0; k < 10; ++k) {
      const double z = g.uniform(0.01, 0.99);
      const double h = 1e-6;
      const double fd = (f_value(ctx, z + h) - f_value(ctx, z - h)) / (2.0 * h);
      worst_fd = std::max(worst_fd, std::abs(f_derivative(ctx, z) - fd));
    }
    worst_even = std::max(worst_even, std::abs(f_derivative(ctx, 1e-7)));
    const auto dense = xtest::dense_eigenvalues(xtest::pauli_expansion(p));
    const auto lam = spectrum(p).lambda;
    for (int i = 0; i < 4; ++i) worst_spec = std::max(worst_spec, std::abs(lam[i] - dense[i]));
  }
  c.check(worst_fd <= 1e-5, fmt("max |F' - central difference| = %.3g on 2*10^4 interior points (<= 1e-5)", worst_fd));
  c.check(worst_even < 1e-4, fmt("max |F'(1e-7)| = %.3g (< 1e-4)", worst_even));
  c.check(worst_spec <= 1e-10, fmt("max |spectrum - dense eigensolver| = %.3g (<= 1e-10)", worst_spec));
  const double elapsed = seconds_since(t0);
  c.check(elapsed < 120.0, fmt("runtime %.1f s (< 2 min)", elapsed));
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  // Optional filter: run only the named criteria, e.g. "acceptance AC1 AC5".
  const std::vector<std::pair<std::string, std::function<Criterion()>>> all{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}};
  int failed = 0;
  for (const auto& [id, run] : all) {
    bool selected = argc < 2;
    for (int i = 1; i < argc; ++i) selected = selected || id == argv[i];
    if (!selected) continue;
    const auto result = run();
    result.print();
    failed += result.passed() ? 0 : 1;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
