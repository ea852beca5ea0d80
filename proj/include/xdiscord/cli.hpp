#pragma once

// Command-line front end. run_cli() takes the argument list and two streams so
// it can be driven from tests without a process boundary.
//
// Exit codes: 0 success, 2 parse error, 3 physicality / invalid state,
// 4 rank error, 1 anything else.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xdiscord/discord.hpp"
#include "xdiscord/entanglement.hpp"
#include "xdiscord/errors.hpp"
#include "xdiscord/io.hpp"
#include "xdiscord/oracle.hpp"
#include "xdiscord/xstate.hpp"

namespace xdiscord {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitParse = 2, kExitPhysicality = 3, kExitRank = 4 };

// ---- batch runs --------------------------------------------------------------

struct OracleCheck {
  std::size_t index = 0;
  double oracle = 0.0;
  double disagreement = 0.0;
};

struct BatchReport {
  std::uint64_t seed = 0;
  SampleConstraint constraint = SampleConstraint::None;
  std::vector<DiscordResult> records;
  std::array<std::size_t, 5> region_counts{};  // indexed by Region
  std::vector<std::size_t> interior;           // indices with an interior maximizer
  std::size_t endpoint_ties = 0;
  std::size_t negative_discord = 0;            // discord < -1e-9
  double min_discord = 0.0;
  std::vector<OracleCheck> oracle_checks;
  std::optional<double> max_oracle_disagreement;
};

struct BatchOptions {
  std::uint64_t seed = 1;
  std::size_t count = 1000;
  SampleConstraint constraint = SampleConstraint::None;
  std::size_t verify_sample = 0;  // oracle on the first k states
  int grid = 256;
  unsigned threads = 1;
};

inline BatchReport run_batch(const BatchOptions& options) {
  BatchReport report;
  report.seed = options.seed;
  report.constraint = options.constraint;
  const auto states = sample_states(options.seed, options.count, options.constraint);
  report.records.resize(states.size());

  const unsigned threads = std::max(1u, options.threads);
  const auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < states.size(); i += stride) report.records[i] = discord(states[i]);
  };
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  report.min_discord = report.records.empty() ? 0.0 : report.records.front().discord;
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    ++report.region_counts[static_cast<std::size_t>(r.region)];
    if (r.trace && r.trace->chosen == Maximizer::Interior) report.interior.push_back(i);
    if (r.trace && r.trace->endpoint_tie) ++report.endpoint_ties;
    if (r.discord < -1e-9) ++report.negative_discord;
    report.min_discord = std::min(report.min_discord, r.discord);
  }

  const std::size_t k = std::min(options.verify_sample, report.records.size());
  OracleOptions oracle_options;
  oracle_options.grid_n = options.grid;
  oracle_options.threads = threads;
  for (std::size_t i = 0; i < k; ++i) {
    const auto o = oracle_classical_correlation(report.records[i].bloch, oracle_options);
    const double gap = std::abs(o.value - report.records[i].classical_correlation);
    report.oracle_checks.push_back({i, o.value, gap});
    report.max_oracle_disagreement = std::max(report.max_oracle_disagreement.value_or(0.0), gap);
  }
  return report;
}

// ---- command implementations ---------------------------------------------------

struct CliSettings {
  std::string input_file;
  std::string bloch;
  bool verify = false;
  int grid = 256;
  std::uint64_t seed = 1;
  std::string format = "text";
  int precision = 6;
  int points = 101;
  std::size_t count = 1000;
  std::size_t verify_sample = 0;
  bool bell_diagonal = false;
  bool summary_only = false;
  unsigned threads = 1;
};

namespace detail {

class Printer {
 public:
  explicit Printer(int precision) : precision_(precision) {}

  std::string num(double x) const {
    std::ostringstream os;
    os << std::setprecision(precision_) << x;
    return os.str();
  }

  template <class Range>
  std::string list(const Range& xs) const {
    std::string out;
    for (double x : xs) out += (out.empty() ? "" : " ") + num(x);
    return out;
  }

  std::string bloch(const BlochX& p) const {
    return "r=" + num(p.r) + " s=" + num(p.s) + " c1=" + num(p.c1) + " c2=" + num(p.c2) + " c3=" + num(p.c3);
  }

 private:
  int precision_;
};

inline StateInput read_state(const CliSettings& s) {
  if (!s.input_file.empty() && !s.bloch.empty()) throw ParseError("give either --input or --bloch, not both");
  if (!s.input_file.empty()) return parse_state_file(s.input_file);
  if (!s.bloch.empty()) return parse_bloch_string(s.bloch);
  throw ParseError("no state given; use --input FILE or --bloch \"r s c1 c2 c3\"");
}

inline void print_trace(std::ostream& out, const Printer& pr, const SolverTrace& t) {
  out << "F(0)=" << pr.num(t.f_zero) << "\n";
  out << "F(1)=" << pr.num(t.f_one) << "\n";
  for (const auto& [lo, hi] : t.sign_brackets) out << "bracket=[" << pr.num(lo) << ", " << pr.num(hi) << "]\n";
  for (const auto& run : t.newton) {
    out << "newton seed=" << pr.num(run.seed) << " status=" << to_string(run.status)
        << " bisections=" << run.bisections << " iterates=" << pr.list(run.iterates) << "\n";
  }
  out << "maximizer=" << to_string(t.chosen) << "\n";
  for (const auto& note : t.notes) out << "note=" << note << "\n";
}

inline int cmd_discord(const CliSettings& s, std::ostream& out) {
  const auto conv = read_state(s).resolve();
  DiscordOptions options;
  options.verify = s.verify;
  const auto result = discord(conv.bloch, options);
  std::optional<OracleResult> oracle;
  if (s.verify) {
    OracleOptions o;
    o.grid_n = s.grid;
    o.threads = s.threads;
    oracle = oracle_classical_correlation(result.bloch, o);
  }

  if (s.format == "json") {
    auto j = to_json(result);
    if (conv.phase03 != 0.0 || conv.phase12 != 0.0) j["stripped_phases"] = {conv.phase03, conv.phase12};
    if (oracle) {
      j["oracle"] = {{"classical_correlation", oracle->value},
                     {"disagreement", std::abs(oracle->value - result.classical_correlation)},
                     {"argmax", {oracle->argmax.z1, oracle->argmax.z2, oracle->argmax.z3}},
                     {"grid", s.grid}};
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  const Printer pr(s.precision);
  out << pr.bloch(result.bloch) << "\n";
  if (conv.phase03 != 0.0 || conv.phase12 != 0.0) {
    out << "stripped_phases=" << pr.num(conv.phase03) << " " << pr.num(conv.phase12) << "\n";
  }
  out << "eigenvalues=" << pr.list(spectrum(result.bloch).lambda) << "\n";
  out << "region=" << to_string(result.region) << "\n";
  out << "path=" << (result.analytic ? "analytic" : "numeric") << "\n";
  out << "Q=" << pr.num(result.discord) << "\n";
  out << "C=" << pr.num(result.classical_correlation) << "\n";
  out << "I=" << pr.num(result.mutual_information) << "\n";
  out << "z*=" << pr.num(result.z_star) << "\n";
  out << "F_max=" << pr.num(result.f_max) << "\n";
  if (result.trace) print_trace(out, pr, *result.trace);
  if (result.verification_gap) out << "analytic_gap=" << pr.num(*result.verification_gap) << "\n";
  if (oracle) {
    out << "oracle_C=" << pr.num(oracle->value) << "\n";
    out << "oracle_disagreement=" << pr.num(std::abs(oracle->value - result.classical_correlation)) << "\n";
    out << "oracle_argmax=" << pr.num(oracle->argmax.z1) << " " << pr.num(oracle->argmax.z2) << " "
        << pr.num(oracle->argmax.z3) << "\n";
  }
  return kExitOk;
}

struct ScanRow {
  double z = 0.0;
  double f = 0.0;
  double df = 0.0;
  std::optional<double> d2f;
};

/// n equally spaced samples of F, F', F'' on [0,1]. F is even, so F'(0) = 0;
/// at z = 1 the formulas are the one-sided limits from below.
inline std::vector<ScanRow> scan_rows(const FContext& ctx, int n) {
  std::vector<ScanRow> rows(n);
  for (int k = 0; k < n; ++k) {
    const double z = (k == n - 1) ? 1.0 : static_cast<double>(k) / (n - 1);
    rows[k] = {z, f_value(ctx, z), k == 0 ? 0.0 : f_derivative(ctx, z), f_second_derivative(ctx, z)};
  }
  return rows;
}

inline int cmd_scan(const CliSettings& s, std::ostream& out) {
  if (s.points < 2) throw ParseError("--points must be at least 2");
  const auto conv = read_state(s).resolve();
  const FContext ctx(conv.bloch);
  const auto rows = scan_rows(ctx, s.points);

  if (s.format == "json") {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& r : rows) {
      const auto finite_or_null = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
      pts.push_back({{"z", r.z},
                     {"F", finite_or_null(r.f)},
                     {"dF", finite_or_null(r.df)},
                     {"d2F", r.d2f ? finite_or_null(*r.d2f) : nlohmann::json(nullptr)}});
    }
    out << nlohmann::json{{"bloch", to_json(ctx.p)}, {"points", pts}}.dump(2) << "\n";
    return kExitOk;
  }

  const Printer pr(s.precision);
  out << "# " << pr.bloch(ctx.p) << "\n";
  out << "z,F,dF,d2F\n";
  for (const auto& r : rows) {
    out << pr.num(r.z) << "," << pr.num(r.f) << "," << pr.num(r.df) << "," << (r.d2f ? pr.num(*r.d2f) : "nan")
        << "\n";
  }
  return kExitOk;
}

inline nlohmann::json to_json(const BatchReport& b) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : b.records) records.push_back(to_json(r));
  nlohmann::json regions = nlohmann::json::object();
  for (Region r : {Region::CaseA, Region::CaseB, Region::CaseC, Region::CaseD, Region::General}) {
    regions[std::string(to_string(r))] = b.region_counts[static_cast<std::size_t>(r)];
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : b.oracle_checks) {
    checks.push_back({{"index", c.index}, {"oracle", c.oracle}, {"disagreement", c.disagreement}});
  }
  return {{"seed", b.seed},
          {"count", b.records.size()},
          {"constraint", b.constraint == SampleConstraint::BellDiagonal ? "bell-diagonal" : "none"},
          {"summary",
           {{"regions", regions},
            {"interior_maximizers", b.interior},
            {"endpoint_ties", b.endpoint_ties},
            {"negative_discord", b.negative_discord},
            {"min_discord", b.min_discord},
            {"max_oracle_disagreement",
             b.max_oracle_disagreement ? nlohmann::json(*b.max_oracle_disagreement) : nlohmann::json(nullptr)},
            {"oracle_checks", checks}}},
          {"records", records}};
}

inline int cmd_random(const CliSettings& s, std::ostream& out) {
  if (s.count < 1) throw ParseError("--count must be at least 1");
  BatchOptions options;
  options.seed = s.seed;
  options.count = s.count;
  options.constraint = s.bell_diagonal ? SampleConstraint::BellDiagonal : SampleConstraint::None;
  options.verify_sample = s.verify_sample;
  options.grid = s.grid;
  options.threads = s.threads;
  const auto report = run_batch(options);

  if (s.format == "json") {
    out << to_json(report).dump(2) << "\n";
    return kExitOk;
  }

  const Printer pr(s.precision);
  out << "seed=" << report.seed << "\n";
  out << "count=" << report.records.size() << "\n";
  for (Region r : {Region::CaseA, Region::CaseB, Region::CaseC, Region::CaseD, Region::General}) {
    out << "region." << to_string(r) << "=" << report.region_counts[static_cast<std::size_t>(r)] << "\n";
  }
  out << "interior_maximizers=" << report.interior.size() << "\n";
  out << "endpoint_ties=" << report.endpoint_ties << "\n";
  out << "negative_discord=" << report.negative_discord << "\n";
  out << "min_discord=" << pr.num(report.min_discord) << "\n";
  if (report.max_oracle_disagreement) {
    out << "oracle_checked=" << report.oracle_checks.size() << "\n";
    out << "max_oracle_disagreement=" << pr.num(*report.max_oracle_disagreement) << "\n";
  }
  for (std::size_t i : report.interior) {
    const auto& r = report.records[i];
    out << "interior index=" << i << " " << pr.bloch(r.bloch) << " z*=" << pr.num(r.z_star) << "\n";
  }
  if (!s.summary_only) {
    out << "index,r,s,c1,c2,c3,Q,C,z*,region\n";
    for (std::size_t i = 0; i < report.records.size(); ++i) {
      const auto& r = report.records[i];
      const auto& p = r.bloch;
      out << i << "," << pr.num(p.r) << "," << pr.num(p.s) << "," << pr.num(p.c1) << "," << pr.num(p.c2) << ","
          << pr.num(p.c3) << "," << pr.num(r.discord) << "," << pr.num(r.classical_correlation) << ","
          << pr.num(r.z_star) << "," << to_string(r.region) << "\n";
    }
  }
  return kExitOk;
}

inline int cmd_kw_check(const CliSettings& s, std::ostream& out) {
  const auto matrix = read_state(s).matrix();
  const auto report = koashi_winter_check(matrix);
  const auto decomposition = rank_two_classify(matrix);
  const auto& p = decomposition.bloch;
  const double con2 = report.bc.concurrence * report.bc.concurrence;
  std::optional<double> formula, general;
  if (report.case_tag == RankTwoCase::III) {
    formula = 0.5 * (1.0 + p.r * p.r - p.s * p.s - p.c3 * p.c3 - p.c1 * p.c1 + p.c2 * p.c2);
    general = 0.5 * (1.0 + p.r * p.r - p.s * p.s - p.c3 * p.c3 - std::abs(p.c1 * p.c1 - p.c2 * p.c2));
  }

  if (s.format == "json") {
    nlohmann::json j{{"bloch", to_json(p)},
                     {"case", std::string(to_string(report.case_tag))},
                     {"classical_correlation", report.classical_correlation},
                     {"entropy_b", report.entropy_b},
                     {"concurrence", report.bc.concurrence},
                     {"eof", report.bc.eof},
                     {"residual", report.residual},
                     {"z_star", report.z_star},
                     {"region", std::string(to_string(report.region))},
                     {"warnings", report.warnings}};
    if (formula) {
      j["con2"] = con2;
      j["con2_formula"] = *formula;
      j["con2_general"] = *general;
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  const Printer pr(s.precision);
  out << pr.bloch(p) << "\n";
  out << "case=" << to_string(report.case_tag) << "\n";
  out << "C=" << pr.num(report.classical_correlation) << "\n";
  out << "S_b=" << pr.num(report.entropy_b) << "\n";
  out << "concurrence=" << pr.num(report.bc.concurrence) << "\n";
  out << "E=" << pr.num(report.bc.eof) << "\n";
  out << "residual=" << pr.num(report.residual) << "\n";
  out << "z*=" << pr.num(report.z_star) << "\n";
  if (formula) {
    out << "Con2=" << pr.num(con2) << "\n";
    out << "Con2_formula=" << pr.num(*formula) << "\n";
    out << "Con2_general=" << pr.num(*general) << "\n";
  }
  for (const auto& w : report.warnings) out << "warning=" << w << "\n";
  return kExitOk;
}

inline int cmd_classify(const CliSettings& s, std::ostream& out) {
  const auto conv = read_state(s).resolve();
  const FContext ctx(conv.bloch);
  const Region region = classify_region(ctx);
  std::optional<Maximum> closed;
  if (region != Region::General) closed = analytic_max(ctx, region);

  if (s.format == "json") {
    nlohmann::json j{{"bloch", to_json(ctx.p)}, {"region", std::string(to_string(region))}, {"c", ctx.c}};
    if (closed) {
      j["z_star"] = closed->z_star;
      j["f_max"] = closed->f_max;
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  const Printer pr(s.precision);
  out << pr.bloch(ctx.p) << "\n";
  out << "region=" << to_string(region) << "\n";
  out << "c=" << pr.num(ctx.c) << "\n";
  if (closed) {
    out << "z*=" << pr.num(closed->z_star) << "\n";
    out << "F_max=" << pr.num(closed->f_max) << "\n";
  }
  return kExitOk;
}

inline int cmd_verify(const CliSettings& s, std::ostream& out) {
  CliSettings forced = s;
  forced.verify = true;
  return cmd_discord(forced, out);
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum discord of two-qubit X-states", "xdiscord"};
  app.require_subcommand(1);
  CliSettings s;

  const auto add_state = [&s](CLI::App* sub) {
    auto* input = sub->add_option("--input", s.input_file, "state file (Bloch text, JSON record or 4x4 matrix)");
    auto* bloch = sub->add_option("--bloch", s.bloch, "Bloch parameters \"r s c1 c2 c3\"");
    input->excludes(bloch);
  };
  const auto add_output = [&s](CLI::App* sub) {
    sub->add_option("--format", s.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--precision", s.precision, "significant digits in text output")->check(CLI::Range(1, 15));
  };

  auto* discord_cmd = app.add_subcommand("discord", "discord, classical correlation and solver trace");
  add_state(discord_cmd);
  add_output(discord_cmd);
  discord_cmd->add_flag("--verify", s.verify, "cross-check with the brute-force measurement oracle");
  discord_cmd->add_option("--grid", s.grid, "oracle grid size")->check(CLI::Range(64, 100000));
  discord_cmd->add_option("--threads", s.threads, "oracle threads")->check(CLI::Range(1u, 256u));

  auto* verify_cmd = app.add_subcommand("verify", "discord with the oracle cross-check enabled");
  add_state(verify_cmd);
  add_output(verify_cmd);
  verify_cmd->add_option("--grid", s.grid, "oracle grid size")->check(CLI::Range(64, 100000));
  verify_cmd->add_option("--threads", s.threads, "oracle threads")->check(CLI::Range(1u, 256u));

  auto* scan_cmd = app.add_subcommand("scan", "tabulate F, F' and F'' on [0,1]");
  add_state(scan_cmd);
  add_output(scan_cmd);
  scan_cmd->add_option("--points", s.points, "number of samples (>= 2)")->check(CLI::Range(2, 10000000));

  auto* random_cmd = app.add_subcommand("random", "seeded batch over random physical states");
  add_output(random_cmd);
  random_cmd->add_option("--count", s.count, "number of states")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  random_cmd->add_option("--seed", s.seed, "64-bit seed");
  random_cmd->add_flag("--bell-diagonal", s.bell_diagonal, "sample r = s = 0 only");
  random_cmd->add_option("--verify-sample", s.verify_sample, "run the oracle on the first K states");
  random_cmd->add_option("--grid", s.grid, "oracle grid size")->check(CLI::Range(64, 100000));
  random_cmd->add_option("--threads", s.threads, "worker threads")->check(CLI::Range(1u, 256u));
  random_cmd->add_flag("--summary-only", s.summary_only, "omit the per-state table");

  auto* kw_cmd = app.add_subcommand("kw-check", "Koashi-Winter check for a rank-two state");
  add_state(kw_cmd);
  add_output(kw_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "closed-form region of the state");
  add_state(classify_cmd);
  add_output(classify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*discord_cmd) return detail::cmd_discord(s, out);
    if (*verify_cmd) return detail::cmd_verify(s, out);
    if (*scan_cmd) return detail::cmd_scan(s, out);
    if (*random_cmd) return detail::cmd_random(s, out);
    if (*kw_cmd) return detail::cmd_kw_check(s, out);
    if (*classify_cmd) return detail::cmd_classify(s, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const RankError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRank;
  } catch (const PhysicalityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPhysicality;
  } catch (const InvalidStateError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPhysicality;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"xdiscord"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace xdiscord
