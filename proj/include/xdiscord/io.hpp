#pragma once

// State input parsing, structured (JSON) rendering, and the seeded sampler
// used for batch runs.
//
// Accepted inputs:
//   * plain text "r s c1 c2 c3" (whitespace, comma or semicolon separated);
//   * a JSON record with exactly one of
//       "bloch":  [r, s, c1, c2, c3]
//       "matrix": 4x4 rows of [re, im] pairs (plain numbers mean im = 0);
//   * a delimited 4x4 matrix file, 16 entries, each either a real number or
//     "(re,im)".
// Lines starting with '#' are ignored in the text formats.

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "xdiscord/discord.hpp"
#include "xdiscord/errors.hpp"
#include "xdiscord/xstate.hpp"

namespace xdiscord {

struct StateInput {
  std::variant<BlochX, DenseMatrix> value;

  bool is_bloch() const noexcept { return std::holds_alternative<BlochX>(value); }

  /// Bloch parameters of the state: validated/projected for Bloch input,
  /// phase-stripped conversion for matrix input.
  BlochConversion resolve() const {
    if (const auto* b = std::get_if<BlochX>(&value)) return {validate_physical(*b), 0.0, 0.0};
    return matrix_to_bloch(XDensityMatrix::from_dense(std::get<DenseMatrix>(value)));
  }

  /// The X matrix of the state (built from Bloch parameters if needed).
  XDensityMatrix matrix() const {
    if (const auto* b = std::get_if<BlochX>(&value)) return bloch_to_matrix(*b);
    return XDensityMatrix::from_dense(std::get<DenseMatrix>(value));
  }
};

namespace detail {

inline double parse_number(std::string_view token) {
  const std::string s(token);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ParseError("not a number: '" + s + "'");
  return v;
}

inline Complex parse_entry(std::string_view token) {
  if (!token.empty() && token.front() == '(') {
    if (token.back() != ')') throw ParseError("unterminated complex entry: '" + std::string(token) + "'");
    const auto inner = token.substr(1, token.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) return {parse_number(inner), 0.0};
    return {parse_number(inner.substr(0, comma)), parse_number(inner.substr(comma + 1))};
  }
  return {parse_number(token), 0.0};
}

inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const auto is_sep = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';'; };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (is_sep(ch)) {
      ++i;
    } else if (ch == '(') {
      const auto close = text.find(')', i);
      if (close == std::string_view::npos) throw ParseError("unterminated '(' in matrix entry");
      std::string tok;
      for (char c : text.substr(i, close - i + 1)) {
        if (!std::isspace(static_cast<unsigned char>(c))) tok.push_back(c);
      }
      tokens.push_back(std::move(tok));
      i = close + 1;
    } else {
      const auto start = i;
      while (i < text.size() && !is_sep(text[i]) && text[i] != '#') ++i;
      tokens.emplace_back(text.substr(start, i - start));
    }
  }
  return tokens;
}

inline double json_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline StateInput from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("structured input must be a JSON object");
  const bool has_bloch = j.contains("bloch");
  const bool has_matrix = j.contains("matrix");
  if (has_bloch == has_matrix) throw ParseError("structured input needs exactly one of \"bloch\" or \"matrix\"");
  if (has_bloch) {
    const auto& b = j.at("bloch");
    if (!b.is_array() || b.size() != 5) throw ParseError("\"bloch\" must be an array of 5 numbers");
    return {BlochX{json_number(b[0], "r"), json_number(b[1], "s"), json_number(b[2], "c1"),
                   json_number(b[3], "c2"), json_number(b[4], "c3")}};
  }
  const auto& m = j.at("matrix");
  if (!m.is_array() || m.size() != 4) throw ParseError("\"matrix\" must have 4 rows");
  DenseMatrix out;
  for (int i = 0; i < 4; ++i) {
    if (!m[i].is_array() || m[i].size() != 4) throw ParseError("\"matrix\" rows must have 4 entries");
    for (int k = 0; k < 4; ++k) {
      const auto& e = m[i][k];
      if (e.is_array()) {
        if (e.size() != 2) throw ParseError("matrix entries must be [re, im] pairs");
        out(i, k) = Complex(json_number(e[0], "re"), json_number(e[1], "im"));
      } else {
        out(i, k) = Complex(json_number(e, "matrix entry"), 0.0);
      }
    }
  }
  return {out};
}

}  // namespace detail

inline StateInput parse_bloch_string(std::string_view text) {
  const auto tokens = detail::tokenize(text);
  if (tokens.size() != 5) {
    throw ParseError("expected 5 Bloch parameters \"r s c1 c2 c3\", got " + std::to_string(tokens.size()));
  }
  std::array<double, 5> v{};
  for (int i = 0; i < 5; ++i) v[i] = detail::parse_number(tokens[i]);
  return {BlochX{v[0], v[1], v[2], v[3], v[4]}};
}

/// Parses any of the accepted formats from the contents of a file.
inline StateInput parse_state_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("empty input");
  if (text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed structured input: ") + e.what());
    }
    return detail::from_json(j);
  }
  const auto tokens = detail::tokenize(text);
  if (tokens.size() == 5) return parse_bloch_string(text);
  if (tokens.size() == 16) {
    DenseMatrix m;
    for (int k = 0; k < 16; ++k) m(k / 4, k % 4) = detail::parse_entry(tokens[k]);
    return {m};
  }
  throw ParseError("expected 5 Bloch parameters or 16 matrix entries, got " + std::to_string(tokens.size()) +
                   " values");
}

inline StateInput parse_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_text(buf.str());
}

// ---- structured output -----------------------------------------------------

inline nlohmann::json to_json(const BlochX& p) { return nlohmann::json::array({p.r, p.s, p.c1, p.c2, p.c3}); }

inline nlohmann::json to_json(const SolverTrace& t) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : t.newton) {
    runs.push_back({{"seed", run.seed},
                    {"iterates", run.iterates},
                    {"status", std::string(to_string(run.status))},
                    {"bisections", run.bisections},
                    {"z", run.z},
                    {"f", run.f}});
  }
  nlohmann::json brackets = nlohmann::json::array();
  for (const auto& [lo, hi] : t.sign_brackets) brackets.push_back({lo, hi});
  return {{"f_zero", t.f_zero},
          {"f_one", t.f_one},
          {"endpoint_tie", t.endpoint_tie},
          {"sign_brackets", brackets},
          {"newton", runs},
          {"golden_fallback", t.golden_fallback},
          {"chosen", std::string(to_string(t.chosen))},
          {"notes", t.notes}};
}

/// Field names mirror DiscordResult. The "bloch" field makes the record a
/// valid structured input.
inline nlohmann::json to_json(const DiscordResult& r) {
  nlohmann::json j{{"bloch", to_json(r.bloch)},
                   {"discord", r.discord},
                   {"classical_correlation", r.classical_correlation},
                   {"mutual_information", r.mutual_information},
                   {"z_star", r.z_star},
                   {"f_max", r.f_max},
                   {"region", std::string(to_string(r.region))},
                   {"path", r.analytic ? "analytic" : "numeric"}};
  j["eigenvalues"] = spectrum(r.bloch).lambda;
  j["trace"] = r.trace ? to_json(*r.trace) : nlohmann::json(nullptr);
  if (r.verification_gap) j["verification_gap"] = *r.verification_gap;
  return j;
}

// ---- seeded sampling ---------------------------------------------------------

/// Reproducible uniform sampler: std::mt19937_64 (fully specified by the
/// standard) with the top 53 bits mapped to [0,1) by hand, so streams are
/// identical across standard libraries.
class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * unit() - 1.0; }

 private:
  std::mt19937_64 engine_;
};

enum class SampleConstraint { None, BellDiagonal };

/// Rejection-samples uniform points of [-1,1]^5 inside the physical region.
/// With BellDiagonal, r = s = 0 and only (c1, c2, c3) are drawn.
inline std::vector<BlochX> sample_states(std::uint64_t seed, std::size_t count,
                                         SampleConstraint constraint = SampleConstraint::None) {
  UniformSampler u(seed);
  std::vector<BlochX> out;
  out.reserve(count);
  while (out.size() < count) {
    BlochX p;
    if (constraint == SampleConstraint::BellDiagonal) {
      p = {0.0, 0.0, u.symmetric(), u.symmetric(), u.symmetric()};
    } else {
      p = {u.symmetric(), u.symmetric(), u.symmetric(), u.symmetric(), u.symmetric()};
    }
    if (is_physical(p)) out.push_back(p);
  }
  return out;
}

}  // namespace xdiscord
