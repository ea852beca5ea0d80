#pragma once

#include <stdexcept>
#include <string>

namespace xdiscord {

/// Input matrix is not a valid X-patterned density matrix (shape, Hermiticity,
/// trace or positivity).
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bloch parameters fall outside the physical region by more than the
/// projection tolerance.
class PhysicalityError : public std::domain_error {
 public:
  PhysicalityError(std::string inequality, double violation)
      : std::domain_error("unphysical X-state: violates " + inequality +
                          " by " + std::to_string(violation)),
        inequality_(std::move(inequality)),
        violation_(violation) {}

  const std::string& inequality() const noexcept { return inequality_; }
  double violation() const noexcept { return violation_; }

 private:
  std::string inequality_;
  double violation_;
};

/// Malformed state input (text, structured record or matrix file).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation requires a rank-two state.
class RankError : public std::invalid_argument {
 public:
  RankError(int rank, const std::string& what)
      : std::invalid_argument(what), rank_(rank) {}
  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

}  // namespace xdiscord
