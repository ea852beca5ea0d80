// Minimal library use: discord of a Werner state and of a Bloch-parameter
// state, plus a brute-force cross-check.

#include <cstdio>

#include "xdiscord/xdiscord.hpp"

int main() {
  using namespace xdiscord;

  const BlochX werner{0.0, 0.0, -0.6, -0.6, -0.6};
  const auto w = discord(werner);
  std::printf("Werner a=0.6: Q=%.6f C=%.6f region=%s\n", w.discord, w.classical_correlation,
              std::string(to_string(w.region)).c_str());

  const BlochX p{0.3, -0.2, 0.25, -0.1, 0.15};
  const auto q = discord(p);
  const auto o = oracle_classical_correlation(p);
  std::printf("Q=%.8f z*=%.8f oracle gap=%.2e\n", q.discord, q.z_star, std::abs(o.value - q.classical_correlation));
  return 0;
}
