// Sweeps states over (alpha, theta) and tabulates both faces of the
// uncertainty relation; the margin D1*D2 - E3^2 is zero exactly on
// sin 2a = 0, cos 2a = 0 and cos t = 0.

#include <cstdio>

#include "qgame/strategy.hpp"

int main() {
  std::printf("%-8s %-8s %-10s %-10s %-10s %-12s\n", "alpha", "theta", "D1",
              "D2", "E3", "margin");
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 4; ++j) {
      const double alpha = i * qgame::kPi / 16.0;
      const double theta = j * qgame::kPi / 4.0;
      const auto r = qgame::uncertainty_check(qgame::make_state(alpha, theta));
      std::printf("%-8.4f %-8.4f %-10.6f %-10.6f %-10.6f %-12.3e\n", alpha,
                  theta, r.d1, r.d2, r.e3, r.lhs - r.rhs);
    }
  return 0;
}
