// Prints the best-response curves of the a=7, b=1, c=-2, d=1.5 game on a
// coarse grid; the two curves cross at alpha = beta = pi/8.

#include <cstdio>

#include "qgame/equilibrium.hpp"

int main() {
  const qgame::ReducedCoefficients k{7.0, 1.0, -2.0, 1.5};
  const auto h = qgame::reduced_game(k);
  const auto [alice, bob] = qgame::reaction_curves(h, 0.05);

  std::printf("%-12s %-12s %-12s\n", "opponent", "alice BR", "bob BR");
  for (size_t i = 0; i < alice.samples.size(); ++i)
    std::printf("%-12.4f %-12.4f %-12.4f\n", alice.samples[i].opponent_angle,
                alice.samples[i].best_responses.front(),
                bob.samples[i].best_responses.front());

  for (const auto& e : qgame::find_nash(h, 1e-6, 1e-3))
    std::printf("\nequilibrium: alpha=%.6f beta=%.6f value=%.6f\n", e.alpha,
                e.beta, e.value);
  return 0;
}
