#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qgame/equilibrium.hpp"

using namespace qgame;

namespace {

// For fixed β, H(α, β) = A0 + A1 cos 2α + A2 sin 2α, so Alice's best
// response is α = atan2(A2, A1) / 2 — the oracle used against the
// grid-and-golden search.
double alice_oracle(const ReducedCoefficients& k, double beta) {
  const double a1 =
      0.5 * (k.a * std::sin(beta) * std::sin(beta) -
             k.b * std::cos(beta) * std::cos(beta));
  const double a2 = k.c * std::sin(2 * beta) + k.d;
  return wrap_pi(0.5 * std::atan2(a2, a1));
}

double bob_oracle(const ReducedCoefficients& k, double alpha) {
  const double b1 =
      0.5 * (k.b * std::sin(alpha) * std::sin(alpha) -
             k.a * std::cos(alpha) * std::cos(alpha));
  const double b2 = k.c * std::sin(2 * alpha) - k.d;
  return wrap_pi(0.5 * std::atan2(-b2, -b1));  // minimizer: antipode
}

// Closed-form partial derivatives of H, used as the gradient oracle.
double h_alpha(const ReducedCoefficients& k, double a, double b) {
  return std::sin(2 * a) * (k.b * std::cos(b) * std::cos(b) -
                            k.a * std::sin(b) * std::sin(b)) +
         2 * std::cos(2 * a) * (k.c * std::sin(2 * b) + k.d);
}

double h_beta(const ReducedCoefficients& k, double a, double b) {
  return std::sin(2 * b) * (k.a * std::cos(a) * std::cos(a) -
                            k.b * std::sin(a) * std::sin(a)) +
         2 * std::cos(2 * b) * (k.c * std::sin(2 * a) - k.d);
}

// Test-local Newton solve on the analytic gradient; independent of the
// search path under test.
std::pair<double, double> newton_oracle(const ReducedCoefficients& k,
                                        double a, double b) {
  for (int i = 0; i < 100; ++i) {
    const double h = 1e-7;
    const double ga = h_alpha(k, a, b);
    const double gb = h_beta(k, a, b);
    const double gaa = (h_alpha(k, a + h, b) - h_alpha(k, a - h, b)) / (2 * h);
    const double gab = (h_alpha(k, a, b + h) - h_alpha(k, a, b - h)) / (2 * h);
    const double gba = (h_beta(k, a + h, b) - h_beta(k, a - h, b)) / (2 * h);
    const double gbb = (h_beta(k, a, b + h) - h_beta(k, a, b - h)) / (2 * h);
    const double det = gaa * gbb - gab * gba;
    if (std::fabs(det) < 1e-14) break;
    a -= (gbb * ga - gab * gb) / det;
    b -= (gaa * gb - gba * ga) / det;
    if (std::fabs(ga) + std::fabs(gb) < 1e-13) break;
  }
  return {wrap_pi(a), wrap_pi(b)};
}

const ReducedCoefficients kCase1{7, 1, -2, 1.5};
const ReducedCoefficients kCase2{1, 1, -2, 0};
const ReducedCoefficients kCase3{1, 10, -6, 4};

}  // namespace

TEST_CASE("best responses match the sinusoid oracle") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int t = 0; t < 40; ++t) {
    const ReducedCoefficients k{coeff(rng), coeff(rng), coeff(rng),
                                coeff(rng)};
    const auto h = reduced_game(k);
    const double beta = angle(rng);
    const auto br = best_response_alice(h, beta, 1e-3);
    REQUIRE(br.size() == 1);
    REQUIRE(circ_dist_pi(br[0], alice_oracle(k, beta)) <= 1e-7);

    const double alpha = angle(rng);
    const auto bb = best_response_bob(h, alpha, 1e-3);
    REQUIRE(bb.size() == 1);
    REQUIRE(circ_dist_pi(bb[0], bob_oracle(k, alpha)) <= 1e-7);
  }
}

TEST_CASE("best response named cases") {
  // (1,1,-2,0) at β = π/4: H(α, π/4) = 1/2 + 2(1 - sin 2α), maximized at
  // sin 2α = -1, i.e. α = 3π/4
  const auto br = best_response_alice(reduced_game(kCase2), kPi / 4, 1e-3);
  REQUIRE(br.size() == 1);
  REQUIRE(std::abs(br[0] - 3 * kPi / 4) <= 1e-6);

  // stationary at the case-1 equilibrium
  const auto br1 = best_response_alice(reduced_game(kCase1), kPi / 8, 1e-3);
  REQUIRE(br1.size() == 1);
  REQUIRE(std::abs(br1[0] - kPi / 8) <= 1e-6);
  REQUIRE(std::abs(h_alpha(kCase1, kPi / 8, kPi / 8)) <= 1e-12);

  const auto bb1 = best_response_bob(reduced_game(kCase1), kPi / 8, 1e-3);
  REQUIRE(bb1.size() == 1);
  REQUIRE(std::abs(bb1[0] - kPi / 8) <= 1e-6);
  REQUIRE(std::abs(h_beta(kCase1, kPi / 8, kPi / 8)) <= 1e-12);

  // case-3 counter-response to the published Alice angle
  const auto bb3 =
      best_response_bob(reduced_game(kCase3), 87.9 * kPi / 180.0, 1e-3);
  REQUIRE(bb3.size() == 1);
  REQUIRE(std::abs(bb3[0] - 69.2 * kPi / 180.0) <= 0.2 * kPi / 180.0);

  // minimizing the mixture term with symmetric a = b, d = 0: Bob matches
  // sin 2β to sin 2α (scan oracle confirms π/4)
  const auto bb2 = best_response_bob(reduced_game(kCase2), kPi / 4, 1e-3);
  REQUIRE(bb2.size() == 1);
  double scan_best = 1e300, scan_arg = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double b = i * kPi / 100000.0;
    const double v = reduced_payoff_H(kCase2, kPi / 4, b);
    if (v < scan_best) {
      scan_best = v;
      scan_arg = b;
    }
  }
  REQUIRE(circ_dist_pi(bb2[0], scan_arg) <= 1e-4);
}

TEST_CASE("flat game degenerates to the full grid") {
  const auto h = reduced_game(ReducedCoefficients{0, 0, 0, 0});
  const auto br = best_response_alice(h, 0.7, 1e-2);
  REQUIRE(br.size() == static_cast<size_t>(std::ceil(kPi / 1e-2)));
}

TEST_CASE("reaction curves sample the full opponent grid") {
  const auto [alice, bob] = reaction_curves(reduced_game(kCase1), 0.01);
  const size_t expected = static_cast<size_t>(std::ceil(kPi / 0.01));
  REQUIRE(alice.samples.size() == expected);
  REQUIRE(bob.samples.size() == expected);
  REQUIRE(alice.player == Player::alice);
  REQUIRE(bob.player == Player::bob);
  // the curves pass through the equilibrium
  const size_t j = static_cast<size_t>(std::lround((kPi / 8) / 0.01));
  REQUIRE(circ_dist_pi(alice.samples[j].best_responses.front(), kPi / 8) <=
          0.2);
  REQUIRE(circ_dist_pi(bob.samples[j].best_responses.front(), kPi / 8) <=
          0.2);
  // payoff at best responses is a true maximum (Alice side)
  const ReactionSample& s = alice.samples[j];
  REQUIRE(s.payoff_at_best >=
          reduced_payoff_H(kCase1, 0.123, s.opponent_angle) - 1e-12);
}

TEST_CASE("case 1: unique equilibrium at pi/8 with value 2") {
  const auto eqs = find_nash(reduced_game(kCase1), 1e-6, 1e-3);
  REQUIRE(eqs.size() == 1);
  REQUIRE(std::abs(eqs[0].alpha - kPi / 8) <= 0.002);
  REQUIRE(std::abs(eqs[0].beta - kPi / 8) <= 0.002);
  REQUIRE(std::abs(eqs[0].value - 2.0) <= 0.01);
  REQUIRE(eqs[0].kind == EquilibriumKind::interior_saddle);
  REQUIRE(eqs[0].max_improvement <= 1e-6);

  // tighter: the solver should land on the exact stationary point
  const auto [ax, bx] = newton_oracle(kCase1, 0.39, 0.39);
  REQUIRE(std::abs(eqs[0].alpha - ax) <= 1e-6);
  REQUIRE(std::abs(eqs[0].beta - bx) <= 1e-6);
  REQUIRE(std::abs(ax - kPi / 8) <= 1e-9);
}

TEST_CASE("case 2: no equilibrium") {
  REQUIRE(find_nash(reduced_game(kCase2), 1e-6, 1e-3).empty());
}

TEST_CASE("case 3: equilibrium near the published angles") {
  const auto eqs = find_nash(reduced_game(kCase3), 1e-6, 1e-3);
  REQUIRE(eqs.size() == 1);
  const double deg = kPi / 180.0;
  REQUIRE(std::abs(eqs[0].alpha - 87.9 * deg) <= 0.2 * deg);
  REQUIRE(std::abs(eqs[0].beta - 69.2 * deg) <= 0.2 * deg);
  REQUIRE(std::abs(eqs[0].value - 4.60) <= 0.05);

  const auto [ax, bx] = newton_oracle(kCase3, 1.53, 1.21);
  REQUIRE(std::abs(eqs[0].alpha - ax) <= 1e-6);
  REQUIRE(std::abs(eqs[0].beta - bx) <= 1e-6);
}

TEST_CASE("equilibria carry an independent deviation certificate") {
  for (const auto* k : {&kCase1, &kCase3}) {
    const auto h = reduced_game(*k);
    const auto eqs = find_nash(h, 1e-6, 1e-3);
    REQUIRE(eqs.size() == 1);
    const double here = h(eqs[0].alpha, eqs[0].beta);
    double alice_best = -1e300, bob_best = 1e300;
    for (int i = 0; i < 31416; ++i) {
      const double x = i * 1e-4;
      alice_best = std::max(alice_best, h(x, eqs[0].beta));
      bob_best = std::min(bob_best, h(eqs[0].alpha, x));
    }
    REQUIRE(alice_best - here <= 1e-6);
    REQUIRE(here - bob_best <= 1e-6);
  }
}

TEST_CASE("saddle structure at the equilibria") {
  for (const auto* k : {&kCase1, &kCase3}) {
    const auto h = reduced_game(*k);
    const auto eqs = find_nash(h, 1e-6, 1e-3);
    REQUIRE(eqs.size() == 1);
    const double a = eqs[0].alpha, b = eqs[0].beta;
    const double step = 1e-6;
    const double da = (h(a + step, b) - h(a - step, b)) / (2 * step);
    const double db = (h(a, b + step) - h(a, b - step)) / (2 * step);
    REQUIRE(std::abs(da) <= 1e-5);
    REQUIRE(std::abs(db) <= 1e-5);
    const double h2 = 1e-4;
    const double daa = (h(a + h2, b) - 2 * h(a, b) + h(a - h2, b)) / (h2 * h2);
    const double dbb = (h(a, b + h2) - 2 * h(a, b) + h(a, b - h2)) / (h2 * h2);
    REQUIRE(daa <= 0.0);
    REQUIRE(dbb >= 0.0);
  }
}

TEST_CASE("analytic and finite-difference gradients agree") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int t = 0; t < 200; ++t) {
    const ReducedCoefficients k{coeff(rng), coeff(rng), coeff(rng),
                                coeff(rng)};
    const double a = angle(rng), b = angle(rng);
    const double step = 1e-6;
    const double fd_a = (reduced_payoff_H(k, a + step, b) -
                         reduced_payoff_H(k, a - step, b)) /
                        (2 * step);
    const double fd_b = (reduced_payoff_H(k, a, b + step) -
                         reduced_payoff_H(k, a, b - step)) /
                        (2 * step);
    REQUIRE(std::abs(fd_a - h_alpha(k, a, b)) <= 1e-6);
    REQUIRE(std::abs(fd_b - h_beta(k, a, b)) <= 1e-6);
  }
}

TEST_CASE("halving the grid step does not move the equilibria") {
  for (const auto* k : {&kCase1, &kCase3}) {
    const auto coarse = find_nash(reduced_game(*k), 1e-6, 2e-3);
    const auto fine = find_nash(reduced_game(*k), 1e-6, 1e-3);
    REQUIRE(coarse.size() == 1);
    REQUIRE(fine.size() == 1);
    REQUIRE(circ_dist_pi(coarse[0].alpha, fine[0].alpha) <= 2e-3);
    REQUIRE(circ_dist_pi(coarse[0].beta, fine[0].beta) <= 2e-3);
  }
}

TEST_CASE("payoff scaling leaves equilibria fixed and scales the value") {
  const double lambda = 3.75;
  const ReducedCoefficients scaled{kCase1.a * lambda, kCase1.b * lambda,
                                   kCase1.c * lambda, kCase1.d * lambda};
  const auto base = find_nash(reduced_game(kCase1), 1e-6, 1e-3);
  const auto big = find_nash(reduced_game(scaled), 1e-5, 1e-3);
  REQUIRE(base.size() == 1);
  REQUIRE(big.size() == 1);
  REQUIRE(circ_dist_pi(base[0].alpha, big[0].alpha) <= 1e-6);
  REQUIRE(circ_dist_pi(base[0].beta, big[0].beta) <= 1e-6);
  REQUIRE(std::abs(big[0].value - lambda * base[0].value) <= 1e-6);

  const double beta = 0.7;
  const auto br = best_response_alice(reduced_game(kCase1), beta, 1e-3);
  const auto br_scaled = best_response_alice(reduced_game(scaled), beta, 1e-3);
  REQUIRE(br.size() == br_scaled.size());
  REQUIRE(circ_dist_pi(br[0], br_scaled[0]) <= 1e-7);
}

TEST_CASE("game-spec search reduces to the coefficient search") {
  const GameSpec g(OrthoLattice(3), ObservableFrame::fixed_xyz(),
                   ObservableFrame::fixed_xyz(),
                   PayoffMatrix::table({7, 7, 0, 1, 1, 0}));
  const auto eqs = find_nash(g, 1e-6, 1e-3);
  REQUIRE(eqs.size() == 1);
  REQUIRE(std::abs(eqs[0].alpha - kPi / 8) <= 1e-6);
  REQUIRE(std::abs(eqs[0].value - 2.0) <= 1e-9);
}

TEST_CASE("complex-strategy search finds the real equilibrium of case 1") {
  const GameSpec g(OrthoLattice(3), ObservableFrame::fixed_xyz(),
                   ObservableFrame::fixed_xyz(),
                   PayoffMatrix::table({7, 7, 0, 1, 1, 0}));
  const auto eqs = find_nash_complex(g, 1e-6);
  REQUIRE_FALSE(eqs.empty());
  bool found = false;
  for (const ComplexEquilibrium& e : eqs) {
    if (circ_dist_pi(e.alice.alpha(), kPi / 8) <= 1e-5 &&
        circ_dist_pi(e.bob.alpha(), kPi / 8) <= 1e-5 &&
        std::abs(e.value - 2.0) <= 1e-6)
      found = true;
    REQUIRE(e.max_improvement <= 1e-6);
  }
  REQUIRE(found);
}
