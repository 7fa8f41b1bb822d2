#pragma once

// Best-response reaction curves and Nash (saddle-point) search for the
// zero-sum angle game: Alice maximizes the expected payoff over α, Bob
// minimizes over β. Strategies live on [0, π), where the payoff surface
// is periodic in both angles, so the domain is a torus and every
// equilibrium is interior.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <functional>
#include <memory>
#include <vector>

#include "qgame/linalg.hpp"
#include "qgame/payoff.hpp"
#include "qgame/strategy.hpp"

namespace qgame {

using AnglePayoff = std::function<double(double, double)>;

/// Any callable payoff surface f(alpha, beta) -> double.
template <typename F>
concept PayoffSurface = std::invocable<F&, double, double> &&
    std::convertible_to<std::invoke_result_t<F&, double, double>, double>;

inline double wrap_pi(double a) {
  a = std::fmod(a, kPi);
  if (a < 0.0) a += kPi;
  return a;
}

/// Circular distance on the period-π strategy circle.
inline double circ_dist_pi(double a, double b) {
  double d = std::fabs(wrap_pi(a) - wrap_pi(b));
  return std::min(d, kPi - d);
}

/// Signed difference a - b wrapped into [-π/2, π/2).
inline double circ_diff_pi(double a, double b) {
  double d = std::fmod(a - b + kPi / 2.0, kPi);
  if (d < 0.0) d += kPi;
  return d - kPi / 2.0;
}

struct BestResponseOptions {
  double grid_step = 1e-3;
  double tie_tol = 1e-9;      // optima within this of the best are all kept
  double refine_tol = 1e-10;  // golden-section interval width
};

namespace detail {

/// Golden-section maximization of f on [lo, hi] down to interval `tol`.
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

struct ScanResult {
  std::vector<double> arguments;  // wrapped into [0, π), ascending
  double best_value = 0.0;
  bool degenerate = false;  // every grid point tied (flat objective)
};

/// Grid scan over [0, π) followed by golden-section refinement of every
/// global optimizer (up to the tie tolerance). `sign` = +1 maximizes,
/// -1 minimizes.
template <typename F>
ScanResult scan_optima(F&& f, double sign, const BestResponseOptions& opt) {
  const int n = static_cast<int>(std::ceil(kPi / opt.grid_step));
  std::vector<double> vals(n);
  double best = -1e300;
  for (int i = 0; i < n; ++i) {
    vals[i] = sign * f(i * opt.grid_step);
    best = std::max(best, vals[i]);
  }
  double worst = *std::min_element(vals.begin(), vals.end());

  ScanResult out;
  if (best - worst <= opt.tie_tol) {
    out.degenerate = true;
    out.best_value = sign * best;
    out.arguments.resize(n);
    for (int i = 0; i < n; ++i) out.arguments[i] = i * opt.grid_step;
    return out;
  }

  std::vector<std::pair<double, double>> refined;  // (angle, signed value)
  for (int i = 0; i < n; ++i) {
    if (vals[i] < best - opt.tie_tol) continue;
    const double lo = i * opt.grid_step - opt.grid_step;
    const double hi = i * opt.grid_step + opt.grid_step;
    const double x = golden_max([&](double a) { return sign * f(a); }, lo, hi,
                                opt.refine_tol);
    refined.emplace_back(wrap_pi(x), sign * f(x));
  }

  double best_refined = -1e300;
  for (const auto& [x, v] : refined) best_refined = std::max(best_refined, v);
  out.best_value = sign * best_refined;
  for (const auto& [x, v] : refined) {
    if (v < best_refined - opt.tie_tol) continue;
    bool dup = false;
    for (double seen : out.arguments)
      if (circ_dist_pi(seen, x) < 1e-7) dup = true;
    if (!dup) out.arguments.push_back(x);
  }
  std::sort(out.arguments.begin(), out.arguments.end());
  return out;
}

}  // namespace detail

/// All α in [0, π) maximizing f(·, β), refined to the golden-section
/// tolerance. A flat objective returns every grid point.
template <PayoffSurface F>
std::vector<double> best_response_alice(F&& f, double beta,
                                        double grid_step = 1e-3) {
  BestResponseOptions opt;
  opt.grid_step = grid_step;
  return detail::scan_optima([&](double a) { return f(a, beta); }, +1.0, opt)
      .arguments;
}

/// All β in [0, π) minimizing f(α, ·) (zero-sum convention).
template <PayoffSurface F>
std::vector<double> best_response_bob(F&& f, double alpha,
                                      double grid_step = 1e-3) {
  BestResponseOptions opt;
  opt.grid_step = grid_step;
  return detail::scan_optima([&](double b) { return f(alpha, b); }, -1.0, opt)
      .arguments;
}

enum class Player { alice, bob };

struct ReactionSample {
  double opponent_angle = 0.0;
  std::vector<double> best_responses;
  double payoff_at_best = 0.0;
  bool degenerate = false;
};

struct ReactionCurve {
  Player player = Player::alice;
  double grid_step = 0.0;
  std::vector<ReactionSample> samples;
};

template <PayoffSurface F>
std::pair<ReactionCurve, ReactionCurve> reaction_curves(
    F&& f, double grid_step = 1e-3) {
  BestResponseOptions opt;
  opt.grid_step = grid_step;
  const int n = static_cast<int>(std::ceil(kPi / grid_step));

  ReactionCurve alice{Player::alice, grid_step, {}};
  ReactionCurve bob{Player::bob, grid_step, {}};
  alice.samples.resize(n);
  bob.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    const double angle = i * grid_step;
    {
      auto r = detail::scan_optima([&](double a) { return f(a, angle); },
                                   +1.0, opt);
      alice.samples[i] = {angle, std::move(r.arguments), r.best_value,
                          r.degenerate};
    }
    {
      auto r = detail::scan_optima([&](double b) { return f(angle, b); },
                                   -1.0, opt);
      bob.samples[i] = {angle, std::move(r.arguments), r.best_value,
                        r.degenerate};
    }
  }
  return {std::move(alice), std::move(bob)};
}

enum class EquilibriumKind { interior_saddle, boundary };

inline const char* to_string(EquilibriumKind k) {
  return k == EquilibriumKind::interior_saddle ? "interior_saddle"
                                               : "boundary";
}

struct EquilibriumResult {
  double alpha = 0.0;
  double beta = 0.0;
  double value = 0.0;
  EquilibriumKind kind = EquilibriumKind::interior_saddle;
  /// Largest payoff gain any unilateral fine-grid deviation achieves;
  /// <= eps for every reported equilibrium.
  double max_improvement = 0.0;
};

namespace detail {

/// Damped Newton iteration on the payoff gradient, finite differences.
template <typename F>
std::pair<double, double> refine_stationary(F&& f, double a, double b) {
  const double h1 = 1e-5;  // first derivatives
  const double h2 = 1e-4;  // second derivatives
  for (int it = 0; it < 60; ++it) {
    const double ga = (f(a + h1, b) - f(a - h1, b)) / (2 * h1);
    const double gb = (f(a, b + h1) - f(a, b - h1)) / (2 * h1);
    const double faa =
        (f(a + h2, b) - 2 * f(a, b) + f(a - h2, b)) / (h2 * h2);
    const double fbb =
        (f(a, b + h2) - 2 * f(a, b) + f(a, b - h2)) / (h2 * h2);
    const double fab = (f(a + h2, b + h2) - f(a + h2, b - h2) -
                        f(a - h2, b + h2) + f(a - h2, b - h2)) /
                       (4 * h2 * h2);
    const double det = faa * fbb - fab * fab;
    if (std::fabs(det) < 1e-12) break;
    double da = -(fbb * ga - fab * gb) / det;
    double db = -(faa * gb - fab * ga) / det;
    const double norm = std::max(std::fabs(da), std::fabs(db));
    if (norm > 0.2) {  // keep steps local to the candidate basin
      da *= 0.2 / norm;
      db *= 0.2 / norm;
    }
    a += da;
    b += db;
    if (std::max(std::fabs(da), std::fabs(db)) < 1e-11) break;
  }
  return {wrap_pi(a), wrap_pi(b)};
}

/// Best unilateral deviation gain on a fine grid (step 1e-4 rad).
template <typename F>
double certificate_improvement(F&& f, double a, double b) {
  constexpr double step = 1e-4;
  const int n = static_cast<int>(std::ceil(kPi / step));
  const double here = f(a, b);
  double best_alice = -1e300;
  double best_bob = 1e300;
  for (int i = 0; i < n; ++i) {
    const double x = i * step;
    best_alice = std::max(best_alice, f(x, b));
    best_bob = std::min(best_bob, f(a, x));
  }
  return std::max({best_alice - here, here - best_bob, 0.0});
}

}  // namespace detail

/// Nash equilibria of the angle game. Candidates are zero crossings of
/// the composed best-response displacement d(β) = BR_B(BR_A(β)) - β
/// sampled on the opponent grid (robust to steep reaction curves); each
/// candidate is polished by Newton iteration on the gradient and survives
/// only if no unilateral fine-grid deviation improves the deviator by
/// more than eps.
template <PayoffSurface F>
std::vector<EquilibriumResult> find_nash(F&& f, double eps = 1e-6,
                                         double grid_step = 1e-3) {
  BestResponseOptions opt;
  opt.grid_step = grid_step;
  const int n = static_cast<int>(std::ceil(kPi / grid_step));

  struct Probe {
    double beta = 0.0;
    double alpha = 0.0;  // Alice's best response at beta
    double d = 0.0;      // signed displacement of Bob's counter-response
    bool valid = false;
  };
  std::vector<Probe> probes(n);
  for (int j = 0; j < n; ++j) {
    const double beta = j * grid_step;
    probes[j].beta = beta;
    const auto ra = detail::scan_optima(
        [&](double a) { return f(a, beta); }, +1.0, opt);
    if (ra.degenerate) continue;
    double best_abs = 1e300;
    for (double a : ra.arguments) {
      const auto rb = detail::scan_optima(
          [&](double b) { return f(a, b); }, -1.0, opt);
      if (rb.degenerate) continue;
      for (double b : rb.arguments) {
        const double d = circ_diff_pi(b, beta);
        if (std::fabs(d) < best_abs) {
          best_abs = std::fabs(d);
          probes[j] = {beta, a, d, true};
        }
      }
    }
  }

  std::vector<std::pair<double, double>> candidates;
  for (int j = 0; j < n; ++j) {
    if (!probes[j].valid) continue;
    if (std::fabs(probes[j].d) <= 2.0 * grid_step)
      candidates.emplace_back(probes[j].alpha, probes[j].beta);
    const Probe& next = probes[(j + 1) % n];
    if (!next.valid) continue;
    // A localized sign change brackets a fixed point of the composition.
    if (probes[j].d * next.d < 0.0 &&
        std::max(std::fabs(probes[j].d), std::fabs(next.d)) < 0.5) {
      const Probe& seed =
          std::fabs(probes[j].d) <= std::fabs(next.d) ? probes[j] : next;
      candidates.emplace_back(seed.alpha, seed.beta);
    }
  }

  std::vector<EquilibriumResult> out;
  for (auto [a0, b0] : candidates) {
    auto [a, b] = detail::refine_stationary(f, a0, b0);
    bool dup = false;
    for (const EquilibriumResult& e : out)
      if (circ_dist_pi(e.alpha, a) <= 2.0 * grid_step &&
          circ_dist_pi(e.beta, b) <= 2.0 * grid_step)
        dup = true;
    if (dup) continue;
    const double improvement = detail::certificate_improvement(f, a, b);
    if (improvement > eps) continue;
    out.push_back({a, b, f(a, b), EquilibriumKind::interior_saddle,
                   improvement});
  }
  std::sort(out.begin(), out.end(),
            [](const EquilibriumResult& x, const EquilibriumResult& y) {
              return std::tie(x.alpha, x.beta) < std::tie(y.alpha, y.beta);
            });
  return out;
}

/// H(α, β) from reduced coefficients as a search objective.
inline AnglePayoff reduced_game(const ReducedCoefficients& k) {
  return [k](double a, double b) { return reduced_payoff_H(k, a, b); };
}

/// The real-strategy (θ = ω = 0) payoff surface of a game spec. Canonical
/// K=3 table games reduce to H; anything else evaluates the payoff
/// operator directly.
inline AnglePayoff real_strategy_game(const GameSpec& g) {
  if (g.pair_count() == 3 && g.payoff.table_shaped() &&
      g.frame_a.kind() == FrameKind::fixed_xyz &&
      g.frame_b.kind() == FrameKind::fixed_xyz)
    return reduced_game(reduce_coefficients(g.payoff));
  auto op = std::make_shared<const Matrix4>(payoff_operator(g));
  return [op](double a, double b) {
    return expectation(*op, kron(StateVector(a, 0.0), StateVector(b, 0.0)));
  };
}

inline std::vector<EquilibriumResult> find_nash(const GameSpec& g,
                                                double eps = 1e-6,
                                                double grid_step = 1e-3) {
  return find_nash(real_strategy_game(g), eps, grid_step);
}

inline std::pair<ReactionCurve, ReactionCurve> reaction_curves(
    const GameSpec& g, double grid_step = 1e-3) {
  return reaction_curves(real_strategy_game(g), grid_step);
}

// ---------------------------------------------------------------------------
// Experimental: equilibrium search over full complex strategies (α, θ) per
// player. The payoff is bilinear in the two Born profiles, hence linear in
// each player's Bloch vector, so a player's exact best response is the
// top (Alice) or bottom (Bob) eigenvector of a 2x2 Hermitian response
// matrix and the eigenvalue bounds give an exact deviation certificate.
// Plain alternation can oscillate around a saddle, so the iteration is
// damped in Bloch space.

struct ComplexEquilibrium {
  StateVector alice;
  StateVector bob;
  double value = 0.0;
  double max_improvement = 0.0;
};

namespace detail {

struct Bloch {
  double x = 0.0, y = 0.0, z = 1.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Bloch normalized() const {
    const double n = norm();
    if (n < 1e-300) return {0.0, 0.0, 1.0};
    return {x / n, y / n, z / n};
  }
};

inline Bloch state_to_bloch(const StateVector& s) {
  const double s2a = std::sin(2.0 * s.alpha());
  return {s2a * std::cos(s.theta()), s2a * std::sin(s.theta()),
          std::cos(2.0 * s.alpha())};
}

inline StateVector bloch_to_state(const Bloch& n) {
  const Bloch u = n.normalized();
  const double alpha = 0.5 * std::acos(std::clamp(u.z, -1.0, 1.0));
  const double theta =
      (u.x * u.x + u.y * u.y) > 1e-28 ? std::atan2(u.y, u.x) : 0.0;
  return StateVector(alpha, theta);
}

/// Response operator M with E = <φ|M|φ> for the given opponent profile,
/// split as M = offset * I + r · σ.
struct ResponseField {
  double offset = 0.0;
  Bloch r{0.0, 0.0, 0.0};
};

inline ResponseField response_field(const PayoffMatrix& v,
                                    const ObservableFrame& own_frame,
                                    const BornProfile& opponent,
                                    bool for_alice) {
  Matrix2 m;
  for (int i = 1; i <= v.atom_count(); ++i) {
    double w = 0.0;
    for (int j = 1; j <= v.atom_count(); ++j)
      w += for_alice ? v.at(i, j) * opponent.at(j)
                     : v.at(j, i) * opponent.at(j);
    if (w != 0.0) m = m + w * own_frame.projector(i);
  }
  ResponseField f;
  f.offset = 0.5 * (m(0, 0).real() + m(1, 1).real());
  f.r = {m(0, 1).real(), -m(0, 1).imag(),
         0.5 * (m(0, 0).real() - m(1, 1).real())};
  return f;
}

}  // namespace detail

/// Damped alternating best responses from a grid of starting strategies;
/// converged pairs are deduplicated and kept when neither player's
/// eigenvalue-exact deviation gain exceeds eps.
inline std::vector<ComplexEquilibrium> find_nash_complex(const GameSpec& g,
                                                         double eps = 1e-6,
                                                         int grid_starts = 4) {
  using detail::Bloch;
  std::vector<ComplexEquilibrium> out;
  constexpr double damping = 0.15;

  for (int iz = 0; iz < grid_starts; ++iz)
    for (int ip = 0; ip < grid_starts; ++ip) {
      Bloch nb = detail::state_to_bloch(
          StateVector((iz + 0.5) * kPi / (2.0 * grid_starts),
                      ip * kTwoPi / grid_starts));
      Bloch na{0.0, 0.0, 1.0};
      bool converged = false;
      for (int iter = 0; iter < 5000; ++iter) {
        const BornProfile pb =
            born_profile(g.frame_b, detail::bloch_to_state(nb));
        const auto fa = detail::response_field(g.payoff, g.frame_a, pb, true);
        Bloch na_next = na;
        if (fa.r.norm() > 1e-13) {
          const Bloch target = fa.r.normalized();
          na_next = Bloch{(1 - damping) * na.x + damping * target.x,
                          (1 - damping) * na.y + damping * target.y,
                          (1 - damping) * na.z + damping * target.z}
                        .normalized();
        }
        const BornProfile pa =
            born_profile(g.frame_a, detail::bloch_to_state(na_next));
        const auto fb = detail::response_field(g.payoff, g.frame_b, pa, false);
        Bloch nb_next = nb;
        if (fb.r.norm() > 1e-13) {
          const Bloch target = fb.r.normalized();  // Bob descends
          nb_next = Bloch{(1 - damping) * nb.x - damping * target.x,
                          (1 - damping) * nb.y - damping * target.y,
                          (1 - damping) * nb.z - damping * target.z}
                        .normalized();
        }
        const double delta = std::max(
            {std::fabs(na_next.x - na.x), std::fabs(na_next.y - na.y),
             std::fabs(na_next.z - na.z), std::fabs(nb_next.x - nb.x),
             std::fabs(nb_next.y - nb.y), std::fabs(nb_next.z - nb.z)});
        na = na_next;
        nb = nb_next;
        if (delta < 1e-13 && iter > 1) {
          converged = true;
          break;
        }
      }
      if (!converged) continue;

      const StateVector alice = detail::bloch_to_state(na);
      const StateVector bob = detail::bloch_to_state(nb);
      const BornProfile pa = born_profile(g.frame_a, alice);
      const BornProfile pb = born_profile(g.frame_b, bob);
      double value = 0.0;
      for (int i = 1; i <= g.payoff.atom_count(); ++i)
        for (int j = 1; j <= g.payoff.atom_count(); ++j)
          value += g.payoff.at(i, j) * pa.at(i) * pb.at(j);
      const auto fa = detail::response_field(g.payoff, g.frame_a, pb, true);
      const auto fb = detail::response_field(g.payoff, g.frame_b, pa, false);
      const double alice_best = fa.offset + fa.r.norm();  // λ_max
      const double bob_best = fb.offset - fb.r.norm();    // λ_min
      const double improvement =
          std::max({alice_best - value, value - bob_best, 0.0});
      if (improvement > eps) continue;

      bool dup = false;
      for (const ComplexEquilibrium& e : out) {
        const Bloch qa = detail::state_to_bloch(e.alice);
        const Bloch qb = detail::state_to_bloch(e.bob);
        const double d = std::max(
            {std::fabs(qa.x - na.x), std::fabs(qa.y - na.y),
             std::fabs(qa.z - na.z), std::fabs(qb.x - nb.x),
             std::fabs(qb.y - nb.y), std::fabs(qb.z - nb.z)});
        if (d < 1e-6) dup = true;
      }
      if (!dup) out.push_back({alice, bob, value, improvement});
    }
  return out;
}

}  // namespace qgame
