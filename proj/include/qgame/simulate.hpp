#pragma once

// Monte Carlo simulation of the two-stage protocol.
//
// Preparation stage: each round the ball owner places the ball at one atom
// (complement pair chosen uniformly, vertex within the pair by the Born
// conditional) and the asker questions a uniformly random atom q. The
// answer is "yes" unless the ball sits at the opposite vertex q', in which
// case the non-ambiguous "no" pins the ball and N_{q'} is counted.
// Frequencies over the definite rounds estimate the Born profile.
//
// Measurement stage: K classical subgames, one per complement pair; both
// players draw inside the pair with their (prepared) frequencies and the
// table payoff v[i][j] is paid to Alice. The pooled per-round mean summed
// over subgames estimates E_A.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qgame/payoff.hpp"
#include "qgame/rng.hpp"
#include "qgame/strategy.hpp"

namespace qgame {

struct PreparationConfig {
  ObservableFrame frame;
  StateVector state;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // substream id (players use distinct streams)
  int workers = 1;
};

struct FrequencyEstimate {
  int pairs = 0;
  std::vector<std::uint64_t> counts;  // N_a, index atom-1
  std::uint64_t rounds = 0;
  std::uint64_t definite_rounds = 0;   // rounds answered "no"
  std::uint64_t same_pair_rounds = 0;  // question landed in the ball's pair
  /// ω̂_a = N_a / (N_a + N_a'); empty when the pair saw no definite round.
  std::vector<std::optional<double>> omega_hat;
  std::vector<std::optional<double>> std_error;

  std::uint64_t pair_total(int pair) const {
    return counts[pair - 1] + counts[pair - 1 + pairs];
  }
  bool complete() const {
    for (const auto& w : omega_hat)
      if (!w.has_value()) return false;
    return true;
  }
};

namespace detail {

struct PrepCounts {
  std::vector<std::uint64_t> n;
  std::uint64_t definite = 0;
  std::uint64_t same_pair = 0;
};

/// Per-round draw slots; stride leaves room without overlapping rounds.
inline constexpr std::uint64_t kDrawStride = 4;

inline void prep_worker(const std::vector<double>& p, int pairs,
                        std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t first, std::uint64_t last,
                        PrepCounts& out) {
  const int atoms = 2 * pairs;
  out.n.assign(atoms, 0);
  for (std::uint64_t r = first; r < last; ++r) {
    const std::uint64_t base = r * kDrawStride;
    const double u_pair = counter_unit(seed, stream, base + 0);
    int pair = static_cast<int>(u_pair * pairs);
    if (pair >= pairs) pair = pairs - 1;
    const double u_vertex = counter_unit(seed, stream, base + 1);
    const int ball = u_vertex < p[pair] ? pair : pair + pairs;  // 0-based
    const double u_q = counter_unit(seed, stream, base + 2);
    int q = static_cast<int>(u_q * atoms);
    if (q >= atoms) q = atoms - 1;
    if (q % pairs == pair) ++out.same_pair;
    if (ball == (q + pairs) % atoms) {  // ball at the opposite vertex: "no"
      ++out.n[ball];
      ++out.definite;
    }
  }
}

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> partition(
    std::uint64_t rounds, int workers) {
  if (workers < 1) throw std::domain_error("workers must be >= 1");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
  const std::uint64_t w = static_cast<std::uint64_t>(workers);
  for (std::uint64_t i = 0; i < w; ++i)
    spans.emplace_back(rounds * i / w, rounds * (i + 1) / w);
  return spans;
}

}  // namespace detail

inline FrequencyEstimate simulate_preparation(const PreparationConfig& cfg) {
  if (cfg.rounds < 1)
    throw std::domain_error("simulate_preparation: rounds must be >= 1");
  const int pairs = cfg.frame.pair_count();
  const int atoms = 2 * pairs;
  const BornProfile profile = born_profile(cfg.frame, cfg.state);

  const auto spans = detail::partition(cfg.rounds, cfg.workers);
  std::vector<detail::PrepCounts> locals(spans.size());
  if (spans.size() == 1) {
    detail::prep_worker(profile.p, pairs, cfg.seed, cfg.stream,
                        spans[0].first, spans[0].second, locals[0]);
  } else {
    std::vector<std::thread> threads;
    for (size_t i = 0; i < spans.size(); ++i)
      threads.emplace_back(detail::prep_worker, std::cref(profile.p), pairs,
                           cfg.seed, cfg.stream, spans[i].first,
                           spans[i].second, std::ref(locals[i]));
    for (std::thread& t : threads) t.join();
  }

  FrequencyEstimate est;
  est.pairs = pairs;
  est.rounds = cfg.rounds;
  est.counts.assign(atoms, 0);
  for (const detail::PrepCounts& lc : locals) {
    for (int a = 0; a < atoms; ++a) est.counts[a] += lc.n[a];
    est.definite_rounds += lc.definite;
    est.same_pair_rounds += lc.same_pair;
  }
  est.omega_hat.resize(atoms);
  est.std_error.resize(atoms);
  for (int a = 0; a < atoms; ++a) {
    const int mate = (a + pairs) % atoms;
    const std::uint64_t total = est.counts[a] + est.counts[mate];
    if (total == 0) continue;
    const double w =
        static_cast<double>(est.counts[a]) / static_cast<double>(total);
    est.omega_hat[a] = w;
    est.std_error[a] = std::sqrt(w * (1.0 - w) / static_cast<double>(total));
  }
  return est;
}

struct SubgameStats {
  int pair = 0;
  std::uint64_t rounds = 0;
  // joint outcome counts inside the pair (Alice's atom, Bob's atom)
  std::uint64_t count_k_kp = 0;   // (k, k'): pays v[k][k']
  std::uint64_t count_kp_k = 0;   // (k', k): pays v[k'][k]
  std::uint64_t count_k_k = 0;    // (k, k)
  std::uint64_t count_kp_kp = 0;  // (k', k')
  double mean_payoff = 0.0;       // per round
  double variance = 0.0;
  double std_error = 0.0;
};

struct SimulationReport {
  std::vector<SubgameStats> subgames;
  double pooled_empirical = 0.0;  // Σ_k per-round subgame means
  double theoretical = 0.0;       // E_A from the exact wave functions
  double theoretical_at_freqs = 0.0;  // from the frequencies actually used
  double std_error = 0.0;       // measurement-only (pooled)
  double prep_std_error = 0.0;  // propagated preparation uncertainty
  double total_std_error = 0.0;
  double z_score = 0.0;  // (pooled_empirical - theoretical) / total
  std::uint64_t rounds_per_subgame = 0;
  std::uint64_t seed = 0;
};

namespace detail {

struct MeasCounts {
  std::uint64_t k_kp = 0, kp_k = 0, k_k = 0, kp_kp = 0;
};

inline void meas_worker(double fa, double fb, std::uint64_t seed,
                        std::uint64_t stream, std::uint64_t first,
                        std::uint64_t last, MeasCounts& out) {
  for (std::uint64_t r = first; r < last; ++r) {
    const std::uint64_t base = r * 2;
    const bool alice_primary = counter_unit(seed, stream, base + 0) < fa;
    const bool bob_primary = counter_unit(seed, stream, base + 1) < fb;
    if (alice_primary && !bob_primary)
      ++out.k_kp;
    else if (!alice_primary && bob_primary)
      ++out.kp_k;
    else if (alice_primary)
      ++out.k_k;
    else
      ++out.kp_kp;
  }
}

/// Core of the measurement stage: runs the K frequency-locked subgames
/// with the given per-atom conditional frequencies. `freq_se` (when
/// non-empty) propagates preparation uncertainty into the report.
inline SimulationReport measure_with_frequencies(
    const PayoffMatrix& payoff, const std::vector<double>& freq_a,
    const std::vector<double>& freq_b, const std::vector<double>& freq_se_a,
    const std::vector<double>& freq_se_b, double theoretical_exact,
    std::uint64_t rounds, std::uint64_t seed, int workers) {
  if (!payoff.table_shaped())
    throw std::domain_error(
        "simulate_measurement: requires a table-shaped payoff");
  if (rounds < 1)
    throw std::domain_error("simulate_measurement: rounds must be >= 1");
  const int pairs = payoff.pairs;

  SimulationReport rep;
  rep.rounds_per_subgame = rounds;
  rep.seed = seed;
  rep.theoretical = theoretical_exact;

  double pooled_var = 0.0;
  double prep_var = 0.0;
  for (int k = 1; k <= pairs; ++k) {
    const int kp = k + pairs;
    const double vk = payoff.at(k, kp);
    const double vkp = payoff.at(kp, k);
    const double fa = freq_a[k - 1];
    const double fb = freq_b[k - 1];

    const auto spans = partition(rounds, workers);
    std::vector<MeasCounts> locals(spans.size());
    const std::uint64_t stream = 2 + static_cast<std::uint64_t>(k - 1);
    if (spans.size() == 1) {
      meas_worker(fa, fb, seed, stream, spans[0].first, spans[0].second,
                  locals[0]);
    } else {
      std::vector<std::thread> threads;
      for (size_t i = 0; i < spans.size(); ++i)
        threads.emplace_back(meas_worker, fa, fb, seed, stream,
                             spans[i].first, spans[i].second,
                             std::ref(locals[i]));
      for (std::thread& t : threads) t.join();
    }

    SubgameStats st;
    st.pair = k;
    st.rounds = rounds;
    for (const MeasCounts& lc : locals) {
      st.count_k_kp += lc.k_kp;
      st.count_kp_k += lc.kp_k;
      st.count_k_k += lc.k_k;
      st.count_kp_kp += lc.kp_kp;
    }
    const double n = static_cast<double>(rounds);
    st.mean_payoff =
        (vk * static_cast<double>(st.count_k_kp) +
         vkp * static_cast<double>(st.count_kp_k)) / n;
    const double second_moment =
        (vk * vk * static_cast<double>(st.count_k_kp) +
         vkp * vkp * static_cast<double>(st.count_kp_k)) / n;
    st.variance = std::max(0.0, second_moment - st.mean_payoff * st.mean_payoff);
    st.std_error = std::sqrt(st.variance / n);

    rep.pooled_empirical += st.mean_payoff;
    pooled_var += st.variance / n;

    // Expected pair contribution at the frequencies in use, and its
    // sensitivity to them: C = vk x y' + vkp (1-x)(1-y') with x = fa,
    // y' = 1-fb the chance Bob sits at k'.
    const double x = fa;
    const double yp = 1.0 - fb;
    rep.theoretical_at_freqs += vk * x * yp + vkp * (1.0 - x) * (1.0 - yp);
    if (!freq_se_a.empty()) {
      const double dx = vk * yp - vkp * (1.0 - yp);
      const double dy = vk * x - vkp * (1.0 - x);
      prep_var += dx * dx * freq_se_a[k - 1] * freq_se_a[k - 1] +
                  dy * dy * freq_se_b[k - 1] * freq_se_b[k - 1];
    }
    rep.subgames.push_back(st);
  }

  rep.std_error = std::sqrt(pooled_var);
  rep.prep_std_error = std::sqrt(prep_var);
  rep.total_std_error = std::sqrt(pooled_var + prep_var);
  const double dev = rep.pooled_empirical - rep.theoretical;
  rep.z_score = rep.total_std_error > 0.0 ? dev / rep.total_std_error : 0.0;
  return rep;
}

/// First-atom-of-pair conditional frequencies from a Born profile.
inline std::vector<double> pair_frequencies(const BornProfile& p, int pairs) {
  std::vector<double> f(pairs);
  for (int k = 1; k <= pairs; ++k) f[k - 1] = p.at(k);
  return f;
}

}  // namespace detail

/// Measurement stage with the exact Born frequencies of the two states.
inline SimulationReport simulate_measurement(const GameSpec& g,
                                             const StateVector& phi,
                                             const StateVector& psi,
                                             std::uint64_t rounds_per_subgame,
                                             std::uint64_t seed,
                                             int workers = 1) {
  const BornProfile pa = born_profile(g.frame_a, phi);
  const BornProfile pb = born_profile(g.frame_b, psi);
  return detail::measure_with_frequencies(
      g.payoff, detail::pair_frequencies(pa, g.pair_count()),
      detail::pair_frequencies(pb, g.pair_count()), {}, {},
      expected_payoff_operator(g, phi, psi), rounds_per_subgame, seed,
      workers);
}

struct TwoStageReport {
  FrequencyEstimate alice;
  FrequencyEstimate bob;
  SimulationReport measurement;
};

/// Full protocol: both players' preparation runs, then the measurement
/// subgames locked to the *estimated* frequencies (the report still
/// carries E_A at the exact wave functions for comparison).
inline TwoStageReport run_two_stage(const GameSpec& g, const StateVector& phi,
                                    const StateVector& psi,
                                    std::uint64_t prep_rounds,
                                    std::uint64_t meas_rounds,
                                    std::uint64_t seed, int workers = 1) {
  TwoStageReport rep{
      simulate_preparation(
          {g.frame_a, phi, prep_rounds, seed, /*stream=*/1, workers}),
      simulate_preparation(
          {g.frame_b, psi, prep_rounds, seed, /*stream=*/0, workers}),
      {}};
  for (const FrequencyEstimate* e : {&rep.alice, &rep.bob})
    for (int k = 1; k <= e->pairs; ++k)
      if (e->pair_total(k) == 0)
        throw std::domain_error(
            "run_two_stage: preparation produced no definite rounds for pair " +
            std::to_string(k) + " of " +
            (e == &rep.alice ? std::string("Alice") : std::string("Bob")) +
            "; increase prep rounds");

  const int pairs = g.pair_count();
  std::vector<double> fa(pairs), fb(pairs), sa(pairs), sb(pairs);
  for (int k = 1; k <= pairs; ++k) {
    fa[k - 1] = *rep.alice.omega_hat[k - 1];
    sa[k - 1] = *rep.alice.std_error[k - 1];
    fb[k - 1] = *rep.bob.omega_hat[k - 1];
    sb[k - 1] = *rep.bob.std_error[k - 1];
  }
  rep.measurement = detail::measure_with_frequencies(
      g.payoff, fa, fb, sa, sb, expected_payoff_operator(g, phi, psi),
      meas_rounds, seed, workers);
  return rep;
}

}  // namespace qgame
