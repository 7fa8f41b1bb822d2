#pragma once

// Payoff matrices, the payoff operator P = Σ v_ij A_i ⊗ B_j, Alice's
// expected payoff in operator / closed / reduced form, and the (a,b,c,d)
// coefficient reduction for real strategies.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgame/errors.hpp"
#include "qgame/lattice.hpp"
#include "qgame/linalg.hpp"
#include "qgame/strategy.hpp"

namespace qgame {

/// 2K x 2K matrix of payments to Alice; entry (i, j) pays when Alice's
/// question is atom i and Bob's ball sits at atom j. The canonical game
/// is "table shaped": nonzero only at complementary index pairs (i, i').
struct PayoffMatrix {
  int pairs = 0;
  std::vector<double> entries;  // row-major, (2K)^2

  static PayoffMatrix zeros(int pair_count) {
    if (pair_count < 2)
      throw std::domain_error("PayoffMatrix: need at least 2 pairs");
    PayoffMatrix m;
    m.pairs = pair_count;
    m.entries.assign(static_cast<size_t>(4 * pair_count * pair_count), 0.0);
    return m;
  }

  /// Builds the table-shaped matrix with v[i][i'] = diag[i-1].
  static PayoffMatrix table(const std::vector<double>& diag) {
    if (diag.size() % 2 != 0 || diag.size() < 4)
      throw std::domain_error(
          "PayoffMatrix::table: need an even number (>= 4) of values");
    PayoffMatrix m = zeros(static_cast<int>(diag.size() / 2));
    for (int i = 1; i <= m.atom_count(); ++i) {
      if (!std::isfinite(diag[i - 1]))
        throw std::domain_error("PayoffMatrix::table: non-finite entry");
      m.at(i, m.complement(i)) = diag[i - 1];
    }
    return m;
  }

  static PayoffMatrix full(int pair_count,
                           const std::vector<std::vector<double>>& rows) {
    PayoffMatrix m = zeros(pair_count);
    const size_t n = static_cast<size_t>(m.atom_count());
    if (rows.size() != n)
      throw std::domain_error("PayoffMatrix::full: wrong row count");
    for (size_t r = 0; r < n; ++r) {
      if (rows[r].size() != n)
        throw std::domain_error("PayoffMatrix::full: wrong column count");
      for (size_t c = 0; c < n; ++c) {
        if (!std::isfinite(rows[r][c]))
          throw std::domain_error("PayoffMatrix::full: non-finite entry");
        m.entries[r * n + c] = rows[r][c];
      }
    }
    return m;
  }

  int atom_count() const { return 2 * pairs; }
  int complement(int atom) const {
    return atom <= pairs ? atom + pairs : atom - pairs;
  }

  double& at(int i, int j) {
    return entries[static_cast<size_t>(i - 1) * atom_count() + (j - 1)];
  }
  double at(int i, int j) const {
    return entries[static_cast<size_t>(i - 1) * atom_count() + (j - 1)];
  }

  /// True iff all entries off the complementary positions vanish.
  bool table_shaped() const {
    for (int i = 1; i <= atom_count(); ++i)
      for (int j = 1; j <= atom_count(); ++j)
        if (j != complement(i) && at(i, j) != 0.0) return false;
    return true;
  }

  /// v_i = at(i, i') for i = 1..2K.
  std::vector<double> table_values() const {
    std::vector<double> v(atom_count());
    for (int i = 1; i <= atom_count(); ++i) v[i - 1] = at(i, complement(i));
    return v;
  }
};

/// Coefficients of the real-strategy payoff surface H(α, β):
///   a = v1, b = v4, c = -(v2+v3+v5+v6)/4, d = (v2+v3-v5-v6)/4.
struct ReducedCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

/// Lattice + both players' observable frames + payoff matrix. Zero-sum:
/// Bob's utility is -E_A.
struct GameSpec {
  OrthoLattice lattice;
  ObservableFrame frame_a;
  ObservableFrame frame_b;
  PayoffMatrix payoff;
  std::string units = "currency";

  GameSpec(OrthoLattice lat, ObservableFrame fa, ObservableFrame fb,
           PayoffMatrix pay, std::string unit_label = "currency")
      : lattice(std::move(lat)),
        frame_a(std::move(fa)),
        frame_b(std::move(fb)),
        payoff(std::move(pay)),
        units(std::move(unit_label)) {
    if (frame_a.pair_count() != lattice.pair_count())
      throw SpecError("frame_a",
                      "pair count " + std::to_string(frame_a.pair_count()) +
                          " does not match lattice pairs " +
                          std::to_string(lattice.pair_count()));
    if (frame_b.pair_count() != lattice.pair_count())
      throw SpecError("frame_b",
                      "pair count " + std::to_string(frame_b.pair_count()) +
                          " does not match lattice pairs " +
                          std::to_string(lattice.pair_count()));
    if (payoff.pairs != lattice.pair_count())
      throw SpecError("payoff",
                      "pair count " + std::to_string(payoff.pairs) +
                          " does not match lattice pairs " +
                          std::to_string(lattice.pair_count()));
  }

  int pair_count() const { return lattice.pair_count(); }
};

/// P = Σ_{i,j} v[i][j] A_i ⊗ B_j. Hermitian for real payoffs.
inline Matrix4 payoff_operator(const GameSpec& g) {
  Matrix4 p;
  for (int i = 1; i <= g.payoff.atom_count(); ++i)
    for (int j = 1; j <= g.payoff.atom_count(); ++j) {
      const double v = g.payoff.at(i, j);
      if (v == 0.0) continue;
      p = p + v * tensor(g.frame_a.projector(i), g.frame_b.projector(j));
    }
  return p;
}

/// E_A = <φ ⊗ ψ| P |φ ⊗ ψ>.
inline double expected_payoff_operator(const GameSpec& g,
                                       const StateVector& phi,
                                       const StateVector& psi) {
  return expectation(payoff_operator(g), kron(phi, psi));
}

/// The six-term closed form of E_A for the canonical K=3 game with both
/// players on the fixed_xyz frame. Gated to table-shaped payoffs.
inline double expected_payoff_closed(const PayoffMatrix& payoff, double alpha,
                                     double theta, double beta,
                                     double omega) {
  if (payoff.pairs != 3 || !payoff.table_shaped())
    throw std::domain_error(
        "expected_payoff_closed: requires a table-shaped K=3 payoff (use the "
        "operator form otherwise)");
  const std::vector<double> v = payoff.table_values();
  const std::array<double, 6> pa = born_closed_forms_xyz(alpha, theta);
  const std::array<double, 6> pb = born_closed_forms_xyz(beta, omega);
  double e = 0.0;
  for (int i = 0; i < 6; ++i) e += v[i] * pa[i] * pb[(i + 3) % 6];
  return e;
}

inline ReducedCoefficients reduce_coefficients(const PayoffMatrix& payoff) {
  if (payoff.pairs != 3 || !payoff.table_shaped())
    throw std::domain_error(
        "reduce_coefficients: requires a table-shaped K=3 payoff");
  const std::vector<double> v = payoff.table_values();
  ReducedCoefficients c;
  c.a = v[0];
  c.b = v[3];
  c.c = -(v[1] + v[2] + v[4] + v[5]) / 4.0;
  c.d = (v[1] + v[2] - v[4] - v[5]) / 4.0;
  return c;
}

enum class HConvention {
  /// The c-term enters as -c(1 - sin2α sin2β); this is the form consistent
  /// with expanding E_A at θ = ω = 0 and it reproduces the known
  /// equilibrium values (2 at α=β=π/8 for a,b,c,d = 7,1,-2,1.5).
  expansion_consistent,
  /// +c(1 - sin2α sin2β), kept for reference; gives 0 at the same point.
  as_printed,
};

inline double reduced_payoff_H(
    const ReducedCoefficients& k, double alpha, double beta,
    HConvention convention = HConvention::expansion_consistent) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double s2a = std::sin(2.0 * alpha), s2b = std::sin(2.0 * beta);
  const double csign =
      convention == HConvention::expansion_consistent ? -1.0 : 1.0;
  return k.a * ca * ca * sb * sb + k.b * sa * sa * cb * cb +
         csign * k.c * (1.0 - s2a * s2b) + k.d * (s2a - s2b);
}

}  // namespace qgame
