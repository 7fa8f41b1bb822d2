#pragma once

// Observable frames (projector per lattice atom), Born frequency profiles,
// the spin-projection uncertainty relation in dispersion and frequency
// form, and the interference decomposition of second-observable
// frequencies.

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qgame/linalg.hpp"

namespace qgame {

enum class FrameKind { fixed_xyz, planar };

/// Assignment of a rank-1 projector to every lattice atom, with
/// P_a + P_a' = I and P_a P_a' = 0 across each complement pair.
class ObservableFrame {
 public:
  /// The K=3 frame of the three mutually unbiased spin-1/2 observables:
  ///   pair 1-4: diag(1,0) / diag(0,1)
  ///   pair 2-5: (1/2)[[1,1],[1,1]] / (1/2)[[1,-1],[-1,1]]
  ///   pair 3-6: (1/2)[[1,-i],[i,1]] / (1/2)[[1,i],[-i,1]]
  static ObservableFrame fixed_xyz() {
    const Complex i(0.0, 1.0);
    std::vector<Matrix2> p(6);
    p[0](0, 0) = 1.0;
    p[3](1, 1) = 1.0;
    p[1](0, 0) = 0.5; p[1](0, 1) = 0.5;
    p[1](1, 0) = 0.5; p[1](1, 1) = 0.5;
    p[4](0, 0) = 0.5; p[4](0, 1) = -0.5;
    p[4](1, 0) = -0.5; p[4](1, 1) = 0.5;
    p[2](0, 0) = 0.5; p[2](0, 1) = -0.5 * i;
    p[2](1, 0) = 0.5 * i; p[2](1, 1) = 0.5;
    p[5](0, 0) = 0.5; p[5](0, 1) = 0.5 * i;
    p[5](1, 0) = -0.5 * i; p[5](1, 1) = 0.5;
    return ObservableFrame(FrameKind::fixed_xyz, 3, std::move(p), {});
  }

  /// One real observable per pair: P_k projects onto (cos θ_k, sin θ_k),
  /// P_{k+K} onto the orthogonal direction (-sin θ_k, cos θ_k).
  static ObservableFrame planar(std::vector<double> angles) {
    const int k = static_cast<int>(angles.size());
    if (k < 2)
      throw std::domain_error("ObservableFrame::planar: need >= 2 angles");
    for (double a : angles)
      if (!std::isfinite(a))
        throw std::domain_error("ObservableFrame::planar: non-finite angle");
    std::vector<Matrix2> p(2 * k);
    for (int j = 0; j < k; ++j) {
      const double c = std::cos(angles[j]);
      const double s = std::sin(angles[j]);
      p[j](0, 0) = c * c; p[j](0, 1) = c * s;
      p[j](1, 0) = s * c; p[j](1, 1) = s * s;
      p[j + k](0, 0) = s * s; p[j + k](0, 1) = -s * c;
      p[j + k](1, 0) = -c * s; p[j + k](1, 1) = c * c;
    }
    return ObservableFrame(FrameKind::planar, k, std::move(p),
                           std::move(angles));
  }

  FrameKind kind() const { return kind_; }
  int pair_count() const { return pairs_; }
  int atom_count() const { return 2 * pairs_; }

  const Matrix2& projector(int atom) const {
    if (atom < 1 || atom > atom_count())
      throw std::domain_error("ObservableFrame: atom index out of range");
    return projectors_[atom - 1];
  }

  /// Planar observable angles (empty for fixed_xyz).
  const std::vector<double>& angles() const { return angles_; }

  /// Checks projector and complement-pair identities; throws on failure.
  void validate() const {
    for (int a = 1; a <= atom_count(); ++a)
      if (!is_projector(projector(a), kHermitianTol))
        throw std::domain_error("ObservableFrame: atom " + std::to_string(a) +
                                " is not a projector");
    for (int k = 1; k <= pairs_; ++k) {
      const Matrix2& pa = projector(k);
      const Matrix2& pb = projector(k + pairs_);
      if ((pa + pb - Matrix2::identity()).max_abs() > kAlgebraTol)
        throw std::domain_error("ObservableFrame: pair " + std::to_string(k) +
                                " does not sum to identity");
      if ((pa * pb).max_abs() > kAlgebraTol)
        throw std::domain_error("ObservableFrame: pair " + std::to_string(k) +
                                " is not orthogonal");
    }
  }

 private:
  ObservableFrame(FrameKind kind, int pairs, std::vector<Matrix2> projectors,
                  std::vector<double> angles)
      : kind_(kind),
        pairs_(pairs),
        projectors_(std::move(projectors)),
        angles_(std::move(angles)) {}

  FrameKind kind_;
  int pairs_;
  std::vector<Matrix2> projectors_;
  std::vector<double> angles_;
};

/// Born frequencies p_a = <s|P_a|s>, one per atom, with the source angles.
struct BornProfile {
  std::vector<double> p;  // index atom-1
  double alpha = 0.0;
  double theta = 0.0;

  double at(int atom) const { return p.at(static_cast<size_t>(atom) - 1); }
  int atom_count() const { return static_cast<int>(p.size()); }
};

inline BornProfile born_profile(const ObservableFrame& frame,
                                const StateVector& s) {
  BornProfile out;
  out.alpha = s.alpha();
  out.theta = s.theta();
  out.p.resize(frame.atom_count());
  for (int a = 1; a <= frame.atom_count(); ++a)
    out.p[a - 1] = expectation(frame.projector(a), s);
  return out;
}

/// Closed forms of the fixed_xyz Born frequencies:
///   p1 = cos^2 α           p4 = sin^2 α
///   p2 = (1 + cos θ sin 2α)/2   p5 = (1 - cos θ sin 2α)/2
///   p3 = (1 + sin θ sin 2α)/2   p6 = (1 - sin θ sin 2α)/2
inline std::array<double, 6> born_closed_forms_xyz(double alpha,
                                                   double theta) {
  const double s2a = std::sin(2.0 * alpha);
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  return {ca * ca,
          0.5 * (1.0 + std::cos(theta) * s2a),
          0.5 * (1.0 + std::sin(theta) * s2a),
          sa * sa,
          0.5 * (1.0 - std::cos(theta) * s2a),
          0.5 * (1.0 - std::sin(theta) * s2a)};
}

/// Dispersion/expectation data for the three ±1 pair observables
/// (value +1 on atom k, -1 on atom k+K) and both faces of the
/// uncertainty relation: operator form D1*D2 >= E3^2 and frequency form
/// p1 p4 p2 p5 >= (p3 - p6)^2 / 16.
struct UncertaintyReport {
  double d1 = 0.0;       // D(A1) = sin^2 2α
  double d2 = 0.0;       // D(A2) = 1 - (cos θ sin 2α)^2
  double e3 = 0.0;       // E(A3) = sin θ sin 2α
  double lhs = 0.0;      // d1 * d2
  double rhs = 0.0;      // e3^2
  double freq_lhs = 0.0; // p1 p4 p2 p5
  double freq_rhs = 0.0; // (p3 - p6)^2 / 16
  bool holds = false;    // lhs >= rhs - 1e-12
};

inline UncertaintyReport uncertainty_check(const StateVector& s) {
  UncertaintyReport r;
  const double s2a = std::sin(2.0 * s.alpha());
  const double ct = std::cos(s.theta());
  const double st = std::sin(s.theta());
  r.d1 = s2a * s2a;
  r.d2 = 1.0 - (ct * s2a) * (ct * s2a);
  r.e3 = st * s2a;
  r.lhs = r.d1 * r.d2;
  r.rhs = r.e3 * r.e3;
  const std::array<double, 6> p = born_closed_forms_xyz(s.alpha(), s.theta());
  r.freq_lhs = p[0] * p[3] * p[1] * p[4];
  r.freq_rhs = (p[2] - p[5]) * (p[2] - p[5]) / 16.0;
  r.holds = r.lhs >= r.rhs - kAlgebraTol;
  return r;
}

/// The frequency inequality collapses to sin^2 2α <= 1 after the Born
/// substitutions; returns (sin^2 2α, 1).
inline std::pair<double, double> frequency_inequality_reduction(
    const StateVector& s) {
  const double s2a = std::sin(2.0 * s.alpha());
  return {s2a * s2a, 1.0};
}

/// Decomposition of the second observable's frequencies into a classical
/// mixture of the first observable's frequencies plus an interference
/// cross term:
///   p2 = cos^2(α - θ_a) = cos^2 θ_a p1 + sin^2 θ_a p3 + sin 2θ_a √(p1 p3)
///   p4 = sin^2(α - θ_a) = cos^2 θ_a p3 + sin^2 θ_a p1 - sin 2θ_a √(p1 p3)
/// (pair numbering of the two-observable quadrangle game: 1-3, 2-4).
struct InterferenceReport {
  double alpha = 0.0;
  double obs_angle = 0.0;  // θ_a
  double p1 = 0.0;
  double p3 = 0.0;
  double p2_direct = 0.0;
  std::array<double, 3> p2_terms{};  // mixture term 1, term 2, cross
  double p2_residual = 0.0;
  double p4_direct = 0.0;
  std::array<double, 3> p4_terms{};
  double p4_residual = 0.0;
};

inline InterferenceReport interference_decompose(double alpha,
                                                 double obs_angle) {
  if (!std::isfinite(alpha) || !std::isfinite(obs_angle))
    throw std::domain_error("interference_decompose: angles must be finite");
  // √p1 √p3 = cos α sin α requires a nonnegative product.
  if (alpha < 0.0 || alpha > kPi / 2.0)
    throw std::domain_error(
        "interference_decompose: alpha must lie in [0, pi/2]");
  InterferenceReport r;
  r.alpha = alpha;
  r.obs_angle = obs_angle;
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  r.p1 = ca * ca;
  r.p3 = sa * sa;
  const double c = std::cos(obs_angle);
  const double s = std::sin(obs_angle);
  const double cross = std::sin(2.0 * obs_angle) * std::sqrt(r.p1) *
                       std::sqrt(r.p3);
  const double d2 = std::cos(alpha - obs_angle);
  const double d4 = std::sin(alpha - obs_angle);
  r.p2_direct = d2 * d2;
  r.p2_terms = {c * c * r.p1, s * s * r.p3, cross};
  r.p2_residual = std::abs(r.p2_direct -
                           (r.p2_terms[0] + r.p2_terms[1] + r.p2_terms[2]));
  r.p4_direct = d4 * d4;
  r.p4_terms = {c * c * r.p3, s * s * r.p1, -cross};
  r.p4_residual = std::abs(r.p4_direct -
                           (r.p4_terms[0] + r.p4_terms[1] + r.p4_terms[2]));
  return r;
}

}  // namespace qgame
