#pragma once

// Height-3 orthocomplemented lattices ("Chinese lantern" MO_K): bottom O,
// 2K atoms, top I, with the orthocomplement pairing atom a <-> a+K.
// Distinct atoms meet to O and join to I, which is what breaks
// distributivity for K >= 2.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgame {

enum class ElementKind { bottom, atom, top };

struct LatticeElement {
  ElementKind kind = ElementKind::bottom;
  int atom = 0;  // 1..2K when kind == atom, 0 otherwise

  static constexpr LatticeElement bottom() {
    return {ElementKind::bottom, 0};
  }
  static constexpr LatticeElement top() { return {ElementKind::top, 0}; }
  static constexpr LatticeElement make_atom(int index) {
    return {ElementKind::atom, index};
  }

  bool is_atom() const { return kind == ElementKind::atom; }

  friend bool operator==(const LatticeElement&, const LatticeElement&) =
      default;

  /// "O", "I", or the atom index as text.
  std::string label() const {
    switch (kind) {
      case ElementKind::bottom: return "O";
      case ElementKind::top: return "I";
      default: return std::to_string(atom);
    }
  }
};

/// The four-element distributive sublattice {O, a, a', I} of one
/// complement pair; hosts one classical measurement subgame.
struct BooleanBlock {
  int pair = 0;  // 1..K
  std::array<LatticeElement, 4> elements{};  // O, a, a', I
};

class OrthoLattice {
 public:
  explicit OrthoLattice(int pair_count) : pairs_(pair_count) {
    if (pair_count < 2)
      throw std::domain_error(
          "OrthoLattice: need at least 2 complement pairs (a single pair is "
          "Boolean)");
  }

  int pair_count() const { return pairs_; }
  int atom_count() const { return 2 * pairs_; }

  /// O, atoms 1..2K, I — in that order.
  std::vector<LatticeElement> elements() const {
    std::vector<LatticeElement> out;
    out.reserve(atom_count() + 2);
    out.push_back(LatticeElement::bottom());
    for (int a = 1; a <= atom_count(); ++a)
      out.push_back(LatticeElement::make_atom(a));
    out.push_back(LatticeElement::top());
    return out;
  }

  bool contains(LatticeElement x) const {
    if (x.kind != ElementKind::atom) return true;
    return x.atom >= 1 && x.atom <= atom_count();
  }

  /// Complementary atom: a <-> a+K (mod 2K, in 1..2K).
  int complement_atom(int a) const {
    require_atom_index(a);
    return a <= pairs_ ? a + pairs_ : a - pairs_;
  }

  /// Pair index 1..K owning atom a.
  int pair_of(int a) const {
    require_atom_index(a);
    return a <= pairs_ ? a : a - pairs_;
  }

  bool leq(LatticeElement x, LatticeElement y) const {
    require_member(x);
    require_member(y);
    if (x.kind == ElementKind::bottom || y.kind == ElementKind::top)
      return true;
    return x == y;
  }

  LatticeElement meet(LatticeElement x, LatticeElement y) const {
    require_member(x);
    require_member(y);
    if (leq(x, y)) return x;
    if (leq(y, x)) return y;
    return LatticeElement::bottom();  // distinct atoms
  }

  LatticeElement join(LatticeElement x, LatticeElement y) const {
    require_member(x);
    require_member(y);
    if (leq(x, y)) return y;
    if (leq(y, x)) return x;
    return LatticeElement::top();  // distinct atoms
  }

  LatticeElement orthocomplement(LatticeElement x) const {
    require_member(x);
    switch (x.kind) {
      case ElementKind::bottom: return LatticeElement::top();
      case ElementKind::top: return LatticeElement::bottom();
      default:
        return LatticeElement::make_atom(complement_atom(x.atom));
    }
  }

  /// All triples with x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z), by exhaustive
  /// enumeration over the (2K+2)^3 element triples.
  std::vector<std::array<LatticeElement, 3>> distributivity_violations()
      const {
    std::vector<std::array<LatticeElement, 3>> out;
    const std::vector<LatticeElement> all = elements();
    for (LatticeElement x : all)
      for (LatticeElement y : all)
        for (LatticeElement z : all) {
          const LatticeElement lhs = meet(x, join(y, z));
          const LatticeElement rhs = join(meet(x, y), meet(x, z));
          if (!(lhs == rhs)) out.push_back({x, y, z});
        }
    return out;
  }

  /// Violations among triples drawn from a restricted element subset.
  std::vector<std::array<LatticeElement, 3>> distributivity_violations(
      const std::vector<LatticeElement>& subset) const {
    std::vector<std::array<LatticeElement, 3>> out;
    for (LatticeElement x : subset)
      for (LatticeElement y : subset)
        for (LatticeElement z : subset) {
          const LatticeElement lhs = meet(x, join(y, z));
          const LatticeElement rhs = join(meet(x, y), meet(x, z));
          if (!(lhs == rhs)) out.push_back({x, y, z});
        }
    return out;
  }

  /// One block {O, k, k+K, I} per complement pair.
  std::vector<BooleanBlock> boolean_blocks() const {
    std::vector<BooleanBlock> out;
    out.reserve(pairs_);
    for (int k = 1; k <= pairs_; ++k) {
      BooleanBlock b;
      b.pair = k;
      b.elements = {LatticeElement::bottom(), LatticeElement::make_atom(k),
                    LatticeElement::make_atom(k + pairs_),
                    LatticeElement::top()};
      out.push_back(b);
    }
    return out;
  }

 private:
  void require_atom_index(int a) const {
    if (a < 1 || a > atom_count())
      throw std::domain_error("OrthoLattice: atom index " +
                              std::to_string(a) + " out of range 1.." +
                              std::to_string(atom_count()));
  }
  void require_member(LatticeElement x) const {
    if (!contains(x))
      throw std::domain_error("OrthoLattice: element " + x.label() +
                              " is not in the lattice");
  }

  int pairs_;
};

inline OrthoLattice build_lattice(int pair_count) {
  return OrthoLattice(pair_count);
}

}  // namespace qgame
