#pragma once

// Exact integer matrix algebra: Smith normal form, finitely generated
// abelian groups with canonical coordinates, subgroup membership, torsion
// tests, and Hilbert bases of linear Diophantine systems with congruences.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "potions/errors.hpp"
#include "potions/numeric.hpp"

namespace potions {

// u * a * v = diag(d) with u, v unimodular and d[i] ≥ 0, each nonzero d[i]
// dividing d[i+1]. d has length min(rows, cols).
struct SmithDecomposition {
  std::vector<Int> d;
  IntMat u;
  IntMat v;

  IntMat diagonal(Index rows, Index cols) const;
};

SmithDecomposition snf(const IntMat& a);

// Exact determinant (Bareiss elimination).
Int det(const IntMat& a);

Index rank(const IntMat& a);

// Basis of {v in Z^cols : a v = 0}, sign-normalized and lex-sorted.
std::vector<IntVec> kernel_lattice(const IntMat& a);

// One integer solution of a x = b, the SNF-canonical one (free components
// zero), or nullopt when none exists.
std::optional<IntVec> solve_integer(const IntMat& a, const IntVec& b);

// Element of an FgAbelianGroup, stored in canonical coordinates: free
// coordinates exact, torsion coordinates reduced modulo their factor.
struct GroupElement {
  IntVec coords;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return vec_eq(a.coords, b.coords);
  }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) {
    return !(a == b);
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return lex_less(a.coords, b.coords);
  }
  bool is_zero() const { return vec_is_zero(coords); }
};

// A finitely generated abelian group presented by ngen generators and a
// relation lattice (columns of an integer matrix). The cached canonical
// form maps presentation coordinates to a product of Z- and Z/m-factors.
class FgAbelianGroup {
 public:
  FgAbelianGroup() : ngen_(0), relations_(0, 0), transform_(0, 0), moduli_(0) {}

  static FgAbelianGroup from_relations(Index ngen, const IntMat& relations);

  // Z^rank ⊕ Z/m_1 ⊕ ... ⊕ Z/m_s with the identity coordinate transform, so
  // canonical coordinates agree with the presentation ones.
  static FgAbelianGroup free_and_torsion(Index rank,
                                         const std::vector<Int>& torsion);

  Index ngen() const { return ngen_; }
  Index free_rank() const;
  // Nontrivial invariant factors d_1 | d_2 | ... (each > 1).
  std::vector<Int> invariant_factors() const;
  // Per canonical coordinate: 0 = free, otherwise the modulus (1 = dead).
  const IntVec& moduli() const { return moduli_; }
  const IntMat& relations() const { return relations_; }
  bool is_trivial() const;

  GroupElement element(const IntVec& presentation_coords) const;
  GroupElement zero() const;
  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement sub(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  GroupElement scale(const Int& n, const GroupElement& a) const;

  // Coefficients c with sum c_i gens_i = x, or nullopt when x is outside the
  // generated subgroup.
  std::optional<IntVec> subgroup_membership(
      const GroupElement& x, std::span<const GroupElement> gens) const;

  // True iff the quotient by <gens> is torsion (every element has a positive
  // multiple inside the subgroup).
  bool is_torsion_quotient(std::span<const GroupElement> gens) const;

  // Least n > 0 with n x in <gens>, together with witnessing coefficients.
  std::optional<std::pair<Int, IntVec>> minimal_positive_multiple(
      const GroupElement& x, std::span<const GroupElement> gens) const;

  // Invariant factors of the quotient by <gens>: nontrivial torsion factors
  // in divisibility order followed by one 0 per free summand.
  std::vector<Int> quotient_invariants(std::span<const GroupElement> gens) const;

  friend bool operator==(const FgAbelianGroup& a, const FgAbelianGroup& b);

 private:
  GroupElement reduce(IntVec canonical) const;
  // Columns spanning the canonical relation lattice plus the given
  // generators; used for quotient computations.
  IntMat augmented_columns(std::span<const GroupElement> gens) const;

  Index ngen_;
  IntMat relations_;  // presentation relation columns
  IntMat transform_;  // canonical = transform * presentation
  IntVec moduli_;     // length ngen
};

// Homogeneous linear Diophantine system over N^nvars: rows with a modulus
// are congruences, rows without are exact equations.
struct DiophantineSystem {
  IntMat eq;  // rows x nvars
  std::vector<std::optional<Int>> moduli;
  Index nvars = 0;

  void validate() const;
};

// Unique minimal generating set (under componentwise ≤) of the solution
// monoid, canonically lex-sorted. Contejean–Devie completion.
std::vector<IntVec> hilbert_basis(const DiophantineSystem& sys);

}  // namespace potions
