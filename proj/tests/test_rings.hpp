#pragma once

// Shared rings used across the test suite.

#include "potions/graded_ring.hpp"

namespace potions::testrings {

inline GradedRing<Rat> p1() {
  auto z = FgAbelianGroup::free_and_torsion(1, {});
  return GradedRing<Rat>(z, {"x0", "x1"},
                         {z.element(make_vec({1})), z.element(make_vec({1}))},
                         Rat(1));
}

inline GradedRing<Rat> p2() {
  auto z = FgAbelianGroup::free_and_torsion(1, {});
  GroupElement one = z.element(make_vec({1}));
  return GradedRing<Rat>(z, {"x0", "x1", "x2"}, {one, one, one}, Rat(1));
}

inline GradedRing<Rat> p3() {
  auto z = FgAbelianGroup::free_and_torsion(1, {});
  GroupElement one = z.element(make_vec({1}));
  return GradedRing<Rat>(z, {"x0", "x1", "x2", "x3"}, {one, one, one, one},
                         Rat(1));
}

// Weighted projective plane P(1,1,2): deg x = deg y = 1, deg z = 2.
inline GradedRing<Rat> p112() {
  auto z = FgAbelianGroup::free_and_torsion(1, {});
  return GradedRing<Rat>(z, {"x", "y", "z"},
                         {z.element(make_vec({1})), z.element(make_vec({1})),
                          z.element(make_vec({2}))},
                         Rat(1));
}

// P1 x P1 with the product grading by Z^2.
inline GradedRing<Rat> p1xp1() {
  auto z2 = FgAbelianGroup::free_and_torsion(2, {});
  GroupElement e1 = z2.element(make_vec({1, 0}));
  GroupElement e2 = z2.element(make_vec({0, 1}));
  return GradedRing<Rat>(z2, {"x0", "x1", "y0", "y1"}, {e1, e1, e2, e2},
                         Rat(1));
}

// k[x] graded by Z/2 with deg x = 1 mod 2.
inline GradedRing<Rat> z2_line() {
  auto g = FgAbelianGroup::free_and_torsion(0, {2});
  return GradedRing<Rat>(g, {"x"}, {g.element(make_vec({1}))}, Rat(1));
}

// One variable of degree 1 over Z; Proj of it is a point.
inline GradedRing<Rat> monoid_line() {
  auto z = FgAbelianGroup::free_and_torsion(1, {});
  return GradedRing<Rat>(z, {"X"}, {z.element(make_vec({1}))}, Rat(1));
}

// k[u, v] with deg u = 2, deg v = 3.
inline GradedRing<Rat> weighted23() {
  auto z = FgAbelianGroup::free_and_torsion(1, {});
  return GradedRing<Rat>(z, {"u", "v"},
                         {z.element(make_vec({2})), z.element(make_vec({3}))},
                         Rat(1));
}

template <typename K>
Polynomial<K> mono(const GradedRing<K>& r, std::initializer_list<long> exps) {
  return Polynomial<K>::monomial(make_vec(exps), r.coeff_one());
}

template <typename K>
HomFamily<K> fam(const GradedRing<K>& r, std::vector<Polynomial<K>> els) {
  return HomFamily<K>(r, std::move(els));
}

}  // namespace potions::testrings
