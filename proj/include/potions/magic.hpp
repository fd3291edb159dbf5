#pragma once

// The canonical comparison of potions along a family extension f -> f union
// g: witnesses b^n ~ a^nu, the localized presentation of A_{(f union g)}
// over A_{(f)}, the embedding chi, and the surjectivity rewriting that makes
// the comparison an isomorphism.

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "potions/potion.hpp"

namespace potions {

// n deg(b) = sum nu_i deg(a_i) for one homogeneous b over the family f.
struct Witness {
  Int n;
  IntVec nu;
};

// f together with every variable dividing one of its elements.
template <typename K>
HomFamily<K> divisor_closure(const GradedRing<K>& r, const HomFamily<K>& f) {
  require(f.all_monomial(), ErrorKind::NonMonomialFamily,
          "divisor closure needs a monomial family");
  std::vector<Polynomial<K>> els;
  for (Index i = 0; i < f.size(); ++i) {
    els.push_back(f.element(i));
    const IntVec& e = f.element(i).monomial_exponents();
    for (Index j = 0; j < e.size(); ++j)
      if (e[j] > 0) els.push_back(r.var(j));
  }
  return HomFamily<K>(r, std::move(els));
}

// The canonical morphism A_{(f)} -> A_{(f union g)}.
template <typename K>
LocFraction<K> chi(const GradedRing<K>& r, const HomFamily<K>& f,
                   const HomFamily<K>& g, const LocFraction<K>& fr) {
  require(fr.family == f, ErrorKind::FamilyMismatch,
          "fraction not over the source family");
  require(fraction_degree(r, fr).is_zero(), ErrorKind::NotDegreeZero,
          "chi acts on the potion");
  return embed_fraction(fr, family_union(r, f, g));
}

// Least n > 0 with n deg(b) in <deg a_i>, with its coefficients.
template <typename K>
Witness find_witness(const GradedRing<K>& r, const HomFamily<K>& f,
                     const Polynomial<K>& b) {
  auto cert = is_relevant(r, f);
  require(cert.relevant, ErrorKind::NotRelevant,
          "witnesses require a relevant family");
  GroupElement db = degree_of(r, b);
  auto found = r.group().minimal_positive_multiple(db, f.degrees());
  if (!found)
    fail(ErrorKind::NoWitness,
         "degree of the element has no positive multiple in the family's "
         "degree group");
  return Witness{found->first, found->second};
}

// b^n a^{nu^-} / a^{nu^+}, the degree-zero fraction inverted by the magic
// localization.
template <typename K>
LocFraction<K> inverted_fraction(const GradedRing<K>& r, const HomFamily<K>& f,
                                 const Polynomial<K>& b, const Witness& w) {
  Polynomial<K> num = b.pow(w.n);
  IntVec pos = IntVec::Zero(f.size());
  for (Index i = 0; i < f.size(); ++i) {
    if (w.nu[i] > 0) pos[i] = w.nu[i];
    if (w.nu[i] < 0) num = num * f.element(i).pow(Int(-w.nu[i]));
  }
  LocFraction<K> fr{std::move(num), std::move(pos), f};
  internal_check(fraction_degree(r, fr).is_zero(),
                 "inverted fraction of nonzero degree");
  return fr;
}

// A_{(f union g)} presented as the localization of A_{(f)} at the inverted
// fractions b_j^{n_j} / a^{nu_j}.
template <typename K>
struct LocalizedPresentation {
  PotionPresentation<K> base;
  std::vector<Witness> witnesses;
  std::vector<LocFraction<K>> inverted;
};

template <typename K>
LocalizedPresentation<K> localized_presentation(const GradedRing<K>& r,
                                                const HomFamily<K>& f,
                                                const HomFamily<K>& g) {
  LocalizedPresentation<K> lp{potion_generators(r, f), {}, {}};
  for (Index j = 0; j < g.size(); ++j) {
    Witness w = find_witness(r, f, g.element(j));
    lp.inverted.push_back(inverted_fraction(r, f, g.element(j), w));
    lp.witnesses.push_back(std::move(w));
  }
  return lp;
}

// Image of a degree-zero fraction under the inverse comparison: a fraction
// over f times the product of the inverted generators to the power -m.
template <typename K>
struct PhiImage {
  LocFraction<K> base;
  Int m;
};

// Rewrites x/(a^theta b^gamma) as
//   [x prod_j b_j^{n_j m - gamma_j} / (a^theta prod_j a^{nu_j m})]
//     * prod_j (a^{nu_j} / b_j^{n_j})^m
// with the least m >= 0 making every exponent nonnegative.
template <typename K>
PhiImage<K> phi_backward(const GradedRing<K>& r, const HomFamily<K>& f,
                         const HomFamily<K>& g,
                         std::span<const Witness> witnesses,
                         const LocFraction<K>& fr) {
  require(fraction_degree(r, fr).is_zero(), ErrorKind::NotDegreeZero,
          "phi acts on the potion");
  require(static_cast<Index>(witnesses.size()) == g.size(),
          ErrorKind::DimensionMismatch, "one witness per element of g");
  HomFamily<K> u = family_union(r, f, g);
  require(fr.family == u, ErrorKind::FamilyMismatch,
          "fraction not over f union g");

  IntVec theta = IntVec::Zero(f.size());
  IntVec gamma = IntVec::Zero(g.size());
  for (Index idx = 0; idx < u.size(); ++idx) {
    if (fr.denom_exps[idx] == 0) continue;
    Index fi = f.find(u.element(idx));
    if (fi >= 0) {
      theta[fi] += fr.denom_exps[idx];
    } else {
      Index gi = g.find(u.element(idx));
      internal_check(gi >= 0, "union element in neither family");
      gamma[gi] += fr.denom_exps[idx];
    }
  }

  Int m = 0;
  for (Index j = 0; j < g.size(); ++j)
    if (gamma[j] > 0)
      m = std::max(m, ceil_div(gamma[j], witnesses[static_cast<size_t>(j)].n));

  Polynomial<K> num = fr.numerator;
  for (Index j = 0; j < g.size(); ++j) {
    Int e = witnesses[static_cast<size_t>(j)].n * m - gamma[j];
    internal_check(e >= 0, "m too small");
    if (e > 0) num = num * g.element(j).pow(e);
  }
  IntVec delta = theta;
  for (Index j = 0; j < g.size(); ++j)
    for (Index i = 0; i < f.size(); ++i)
      delta[i] += m * witnesses[static_cast<size_t>(j)].nu[i];
  for (Index i = 0; i < f.size(); ++i) {
    if (delta[i] < 0) {
      num = num * f.element(i).pow(Int(-delta[i]));
      delta[i] = 0;
    }
  }
  LocFraction<K> base{std::move(num), std::move(delta), f};
  internal_check(fraction_degree(r, base).is_zero(),
                 "phi base of nonzero degree");
  return PhiImage<K>{std::move(base), std::move(m)};
}

// Multiplies the PhiImage back together inside A_{(f union g)}.
template <typename K>
LocFraction<K> recombine(const GradedRing<K>& r, const HomFamily<K>& f,
                         const HomFamily<K>& g,
                         std::span<const Witness> witnesses,
                         const PhiImage<K>& im) {
  HomFamily<K> u = family_union(r, f, g);
  LocFraction<K> out = embed_fraction(im.base, u);
  for (Index j = 0; j < g.size(); ++j) {
    const Witness& w = witnesses[static_cast<size_t>(j)];
    // (a^{nu_j} / b_j^{n_j}) as a fraction over the union.
    Polynomial<K> num = r.constant(1);
    IntVec den = IntVec::Zero(u.size());
    for (Index i = 0; i < f.size(); ++i) {
      if (w.nu[i] > 0) num = num * f.element(i).pow(w.nu[i]);
      if (w.nu[i] < 0) den[u.find(f.element(i))] += -w.nu[i];
    }
    den[u.find(g.element(j))] += w.n;
    LocFraction<K> recip{std::move(num), std::move(den), u};
    out = mul_fractions(out, pow_fraction(recip, im.m));
  }
  return out;
}

struct MagicReport {
  std::vector<Witness> witnesses;
  bool surjective_sample = false;
  bool injective_sample = false;
  bool hom_law = false;
  bool inverted_in_potion = false;

  bool ok() const {
    return surjective_sample && injective_sample && hom_law &&
           inverted_in_potion;
  }
};

// Samples the claims behind the comparison isomorphism
// A_{(f union g)} = A_{(f)}[inverted^{-1}]: every union generator is
// reachable by the rewriting, the embedding chi is an injective ring
// homomorphism on a sample, and the inverted fractions lie in A_{(f)}.
template <typename K>
MagicReport verify_iso(const GradedRing<K>& r, const HomFamily<K>& f,
                       const HomFamily<K>& g, long bound = 12) {
  auto lp = localized_presentation(r, f, g);
  HomFamily<K> u = family_union(r, f, g);
  auto pres_u = potion_generators(r, u);
  MagicReport report;
  report.witnesses = lp.witnesses;

  report.surjective_sample = true;
  for (const auto& gen : pres_u.generators) {
    auto im = phi_backward(r, f, g, lp.witnesses, gen.fraction);
    auto back = recombine(r, f, g, lp.witnesses, im);
    if (!fractions_equal(r, back, gen.fraction))
      report.surjective_sample = false;
  }

  report.inverted_in_potion = true;
  for (const auto& fr : lp.inverted)
    if (!express_in_generators(r, fr, lp.base, bound))
      report.inverted_in_potion = false;

  std::vector<LocFraction<K>> sample{fraction_one(r, f)};
  for (const auto& gen : lp.base.generators) sample.push_back(gen.fraction);
  const size_t ngens = lp.base.generators.size();
  for (size_t i = 0; i < ngens && i < 4; ++i)
    for (size_t j = i; j < ngens && j < 4; ++j)
      sample.push_back(mul_fractions(lp.base.generators[i].fraction,
                                     lp.base.generators[j].fraction));

  report.injective_sample = true;
  report.hom_law = true;
  for (size_t i = 0; i < sample.size(); ++i) {
    for (size_t j = 0; j < sample.size(); ++j) {
      bool eq_src = fractions_equal(r, sample[i], sample[j]);
      bool eq_img = fractions_equal(r, chi(r, f, g, sample[i]),
                                    chi(r, f, g, sample[j]));
      if (eq_src != eq_img) report.injective_sample = false;
      if (j < i) continue;
      auto prod = chi(r, f, g, mul_fractions(sample[i], sample[j]));
      auto prod2 =
          mul_fractions(chi(r, f, g, sample[i]), chi(r, f, g, sample[j]));
      if (!fractions_equal(r, prod, prod2)) report.hom_law = false;
      auto sum = chi(r, f, g, add_fractions(r, sample[i], sample[j]));
      auto sum2 = add_fractions(r, chi(r, f, g, sample[i]),
                                chi(r, f, g, sample[j]));
      if (!fractions_equal(r, sum, sum2)) report.hom_law = false;
    }
  }
  return report;
}

}  // namespace potions
