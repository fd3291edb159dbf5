#pragma once

// Degree-zero localizations: fractions x/a^nu over a homogeneous family, the
// grading of localizations, and potion presentations computed as Hilbert
// bases of the degree-zero exponent monoid.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "potions/graded_ring.hpp"

namespace potions {

// x / prod family[i]^denom_exps[i]. The numerator is homogeneous or zero.
template <typename K>
struct LocFraction {
  Polynomial<K> numerator;
  IntVec denom_exps;
  HomFamily<K> family;
};

template <typename K>
LocFraction<K> make_fraction(const GradedRing<K>& r, Polynomial<K> numerator,
                             IntVec denom_exps, HomFamily<K> family) {
  require(denom_exps.size() == family.size(), ErrorKind::DimensionMismatch,
          "denominator exponent count vs family size");
  for (Index i = 0; i < denom_exps.size(); ++i)
    require(denom_exps[i] >= 0, ErrorKind::Validation,
            "negative denominator exponent");
  require(is_homogeneous(r, numerator), ErrorKind::NotHomogeneous,
          "fraction numerator must be homogeneous");
  return LocFraction<K>{std::move(numerator), std::move(denom_exps),
                        std::move(family)};
}

template <typename K>
LocFraction<K> fraction_one(const GradedRing<K>& r, HomFamily<K> family) {
  IntVec zero = IntVec::Zero(family.size());
  return LocFraction<K>{r.constant(1), std::move(zero), std::move(family)};
}

template <typename K>
Polynomial<K> denominator_poly(const GradedRing<K>& r,
                               const LocFraction<K>& fr) {
  Polynomial<K> d = r.constant(1);
  for (Index i = 0; i < fr.family.size(); ++i)
    if (fr.denom_exps[i] > 0) d = d * fr.family.element(i).pow(fr.denom_exps[i]);
  return d;
}

// deg(x / a^nu) = deg(x) - sum nu_i deg(a_i).
template <typename K>
GroupElement fraction_degree(const GradedRing<K>& r, const LocFraction<K>& fr) {
  GroupElement d = degree_of(r, fr.numerator);
  const FgAbelianGroup& m = r.group();
  for (Index i = 0; i < fr.family.size(); ++i)
    if (fr.denom_exps[i] != 0)
      d = m.sub(d, m.scale(fr.denom_exps[i], fr.family.degree(i)));
  return d;
}

template <typename K>
void check_same_family(const LocFraction<K>& a, const LocFraction<K>& b) {
  require(a.family == b.family, ErrorKind::FamilyMismatch,
          "fractions over different families");
}

// Equality in the localization; the ambient ring is a domain, so this is
// cross-multiplication of numerators against denominators.
template <typename K>
bool fractions_equal(const GradedRing<K>& r, const LocFraction<K>& a,
                     const LocFraction<K>& b) {
  check_same_family(a, b);
  return a.numerator * denominator_poly(r, b) ==
         b.numerator * denominator_poly(r, a);
}

template <typename K>
LocFraction<K> mul_fractions(const LocFraction<K>& a, const LocFraction<K>& b) {
  check_same_family(a, b);
  return LocFraction<K>{a.numerator * b.numerator,
                        IntVec(a.denom_exps + b.denom_exps), a.family};
}

template <typename K>
LocFraction<K> add_fractions(const GradedRing<K>& r, const LocFraction<K>& a,
                             const LocFraction<K>& b) {
  check_same_family(a, b);
  Polynomial<K> num = a.numerator * denominator_poly(r, b) +
                      b.numerator * denominator_poly(r, a);
  return LocFraction<K>{std::move(num), IntVec(a.denom_exps + b.denom_exps),
                        a.family};
}

template <typename K>
LocFraction<K> pow_fraction(const LocFraction<K>& a, const Int& n) {
  require(n >= 0, ErrorKind::Validation, "negative fraction power");
  return LocFraction<K>{a.numerator.pow(n), IntVec(a.denom_exps * n), a.family};
}

// Rewrites fr over a larger family containing every element of fr.family;
// the canonical potion morphism chi is the special case target = f union g.
template <typename K>
LocFraction<K> embed_fraction(const LocFraction<K>& fr,
                              const HomFamily<K>& target) {
  IntVec exps = IntVec::Zero(target.size());
  for (Index i = 0; i < fr.family.size(); ++i) {
    if (fr.denom_exps[i] == 0) continue;
    Index j = target.find(fr.family.element(i));
    require(j >= 0, ErrorKind::FamilyMismatch,
            "target family does not contain the fraction's family");
    exps[j] += fr.denom_exps[i];
  }
  return LocFraction<K>{fr.numerator, std::move(exps), target};
}

template <typename K>
std::string fraction_to_string(const GradedRing<K>& r,
                               const LocFraction<K>& fr) {
  const auto& names = r.var_names();
  bool have_denom = false;
  for (Index i = 0; i < fr.denom_exps.size(); ++i)
    if (fr.denom_exps[i] > 0) have_denom = true;
  std::string num = fr.numerator.to_string(names);
  if (!have_denom) return num;
  if (fr.numerator.terms().size() > 1) num = "(" + num + ")";
  std::string den;
  int factors = 0;
  for (Index i = 0; i < fr.family.size(); ++i) {
    if (fr.denom_exps[i] == 0) continue;
    std::string el = fr.family.element(i).to_string(names);
    if (fr.family.element(i).terms().size() > 1) el = "(" + el + ")";
    if (!den.empty()) den += "*";
    den += el;
    if (fr.denom_exps[i] != 1) den += "^" + fr.denom_exps[i].get_str();
    ++factors;
  }
  if (factors > 1) den = "(" + den + ")";
  return num + "/" + den;
}

// One generator of a potion: the fraction x^mu / a^nu with its exponent
// datum. Negative nu_i puts a_i^{-nu_i} into the numerator.
template <typename K>
struct PotionGenerator {
  IntVec mu;  // over the ring variables, entries >= 0
  IntVec nu;  // over the family, entries in Z
  LocFraction<K> fraction;
};

template <typename K>
struct PotionPresentation {
  HomFamily<K> family;
  std::vector<PotionGenerator<K>> generators;
  // Z-basis of the kernel of the (mu, nu) exponent matrix; each vector is a
  // multiplicative relation among the generators.
  std::vector<IntVec> relation_lattice;
};

namespace detail {

// Total exponent vectors of a monomial fraction, reduced by their common
// monomial gcd; the dedupe key for generators.
template <typename K>
std::pair<IntVec, IntVec> reduced_exponents(const GradedRing<K>& r,
                                            const LocFraction<K>& fr) {
  IntVec num = fr.numerator.monomial_exponents();
  IntVec den = IntVec::Zero(r.nvars());
  for (Index i = 0; i < fr.family.size(); ++i)
    if (fr.denom_exps[i] > 0)
      den += fr.denom_exps[i] * fr.family.element(i).monomial_exponents();
  for (Index j = 0; j < r.nvars(); ++j) {
    Int common = std::min(num[j], den[j]);
    num[j] -= common;
    den[j] -= common;
  }
  return {std::move(num), std::move(den)};
}

struct PairLexLess {
  bool operator()(const std::pair<IntVec, IntVec>& a,
                  const std::pair<IntVec, IntVec>& b) const {
    if (lex_less(a.first, b.first)) return true;
    if (lex_less(b.first, a.first)) return false;
    return lex_less(a.second, b.second);
  }
};

// The canonical fraction of an exponent datum: x^mu a^{nu^-} / a^{nu^+}.
template <typename K>
LocFraction<K> datum_fraction(const GradedRing<K>& r, const HomFamily<K>& f,
                              const IntVec& mu, const IntVec& nu) {
  Polynomial<K> num = Polynomial<K>::monomial(mu, r.coeff_one());
  IntVec pos = IntVec::Zero(f.size());
  for (Index i = 0; i < f.size(); ++i) {
    if (nu[i] > 0) pos[i] = nu[i];
    if (nu[i] < 0) num = num * f.element(i).pow(-nu[i]);
  }
  return LocFraction<K>{std::move(num), std::move(pos), f};
}

}  // namespace detail

// The degree-zero membership conditions deg(x^mu) = sum nu_i deg(a_i) as a
// Diophantine system over (mu, nu^+, nu^-); free canonical coordinates give
// exact rows, torsion coordinates give congruence rows.
template <typename K>
DiophantineSystem degree_zero_system(const GradedRing<K>& r,
                                     const HomFamily<K>& f) {
  const FgAbelianGroup& m = r.group();
  const Index n = r.nvars(), s = f.size();
  std::vector<Index> live_rows;
  for (Index c = 0; c < m.ngen(); ++c)
    if (m.moduli()[c] != 1) live_rows.push_back(c);

  DiophantineSystem sys;
  sys.nvars = n + 2 * s;
  sys.eq = IntMat::Zero(static_cast<Index>(live_rows.size()), sys.nvars);
  for (size_t t = 0; t < live_rows.size(); ++t) {
    Index c = live_rows[t];
    Index row = static_cast<Index>(t);
    for (Index j = 0; j < n; ++j) sys.eq(row, j) = r.var_degree(j).coords[c];
    for (Index i = 0; i < s; ++i) {
      sys.eq(row, n + i) = -f.degree(i).coords[c];
      sys.eq(row, n + s + i) = f.degree(i).coords[c];
    }
    const Int& mod = m.moduli()[c];
    sys.moduli.push_back(mod == 0 ? std::nullopt : std::optional<Int>(mod));
  }
  return sys;
}

// Hilbert-basis presentation of the potion A_{(f)} for a monomial family.
template <typename K>
PotionPresentation<K> potion_generators(const GradedRing<K>& r,
                                        const HomFamily<K>& f) {
  require(f.all_monomial(), ErrorKind::NonMonomialFamily,
          "potion presentations need a monomial family");
  const Index n = r.nvars(), s = f.size();
  auto basis = hilbert_basis(degree_zero_system(r, f));

  // Key: reduced monomial pair. Value: lex-least (mu, nu) seen for the key.
  detail::PairLexLess less;
  std::map<std::pair<IntVec, IntVec>, std::pair<IntVec, IntVec>,
           detail::PairLexLess>
      kept;
  for (const IntVec& v : basis) {
    IntVec mu = v.head(n);
    IntVec nu(s);
    for (Index i = 0; i < s; ++i) nu[i] = v[n + i] - v[n + s + i];
    auto fr = detail::datum_fraction(r, f, mu, nu);
    auto key = detail::reduced_exponents(r, fr);
    if (vec_eq(key.first, key.second)) continue;  // a scalar, not a generator
    std::pair<IntVec, IntVec> datum{std::move(mu), std::move(nu)};
    auto it = kept.find(key);
    if (it == kept.end()) {
      kept.emplace(std::move(key), std::move(datum));
    } else if (less(datum, it->second)) {
      it->second = std::move(datum);
    }
  }

  PotionPresentation<K> pres{f, {}, {}};
  std::vector<std::pair<IntVec, IntVec>> data;
  for (auto& [key, datum] : kept) data.push_back(datum);
  // Descending lex on (mu, nu) lists charts the way they read: x1/x0 before
  // x2/x0, x^2/z before y^2/z.
  std::sort(data.begin(), data.end(),
            [&](const auto& a, const auto& b) { return less(b, a); });
  for (auto& [mu, nu] : data) {
    auto fr = detail::datum_fraction(r, f, mu, nu);
    internal_check(fraction_degree(r, fr).is_zero(),
                   "potion generator of nonzero degree");
    pres.generators.push_back(PotionGenerator<K>{mu, nu, std::move(fr)});
  }

  IntMat exps(n + s, static_cast<Index>(pres.generators.size()));
  for (size_t j = 0; j < pres.generators.size(); ++j) {
    exps.col(static_cast<Index>(j)).head(n) = pres.generators[j].mu;
    exps.col(static_cast<Index>(j)).tail(s) = pres.generators[j].nu;
  }
  pres.relation_lattice = kernel_lattice(exps);
  return pres;
}

// Searches for exponents e with prod generators^e = fr, exhaustively over
// sum(e) <= bound. The fraction may live over a superfamily of the
// presentation's. Absence means "not found within the bound".
template <typename K>
std::optional<IntVec> express_in_generators(const GradedRing<K>& r,
                                            const LocFraction<K>& fr,
                                            const PotionPresentation<K>& pres,
                                            long bound = 12) {
  require(fraction_degree(r, fr).is_zero(), ErrorKind::NotDegreeZero,
          "only degree-zero fractions lie in the potion");
  require(fr.family.contains_all(pres.family), ErrorKind::FamilyMismatch,
          "fraction family does not contain the presentation family");
  const Index k = static_cast<Index>(pres.generators.size());
  std::vector<LocFraction<K>> gens;
  for (const auto& g : pres.generators)
    gens.push_back(embed_fraction(g.fraction, fr.family));

  IntVec combo = IntVec::Zero(k);
  std::optional<IntVec> found;
  auto go = [&](auto&& self, Index idx, long budget,
                const LocFraction<K>& prod) -> bool {
    if (idx == k) {
      if (fractions_equal(r, prod, fr)) {
        found = combo;
        return true;
      }
      return false;
    }
    LocFraction<K> cur = prod;
    for (long e = 0; e <= budget; ++e) {
      combo[idx] = e;
      if (self(self, idx + 1, budget - e, cur)) return true;
      cur = mul_fractions(cur, gens[static_cast<size_t>(idx)]);
    }
    combo[idx] = 0;
    return false;
  };
  (void)go(go, 0, bound, fraction_one(r, fr.family));
  return found;
}

}  // namespace potions
