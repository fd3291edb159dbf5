#pragma once

// Chart atlases glued from potions: overlap presentations, triple
// consistency, functorial images, twist-sheaf transition cocycles, and the
// base-change comparison between coefficient fields.

#include <optional>
#include <utility>
#include <vector>

#include "potions/magic.hpp"

namespace potions {

// The overlap U_{f,g}: the potion of f union g with its two localized
// presentations, one over each chart.
template <typename K>
struct OverlapData {
  Index first = 0;
  Index second = 0;
  PotionPresentation<K> presentation;
  LocalizedPresentation<K> via_first;
  LocalizedPresentation<K> via_second;
};

struct TripleCheck {
  Index i = 0, j = 0, k = 0;
  bool consistent = false;
};

template <typename K>
struct Atlas {
  GradedRing<K> ring;
  std::vector<HomFamily<K>> families;
  std::vector<RelevanceCertificate> certificates;
  std::vector<PotionPresentation<K>> charts;
  std::vector<OverlapData<K>> overlaps;
  std::vector<TripleCheck> triples;

  const OverlapData<K>& overlap(Index i, Index j) const {
    if (i > j) std::swap(i, j);
    for (const auto& o : overlaps)
      if (o.first == i && o.second == j) return o;
    fail(ErrorKind::Validation, "no such overlap");
  }

  bool triples_consistent() const {
    for (const auto& t : triples)
      if (!t.consistent) return false;
    return true;
  }
};

namespace detail {

// Both restriction routes into U_{f u g u k}: every generator of the triple
// overlap must be reachable from U_{f u g} and from U_{f u k}.
template <typename K>
bool triple_consistent(const GradedRing<K>& r, const HomFamily<K>& a,
                       const HomFamily<K>& b, const HomFamily<K>& c) {
  HomFamily<K> ab = family_union(r, a, b);
  HomFamily<K> ac = family_union(r, a, c);
  HomFamily<K> abc = family_union(r, ab, c);
  auto pres = potion_generators(r, abc);
  for (const auto& route : {std::pair{ab, c}, std::pair{ac, b}}) {
    std::vector<Witness> ws;
    for (Index j = 0; j < route.second.size(); ++j)
      ws.push_back(find_witness(r, route.first, route.second.element(j)));
    for (const auto& gen : pres.generators) {
      auto im = phi_backward(r, route.first, route.second, ws, gen.fraction);
      auto back = recombine(r, route.first, route.second, ws, im);
      if (!fractions_equal(r, back, gen.fraction)) return false;
    }
  }
  return true;
}

}  // namespace detail

// Charts, overlaps with their magic localizations, and exact triple checks
// for a finite set of relevant monomial families.
template <typename K>
Atlas<K> build_atlas(const GradedRing<K>& r,
                     std::vector<HomFamily<K>> families) {
  std::sort(families.begin(), families.end());
  families.erase(std::unique(families.begin(), families.end()),
                 families.end());
  Atlas<K> atlas{r, std::move(families), {}, {}, {}, {}};

  for (const auto& f : atlas.families) {
    auto cert = is_relevant(r, f);
    if (!cert.relevant)
      fail(ErrorKind::NotRelevant,
           "family " + f.to_string(r.var_names()) + " is not relevant");
    atlas.certificates.push_back(std::move(cert));
    atlas.charts.push_back(potion_generators(r, f));
  }

  const Index n = static_cast<Index>(atlas.families.size());
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const auto& f = atlas.families[static_cast<size_t>(i)];
      const auto& g = atlas.families[static_cast<size_t>(j)];
      atlas.overlaps.push_back(OverlapData<K>{
          i, j, potion_generators(r, family_union(r, f, g)),
          localized_presentation(r, f, g), localized_presentation(r, g, f)});
    }
  }

  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = j + 1; k < n; ++k)
        atlas.triples.push_back(TripleCheck{
            i, j, k,
            detail::triple_consistent(r, atlas.families[static_cast<size_t>(i)],
                                      atlas.families[static_cast<size_t>(j)],
                                      atlas.families[static_cast<size_t>(k)])});
  return atlas;
}

// A degree-preserving map of rings graded by the same group, given by a
// homogeneous image per source variable.
template <typename K>
class GradedRingMorphism {
 public:
  GradedRingMorphism(GradedRing<K> source, GradedRing<K> target,
                     std::vector<Polynomial<K>> images)
      : source_(std::move(source)),
        target_(std::move(target)),
        images_(std::move(images)) {
    require(source_.group() == target_.group(), ErrorKind::DegreeMismatch,
            "source and target must share the grading group");
    require(static_cast<Index>(images_.size()) == source_.nvars(),
            ErrorKind::Validation, "one image per source variable");
    for (Index i = 0; i < source_.nvars(); ++i) {
      const auto& im = images_[static_cast<size_t>(i)];
      require(!im.is_zero(), ErrorKind::ZeroElement,
              "variable image must be nonzero");
      require(degree_of(target_, im) == source_.var_degree(i),
              ErrorKind::DegreeMismatch,
              "image of " + source_.var_name(i) + " changes the degree");
    }
  }

  const GradedRing<K>& source() const { return source_; }
  const GradedRing<K>& target() const { return target_; }
  const Polynomial<K>& image(Index i) const {
    return images_[static_cast<size_t>(i)];
  }

 private:
  GradedRing<K> source_;
  GradedRing<K> target_;
  std::vector<Polynomial<K>> images_;
};

template <typename K>
Polynomial<K> apply_morphism(const GradedRingMorphism<K>& psi,
                             const Polynomial<K>& p) {
  Polynomial<K> out = Polynomial<K>::zero(psi.target().nvars());
  for (const auto& [e, c] : p.terms()) {
    Polynomial<K> term = Polynomial<K>::constant(psi.target().nvars(), c);
    for (Index i = 0; i < e.size(); ++i)
      if (e[i] > 0) term = term * psi.image(i).pow(e[i]);
    out = out + term;
  }
  return out;
}

template <typename K>
HomFamily<K> image_family(const GradedRingMorphism<K>& psi,
                          const HomFamily<K>& f) {
  std::vector<Polynomial<K>> els;
  for (Index i = 0; i < f.size(); ++i)
    els.push_back(apply_morphism(psi, f.element(i)));
  return HomFamily<K>(psi.target(), std::move(els));
}

// psi(x / a^nu) = psi(x) / psi(a)^nu over the image family.
template <typename K>
LocFraction<K> map_fraction(const GradedRingMorphism<K>& psi,
                            const LocFraction<K>& fr,
                            const HomFamily<K>& image) {
  Polynomial<K> num = apply_morphism(psi, fr.numerator);
  IntVec exps = IntVec::Zero(image.size());
  for (Index i = 0; i < fr.family.size(); ++i) {
    if (fr.denom_exps[i] == 0) continue;
    Index j = image.find(apply_morphism(psi, fr.family.element(i)));
    require(j >= 0, ErrorKind::FamilyMismatch,
            "image family misses a denominator image");
    exps[j] += fr.denom_exps[i];
  }
  return LocFraction<K>{std::move(num), std::move(exps), image};
}

template <typename K>
struct ChartImage {
  HomFamily<K> source_family;
  HomFamily<K> family;
  RelevanceCertificate certificate;
  // Generator of the source potion paired with its image fraction.
  std::vector<std::pair<LocFraction<K>, LocFraction<K>>> generator_images;
};

// Images of relevant families under a degree-preserving morphism, with
// relevance certificates and the induced potion maps sampled on generators.
template <typename K>
std::vector<ChartImage<K>> functorial_image(const GradedRingMorphism<K>& psi,
                                            std::vector<HomFamily<K>> families) {
  std::sort(families.begin(), families.end());
  families.erase(std::unique(families.begin(), families.end()),
                 families.end());
  std::vector<ChartImage<K>> out;
  for (const auto& f : families) {
    auto scert = is_relevant(psi.source(), f);
    if (!scert.relevant)
      fail(ErrorKind::NotRelevant,
           "family " + f.to_string(psi.source().var_names()) +
               " is not relevant");
    ChartImage<K> ci{f, image_family(psi, f), {}, {}};
    if (ci.family.all_monomial()) {
      ci.certificate = is_relevant(psi.target(), ci.family);
    } else if (scert.exact) {
      // Images of the source divisors still divide the image family, so the
      // source divisor degrees span a subgroup of the image's; relevance
      // transfers even though the image's own divisors are not computed.
      ci.certificate.relevant = true;
      ci.certificate.very_relevant = false;
      ci.certificate.exact = false;
      ci.certificate.degree_group_gens = scert.degree_group_gens;
      ci.certificate.quotient_invariants = scert.quotient_invariants;
    } else {
      ci.certificate = is_relevant(psi.target(), ci.family);
    }
    if (f.all_monomial()) {
      auto pres = potion_generators(psi.source(), f);
      for (const auto& gen : pres.generators) {
        auto mapped = map_fraction(psi, gen.fraction, ci.family);
        internal_check(fraction_degree(psi.target(), mapped).is_zero(),
                       "functorial image off degree zero");
        ci.generator_images.emplace_back(gen.fraction, std::move(mapped));
      }
    }
    out.push_back(std::move(ci));
  }
  return out;
}

template <typename K>
struct TransitionUnit {
  Index from = 0;
  Index to = 0;
  LocFraction<K> unit;  // a_from^{nu_from} / a_to^{nu_to} over the union
};

template <typename K>
struct TwistData {
  GroupElement alpha;
  std::vector<IntVec> per_chart_nu;
  std::vector<TransitionUnit<K>> transitions;
  bool inverses_ok = false;
  bool cocycle_ok = false;

  const LocFraction<K>& transition(Index from, Index to) const {
    for (const auto& t : transitions)
      if (t.from == from && t.to == to) return t.unit;
    fail(ErrorKind::Validation, "no such transition");
  }
};

namespace detail {

// a_f^{nu_f} a_g^{-nu_g} written over f union g.
template <typename K>
LocFraction<K> transition_fraction(const GradedRing<K>& r,
                                   const HomFamily<K>& f, const IntVec& nu_f,
                                   const HomFamily<K>& g, const IntVec& nu_g,
                                   const HomFamily<K>& u) {
  IntVec w = IntVec::Zero(u.size());
  for (Index i = 0; i < f.size(); ++i) w[u.find(f.element(i))] -= nu_f[i];
  for (Index i = 0; i < g.size(); ++i) w[u.find(g.element(i))] += nu_g[i];
  Polynomial<K> num = r.constant(1);
  IntVec den = IntVec::Zero(u.size());
  for (Index t = 0; t < u.size(); ++t) {
    if (w[t] > 0) den[t] = w[t];
    if (w[t] < 0) num = num * u.element(t).pow(Int(-w[t]));
  }
  return LocFraction<K>{std::move(num), std::move(den), u};
}

}  // namespace detail

// Per-chart monomials a^{nu} of degree alpha and the transition units
// between charts, with the unit and cocycle identities checked exactly.
template <typename K>
TwistData<K> twist_data(const Atlas<K>& atlas, const GroupElement& alpha) {
  const GradedRing<K>& r = atlas.ring;
  const FgAbelianGroup& m = r.group();
  TwistData<K> tw;
  tw.alpha = alpha;

  for (const auto& f : atlas.families) {
    for (Index t = 0; t < m.ngen(); ++t) {
      IntVec unit = IntVec::Zero(m.ngen());
      unit[t] = 1;
      if (!m.subgroup_membership(m.element(unit), f.degrees()))
        fail(ErrorKind::TwistObstruction,
             "family " + f.to_string(r.var_names()) +
                 " does not span the full degree group");
    }
    auto nu = m.subgroup_membership(alpha, f.degrees());
    internal_check(nu.has_value(), "twist solve failed after span check");
    tw.per_chart_nu.push_back(std::move(*nu));
  }

  const Index n = static_cast<Index>(atlas.families.size());
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& f = atlas.families[static_cast<size_t>(i)];
      const auto& g = atlas.families[static_cast<size_t>(j)];
      HomFamily<K> u = family_union(r, f, g);
      auto unit = detail::transition_fraction(
          r, f, tw.per_chart_nu[static_cast<size_t>(i)], g,
          tw.per_chart_nu[static_cast<size_t>(j)], u);
      internal_check(fraction_degree(r, unit).is_zero(),
                     "transition unit off degree zero");
      tw.transitions.push_back(TransitionUnit<K>{i, j, std::move(unit)});
    }
  }

  tw.inverses_ok = true;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const auto& fwd = tw.transition(i, j);
      const auto& bwd = tw.transition(j, i);
      auto prod = mul_fractions(fwd, bwd);
      if (!fractions_equal(r, prod, fraction_one(r, fwd.family)))
        tw.inverses_ok = false;
    }
  }

  tw.cocycle_ok = true;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const auto& fi = atlas.families[static_cast<size_t>(i)];
        const auto& fj = atlas.families[static_cast<size_t>(j)];
        const auto& fk = atlas.families[static_cast<size_t>(k)];
        HomFamily<K> u =
            family_union(r, family_union(r, fi, fj), fk);
        auto lhs = mul_fractions(embed_fraction(tw.transition(i, j), u),
                                 embed_fraction(tw.transition(j, k), u));
        auto rhs = embed_fraction(tw.transition(i, k), u);
        if (!fractions_equal(r, lhs, rhs)) tw.cocycle_ok = false;
      }
    }
  }
  return tw;
}

inline Fp rat_to_fp(const Rat& q, const Int& p) {
  Fp num(q.get_num(), p);
  Fp den(q.get_den(), p);
  return num / den;
}

inline GradedRing<Fp> ring_mod_p(const GradedRing<Rat>& r, const Int& p) {
  std::vector<GroupElement> degrees;
  for (Index i = 0; i < r.nvars(); ++i) degrees.push_back(r.var_degree(i));
  return GradedRing<Fp>(r.group(), r.var_names(), std::move(degrees), Fp(1, p));
}

inline Polynomial<Fp> poly_mod_p(const Polynomial<Rat>& poly, const Int& p) {
  Polynomial<Fp> out(poly.nvars());
  for (const auto& [e, c] : poly.terms())
    out = out + Polynomial<Fp>::monomial(e, rat_to_fp(c, p));
  return out;
}

// Desk-scale shadow of the base-change identity: the potion's exponent data
// must not depend on the coefficient field.
inline bool base_change_invariance(const GradedRing<Rat>& r,
                                   const HomFamily<Rat>& f,
                                   const Int& p = 101) {
  auto over_q = potion_generators(r, f);
  auto rp = ring_mod_p(r, p);
  std::vector<Polynomial<Fp>> els;
  for (Index i = 0; i < f.size(); ++i)
    els.push_back(poly_mod_p(f.element(i), p));
  auto over_p = potion_generators(rp, HomFamily<Fp>(rp, std::move(els)));
  if (over_q.generators.size() != over_p.generators.size()) return false;
  for (size_t i = 0; i < over_q.generators.size(); ++i) {
    if (!vec_eq(over_q.generators[i].mu, over_p.generators[i].mu)) return false;
    if (!vec_eq(over_q.generators[i].nu, over_p.generators[i].nu)) return false;
  }
  if (over_q.relation_lattice.size() != over_p.relation_lattice.size())
    return false;
  for (size_t i = 0; i < over_q.relation_lattice.size(); ++i)
    if (!vec_eq(over_q.relation_lattice[i], over_p.relation_lattice[i]))
      return false;
  return true;
}

}  // namespace potions
