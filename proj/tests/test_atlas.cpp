#include "potions/atlas.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "test_rings.hpp"

using namespace potions;
using namespace potions::testrings;

namespace {

std::vector<std::string> chart_strings(const GradedRing<Rat>& r,
                                       const PotionPresentation<Rat>& p) {
  std::vector<std::string> out;
  for (const auto& g : p.generators)
    out.push_back(fraction_to_string(r, g.fraction));
  return out;
}

std::vector<HomFamily<Rat>> coordinate_charts(const GradedRing<Rat>& r) {
  std::vector<HomFamily<Rat>> fams;
  for (Index i = 0; i < r.nvars(); ++i) fams.push_back(fam(r, {r.var(i)}));
  return fams;
}

}  // namespace

TEST_CASE("atlas of the projective line") {
  auto r = p1();
  auto atlas = build_atlas(r, coordinate_charts(r));
  REQUIRE(atlas.families.size() == 2);
  REQUIRE(atlas.charts.size() == 2);
  CHECK(chart_strings(r, atlas.charts[0]) ==
        std::vector<std::string>{"x1/x0"});
  CHECK(chart_strings(r, atlas.charts[1]) ==
        std::vector<std::string>{"x0/x1"});
  REQUIRE(atlas.overlaps.size() == 1);
  CHECK(chart_strings(r, atlas.overlaps[0].presentation) ==
        std::vector<std::string>{"x1/x0", "x0/x1"});
  CHECK(atlas.triples.empty());
  CHECK(atlas.triples_consistent());

  const auto& o = atlas.overlap(1, 0);
  CHECK(o.first == 0);
  CHECK(o.second == 1);
  REQUIRE(o.via_first.witnesses.size() == 1);
  CHECK(o.via_first.witnesses[0].n == 1);
  CHECK(vec_eq(o.via_first.witnesses[0].nu, make_vec({1})));
  for (const auto& fr : o.via_first.inverted)
    CHECK(fraction_degree(r, fr).is_zero());
}

TEST_CASE("atlas of the free monoid ring is a point") {
  auto r = monoid_line();
  auto atlas = build_atlas(r, {fam(r, {r.var(0)})});
  REQUIRE(atlas.charts.size() == 1);
  CHECK(atlas.charts[0].generators.empty());
  CHECK(atlas.overlaps.empty());
}

TEST_CASE("atlas rejects irrelevant families") {
  auto q = p1xp1();
  CHECK_THROWS_AS((void)build_atlas(q, {fam(q, {q.var(0)})}), Error);
  try {
    (void)build_atlas(q, {fam(q, {q.var(0)})});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotRelevant);
    CHECK(std::string(e.what()).find("x0") != std::string::npos);
  }
}

TEST_CASE("atlas deduplicates families") {
  auto r = p1();
  auto atlas =
      build_atlas(r, {fam(r, {r.var(0)}), fam(r, {r.var(0)}),
                      fam(r, {r.var(1)})});
  CHECK(atlas.families.size() == 2);
}

TEST_CASE("atlas of P1 x P1 in bidegree charts") {
  auto q = p1xp1();
  std::vector<HomFamily<Rat>> fams;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 2; j < 4; ++j) fams.push_back(fam(q, {q.var(i), q.var(j)}));
  auto atlas = build_atlas(q, fams);
  REQUIRE(atlas.families.size() == 4);
  for (const auto& chart : atlas.charts)
    CHECK(chart.generators.size() == 2);
  CHECK(atlas.overlaps.size() == 6);
  REQUIRE(atlas.triples.size() == 4);
  CHECK(atlas.triples_consistent());
}

TEST_CASE("classical projective spaces up to n = 3") {
  for (auto r : {p2(), p3()}) {
    const Index n = r.nvars() - 1;
    auto atlas = build_atlas(r, coordinate_charts(r));
    REQUIRE(atlas.charts.size() == static_cast<size_t>(n + 1));
    for (Index i = 0; i <= n; ++i) {
      std::vector<std::string> want;
      for (Index j = 0; j <= n; ++j)
        if (j != i)
          want.push_back(r.var_name(j) + "/" + r.var_name(i));
      CHECK(chart_strings(r, atlas.charts[static_cast<size_t>(i)]) == want);
    }
    CHECK(atlas.triples_consistent());

    auto one = r.group().element(make_vec({1}));
    auto tw = twist_data(atlas, one);
    CHECK(tw.inverses_ok);
    CHECK(tw.cocycle_ok);
    for (const auto& nu : tw.per_chart_nu) CHECK(nu[0] == 1);
    for (Index i = 0; i <= n; ++i)
      for (Index j = 0; j <= n; ++j)
        if (i != j)
          CHECK(fraction_to_string(r, tw.transition(i, j)) ==
                r.var_name(i) + "/" + r.var_name(j));
  }
}

TEST_CASE("twist by zero is trivial") {
  auto r = p1();
  auto atlas = build_atlas(r, coordinate_charts(r));
  auto tw = twist_data(atlas, r.group().zero());
  CHECK(tw.inverses_ok);
  CHECK(tw.cocycle_ok);
  for (const auto& nu : tw.per_chart_nu) CHECK(vec_is_zero(nu));
  for (const auto& t : tw.transitions)
    CHECK(fractions_equal(r, t.unit, fraction_one(r, t.unit.family)));
}

TEST_CASE("twist obstruction on the weighted chart") {
  auto r = p112();
  auto atlas = build_atlas(
      r, {fam(r, {r.var(0), r.var(1)}), fam(r, {r.var(2)})});
  auto one = r.group().element(make_vec({1}));
  try {
    (void)twist_data(atlas, one);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TwistObstruction);
    CHECK(std::string(e.what()).find("z") != std::string::npos);
  }
}

TEST_CASE("twist transitions on P1 x P1") {
  auto q = p1xp1();
  std::vector<HomFamily<Rat>> fams;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 2; j < 4; ++j) fams.push_back(fam(q, {q.var(i), q.var(j)}));
  auto atlas = build_atlas(q, fams);
  auto tw = twist_data(atlas, q.group().element(make_vec({1, 2})));
  CHECK(tw.inverses_ok);
  CHECK(tw.cocycle_ok);
  for (size_t i = 0; i < atlas.families.size(); ++i) {
    const auto& f = atlas.families[i];
    const auto& nu = tw.per_chart_nu[i];
    GroupElement d = q.group().zero();
    for (Index t = 0; t < f.size(); ++t)
      d = q.group().add(d, q.group().scale(nu[t], f.degree(t)));
    CHECK(d == q.group().element(make_vec({1, 2})));
  }
}

TEST_CASE("identity morphism maps charts identically") {
  auto r = p1();
  std::vector<Polynomial<Rat>> ids{r.var(0), r.var(1)};
  GradedRingMorphism<Rat> psi(r, r, ids);
  auto images = functorial_image(psi, coordinate_charts(r));
  REQUIRE(images.size() == 2);
  for (const auto& ci : images) {
    CHECK(ci.family == ci.source_family);
    CHECK(ci.certificate.relevant);
    for (const auto& [src, dst] : ci.generator_images)
      CHECK(fractions_equal(r, src, dst));
  }
}

TEST_CASE("triangular automorphism of the projective line") {
  auto r = p1();
  GradedRingMorphism<Rat> psi(r, r, {r.var(0), r.var(0) + r.var(1)});
  auto images = functorial_image(psi, {fam(r, {r.var(0)})});
  REQUIRE(images.size() == 1);
  const auto& ci = images[0];
  CHECK(ci.family == fam(r, {r.var(0)}));
  REQUIRE(ci.generator_images.size() == 1);
  auto expected = make_fraction(r, r.var(0) + r.var(1), make_vec({1}),
                                ci.family);
  CHECK(fractions_equal(r, ci.generator_images[0].second, expected));
  CHECK(fraction_degree(r, ci.generator_images[0].second).is_zero());
}

TEST_CASE("inclusion into a larger projective space") {
  auto small = p1();
  auto big = p2();
  GradedRingMorphism<Rat> psi(small, big, {big.var(0), big.var(1)});
  auto images = functorial_image(psi, {fam(small, {small.var(0)})});
  REQUIRE(images.size() == 1);
  REQUIRE(images[0].generator_images.size() == 1);
  auto expected = make_fraction(big, big.var(1), make_vec({1}),
                                images[0].family);
  CHECK(fractions_equal(big, images[0].generator_images[0].second, expected));
}

TEST_CASE("morphism construction validates degrees") {
  auto r = p1();
  CHECK_THROWS_AS(GradedRingMorphism<Rat>(r, r, {r.var(0), r.var(0) * r.var(0)}),
                  Error);
  CHECK_THROWS_AS(GradedRingMorphism<Rat>(r, r, {r.var(0)}), Error);
  CHECK_THROWS_AS(
      GradedRingMorphism<Rat>(r, r, {r.var(0), Polynomial<Rat>::zero(2)}),
      Error);
}

TEST_CASE("non-monomial images keep a sound certificate") {
  auto r = p1();
  GradedRingMorphism<Rat> psi(r, r, {r.var(0), r.var(0) + r.var(1)});
  auto images = functorial_image(psi, {fam(r, {r.var(1)})});
  REQUIRE(images.size() == 1);
  CHECK(images[0].family == fam(r, {r.var(0) + r.var(1)}));
  CHECK(images[0].certificate.relevant);
  CHECK(!images[0].certificate.exact);
}

TEST_CASE("functorial images compose") {
  auto r = p1();
  GradedRingMorphism<Rat> psi1(r, r, {r.var(0), r.var(0) + r.var(1)});
  GradedRingMorphism<Rat> psi2(r, r, {r.var(0) + r.var(1), r.var(1)});
  GradedRingMorphism<Rat> composed(
      r, r, {apply_morphism(psi2, psi1.image(0)),
             apply_morphism(psi2, psi1.image(1))});
  auto f = fam(r, {r.var(0)});
  auto pres = potion_generators(r, f);
  auto step1 = image_family(psi1, f);
  auto step2 = image_family(psi2, step1);
  auto direct = image_family(composed, f);
  CHECK(step2 == direct);
  for (const auto& gen : pres.generators) {
    auto via_steps =
        map_fraction(psi2, map_fraction(psi1, gen.fraction, step1), step2);
    auto at_once = map_fraction(composed, gen.fraction, direct);
    CHECK(fractions_equal(r, via_steps, at_once));
  }
}

TEST_CASE("base change to a prime field preserves exponent data") {
  auto r2 = p2();
  CHECK(base_change_invariance(r2, fam(r2, {r2.var(0)})));

  auto rm = monoid_line();
  CHECK(base_change_invariance(rm, fam(rm, {rm.var(0)})));

  auto rw = p112();
  CHECK(base_change_invariance(rw, fam(rw, {rw.var(2)})));
  CHECK(base_change_invariance(rw, fam(rw, {rw.var(0), rw.var(2)})));

  auto rt = z2_line();
  CHECK(base_change_invariance(rt, fam(rt, {rt.var(0)})));

  // A second prime behaves the same.
  CHECK(base_change_invariance(r2, fam(r2, {r2.var(0)}), Int(7)));
}

TEST_CASE("prime field potions directly") {
  auto r = ring_mod_p(p112(), Int(101));
  auto f = HomFamily<Fp>(r, {r.var(2)});
  auto pres = potion_generators(r, f);
  REQUIRE(pres.generators.size() == 3);
  CHECK(fraction_to_string(r, pres.generators[0].fraction) == "x^2/z");
  REQUIRE(pres.relation_lattice.size() == 1);
  CHECK(vec_eq(pres.relation_lattice[0], make_vec({1, -2, 1})));
}
