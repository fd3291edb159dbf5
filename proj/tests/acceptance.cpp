// Acceptance gate: one line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "potions/atlas.hpp"
#include "potions/oracle.hpp"
#include "potions/problem.hpp"
#include "test_rings.hpp"

using namespace potions;
using namespace potions::testrings;

namespace {

bool run_command(const std::string& cmd, std::string& out, int& code) {
  out.clear();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return false;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  if (status < 0 || !WIFEXITED(status)) return false;
  code = WEXITSTATUS(status);
  return true;
}

std::set<std::string> fraction_set(const GradedRing<Rat>& r,
                                   const PotionPresentation<Rat>& pres) {
  std::set<std::string> out;
  for (const auto& g : pres.generators)
    out.insert(fraction_to_string(r, g.fraction));
  return out;
}

GradedRing<Rat> classical(Index n) {
  auto z = FgAbelianGroup::free_and_torsion(1, {});
  GroupElement one = z.element(make_vec({1}));
  std::vector<std::string> names;
  std::vector<GroupElement> degs;
  for (Index i = 0; i <= n; ++i) {
    names.push_back("x" + std::to_string(i));
    degs.push_back(one);
  }
  return GradedRing<Rat>(z, std::move(names), std::move(degs), Rat(1));
}

std::vector<HomFamily<Rat>> coordinate_charts(const GradedRing<Rat>& r) {
  std::vector<HomFamily<Rat>> fams;
  for (Index i = 0; i < r.nvars(); ++i)
    fams.push_back(HomFamily<Rat>(r, {r.var(i)}));
  return fams;
}

bool classical_spaces() {
  for (Index n = 1; n <= 3; ++n) {
    auto r = classical(n);
    auto atlas = build_atlas(r, coordinate_charts(r));
    if (atlas.charts.size() != static_cast<size_t>(n + 1)) return false;
    for (Index i = 0; i <= n; ++i) {
      std::set<std::string> want;
      for (Index j = 0; j <= n; ++j)
        if (j != i) want.insert(r.var_name(j) + "/" + r.var_name(i));
      if (fraction_set(r, atlas.charts[static_cast<size_t>(i)]) != want)
        return false;
    }
    if (!atlas.triples_consistent()) return false;

    auto tw = twist_data(atlas, r.group().element(make_vec({1})));
    if (!tw.inverses_ok || !tw.cocycle_ok) return false;
    for (Index i = 0; i <= n; ++i)
      for (Index j = 0; j <= n; ++j)
        if (i != j &&
            fraction_to_string(r, tw.transition(i, j)) !=
                r.var_name(i) + "/" + r.var_name(j))
          return false;
  }
  return true;
}

bool magic_pairs() {
  auto r1 = p1();
  if (!verify_iso(r1, HomFamily<Rat>(r1, {r1.var(0)}),
                  HomFamily<Rat>(r1, {r1.var(1)}))
           .ok())
    return false;
  auto rw = p112();
  if (!verify_iso(rw, HomFamily<Rat>(rw, {rw.var(0), rw.var(1)}),
                  HomFamily<Rat>(rw, {rw.var(2)}))
           .ok())
    return false;
  auto rq = p1xp1();
  return verify_iso(rq, HomFamily<Rat>(rq, {rq.var(0), rq.var(2)}),
                    HomFamily<Rat>(rq, {rq.var(1), rq.var(3)}))
      .ok();
}

bool hilbert_vs_oracle() {
  std::mt19937 rng(20240817u);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const Int box(6);
  for (int trial = 0; trial < 220; ++trial) {
    const Index nv = pick(1, 4);
    const Index rows = pick(0, 2);
    DiophantineSystem sys;
    sys.nvars = nv;
    sys.eq = IntMat(rows, nv);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < nv; ++j) sys.eq(i, j) = pick(-3, 3);
      if (pick(0, 1) == 0)
        sys.moduli.push_back(std::nullopt);
      else
        sys.moduli.push_back(Int(pick(2, 6)));
    }
    auto basis = hilbert_basis(sys);
    std::vector<IntVec> in_box;
    for (const auto& v : basis) {
      bool within = true;
      for (Index i = 0; i < v.size(); ++i)
        if (v[i] > box) within = false;
      if (within) in_box.push_back(v);
    }
    auto expected = oracle::minimal_elements(
        oracle::enumerate_solutions(sys, oracle::BoxBound{box}));
    std::sort(in_box.begin(), in_box.end(), LexLess());
    std::sort(expected.begin(), expected.end(), LexLess());
    if (in_box.size() != expected.size()) return false;
    for (size_t i = 0; i < in_box.size(); ++i)
      if (!vec_eq(in_box[i], expected[i])) return false;
  }
  return true;
}

bool weighted_chart() {
  auto r = p112();
  auto pres = potion_generators(r, HomFamily<Rat>(r, {r.var(2)}));
  if (fraction_set(r, pres) !=
      std::set<std::string>{"x^2/z", "x*y/z", "y^2/z"})
    return false;
  return pres.relation_lattice.size() == 1 &&
         vec_eq(pres.relation_lattice[0], make_vec({1, -2, 1}));
}

bool torsion_grading() {
  auto r = z2_line();
  HomFamily<Rat> f(r, {r.var(0)});
  if (!is_relevant(r, f).relevant) return false;
  return fraction_set(r, potion_generators(r, f)) ==
         std::set<std::string>{"x^2", "1/x^2"};
}

HomFamily<Rat> random_monomial_family(const GradedRing<Rat>& r,
                                      std::mt19937& rng) {
  std::uniform_int_distribution<int> exp(0, 2);
  std::uniform_int_distribution<int> size(1, 2);
  std::vector<Polynomial<Rat>> els;
  const int count = size(rng);
  while (static_cast<int>(els.size()) < count) {
    IntVec e = IntVec::Zero(r.nvars());
    for (Index i = 0; i < r.nvars(); ++i) e[i] = exp(rng);
    if (vec_is_zero(e)) continue;
    els.push_back(Polynomial<Rat>::monomial(e, Rat(1)));
  }
  return HomFamily<Rat>(r, std::move(els));
}

bool relevance_negative_and_union() {
  auto rq = p1xp1();
  if (is_relevant(rq, HomFamily<Rat>(rq, {rq.var(0)})).relevant) return false;

  std::mt19937 rng(7311u);
  auto rw = p112();
  int found = 0;
  for (int attempt = 0; attempt < 5000 && found < 50; ++attempt) {
    const GradedRing<Rat>& r = (attempt % 2 == 0) ? rq : rw;
    auto f = random_monomial_family(r, rng);
    auto g = random_monomial_family(r, rng);
    if (!is_relevant(r, f).relevant || !is_relevant(r, g).relevant) continue;
    ++found;
    if (!is_relevant(r, family_union(r, f, g)).relevant) return false;
  }
  return found == 50;
}

bool base_change_golden() {
  auto r2 = p2();
  auto rm = monoid_line();
  auto rw = p112();
  auto rt = z2_line();
  auto rq = p1xp1();
  auto r23 = weighted23();
  return base_change_invariance(r2, HomFamily<Rat>(r2, {r2.var(0)})) &&
         base_change_invariance(rm, HomFamily<Rat>(rm, {rm.var(0)})) &&
         base_change_invariance(rw, HomFamily<Rat>(rw, {rw.var(2)})) &&
         base_change_invariance(
             rw, HomFamily<Rat>(rw, {rw.var(0), rw.var(1)})) &&
         base_change_invariance(rt, HomFamily<Rat>(rt, {rt.var(0)})) &&
         base_change_invariance(
             rq, HomFamily<Rat>(rq, {rq.var(0), rq.var(2)})) &&
         base_change_invariance(
             r23, HomFamily<Rat>(r23, {r23.var(0), r23.var(1)}));
}

bool closure_pair(const GradedRing<Rat>& r, const HomFamily<Rat>& f) {
  auto closed = divisor_closure(r, f);
  auto pf = potion_generators(r, f);
  auto pc = potion_generators(r, closed);
  for (const auto& gen : pf.generators) {
    auto lifted = embed_fraction(gen.fraction, closed);
    if (!express_in_generators(r, lifted, pc)) return false;
  }
  for (const auto& gen : pc.generators)
    if (!express_in_generators(r, gen.fraction, pf)) return false;
  return true;
}

bool divisor_closure_identity() {
  auto r1 = p1();
  auto rw = p112();
  return closure_pair(r1, HomFamily<Rat>(r1, {r1.var(0) * r1.var(1)})) &&
         closure_pair(rw, HomFamily<Rat>(rw, {rw.var(0) * rw.var(2)}));
}

bool cli_determinism(const std::string& cli, const std::string& golden_dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> inputs;
  for (const auto& entry : fs::directory_iterator(golden_dir))
    if (entry.path().extension() == ".txt")
      inputs.push_back(entry.path().string());
  std::sort(inputs.begin(), inputs.end());
  if (inputs.empty()) return false;

  for (const auto& input : inputs) {
    for (const char* format : {"json", "text"}) {
      std::string base = "'" + cli + "' --format " + format + " '" + input +
                         "' 2>/dev/null";
      std::string out1, out2;
      int code1 = -1, code2 = -2;
      if (!run_command(base, out1, code1)) return false;
      if (!run_command(base, out2, code2)) return false;
      if (out1 != out2 || code1 != code2) return false;
      if (out1.empty() || code1 == 4 || code1 == 2) return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <cli-binary> <golden-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const std::string golden_dir = argv[2];

  bool all = true;
  auto criterion = [&](int num, const char* what, auto&& fn) {
    bool ok = false;
    std::string note;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      ok = false;
      note = std::string(" [") + e.what() + "]";
    }
    std::printf("%s criterion %2d: %s%s\n", ok ? "PASS" : "FAIL", num, what,
                note.c_str());
    all = all && ok;
  };

  criterion(1, "trivial grading gives one chart with no generators", [] {
    auto r = monoid_line();
    auto atlas = build_atlas(r, {HomFamily<Rat>(r, {r.var(0)})});
    return atlas.charts.size() == 1 && atlas.charts[0].generators.empty() &&
           atlas.overlaps.empty();
  });

  criterion(2, "classical projective spaces up to n = 3 with O(1) cocycle",
            classical_spaces);

  criterion(3, "magic isomorphism verified on the three standard pairs",
            magic_pairs);

  criterion(4, "hilbert solver equals box-6 oracle on 220 random systems",
            hilbert_vs_oracle);

  criterion(5, "weighted chart z on P(1,1,2) with its binomial relation",
            weighted_chart);

  criterion(6, "Z/2-graded line: relevant family with generators x^2, 1/x^2",
            torsion_grading);

  criterion(7, "relevance negative on P1xP1 and 50 random union-law pairs",
            relevance_negative_and_union);

  criterion(8, "base change to F_101 preserves potion exponent data",
            base_change_golden);

  criterion(9, "divisor closure is potion-neutral on the two golden families",
            divisor_closure_identity);

  criterion(10, "CLI output byte-identical across runs on every golden input",
            [&] { return cli_determinism(cli, golden_dir); });

  return all ? 0 : 1;
}
