#include "potions/oracle.hpp"

#include <algorithm>

namespace potions::oracle {

namespace {

bool satisfies(const DiophantineSystem& sys, const IntVec& v) {
  for (Index i = 0; i < sys.eq.rows(); ++i) {
    Int acc = 0;
    for (Index j = 0; j < sys.nvars; ++j) acc += sys.eq(i, j) * v[j];
    const auto& m = sys.moduli[static_cast<size_t>(i)];
    if (m) {
      if (mod_floor(acc, *m) != 0) return false;
    } else if (acc != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<IntVec> enumerate_solutions(const DiophantineSystem& sys,
                                        BoxBound bound) {
  sys.validate();
  bound.validate();
  std::vector<IntVec> out;
  IntVec v = IntVec::Zero(sys.nvars);
  // Odometer over {0,...,b}^nvars in lex order.
  for (;;) {
    if (satisfies(sys, v)) out.push_back(v);
    Index i = sys.nvars - 1;
    while (i >= 0 && v[i] == bound.b) {
      v[i] = 0;
      --i;
    }
    if (i < 0) break;
    v[i] += 1;
  }
  return out;
}

std::vector<IntVec> minimal_elements(const std::vector<IntVec>& vs) {
  std::vector<IntVec> out;
  for (const IntVec& v : vs) {
    if (vec_is_zero(v)) continue;
    bool minimal = true;
    for (const IntVec& w : vs) {
      if (vec_is_zero(w) || vec_eq(w, v)) continue;
      if (pointwise_le(w, v)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), LexLess{});
  out.erase(std::unique(out.begin(), out.end(), vec_eq), out.end());
  return out;
}

}  // namespace potions::oracle
