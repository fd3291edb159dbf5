#include "potions/zlattice.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace potions {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

}  // namespace

IntMat SmithDecomposition::diagonal(Index rows, Index cols) const {
  IntMat m = IntMat::Zero(rows, cols);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) m(i, i) = d[i];
  return m;
}

SmithDecomposition snf(const IntMat& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  IntMat d = a;
  IntMat u = IntMat::Identity(m, m);
  IntMat v = IntMat::Identity(n, n);
  const Index steps = std::min(m, n);

  for (Index t = 0; t < steps; ++t) {
    for (;;) {
      // Minimal-absolute-value pivot in the trailing submatrix.
      Index pi = -1, pj = -1;
      for (Index i = t; i < m; ++i) {
        for (Index j = t; j < n; ++j) {
          if (d(i, j) == 0) continue;
          if (pi < 0 || abs_int(d(i, j)) < abs_int(d(pi, pj))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi < 0) break;  // trailing block is zero
      if (pi != t) {
        d.row(t).swap(d.row(pi));
        u.row(t).swap(u.row(pi));
      }
      if (pj != t) {
        d.col(t).swap(d.col(pj));
        v.col(t).swap(v.col(pj));
      }

      bool clean = true;
      for (Index i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Int q = d(i, t) / d(t, t);
        if (q != 0) {
          d.row(i) -= q * d.row(t);
          u.row(i) -= q * u.row(t);
        }
        if (d(i, t) != 0) clean = false;
      }
      for (Index j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Int q = d(t, j) / d(t, t);
        if (q != 0) {
          d.col(j) -= q * d.col(t);
          v.col(j) -= q * v.col(t);
        }
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Pivot must divide the rest of the submatrix for the chain d_i | d_i+1.
      Index bad = -1;
      for (Index i = t + 1; i < m && bad < 0; ++i) {
        for (Index j = t + 1; j < n; ++j) {
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
        }
      }
      if (bad >= 0) {
        d.row(t) += d.row(bad);
        u.row(t) += u.row(bad);
        continue;
      }
      if (d(t, t) < 0) {
        d.row(t) *= Int(-1);
        u.row(t) *= Int(-1);
      }
      break;
    }
  }

  SmithDecomposition out;
  out.d.reserve(steps);
  for (Index i = 0; i < steps; ++i) out.d.push_back(d(i, i));
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

Int det(const IntMat& a) {
  internal_check(a.rows() == a.cols(), "det: matrix must be square");
  const Index n = a.rows();
  if (n == 0) return 1;
  IntMat w = a;
  Int prev = 1;
  int sign = 1;
  for (Index k = 0; k + 1 < n; ++k) {
    if (w(k, k) == 0) {
      Index p = -1;
      for (Index i = k + 1; i < n; ++i) {
        if (w(i, k) != 0) {
          p = i;
          break;
        }
      }
      if (p < 0) return 0;
      w.row(k).swap(w.row(p));
      sign = -sign;
    }
    for (Index i = k + 1; i < n; ++i) {
      for (Index j = k + 1; j < n; ++j) {
        Int num = w(k, k) * w(i, j) - w(i, k) * w(k, j);
        mpz_divexact(w(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      w(i, k) = 0;
    }
    prev = w(k, k);
  }
  return sign > 0 ? w(n - 1, n - 1) : Int(-w(n - 1, n - 1));
}

Index rank(const IntMat& a) {
  auto s = snf(a);
  Index r = 0;
  for (const Int& x : s.d)
    if (x != 0) ++r;
  return r;
}

std::vector<IntVec> kernel_lattice(const IntMat& a) {
  auto s = snf(a);
  Index r = 0;
  for (const Int& x : s.d)
    if (x != 0) ++r;
  std::vector<IntVec> basis;
  for (Index j = r; j < a.cols(); ++j) {
    IntVec col = s.v.col(j);
    for (Index i = 0; i < col.size(); ++i) {
      if (col[i] == 0) continue;
      if (col[i] < 0) col = -col;
      break;
    }
    basis.push_back(std::move(col));
  }
  std::sort(basis.begin(), basis.end(), LexLess{});
  return basis;
}

std::optional<IntVec> solve_integer(const IntMat& a, const IntVec& b) {
  internal_check(a.rows() == b.size(), "solve_integer: shape mismatch");
  auto s = snf(a);
  IntVec c = s.u * b;
  const Index n = a.cols();
  IntVec w = IntVec::Zero(n);
  const Index k = static_cast<Index>(s.d.size());
  for (Index i = 0; i < a.rows(); ++i) {
    if (i < k && s.d[i] != 0) {
      if (c[i] % s.d[i] != 0) return std::nullopt;
      w[i] = c[i] / s.d[i];
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return IntVec(s.v * w);
}

// ---------------------------------------------------------------------------
// FgAbelianGroup

FgAbelianGroup FgAbelianGroup::from_relations(Index ngen,
                                              const IntMat& relations) {
  require(relations.rows() == ngen || relations.size() == 0,
          ErrorKind::DimensionMismatch,
          "relation matrix must have one row per generator");
  FgAbelianGroup g;
  g.ngen_ = ngen;
  g.relations_ = relations.size() == 0 ? IntMat(ngen, 0) : relations;
  auto s = snf(g.relations_);
  g.transform_ = std::move(s.u);
  g.moduli_ = IntVec::Zero(ngen);
  for (Index i = 0; i < static_cast<Index>(s.d.size()); ++i)
    g.moduli_[i] = s.d[i];
  return g;
}

FgAbelianGroup FgAbelianGroup::free_and_torsion(Index rank,
                                                const std::vector<Int>& torsion) {
  for (const Int& m : torsion)
    require(m >= 1, ErrorKind::Validation, "torsion moduli must be >= 1");
  const Index s = static_cast<Index>(torsion.size());
  const Index ngen = rank + s;
  FgAbelianGroup g;
  g.ngen_ = ngen;
  g.relations_ = IntMat::Zero(ngen, s);
  g.transform_ = IntMat::Identity(ngen, ngen);
  g.moduli_ = IntVec::Zero(ngen);
  for (Index j = 0; j < s; ++j) {
    g.relations_(rank + j, j) = torsion[static_cast<size_t>(j)];
    g.moduli_[rank + j] = torsion[static_cast<size_t>(j)];
  }
  return g;
}

Index FgAbelianGroup::free_rank() const {
  Index r = 0;
  for (Index i = 0; i < ngen_; ++i)
    if (moduli_[i] == 0) ++r;
  return r;
}

std::vector<Int> FgAbelianGroup::invariant_factors() const {
  std::vector<Int> nontrivial;
  for (Index i = 0; i < ngen_; ++i)
    if (moduli_[i] > 1) nontrivial.push_back(moduli_[i]);
  std::sort(nontrivial.begin(), nontrivial.end());
  return nontrivial;
}

bool FgAbelianGroup::is_trivial() const {
  for (Index i = 0; i < ngen_; ++i)
    if (moduli_[i] != 1) return false;
  return true;
}

GroupElement FgAbelianGroup::reduce(IntVec canonical) const {
  for (Index i = 0; i < ngen_; ++i) {
    if (moduli_[i] != 0) canonical[i] = mod_floor(canonical[i], moduli_[i]);
  }
  return GroupElement{std::move(canonical)};
}

GroupElement FgAbelianGroup::element(const IntVec& presentation_coords) const {
  require(presentation_coords.size() == ngen_, ErrorKind::DimensionMismatch,
          "element coordinate length disagrees with the group");
  return reduce(transform_ * presentation_coords);
}

GroupElement FgAbelianGroup::zero() const {
  return GroupElement{IntVec::Zero(ngen_)};
}

GroupElement FgAbelianGroup::add(const GroupElement& a,
                                 const GroupElement& b) const {
  return reduce(a.coords + b.coords);
}

GroupElement FgAbelianGroup::sub(const GroupElement& a,
                                 const GroupElement& b) const {
  return reduce(a.coords - b.coords);
}

GroupElement FgAbelianGroup::neg(const GroupElement& a) const {
  return reduce(-a.coords);
}

GroupElement FgAbelianGroup::scale(const Int& n, const GroupElement& a) const {
  return reduce(n * a.coords);
}

IntMat FgAbelianGroup::augmented_columns(
    std::span<const GroupElement> gens) const {
  Index torsion_cols = 0;
  for (Index i = 0; i < ngen_; ++i)
    if (moduli_[i] != 0) ++torsion_cols;
  IntMat a = IntMat::Zero(ngen_, static_cast<Index>(gens.size()) + torsion_cols);
  Index c = 0;
  for (const GroupElement& g : gens) {
    require(g.coords.size() == ngen_, ErrorKind::DimensionMismatch,
            "generator coordinate length disagrees with the group");
    a.col(c++) = g.coords;
  }
  for (Index i = 0; i < ngen_; ++i) {
    if (moduli_[i] != 0) {
      a(i, c) = moduli_[i];
      ++c;
    }
  }
  return a;
}

std::optional<IntVec> FgAbelianGroup::subgroup_membership(
    const GroupElement& x, std::span<const GroupElement> gens) const {
  require(x.coords.size() == ngen_, ErrorKind::DimensionMismatch,
          "element coordinate length disagrees with the group");
  IntMat a = augmented_columns(gens);
  auto z = solve_integer(a, x.coords);
  if (!z) return std::nullopt;
  return IntVec(z->head(static_cast<Index>(gens.size())));
}

bool FgAbelianGroup::is_torsion_quotient(
    std::span<const GroupElement> gens) const {
  return rank(augmented_columns(gens)) == ngen_;
}

std::vector<Int> FgAbelianGroup::quotient_invariants(
    std::span<const GroupElement> gens) const {
  FgAbelianGroup q = from_relations(ngen_, augmented_columns(gens));
  std::vector<Int> out = q.invariant_factors();
  for (Index i = 0; i < q.free_rank(); ++i) out.push_back(0);
  return out;
}

std::optional<std::pair<Int, IntVec>> FgAbelianGroup::minimal_positive_multiple(
    const GroupElement& x, std::span<const GroupElement> gens) const {
  require(x.coords.size() == ngen_, ErrorKind::DimensionMismatch,
          "element coordinate length disagrees with the group");
  FgAbelianGroup q = from_relations(ngen_, augmented_columns(gens));
  GroupElement y = q.element(x.coords);
  Int n = 1;
  for (Index i = 0; i < q.ngen_; ++i) {
    if (y.coords[i] == 0) continue;
    if (q.moduli_[i] == 0) return std::nullopt;
    Int g;
    mpz_gcd(g.get_mpz_t(), q.moduli_[i].get_mpz_t(), y.coords[i].get_mpz_t());
    n = lcm_int(n, q.moduli_[i] / g);
  }
  auto coeffs = subgroup_membership(scale(n, x), gens);
  internal_check(coeffs.has_value(),
                 "minimal_positive_multiple: witness must exist");
  return std::make_pair(std::move(n), std::move(*coeffs));
}

bool operator==(const FgAbelianGroup& a, const FgAbelianGroup& b) {
  if (a.ngen_ != b.ngen_) return false;
  if (a.relations_.rows() != b.relations_.rows() ||
      a.relations_.cols() != b.relations_.cols())
    return false;
  for (Index i = 0; i < a.relations_.rows(); ++i)
    for (Index j = 0; j < a.relations_.cols(); ++j)
      if (a.relations_(i, j) != b.relations_(i, j)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Hilbert bases

void DiophantineSystem::validate() const {
  require(nvars >= 0, ErrorKind::Validation, "nvars must be nonnegative");
  require(eq.cols() == nvars || eq.size() == 0, ErrorKind::Validation,
          "system matrix must have nvars columns");
  require(static_cast<Index>(moduli.size()) == eq.rows(), ErrorKind::Validation,
          "one modulus entry per row required");
  for (const auto& m : moduli) {
    if (m) require(*m >= 1, ErrorKind::Validation, "moduli must be >= 1");
  }
}

namespace {

// Contejean–Devie breadth-first completion for B v = 0, v in N^n.
std::vector<IntVec> contejean_devie(const IntMat& b) {
  const Index n = b.cols();
  std::vector<IntVec> basis;
  auto dominated = [&](const IntVec& t) {
    for (const IntVec& h : basis)
      if (pointwise_le(h, t)) return true;
    return false;
  };

  // Frontier maps candidate -> image B*candidate.
  std::map<IntVec, IntVec, LexLess> frontier;
  for (Index i = 0; i < n; ++i) {
    IntVec e = IntVec::Zero(n);
    e[i] = 1;
    frontier.emplace(std::move(e), IntVec(b.col(i)));
  }

  while (!frontier.empty()) {
    std::map<IntVec, IntVec, LexLess> next;
    for (const auto& [t, vt] : frontier) {
      if (dominated(t)) continue;
      if (vec_is_zero(vt)) {
        basis.push_back(t);
        continue;
      }
      for (Index i = 0; i < n; ++i) {
        Int dp = vt.dot(b.col(i));
        if (dp >= 0) continue;
        IntVec ext = t;
        ext[i] += 1;
        if (dominated(ext)) continue;
        if (next.find(ext) == next.end()) next.emplace(ext, IntVec(vt + b.col(i)));
      }
    }
    frontier = std::move(next);
  }

  // The completion already yields minimal solutions; keep a cheap antichain
  // sweep so the output contract never depends on that argument.
  std::vector<IntVec> minimal;
  for (const IntVec& v : basis) {
    bool keep = true;
    for (const IntVec& w : basis) {
      if (&w == &v) continue;
      if (pointwise_le(w, v) && !vec_eq(w, v)) {
        keep = false;
        break;
      }
    }
    if (keep) minimal.push_back(v);
  }
  std::sort(minimal.begin(), minimal.end(), LexLess{});
  minimal.erase(std::unique(minimal.begin(), minimal.end(), vec_eq),
                minimal.end());
  return minimal;
}

}  // namespace

std::vector<IntVec> hilbert_basis(const DiophantineSystem& sys) {
  sys.validate();
  const Index rows = sys.eq.rows();
  Index slacks = 0;
  for (const auto& m : sys.moduli)
    if (m) ++slacks;

  // Congruence rows get their coefficients reduced into [0, m) and one slack
  // column with coefficient -m; the slack value is determined by the
  // projected solution, so projecting preserves minimality.
  IntMat b = IntMat::Zero(rows, sys.nvars + slacks);
  Index slack = sys.nvars;
  for (Index i = 0; i < rows; ++i) {
    if (sys.moduli[static_cast<size_t>(i)]) {
      const Int& m = *sys.moduli[static_cast<size_t>(i)];
      for (Index j = 0; j < sys.nvars; ++j)
        b(i, j) = mod_floor(sys.eq(i, j), m);
      b(i, slack) = -m;
      ++slack;
    } else {
      for (Index j = 0; j < sys.nvars; ++j) b(i, j) = sys.eq(i, j);
    }
  }

  std::vector<IntVec> lifted = contejean_devie(b);
  std::vector<IntVec> out;
  out.reserve(lifted.size());
  for (const IntVec& v : lifted) {
    IntVec head = v.head(sys.nvars);
    if (!vec_is_zero(head)) out.push_back(std::move(head));
  }
  std::sort(out.begin(), out.end(), LexLess{});
  out.erase(std::unique(out.begin(), out.end(), vec_eq), out.end());
  return out;
}

}  // namespace potions
