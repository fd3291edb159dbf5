#pragma once

// Polynomial rings graded by a finitely generated abelian group: degrees,
// homogeneity, families of homogeneous elements, and relevance certificates.
// Everything is templated on the coefficient field K (Rat or Fp).

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "potions/errors.hpp"
#include "potions/numeric.hpp"
#include "potions/zlattice.hpp"

namespace potions {

// Sparse multivariate polynomial with exponent vectors in N^nvars and
// nonzero coefficients, kept in lexicographic term order.
template <typename K>
class Polynomial {
 public:
  using TermMap = std::map<IntVec, K, LexLess>;

  explicit Polynomial(Index nvars) : nvars_(nvars) {}

  static Polynomial zero(Index nvars) { return Polynomial(nvars); }

  static Polynomial monomial(IntVec exps, K c) {
    Polynomial p(exps.size());
    if (!coeff::is_zero(c)) p.terms_.emplace(std::move(exps), std::move(c));
    return p;
  }

  static Polynomial constant(Index nvars, K c) {
    return monomial(IntVec::Zero(nvars), std::move(c));
  }

  static Polynomial variable(Index nvars, Index i, const K& like) {
    require(i >= 0 && i < nvars, ErrorKind::Validation, "variable index");
    IntVec e = IntVec::Zero(nvars);
    e[i] = 1;
    return monomial(std::move(e), coeff::one_like(like));
  }

  Index nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }

  // Exponents and coefficient of the unique term.
  const IntVec& monomial_exponents() const {
    require(is_monomial(), ErrorKind::Internal, "not a monomial");
    return terms_.begin()->first;
  }
  const K& monomial_coeff() const {
    require(is_monomial(), ErrorKind::Internal, "not a monomial");
    return terms_.begin()->second;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_arity(a, b);
    Polynomial r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a + (-b);
  }

  Polynomial operator-() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_arity(a, b);
    Polynomial r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(IntVec(ea + eb), ca * cb);
    return r;
  }

  Polynomial pow(const Int& n) const {
    require(n >= 0, ErrorKind::Validation, "negative power");
    if (terms_.empty()) {
      require(n > 0, ErrorKind::ZeroElement, "0^0 has no coefficient field");
      return *this;
    }
    Polynomial r = constant(nvars_, coeff::one_like(terms_.begin()->second));
    for (Int i = 0; i < n; ++i) r = r * (*this);
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    auto it = a.terms_.begin(), jt = b.terms_.begin();
    for (; it != a.terms_.end(); ++it, ++jt) {
      if (!vec_eq(it->first, jt->first) || !(it->second == jt->second))
        return false;
    }
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) {
    return !(a == b);
  }

  // Compare by leading terms (largest exponent vector first), so families
  // sort the way they read: x0 before x1, x0*x1 before its divisors.
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    auto it = a.terms_.rbegin(), jt = b.terms_.rbegin();
    for (; it != a.terms_.rend() && jt != b.terms_.rend(); ++it, ++jt) {
      if (lex_less(jt->first, it->first)) return true;
      if (lex_less(it->first, jt->first)) return false;
      if (coeff::less(it->second, jt->second)) return true;
      if (coeff::less(jt->second, it->second)) return false;
    }
    return it == a.terms_.rend() && jt != b.terms_.rend();
  }

  std::string to_string(std::span<const std::string> names) const;

 private:
  static void check_arity(const Polynomial& a, const Polynomial& b) {
    require(a.nvars_ == b.nvars_, ErrorKind::DimensionMismatch,
            "polynomials over different variable counts");
  }

  void add_term(const IntVec& e, const K& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (!coeff::is_zero(c)) terms_.emplace(e, c);
      return;
    }
    it->second = it->second + c;
    if (coeff::is_zero(it->second)) terms_.erase(it);
  }

  Index nvars_;
  TermMap terms_;
};

template <typename K>
std::string Polynomial<K>::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (Index i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[static_cast<size_t>(i)];
      if (e[i] != 1) mono += "^" + e[i].get_str();
    }
    std::string cs = coeff::to_string(c);
    std::string term;
    if (mono.empty()) {
      term = cs;
    } else if (cs == "1") {
      term = mono;
    } else if (cs == "-1") {
      term = "-" + mono;
    } else {
      term = cs + "*" + mono;
    }
    if (!first && term[0] != '-') out += " + ";
    if (!first && term[0] == '-') {
      out += " - ";
      term = term.substr(1);
    }
    out += term;
    first = false;
  }
  return out;
}

// A polynomial ring over K with a degree in the grading group attached to
// each variable.
template <typename K>
class GradedRing {
 public:
  GradedRing(FgAbelianGroup group, std::vector<std::string> var_names,
             std::vector<GroupElement> degrees, K sample)
      : group_(std::move(group)),
        names_(std::move(var_names)),
        degrees_(std::move(degrees)),
        sample_(std::move(sample)) {
    require(names_.size() == degrees_.size(), ErrorKind::Validation,
            "one degree per variable");
    for (const auto& d : degrees_)
      require(d.coords.size() == group_.ngen(), ErrorKind::DimensionMismatch,
              "degree length vs grading group");
  }

  Index nvars() const { return static_cast<Index>(names_.size()); }
  const std::vector<std::string>& var_names() const { return names_; }
  const std::string& var_name(Index i) const {
    return names_[static_cast<size_t>(i)];
  }
  const GroupElement& var_degree(Index i) const {
    return degrees_[static_cast<size_t>(i)];
  }
  const FgAbelianGroup& group() const { return group_; }
  // A coefficient carrying the field data (the modulus for Fp).
  const K& sample() const { return sample_; }

  K coeff_one() const { return coeff::one_like(sample_); }

  Polynomial<K> var(Index i) const {
    return Polynomial<K>::variable(nvars(), i, sample_);
  }
  Polynomial<K> constant(const Int& n) const {
    return Polynomial<K>::constant(nvars(), coeff::from_int(sample_, n));
  }

  GroupElement monomial_degree(const IntVec& exps) const {
    require(exps.size() == nvars(), ErrorKind::DimensionMismatch,
            "exponent length vs variable count");
    GroupElement d = group_.zero();
    for (Index i = 0; i < nvars(); ++i)
      if (exps[i] != 0) d = group_.add(d, group_.scale(exps[i], degrees_[static_cast<size_t>(i)]));
    return d;
  }

  friend bool operator==(const GradedRing& a, const GradedRing& b) {
    return a.group_ == b.group_ && a.names_ == b.names_ &&
           a.degrees_ == b.degrees_;
  }

 private:
  FgAbelianGroup group_;
  std::vector<std::string> names_;
  std::vector<GroupElement> degrees_;
  K sample_;
};

// Degree of a nonzero homogeneous polynomial.
template <typename K>
GroupElement degree_of(const GradedRing<K>& r, const Polynomial<K>& p) {
  require(!p.is_zero(), ErrorKind::ZeroElement, "zero polynomial has no degree");
  bool have = false;
  GroupElement deg = r.group().zero();
  for (const auto& [e, c] : p.terms()) {
    GroupElement d = r.monomial_degree(e);
    if (!have) {
      deg = d;
      have = true;
    } else {
      require(d == deg, ErrorKind::NotHomogeneous,
              "terms of different degrees");
    }
  }
  return deg;
}

template <typename K>
bool is_homogeneous(const GradedRing<K>& r, const Polynomial<K>& p) {
  if (p.is_zero()) return true;
  try {
    (void)degree_of(r, p);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotHomogeneous) return false;
    throw;
  }
}

// a ⌣ b: both homogeneous of the same degree.
template <typename K>
bool smile(const GradedRing<K>& r, const Polynomial<K>& a,
           const Polynomial<K>& b) {
  return degree_of(r, a) == degree_of(r, b);
}

// A finite family of nonzero homogeneous elements, canonically sorted and
// deduplicated. The empty family is allowed (its potion is the whole
// degree-zero subring of the ring itself).
template <typename K>
class HomFamily {
 public:
  HomFamily(const GradedRing<K>& r, std::vector<Polynomial<K>> elements)
      : nvars_(r.nvars()) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()),
                   elements.end());
    for (auto& p : elements) {
      require(!p.is_zero(), ErrorKind::ZeroElement, "zero element in family");
      degrees_.push_back(degree_of(r, p));
      monomial_.push_back(p.is_monomial());
      elements_.push_back(std::move(p));
    }
  }

  Index size() const { return static_cast<Index>(elements_.size()); }
  bool empty() const { return elements_.empty(); }
  const Polynomial<K>& element(Index i) const {
    return elements_[static_cast<size_t>(i)];
  }
  const GroupElement& degree(Index i) const {
    return degrees_[static_cast<size_t>(i)];
  }
  bool is_monomial(Index i) const { return monomial_[static_cast<size_t>(i)]; }
  bool all_monomial() const {
    for (bool m : monomial_)
      if (!m) return false;
    return true;
  }
  const std::vector<GroupElement>& degrees() const { return degrees_; }

  // Index of an element equal to p, or -1.
  Index find(const Polynomial<K>& p) const {
    for (Index i = 0; i < size(); ++i)
      if (element(i) == p) return i;
    return -1;
  }

  bool contains_all(const HomFamily& other) const {
    for (Index i = 0; i < other.size(); ++i)
      if (find(other.element(i)) < 0) return false;
    return true;
  }

  friend bool operator==(const HomFamily& a, const HomFamily& b) {
    return a.elements_ == b.elements_;
  }
  friend bool operator!=(const HomFamily& a, const HomFamily& b) {
    return !(a == b);
  }
  friend bool operator<(const HomFamily& a, const HomFamily& b) {
    return a.elements_ < b.elements_;
  }

  std::string to_string(std::span<const std::string> names) const {
    std::string out = "{";
    for (Index i = 0; i < size(); ++i) {
      if (i > 0) out += ", ";
      out += element(i).to_string(names);
    }
    return out + "}";
  }

 private:
  Index nvars_;
  std::vector<Polynomial<K>> elements_;
  std::vector<GroupElement> degrees_;
  std::vector<bool> monomial_;
};

template <typename K>
HomFamily<K> family_union(const GradedRing<K>& r, const HomFamily<K>& f,
                          const HomFamily<K>& g) {
  std::vector<Polynomial<K>> all;
  for (Index i = 0; i < f.size(); ++i) all.push_back(f.element(i));
  for (Index i = 0; i < g.size(); ++i) all.push_back(g.element(i));
  return HomFamily<K>(r, std::move(all));
}

struct RelevanceCertificate {
  bool relevant = false;
  bool very_relevant = false;
  // True when the degree group below is exactly the group generated by all
  // homogeneous divisors; false means a sound underapproximation was used
  // and relevant = false is inconclusive.
  bool exact = true;
  std::vector<GroupElement> degree_group_gens;
  std::vector<Int> quotient_invariants;
};

// Generators of the subgroup spanned by degrees of homogeneous divisors.
// Monomial elements contribute the degrees of their variables; non-monomial
// elements contribute only their own degree and clear the exactness flag.
template <typename K>
std::pair<std::vector<GroupElement>, bool> divisor_degree_group(
    const GradedRing<K>& r, const HomFamily<K>& f) {
  std::vector<GroupElement> gens;
  bool exact = true;
  for (Index i = 0; i < f.size(); ++i) {
    if (f.is_monomial(i)) {
      const IntVec& e = f.element(i).monomial_exponents();
      for (Index j = 0; j < e.size(); ++j)
        if (e[j] > 0) gens.push_back(r.var_degree(j));
    } else {
      gens.push_back(f.degree(i));
      exact = false;
    }
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return {std::move(gens), exact};
}

template <typename K>
RelevanceCertificate is_relevant(const GradedRing<K>& r, const HomFamily<K>& f) {
  RelevanceCertificate cert;
  auto [gens, exact] = divisor_degree_group(r, f);
  cert.exact = exact;
  cert.degree_group_gens = gens;
  const FgAbelianGroup& m = r.group();
  cert.relevant = m.is_torsion_quotient(gens);
  cert.quotient_invariants = m.quotient_invariants(gens);
  if (cert.relevant) {
    bool same = true;
    for (const GroupElement& d : f.degrees())
      if (!m.subgroup_membership(d, gens)) same = false;
    for (const GroupElement& d : gens)
      if (!m.subgroup_membership(d, f.degrees())) same = false;
    cert.very_relevant = same;
  }
  return cert;
}

}  // namespace potions
