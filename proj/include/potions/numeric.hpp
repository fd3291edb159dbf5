#pragma once

// Scalar layer: arbitrary-precision integers/rationals (GMP) and prime
// fields, plus the Eigen glue that lets dense matrices carry mpz_class.

#include <gmpxx.h>

#include <Eigen/Core>
#include <string>
#include <vector>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpz_class;
  using Nested = mpz_class;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 30,
    MulCost = 50
  };
};

}  // namespace Eigen

namespace potions {

using Int = mpz_class;
using Rat = mpq_class;
using Index = Eigen::Index;

using IntMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

inline IntVec make_vec(std::initializer_list<long> xs) {
  IntVec v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (long x : xs) v[i++] = x;
  return v;
}

inline IntMat make_mat(Index rows, Index cols, std::initializer_list<long> xs) {
  IntMat m(rows, cols);
  Index i = 0;
  for (long x : xs) {
    m(i / cols, i % cols) = x;
    ++i;
  }
  return m;
}

inline bool vec_eq(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

inline bool vec_is_zero(const IntVec& a) {
  for (Index i = 0; i < a.size(); ++i)
    if (a[i] != 0) return false;
  return true;
}

// Lexicographic order; shorter vectors sort first.
inline bool lex_less(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

struct LexLess {
  bool operator()(const IntVec& a, const IntVec& b) const {
    return lex_less(a, b);
  }
};

// a ≤ b componentwise.
inline bool pointwise_le(const IntVec& a, const IntVec& b) {
  for (Index i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// Residue of a modulo m in [0, m); m ≥ 1.
inline Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// ceil(a/b) for b > 0.
inline Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline std::string to_string(const Int& x) { return x.get_str(); }

// The field of integers modulo a prime; values kept in [0, p).
class Fp {
 public:
  Fp(Int value, Int p) : p_(std::move(p)), v_(mod_floor(value, p_)) {}

  const Int& value() const { return v_; }
  const Int& modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    return Fp(a.v_ + b.v_, a.same(b));
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    return Fp(a.v_ - b.v_, a.same(b));
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    return Fp(a.v_ * b.v_, a.same(b));
  }
  Fp operator-() const { return Fp(-v_, p_); }

  Fp inverse() const;
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }

  friend bool operator==(const Fp& a, const Fp& b) {
    return a.v_ == b.v_ && a.p_ == b.p_;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
  friend bool operator<(const Fp& a, const Fp& b) { return a.v_ < b.v_; }

 private:
  const Int& same(const Fp& other) const;

  Int p_;
  Int v_;
};

// Coefficient-field trait functions shared by Rat and Fp, so the polynomial
// layer can stay generic. The "like" argument carries the field data (the
// modulus for Fp; nothing for Rat).
namespace coeff {

inline bool is_zero(const Rat& x) { return x == 0; }
inline bool is_zero(const Fp& x) { return x.is_zero(); }

inline Rat zero_like(const Rat&) { return Rat(0); }
inline Fp zero_like(const Fp& like) { return Fp(0, like.modulus()); }

inline Rat one_like(const Rat&) { return Rat(1); }
inline Fp one_like(const Fp& like) { return Fp(1, like.modulus()); }

inline Rat from_int(const Rat&, const Int& n) { return Rat(n); }
inline Fp from_int(const Fp& like, const Int& n) {
  return Fp(n, like.modulus());
}

inline Rat inv(const Rat& x) { return Rat(1) / x; }
inline Fp inv(const Fp& x) { return x.inverse(); }

inline bool less(const Rat& a, const Rat& b) { return a < b; }
inline bool less(const Fp& a, const Fp& b) { return a < b; }

inline std::string to_string(const Rat& x) { return x.get_str(); }
inline std::string to_string(const Fp& x) { return x.value().get_str(); }

}  // namespace coeff

}  // namespace potions
