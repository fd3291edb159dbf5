#include "potions/numeric.hpp"

#include "potions/errors.hpp"

namespace potions {

const Int& Fp::same(const Fp& other) const {
  internal_check(p_ == other.p_, "Fp arithmetic across different moduli");
  return p_;
}

Fp Fp::inverse() const {
  Int r;
  int ok = mpz_invert(r.get_mpz_t(), v_.get_mpz_t(), p_.get_mpz_t());
  require(ok != 0, ErrorKind::ZeroElement, "Fp: inverse of a noninvertible element");
  return Fp(r, p_);
}

}  // namespace potions
