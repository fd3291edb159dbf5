#pragma once

#include <stdexcept>
#include <string>

namespace potions {

enum class ErrorKind {
  NotHomogeneous,    // element mixes degrees
  ZeroElement,       // zero has no degree / not allowed in a family
  DimensionMismatch, // vector length disagrees with group or ring
  FamilyMismatch,    // fractions over incompatible families
  NonMonomialFamily, // operation requires a family of monomials
  NotRelevant,       // family fails its relevance certificate
  NoWitness,         // no positive multiple of the degree lies in the span
  NotDegreeZero,     // fraction expected to have degree zero
  TwistObstruction,  // chart degrees do not generate the whole group
  DegreeMismatch,    // morphism image has the wrong degree
  ExpressBound,      // membership search exhausted its degree bound
  Validation,        // malformed input (CLI / system shapes)
  Internal           // broken internal invariant
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  const char* kind_name() const { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool cond, ErrorKind kind, const std::string& message) {
  if (!cond) fail(kind, message);
}

// Internal invariants; violations map to the CLI's "never expected" exit.
inline void internal_check(bool cond, const std::string& message) {
  if (!cond) fail(ErrorKind::Internal, message);
}

}  // namespace potions
