#include "potions/errors.hpp"

namespace potions {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::FamilyMismatch: return "FamilyMismatch";
    case ErrorKind::NonMonomialFamily: return "NonMonomialFamily";
    case ErrorKind::NotRelevant: return "NotRelevant";
    case ErrorKind::NoWitness: return "NoWitness";
    case ErrorKind::NotDegreeZero: return "NotDegreeZero";
    case ErrorKind::TwistObstruction: return "TwistObstruction";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::ExpressBound: return "ExpressBound";
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace potions
