#pragma once

// Brute-force reference engines. These ground the derived expectations and
// completeness properties in the test suites; the CLI never calls them.

#include <vector>

#include "potions/zlattice.hpp"

namespace potions::oracle {

// Componentwise bound on enumerated exponent vectors.
struct BoxBound {
  Int b = 6;

  void validate() const {
    require(b >= 1, ErrorKind::Validation, "box bound must be >= 1");
  }
};

// All solutions of the system inside {0,...,b}^nvars, lex-sorted.
std::vector<IntVec> enumerate_solutions(const DiophantineSystem& sys,
                                        BoxBound bound);

// The componentwise-minimal nonzero vectors of the input.
std::vector<IntVec> minimal_elements(const std::vector<IntVec>& vs);

}  // namespace potions::oracle
