#pragma once

// Batch problem descriptions: the line-oriented input format, its canonical
// JSON echo, and the executor turning requests into a result document.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "potions/atlas.hpp"

namespace potions {

using Json = nlohmann::ordered_json;

enum class RequestKind {
  Check,
  Potion,
  Atlas,
  Twist,
  VerifyMagic,
  Hilbert,
  Functorial,
};

struct Request {
  RequestKind kind = RequestKind::Check;
  std::vector<std::string> families;
  std::string morphism;     // functorial
  IntVec alpha;             // twist
  DiophantineSystem system; // hilbert

  std::string to_string() const;
  friend bool operator==(const Request& a, const Request& b);
  friend bool operator!=(const Request& a, const Request& b) {
    return !(a == b);
  }
};

struct ProblemSpec {
  Index rank = 0;
  std::vector<Int> torsion;
  bool rational_coefficients = true;
  Int prime = 0;
  std::vector<std::string> var_names;
  std::vector<IntVec> var_degrees;
  std::vector<std::pair<std::string, std::vector<Polynomial<Rat>>>> families;
  // One image per ring variable, in variable order.
  std::vector<std::pair<std::string, std::vector<Polynomial<Rat>>>> morphisms;
  std::vector<Request> requests;

  FgAbelianGroup group() const;
  const std::vector<Polynomial<Rat>>* find_family(const std::string& name) const;
  const std::vector<Polynomial<Rat>>* find_morphism(const std::string& name) const;

  friend bool operator==(const ProblemSpec& a, const ProblemSpec& b);
  friend bool operator!=(const ProblemSpec& a, const ProblemSpec& b) {
    return !(a == b);
  }
};

// Conventional infix over the named variables: integers, +, -, *, ^, parens.
Polynomial<Rat> parse_polynomial(const std::string& text,
                                 const std::vector<std::string>& names);

// Line-oriented problem text; throws Error(Validation) with a line diagnostic.
ProblemSpec parse_problem(std::istream& in);
ProblemSpec parse_problem(const std::string& text);

Json problem_to_json(const ProblemSpec& spec);
// Inverse of problem_to_json; throws Error(Validation) with a field path.
ProblemSpec problem_from_json(const Json& j);

struct RunOptions {
  long bound = 12;
  bool echo_problem = true;
};

struct RunOutcome {
  Json document;
  // 0 on success, 3 when some request failed a mathematical precondition
  // (the typed error is recorded in the document).
  int exit_code = 0;
};

RunOutcome run_problem(const ProblemSpec& spec, const RunOptions& opts = {});

// Deterministic indented rendering of a result document.
std::string render_text(const Json& document);

const char* error_kind_name(ErrorKind kind);

}  // namespace potions
