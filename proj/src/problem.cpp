#include "potions/problem.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace potions {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), is_ident_char);
}

bool is_integer_token(const std::string& s) {
  size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + i, s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

Int parse_int_token(const std::string& s, const std::string& what) {
  require(is_integer_token(s), ErrorKind::Validation,
          what + ": expected an integer, got '" + s + "'");
  return Int(s);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string pad_separators(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == ';') {
      out += " ; ";
    } else {
      out += c;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// polynomial expressions

class ExprParser {
 public:
  ExprParser(const std::string& text, const std::vector<std::string>& names)
      : text_(text), names_(names) {}

  Polynomial<Rat> parse() {
    auto p = expr();
    skip_ws();
    if (pos_ != text_.size())
      die("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  Index nvars() const { return static_cast<Index>(names_.size()); }

  [[noreturn]] void die(const std::string& msg) const {
    fail(ErrorKind::Validation, "expression '" + trim(text_) + "': " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial<Rat> expr() {
    auto p = term();
    while (true) {
      if (eat('+')) {
        p = p + term();
      } else if (eat('-')) {
        p = p - term();
      } else {
        return p;
      }
    }
  }

  Polynomial<Rat> term() {
    auto p = factor();
    while (eat('*')) p = p * factor();
    return p;
  }

  Polynomial<Rat> factor() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '-') {
      ++pos_;
      return Polynomial<Rat>::constant(nvars(), Rat(-1)) * factor();
    }
    auto base = atom();
    if (eat('^')) return base.pow(integer_literal());
    return base;
  }

  Polynomial<Rat> atom() {
    skip_ws();
    if (pos_ == text_.size()) die("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto p = expr();
      if (!eat(')')) die("missing ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
      return Polynomial<Rat>::constant(nvars(), Rat(integer_literal()));
    if (is_ident_start(c)) {
      std::string id;
      while (pos_ < text_.size() && is_ident_char(text_[pos_]))
        id += text_[pos_++];
      for (Index i = 0; i < nvars(); ++i)
        if (names_[static_cast<size_t>(i)] == id)
          return Polynomial<Rat>::variable(nvars(), i, Rat(1));
      die("unknown variable '" + id + "'");
    }
    die("unexpected '" + std::string(1, c) + "'");
  }

  Int integer_literal() {
    skip_ws();
    std::string digits;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      digits += text_[pos_++];
    if (digits.empty()) die("expected an integer");
    return Int(digits);
  }

  const std::string& text_;
  const std::vector<std::string>& names_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// requests

std::string kind_word(RequestKind kind) {
  switch (kind) {
    case RequestKind::Check: return "check";
    case RequestKind::Potion: return "potion";
    case RequestKind::Atlas: return "atlas";
    case RequestKind::Twist: return "twist";
    case RequestKind::VerifyMagic: return "verify-magic";
    case RequestKind::Hilbert: return "hilbert";
    case RequestKind::Functorial: return "functorial";
  }
  fail(ErrorKind::Internal, "unhandled request kind");
}

std::string family_name_token(const std::string& tok) {
  require(is_identifier(tok), ErrorKind::Validation,
          "expected a family name, got '" + tok + "'");
  return tok;
}

// One request in its canonical one-line form, e.g. "check F G",
// "twist alpha 1 0 ; F G", "hilbert vars 3 ; 2 1 -2 = 0 ; 1 1 0 mod 2".
Request parse_request_line(const std::string& line, Index ngen) {
  auto toks = split_ws(pad_separators(line));
  require(!toks.empty(), ErrorKind::Validation, "empty request");
  Request req;
  const std::string& cmd = toks[0];

  auto take_families = [&](size_t from, size_t at_least) {
    for (size_t t = from; t < toks.size(); ++t)
      req.families.push_back(family_name_token(toks[t]));
    require(req.families.size() >= at_least, ErrorKind::Validation,
            "'" + cmd + "' needs at least " + std::to_string(at_least) +
                " family name(s)");
  };

  if (cmd == "check" || cmd == "potion" || cmd == "atlas") {
    req.kind = cmd == "check"    ? RequestKind::Check
               : cmd == "potion" ? RequestKind::Potion
                                 : RequestKind::Atlas;
    take_families(1, 1);
  } else if (cmd == "verify-magic") {
    req.kind = RequestKind::VerifyMagic;
    take_families(1, 2);
    require(req.families.size() == 2, ErrorKind::Validation,
            "'verify-magic' takes exactly two family names");
  } else if (cmd == "twist") {
    req.kind = RequestKind::Twist;
    require(toks.size() >= 2 && toks[1] == "alpha", ErrorKind::Validation,
            "'twist' expects 'alpha <integers> ; <families>'");
    std::vector<Int> alpha;
    size_t t = 2;
    while (t < toks.size() && toks[t] != ";")
      alpha.push_back(parse_int_token(toks[t++], "twist degree"));
    require(t < toks.size(), ErrorKind::Validation,
            "'twist' expects ';' before the family names");
    require(static_cast<Index>(alpha.size()) == ngen, ErrorKind::Validation,
            "twist degree has " + std::to_string(alpha.size()) +
                " entries, the grading group needs " + std::to_string(ngen));
    req.alpha = IntVec(ngen);
    for (Index i = 0; i < ngen; ++i) req.alpha[i] = alpha[static_cast<size_t>(i)];
    take_families(t + 1, 1);
  } else if (cmd == "hilbert") {
    req.kind = RequestKind::Hilbert;
    require(toks.size() >= 3 && toks[1] == "vars", ErrorKind::Validation,
            "'hilbert' expects 'vars <n> [; <row> ...]'");
    Int n = parse_int_token(toks[2], "variable count");
    require(n >= 1, ErrorKind::Validation, "variable count must be positive");
    const Index nv = static_cast<Index>(n.get_si());
    req.system.nvars = nv;
    std::vector<IntVec> rows;
    size_t t = 3;
    if (t < toks.size())
      require(toks[t] == ";", ErrorKind::Validation,
              "expected ';' before a constraint row");
    while (t < toks.size()) {
      ++t;  // skip ';'
      IntVec row(nv);
      for (Index i = 0; i < nv; ++i) {
        require(t < toks.size(), ErrorKind::Validation,
                "constraint row needs " + std::to_string(nv) + " coefficients");
        row[i] = parse_int_token(toks[t++], "row coefficient");
      }
      require(t < toks.size(), ErrorKind::Validation,
              "constraint row must end with '= 0' or 'mod <d>'");
      if (toks[t] == "=") {
        ++t;
        require(t < toks.size() && toks[t] == "0", ErrorKind::Validation,
                "equations must be written '= 0'");
        ++t;
        req.system.moduli.push_back(std::nullopt);
      } else if (toks[t] == "mod") {
        ++t;
        require(t < toks.size(), ErrorKind::Validation, "'mod' needs a modulus");
        req.system.moduli.push_back(parse_int_token(toks[t++], "modulus"));
      } else {
        fail(ErrorKind::Validation,
             "constraint row must end with '= 0' or 'mod <d>'");
      }
      rows.push_back(std::move(row));
      if (t < toks.size())
        require(toks[t] == ";", ErrorKind::Validation,
                "expected ';' between constraint rows");
    }
    req.system.eq = IntMat(static_cast<Index>(rows.size()), nv);
    for (Index i = 0; i < static_cast<Index>(rows.size()); ++i)
      req.system.eq.row(i) = rows[static_cast<size_t>(i)].transpose();
  } else if (cmd == "functorial") {
    req.kind = RequestKind::Functorial;
    require(toks.size() >= 2 && is_identifier(toks[1]), ErrorKind::Validation,
            "'functorial' expects a morphism name");
    req.morphism = toks[1];
    take_families(2, 1);
  } else {
    fail(ErrorKind::Validation, "unknown request '" + cmd + "'");
  }
  return req;
}

bool mat_eq(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace

std::string Request::to_string() const {
  std::string out = kind_word(kind);
  if (kind == RequestKind::Twist) {
    out += " alpha";
    for (Index i = 0; i < alpha.size(); ++i)
      out += " " + potions::to_string(alpha[i]);
    out += " ;";
  } else if (kind == RequestKind::Hilbert) {
    out += " vars " + std::to_string(system.nvars);
    for (Index i = 0; i < system.eq.rows(); ++i) {
      out += " ;";
      for (Index j = 0; j < system.eq.cols(); ++j)
        out += " " + potions::to_string(system.eq(i, j));
      const auto& m = system.moduli[static_cast<size_t>(i)];
      out += m ? " mod " + potions::to_string(*m) : " = 0";
    }
  } else if (kind == RequestKind::Functorial) {
    out += " " + morphism;
  }
  for (const auto& f : families) out += " " + f;
  return out;
}

bool operator==(const Request& a, const Request& b) {
  return a.kind == b.kind && a.families == b.families &&
         a.morphism == b.morphism && vec_eq(a.alpha, b.alpha) &&
         mat_eq(a.system.eq, b.system.eq) &&
         a.system.moduli == b.system.moduli &&
         a.system.nvars == b.system.nvars;
}

FgAbelianGroup ProblemSpec::group() const {
  return FgAbelianGroup::free_and_torsion(rank, torsion);
}

const std::vector<Polynomial<Rat>>* ProblemSpec::find_family(
    const std::string& name) const {
  for (const auto& [n, polys] : families)
    if (n == name) return &polys;
  return nullptr;
}

const std::vector<Polynomial<Rat>>* ProblemSpec::find_morphism(
    const std::string& name) const {
  for (const auto& [n, polys] : morphisms)
    if (n == name) return &polys;
  return nullptr;
}

bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  auto named_eq = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].first != y[i].first || x[i].second != y[i].second) return false;
    return true;
  };
  if (a.rank != b.rank || a.torsion != b.torsion ||
      a.rational_coefficients != b.rational_coefficients ||
      a.prime != b.prime || a.var_names != b.var_names)
    return false;
  if (a.var_degrees.size() != b.var_degrees.size()) return false;
  for (size_t i = 0; i < a.var_degrees.size(); ++i)
    if (!vec_eq(a.var_degrees[i], b.var_degrees[i])) return false;
  return named_eq(a.families, b.families) &&
         named_eq(a.morphisms, b.morphisms) && a.requests == b.requests;
}

Polynomial<Rat> parse_polynomial(const std::string& text,
                                 const std::vector<std::string>& names) {
  return ExprParser(text, names).parse();
}

// ---------------------------------------------------------------------------
// problem text

namespace {

struct PendingRequest {
  Request req;
  int line = 0;
};

[[noreturn]] void line_fail(int line, const std::string& msg) {
  fail(ErrorKind::Validation, "line " + std::to_string(line) + ": " + msg);
}

void check_prime(const Int& p) {
  require(p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 32) != 0,
          ErrorKind::Validation,
          "coefficients: " + potions::to_string(p) + " is not a prime");
}

std::string fresh_name(const std::string& tok, const char* what,
                       const std::vector<std::string>& taken) {
  require(is_identifier(tok), ErrorKind::Validation,
          std::string(what) + " name '" + tok + "' is not an identifier");
  require(std::find(taken.begin(), taken.end(), tok) == taken.end(),
          ErrorKind::Validation,
          std::string(what) + " '" + tok + "' is declared twice");
  return tok;
}

void validate_request_names(const ProblemSpec& spec, const Request& req,
                            const std::string& where) {
  for (const auto& f : req.families)
    require(spec.find_family(f) != nullptr, ErrorKind::Validation,
            where + "unknown family '" + f + "'");
  if (req.kind == RequestKind::Functorial)
    require(spec.find_morphism(req.morphism) != nullptr, ErrorKind::Validation,
            where + "unknown morphism '" + req.morphism + "'");
}

}  // namespace

ProblemSpec parse_problem(std::istream& in) {
  ProblemSpec spec;
  bool have_group = false;
  bool have_coefficients = false;
  std::vector<std::string> family_names, morphism_names;
  std::vector<PendingRequest> pending;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    std::istringstream head(line);
    std::string keyword;
    head >> keyword;
    std::string rest = trim(line.substr(keyword.size()));

    try {
      if (keyword == "group") {
        require(!have_group, ErrorKind::Validation,
                "the group is declared twice");
        auto toks = split_ws(rest);
        size_t t = 0;
        bool saw_rank = false;
        while (t < toks.size()) {
          if (toks[t] == "rank") {
            require(!saw_rank && t + 1 < toks.size(), ErrorKind::Validation,
                    "'rank' needs one integer");
            Int r = parse_int_token(toks[t + 1], "rank");
            require(r >= 0, ErrorKind::Validation, "rank must be nonnegative");
            spec.rank = static_cast<Index>(r.get_si());
            saw_rank = true;
            t += 2;
          } else if (toks[t] == "torsion") {
            ++t;
            size_t start = t;
            while (t < toks.size() && is_integer_token(toks[t])) {
              Int d = parse_int_token(toks[t], "torsion factor");
              require(d >= 2, ErrorKind::Validation,
                      "torsion factors must be at least 2");
              spec.torsion.push_back(d);
              ++t;
            }
            require(t > start, ErrorKind::Validation,
                    "'torsion' needs at least one integer");
          } else {
            fail(ErrorKind::Validation, "unexpected '" + toks[t] + "'");
          }
        }
        require(saw_rank, ErrorKind::Validation,
                "group line must state 'rank <n>'");
        have_group = true;
      } else if (keyword == "coefficients") {
        require(!have_coefficients, ErrorKind::Validation,
                "coefficients are declared twice");
        auto toks = split_ws(rest);
        if (toks.size() == 1 && toks[0] == "rationals") {
          spec.rational_coefficients = true;
        } else if (toks.size() == 2 && toks[0] == "prime") {
          spec.rational_coefficients = false;
          spec.prime = parse_int_token(toks[1], "prime");
          check_prime(spec.prime);
        } else {
          fail(ErrorKind::Validation,
               "expected 'rationals' or 'prime <p>'");
        }
        have_coefficients = true;
      } else if (keyword == "var") {
        require(have_group, ErrorKind::Validation,
                "declare the group before variables");
        auto toks = split_ws(rest);
        require(toks.size() >= 2 && toks[1] == "deg", ErrorKind::Validation,
                "expected 'var <name> deg <integers>'");
        spec.var_names.push_back(
            fresh_name(toks[0], "variable", spec.var_names));
        const Index ngen = spec.rank + static_cast<Index>(spec.torsion.size());
        require(static_cast<Index>(toks.size()) - 2 == ngen,
                ErrorKind::Validation,
                "degree of '" + toks[0] + "' needs " + std::to_string(ngen) +
                    " entries");
        IntVec deg(ngen);
        for (Index i = 0; i < ngen; ++i)
          deg[i] = parse_int_token(toks[static_cast<size_t>(i) + 2], "degree");
        spec.var_degrees.push_back(std::move(deg));
      } else if (keyword == "family") {
        auto eq = rest.find('=');
        require(eq != std::string::npos, ErrorKind::Validation,
                "expected 'family <name> = <expressions>'");
        std::string name =
            fresh_name(trim(rest.substr(0, eq)), "family", family_names);
        family_names.push_back(name);
        std::vector<Polynomial<Rat>> polys;
        std::string body = trim(rest.substr(eq + 1));
        if (!body.empty())
          for (const auto& piece : split_on(body, ',')) {
            require(!trim(piece).empty(), ErrorKind::Validation,
                    "family '" + name + "' has an empty expression");
            polys.push_back(parse_polynomial(piece, spec.var_names));
          }
        spec.families.emplace_back(std::move(name), std::move(polys));
      } else if (keyword == "morphism") {
        auto colon = rest.find(':');
        require(colon != std::string::npos, ErrorKind::Validation,
                "expected 'morphism <name> : <var> -> <expression>, ...'");
        std::string name =
            fresh_name(trim(rest.substr(0, colon)), "morphism", morphism_names);
        morphism_names.push_back(name);
        std::vector<Polynomial<Rat>> images;
        std::vector<bool> assigned(spec.var_names.size(), false);
        for (Index i = 0; i < static_cast<Index>(spec.var_names.size()); ++i)
          images.push_back(Polynomial<Rat>::variable(
              static_cast<Index>(spec.var_names.size()), i, Rat(1)));
        for (const auto& piece : split_on(rest.substr(colon + 1), ',')) {
          auto arrow = piece.find("->");
          require(arrow != std::string::npos, ErrorKind::Validation,
                  "morphism entries look like '<var> -> <expression>'");
          std::string var = trim(piece.substr(0, arrow));
          auto at = std::find(spec.var_names.begin(), spec.var_names.end(), var);
          require(at != spec.var_names.end(), ErrorKind::Validation,
                  "unknown variable '" + var + "'");
          size_t idx = static_cast<size_t>(at - spec.var_names.begin());
          require(!assigned[idx], ErrorKind::Validation,
                  "variable '" + var + "' is mapped twice");
          assigned[idx] = true;
          images[idx] = parse_polynomial(piece.substr(arrow + 2),
                                         spec.var_names);
        }
        spec.morphisms.emplace_back(std::move(name), std::move(images));
      } else if (keyword == "request") {
        const Index ngen = spec.rank + static_cast<Index>(spec.torsion.size());
        require(have_group, ErrorKind::Validation,
                "declare the group before requests");
        pending.push_back(PendingRequest{parse_request_line(rest, ngen), lineno});
      } else {
        fail(ErrorKind::Validation, "unknown directive '" + keyword + "'");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Internal) throw;
      line_fail(lineno, e.what());
    }
  }

  require(have_group, ErrorKind::Validation, "input declares no group");
  for (auto& p : pending) {
    try {
      validate_request_names(spec, p.req, "");
    } catch (const Error& e) {
      line_fail(p.line, e.what());
    }
    spec.requests.push_back(std::move(p.req));
  }
  return spec;
}

ProblemSpec parse_problem(const std::string& text) {
  std::istringstream in(text);
  return parse_problem(in);
}

// ---------------------------------------------------------------------------
// JSON echo

namespace {

Json json_int(const Int& v) {
  if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(potions::to_string(v));
}

Json json_vec(const IntVec& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(json_int(v[i]));
  return arr;
}

Json json_witnesses(const std::vector<Witness>& ws) {
  Json arr = Json::array();
  for (const auto& w : ws)
    arr.push_back(Json{{"n", json_int(w.n)}, {"nu", json_vec(w.nu)}});
  return arr;
}

[[noreturn]] void field_fail(const std::string& path, const std::string& msg) {
  fail(ErrorKind::Validation, path + ": " + msg);
}

const Json& need(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    field_fail(path + "." + key, "missing field");
  return j.at(key);
}

Int int_from(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return Int(static_cast<long>(v.get<std::int64_t>()));
  if (v.is_string() && is_integer_token(v.get<std::string>()))
    return Int(v.get<std::string>());
  field_fail(path, "expected an integer");
}

std::string string_from(const Json& v, const std::string& path) {
  if (!v.is_string()) field_fail(path, "expected a string");
  return v.get<std::string>();
}

const Json& array_from(const Json& v, const std::string& path) {
  if (!v.is_array()) field_fail(path, "expected an array");
  return v;
}

}  // namespace

Json problem_to_json(const ProblemSpec& spec) {
  Json j;
  Json factors = Json::array();
  for (const auto& d : spec.torsion) factors.push_back(json_int(d));
  j["group"] = Json{{"rank", json_int(Int(spec.rank))},
                    {"invariant_factors", std::move(factors)}};
  j["coefficients"] = spec.rational_coefficients
                          ? Json("rationals")
                          : Json{{"prime", json_int(spec.prime)}};
  Json vars = Json::array();
  for (size_t i = 0; i < spec.var_names.size(); ++i)
    vars.push_back(Json{{"name", spec.var_names[i]},
                        {"degree", json_vec(spec.var_degrees[i])}});
  j["variables"] = std::move(vars);
  Json fams = Json::object();
  for (const auto& [name, polys] : spec.families) {
    Json list = Json::array();
    for (const auto& p : polys) list.push_back(p.to_string(spec.var_names));
    fams[name] = std::move(list);
  }
  j["families"] = std::move(fams);
  Json morphs = Json::object();
  for (const auto& [name, images] : spec.morphisms) {
    Json entry = Json::object();
    for (size_t i = 0; i < spec.var_names.size(); ++i)
      entry[spec.var_names[i]] = images[i].to_string(spec.var_names);
    morphs[name] = std::move(entry);
  }
  j["morphisms"] = std::move(morphs);
  Json reqs = Json::array();
  for (const auto& r : spec.requests) reqs.push_back(r.to_string());
  j["requests"] = std::move(reqs);
  return j;
}

ProblemSpec problem_from_json(const Json& j) {
  ProblemSpec spec;
  const std::string root = "problem";
  if (!j.is_object()) field_fail(root, "expected an object");

  const Json& group = need(j, "group", root);
  Int rank = int_from(need(group, "rank", root + ".group"),
                      root + ".group.rank");
  if (rank < 0) field_fail(root + ".group.rank", "must be nonnegative");
  spec.rank = static_cast<Index>(rank.get_si());
  const Json& factors = array_from(
      need(group, "invariant_factors", root + ".group"),
      root + ".group.invariant_factors");
  for (size_t i = 0; i < factors.size(); ++i) {
    std::string path =
        root + ".group.invariant_factors[" + std::to_string(i) + "]";
    Int d = int_from(factors.at(i), path);
    if (d < 2) field_fail(path, "torsion factors must be at least 2");
    spec.torsion.push_back(d);
  }

  const Json& coeffs = need(j, "coefficients", root);
  if (coeffs.is_string() && coeffs.get<std::string>() == "rationals") {
    spec.rational_coefficients = true;
  } else if (coeffs.is_object() && coeffs.contains("prime")) {
    spec.rational_coefficients = false;
    spec.prime = int_from(coeffs.at("prime"), root + ".coefficients.prime");
    try {
      check_prime(spec.prime);
    } catch (const Error& e) {
      field_fail(root + ".coefficients.prime", e.what());
    }
  } else {
    field_fail(root + ".coefficients", "expected \"rationals\" or {\"prime\": p}");
  }

  const Index ngen = spec.rank + static_cast<Index>(spec.torsion.size());
  const Json& vars = array_from(need(j, "variables", root), root + ".variables");
  for (size_t i = 0; i < vars.size(); ++i) {
    std::string path = root + ".variables[" + std::to_string(i) + "]";
    std::string name = string_from(need(vars.at(i), "name", path), path + ".name");
    if (!is_identifier(name)) field_fail(path + ".name", "not an identifier");
    if (std::find(spec.var_names.begin(), spec.var_names.end(), name) !=
        spec.var_names.end())
      field_fail(path + ".name", "duplicate variable '" + name + "'");
    const Json& deg = array_from(need(vars.at(i), "degree", path), path + ".degree");
    if (static_cast<Index>(deg.size()) != ngen)
      field_fail(path + ".degree",
                 "needs " + std::to_string(ngen) + " entries");
    IntVec d(ngen);
    for (Index t = 0; t < ngen; ++t)
      d[t] = int_from(deg.at(static_cast<size_t>(t)),
                      path + ".degree[" + std::to_string(t) + "]");
    spec.var_names.push_back(std::move(name));
    spec.var_degrees.push_back(std::move(d));
  }

  const Json& fams = need(j, "families", root);
  if (!fams.is_object()) field_fail(root + ".families", "expected an object");
  for (const auto& [name, list] : fams.items()) {
    std::string path = root + ".families." + name;
    if (!is_identifier(name)) field_fail(path, "not an identifier");
    array_from(list, path);
    std::vector<Polynomial<Rat>> polys;
    for (size_t i = 0; i < list.size(); ++i) {
      std::string epath = path + "[" + std::to_string(i) + "]";
      try {
        polys.push_back(
            parse_polynomial(string_from(list.at(i), epath), spec.var_names));
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Internal) throw;
        field_fail(epath, e.what());
      }
    }
    spec.families.emplace_back(name, std::move(polys));
  }

  if (j.contains("morphisms")) {
    const Json& morphs = j.at("morphisms");
    if (!morphs.is_object()) field_fail(root + ".morphisms", "expected an object");
    for (const auto& [name, entry] : morphs.items()) {
      std::string path = root + ".morphisms." + name;
      if (!is_identifier(name)) field_fail(path, "not an identifier");
      if (!entry.is_object()) field_fail(path, "expected an object");
      std::vector<Polynomial<Rat>> images;
      for (size_t i = 0; i < spec.var_names.size(); ++i)
        images.push_back(Polynomial<Rat>::variable(
            static_cast<Index>(spec.var_names.size()), static_cast<Index>(i),
            Rat(1)));
      for (const auto& [var, expr] : entry.items()) {
        std::string epath = path + "." + var;
        auto at = std::find(spec.var_names.begin(), spec.var_names.end(), var);
        if (at == spec.var_names.end())
          field_fail(epath, "unknown variable '" + var + "'");
        try {
          images[static_cast<size_t>(at - spec.var_names.begin())] =
              parse_polynomial(string_from(expr, epath), spec.var_names);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::Internal) throw;
          field_fail(epath, e.what());
        }
      }
      spec.morphisms.emplace_back(name, std::move(images));
    }
  }

  const Json& reqs = array_from(need(j, "requests", root), root + ".requests");
  for (size_t i = 0; i < reqs.size(); ++i) {
    std::string path = root + ".requests[" + std::to_string(i) + "]";
    try {
      Request req = parse_request_line(string_from(reqs.at(i), path), ngen);
      validate_request_names(spec, req, "");
      spec.requests.push_back(std::move(req));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Internal) throw;
      field_fail(path, e.what());
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// execution

namespace {

Json certificate_json(const RelevanceCertificate& cert) {
  Json c;
  c["relevant"] = cert.relevant;
  c["very_relevant"] = cert.very_relevant;
  c["exact"] = cert.exact;
  Json gens = Json::array();
  for (const auto& g : cert.degree_group_gens) gens.push_back(json_vec(g.coords));
  c["degree_group_generators"] = std::move(gens);
  Json inv = Json::array();
  for (const auto& d : cert.quotient_invariants) inv.push_back(json_int(d));
  c["quotient_invariants"] = std::move(inv);
  return c;
}

template <typename K>
class Executor {
 public:
  Executor(GradedRing<K> ring,
           std::vector<std::pair<std::string, std::vector<Polynomial<K>>>> fams,
           std::vector<std::pair<std::string, std::vector<Polynomial<K>>>> morphs,
           long bound)
      : ring_(std::move(ring)),
        families_(std::move(fams)),
        morphisms_(std::move(morphs)),
        bound_(bound) {}

  Json execute(const Request& req) {
    switch (req.kind) {
      case RequestKind::Check: return check(req);
      case RequestKind::Potion: return potion(req);
      case RequestKind::Atlas: return atlas(req);
      case RequestKind::Twist: return twist(req);
      case RequestKind::VerifyMagic: return verify_magic(req);
      case RequestKind::Hilbert: return hilbert(req);
      case RequestKind::Functorial: return functorial(req);
    }
    fail(ErrorKind::Internal, "unhandled request kind");
  }

 private:
  HomFamily<K> family(const std::string& name) const {
    for (const auto& [n, polys] : families_)
      if (n == name) return HomFamily<K>(ring_, polys);
    fail(ErrorKind::Internal, "request names were not validated");
  }

  std::string rendered(const HomFamily<K>& f) const {
    return f.to_string(ring_.var_names());
  }

  Json generators_json(const PotionPresentation<K>& pres) const {
    Json arr = Json::array();
    for (const auto& gen : pres.generators)
      arr.push_back(Json{{"mu", json_vec(gen.mu)},
                         {"nu", json_vec(gen.nu)},
                         {"fraction", fraction_to_string(ring_, gen.fraction)}});
    return arr;
  }

  Json fraction_list(const std::vector<LocFraction<K>>& frs) const {
    Json arr = Json::array();
    for (const auto& fr : frs) arr.push_back(fraction_to_string(ring_, fr));
    return arr;
  }

  Json check(const Request& req) const {
    Json out;
    Json certs = Json::array();
    for (const auto& name : req.families) {
      auto f = family(name);
      Json c;
      c["family"] = name;
      c["rendered"] = rendered(f);
      c.update(certificate_json(is_relevant(ring_, f)));
      certs.push_back(std::move(c));
    }
    out["certificates"] = std::move(certs);
    return out;
  }

  Json potion(const Request& req) const {
    Json out;
    Json potions = Json::array();
    for (const auto& name : req.families) {
      auto f = family(name);
      auto pres = potion_generators(ring_, f);
      Json p;
      p["family"] = name;
      p["rendered"] = rendered(f);
      p["generators"] = generators_json(pres);
      Json lattice = Json::array();
      for (const auto& v : pres.relation_lattice) lattice.push_back(json_vec(v));
      p["relation_lattice"] = std::move(lattice);
      potions.push_back(std::move(p));
    }
    out["potions"] = std::move(potions);
    return out;
  }

  Atlas<K> build(const Request& req) const {
    std::vector<HomFamily<K>> fams;
    for (const auto& name : req.families) fams.push_back(family(name));
    return build_atlas(ring_, std::move(fams));
  }

  Json atlas(const Request& req) const {
    auto atl = build(req);
    Json out;
    Json charts = Json::array();
    for (size_t i = 0; i < atl.families.size(); ++i) {
      Json c;
      c["family"] = rendered(atl.families[i]);
      Json gens = Json::array();
      for (const auto& gen : atl.charts[i].generators)
        gens.push_back(fraction_to_string(ring_, gen.fraction));
      c["generators"] = std::move(gens);
      c["certificate"] = certificate_json(atl.certificates[i]);
      charts.push_back(std::move(c));
    }
    out["charts"] = std::move(charts);
    Json overlaps = Json::array();
    for (const auto& o : atl.overlaps) {
      Json e;
      e["first"] = json_int(Int(o.first));
      e["second"] = json_int(Int(o.second));
      Json gens = Json::array();
      for (const auto& gen : o.presentation.generators)
        gens.push_back(fraction_to_string(ring_, gen.fraction));
      e["generators"] = std::move(gens);
      e["witnesses_first"] = json_witnesses(o.via_first.witnesses);
      e["witnesses_second"] = json_witnesses(o.via_second.witnesses);
      e["inverted_first"] = fraction_list(o.via_first.inverted);
      e["inverted_second"] = fraction_list(o.via_second.inverted);
      overlaps.push_back(std::move(e));
    }
    out["overlaps"] = std::move(overlaps);
    Json triples = Json::array();
    for (const auto& t : atl.triples)
      triples.push_back(Json{{"i", json_int(Int(t.i))},
                             {"j", json_int(Int(t.j))},
                             {"k", json_int(Int(t.k))},
                             {"consistent", t.consistent}});
    out["triples"] = std::move(triples);
    out["triples_consistent"] = atl.triples_consistent();
    return out;
  }

  Json twist(const Request& req) const {
    auto atl = build(req);
    auto tw = twist_data(atl, ring_.group().element(req.alpha));
    Json out;
    out["alpha"] = json_vec(tw.alpha.coords);
    Json charts = Json::array();
    for (const auto& f : atl.families) charts.push_back(rendered(f));
    out["charts"] = std::move(charts);
    Json nus = Json::array();
    for (const auto& nu : tw.per_chart_nu) nus.push_back(json_vec(nu));
    out["per_chart_nu"] = std::move(nus);
    Json transitions = Json::array();
    for (const auto& t : tw.transitions)
      transitions.push_back(Json{{"from", json_int(Int(t.from))},
                                 {"to", json_int(Int(t.to))},
                                 {"unit", fraction_to_string(ring_, t.unit)}});
    out["transitions"] = std::move(transitions);
    out["inverses_ok"] = tw.inverses_ok;
    out["cocycle_ok"] = tw.cocycle_ok;
    return out;
  }

  Json verify_magic(const Request& req) const {
    auto f = family(req.families[0]);
    auto g = family(req.families[1]);
    auto rep = verify_iso(ring_, f, g, bound_);
    Json out;
    out["first"] = req.families[0];
    out["second"] = req.families[1];
    out["witnesses"] = json_witnesses(rep.witnesses);
    out["surjective_sample"] = rep.surjective_sample;
    out["injective_sample"] = rep.injective_sample;
    out["hom_law"] = rep.hom_law;
    out["inverted_in_potion"] = rep.inverted_in_potion;
    out["ok"] = rep.ok();
    return out;
  }

  Json hilbert(const Request& req) const {
    auto basis = hilbert_basis(req.system);
    std::sort(basis.begin(), basis.end(), LexLess());
    Json out;
    out["nvars"] = json_int(Int(req.system.nvars));
    Json arr = Json::array();
    for (const auto& v : basis) arr.push_back(json_vec(v));
    out["basis"] = std::move(arr);
    return out;
  }

  Json functorial(const Request& req) const {
    const std::vector<Polynomial<K>>* images = nullptr;
    for (const auto& [n, polys] : morphisms_)
      if (n == req.morphism) images = &polys;
    if (images == nullptr)
      fail(ErrorKind::Internal, "request names were not validated");
    GradedRingMorphism<K> psi(ring_, ring_, *images);
    Json out;
    out["morphism"] = req.morphism;
    Json arr = Json::array();
    for (const auto& name : req.families) {
      auto ci = functorial_image(psi, {family(name)}).at(0);
      Json e;
      e["family"] = name;
      e["source"] = rendered(ci.source_family);
      e["image"] = rendered(ci.family);
      e["certificate"] = certificate_json(ci.certificate);
      Json maps = Json::array();
      for (const auto& [from, to] : ci.generator_images)
        maps.push_back(Json{{"from", fraction_to_string(ring_, from)},
                            {"to", fraction_to_string(ring_, to)}});
      e["generator_images"] = std::move(maps);
      arr.push_back(std::move(e));
    }
    out["images"] = std::move(arr);
    return out;
  }

  GradedRing<K> ring_;
  std::vector<std::pair<std::string, std::vector<Polynomial<K>>>> families_;
  std::vector<std::pair<std::string, std::vector<Polynomial<K>>>> morphisms_;
  long bound_;
};

template <typename K>
int run_requests(Executor<K>& ex, const std::vector<Request>& requests,
                 Json& results) {
  int code = 0;
  for (const auto& req : requests) {
    Json r;
    r["request"] = req.to_string();
    try {
      r.update(ex.execute(req));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Internal) throw;
      r["error"] = Json{{"kind", error_kind_name(e.kind())},
                        {"message", e.what()}};
      code = 3;
    }
    results.push_back(std::move(r));
  }
  return code;
}

}  // namespace

RunOutcome run_problem(const ProblemSpec& spec, const RunOptions& opts) {
  RunOutcome out;
  out.document["format_version"] = 1;
  if (opts.echo_problem) out.document["problem"] = problem_to_json(spec);

  FgAbelianGroup group = spec.group();
  std::vector<GroupElement> degrees;
  for (const auto& d : spec.var_degrees) degrees.push_back(group.element(d));
  GradedRing<Rat> ring_q(group, spec.var_names, degrees, Rat(1));

  Json results = Json::array();
  if (spec.rational_coefficients) {
    Executor<Rat> ex(ring_q, spec.families, spec.morphisms, opts.bound);
    out.exit_code = run_requests(ex, spec.requests, results);
  } else {
    auto reduce_named = [&](const auto& named) {
      std::vector<std::pair<std::string, std::vector<Polynomial<Fp>>>> out_named;
      for (const auto& [name, polys] : named) {
        std::vector<Polynomial<Fp>> reduced;
        for (const auto& p : polys) reduced.push_back(poly_mod_p(p, spec.prime));
        out_named.emplace_back(name, std::move(reduced));
      }
      return out_named;
    };
    Executor<Fp> ex(ring_mod_p(ring_q, spec.prime), reduce_named(spec.families),
                    reduce_named(spec.morphisms), opts.bound);
    out.exit_code = run_requests(ex, spec.requests, results);
  }
  out.document["results"] = std::move(results);
  return out;
}

// ---------------------------------------------------------------------------
// text rendering

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

bool all_scalar(const Json& arr) {
  return std::all_of(arr.begin(), arr.end(),
                     [](const Json& e) { return is_scalar(e); });
}

std::string inline_array(const Json& arr) {
  std::string out = "[";
  for (size_t i = 0; i < arr.size(); ++i) {
    if (i) out += ", ";
    out += scalar_text(arr.at(i));
  }
  return out + "]";
}

void render_value(const Json& j, const std::string& label, int indent,
                  std::string& out);

void render_children(const Json& j, int indent, std::string& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      render_value(value, key, indent, out);
  } else {
    for (const auto& value : j) render_value(value, "-", indent, out);
  }
}

void render_value(const Json& j, const std::string& label, int indent,
                  std::string& out) {
  out.append(static_cast<size_t>(indent), ' ');
  if (is_scalar(j)) {
    out += label + " " + scalar_text(j) + "\n";
  } else if (j.is_array() && all_scalar(j)) {
    out += label + " " + inline_array(j) + "\n";
  } else {
    out += label + "\n";
    render_children(j, indent + 2, out);
  }
}

}  // namespace

std::string render_text(const Json& document) {
  std::string out;
  render_children(document, 0, out);
  return out;
}

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
