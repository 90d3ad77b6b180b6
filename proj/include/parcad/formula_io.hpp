#ifndef PARCAD_FORMULA_IO_HPP
#define PARCAD_FORMULA_IO_HPP

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "parcad/errors.hpp"
#include "parcad/formula.hpp"

namespace parcad {

namespace io_detail {

enum class Tok {
  LParen, RParen, LBracket, RBracket, And, Or, Not, Plus, Minus, Star,
  Caret, Slash, Rel, Ident, Num, Forall, Exists, End
};

struct Token {
  Tok kind;
  std::size_t pos = 0;
  std::string text;      // Ident
  Int value;             // Num
  Rel rel = Rel::Eq;     // Rel
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t pos) {
    Token t;
    t.kind = k;
    t.pos = pos;
    out.push_back(std::move(t));
  };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t pos = i;
    // UTF-8 aliases for the logical symbols
    if (s.compare(i, 3, "\xE2\x88\x80") == 0) { push(Tok::Forall, pos); i += 3; continue; }
    if (s.compare(i, 3, "\xE2\x88\x83") == 0) { push(Tok::Exists, pos); i += 3; continue; }
    if (s.compare(i, 3, "\xE2\x88\xA7") == 0) { push(Tok::And, pos); i += 3; continue; }
    if (s.compare(i, 3, "\xE2\x88\xA8") == 0) { push(Tok::Or, pos); i += 3; continue; }
    if (s.compare(i, 2, "\xC2\xAC") == 0) { push(Tok::Not, pos); i += 2; continue; }
    auto pushrel = [&](Rel r, std::size_t len) {
      Token t;
      t.kind = Tok::Rel;
      t.pos = pos;
      t.rel = r;
      out.push_back(std::move(t));
      i += len;
    };
    if (s.compare(i, 3, "\xE2\x89\xA0") == 0) { pushrel(Rel::Ne, 3); continue; }
    if (s.compare(i, 3, "\xE2\x89\xA4") == 0) { pushrel(Rel::Le, 3); continue; }
    if (s.compare(i, 3, "\xE2\x89\xA5") == 0) { pushrel(Rel::Ge, 3); continue; }
    if (s.compare(i, 2, "/\\") == 0) { push(Tok::And, pos); i += 2; continue; }
    if (s.compare(i, 2, "\\/") == 0) { push(Tok::Or, pos); i += 2; continue; }
    if (s.compare(i, 2, "/=") == 0) { pushrel(Rel::Ne, 2); continue; }
    if (s.compare(i, 2, "!=") == 0) { pushrel(Rel::Ne, 2); continue; }
    if (s.compare(i, 2, "<>") == 0) { pushrel(Rel::Ne, 2); continue; }
    if (s.compare(i, 2, "<=") == 0) { pushrel(Rel::Le, 2); continue; }
    if (s.compare(i, 2, ">=") == 0) { pushrel(Rel::Ge, 2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, pos); ++i; continue;
      case ')': push(Tok::RParen, pos); ++i; continue;
      case '[': push(Tok::LBracket, pos); ++i; continue;
      case ']': push(Tok::RBracket, pos); ++i; continue;
      case '+': push(Tok::Plus, pos); ++i; continue;
      case '-': push(Tok::Minus, pos); ++i; continue;
      case '*': push(Tok::Star, pos); ++i; continue;
      case '^': push(Tok::Caret, pos); ++i; continue;
      case '/': push(Tok::Slash, pos); ++i; continue;
      case '~': push(Tok::Not, pos); ++i; continue;
      case '=': pushrel(Rel::Eq, 1); continue;
      case '<': pushrel(Rel::Lt, 1); continue;
      case '>': pushrel(Rel::Gt, 1); continue;
      default: break;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      Token t;
      t.kind = Tok::Num;
      t.pos = pos;
      t.value = Int(s.substr(i, j - i));
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      Token t;
      t.kind = Tok::Ident;
      t.pos = pos;
      t.text = s.substr(i, j - i);
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    throw SyntaxError(pos, "a recognized token");
  }
  Token t;
  t.kind = Tok::End;
  t.pos = s.size();
  out.push_back(std::move(t));
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, VarTable table, bool allow_new_vars)
      : toks_(std::move(toks)),
        table_(std::move(table)),
        allow_new_(allow_new_vars) {}

  PrenexFormula parse() {
    if (allow_new_) {
      register_all_variables();
      allow_new_ = false;
    }
    PrenexFormula f;
    // quantifier prefix
    while (is_prefix_item()) {
      expect(Tok::LParen, "'('");
      Quant q;
      const Token& t = peek();
      if (t.kind == Tok::Forall) {
        q = Quant::ForAll;
        advance();
      } else if (t.kind == Tok::Exists) {
        q = Quant::Exists;
        advance();
      } else if (t.kind == Tok::Ident && (t.text == "A" || t.text == "E")) {
        q = t.text == "A" ? Quant::ForAll : Quant::Exists;
        advance();
      } else {
        throw SyntaxError(t.pos, "a quantifier (A or E)");
      }
      const Token& v = expect(Tok::Ident, "a variable name");
      VarId var = lookup(v);
      for (const auto& [bq, bv] : block_)
        if (bv == var) throw SyntaxError(v.pos, "a fresh bound variable");
      block_.emplace_back(q, var);
      expect(Tok::RParen, "')'");
    }
    expect(Tok::LBracket, "'['");
    Formula body = parse_or();
    expect(Tok::RBracket, "']'");
    if (peek().kind != Tok::End)
      throw SyntaxError(peek().pos, "end of input");

    f.vars = table_;
    f.block = block_;
    f.matrix = std::move(body);
    std::set<VarId> occurring;
    f.matrix.collect_vars(occurring);
    for (VarId v = 0; v < table_.size(); ++v)
      if (!f.is_quantified(v) && occurring.count(v)) f.free_vars.push_back(v);
    return f;
  }

 private:
  /// First pass: declare quantified variables in prefix order, then every
  /// other identifier in first-occurrence order, so all polynomials share
  /// one exponent-vector length.
  void register_all_variables() {
    std::size_t i = 0;
    auto at = [&](std::size_t k) -> const Token& {
      return toks_[std::min(k, toks_.size() - 1)];
    };
    while (at(i).kind == Tok::LParen) {
      const Token& q = at(i + 1);
      bool quant_kw =
          q.kind == Tok::Forall || q.kind == Tok::Exists ||
          (q.kind == Tok::Ident && (q.text == "A" || q.text == "E") &&
           at(i + 2).kind == Tok::Ident);
      if (!quant_kw) break;
      std::size_t var_at = (q.kind == Tok::Ident) ? i + 2 : i + 2;
      if (at(var_at).kind != Tok::Ident) break;
      table_.add(at(var_at).text);
      i = var_at + 2;  // past ident and ')'
    }
    for (; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind == Tok::Ident && t.text != "TRUE" && t.text != "FALSE")
        table_.add(t.text);
    }
  }

  bool is_prefix_item() const {
    if (peek().kind != Tok::LParen) return false;
    const Token& n = toks_[pos_ + 1];
    if (n.kind == Tok::Forall || n.kind == Tok::Exists) return true;
    if (n.kind == Tok::Ident && (n.text == "A" || n.text == "E"))
      return toks_[pos_ + 2].kind == Tok::Ident;
    return false;
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  void advance() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  const Token& expect(Tok k, const std::string& what) {
    const Token& t = toks_[pos_];
    if (t.kind != k) throw SyntaxError(t.pos, what);
    advance();
    return t;
  }

  VarId lookup(const Token& t) {
    if (auto v = table_.find(t.text)) return *v;
    if (!allow_new_) throw UndeclaredVariable(t.text);
    return table_.add(t.text);
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (peek().kind == Tok::Or) {
      advance();
      parts.push_back(parse_and());
    }
    return Formula::disj(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_unary()};
    while (peek().kind == Tok::And) {
      advance();
      parts.push_back(parse_unary());
    }
    return Formula::conj(std::move(parts));
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::Not) {
      advance();
      return Formula::negation(parse_unary());
    }
    if (t.kind == Tok::LBracket) {
      advance();
      Formula inner = parse_or();
      expect(Tok::RBracket, "']'");
      return inner;
    }
    if (t.kind == Tok::Ident && t.text == "TRUE") {
      advance();
      return Formula::tru();
    }
    if (t.kind == Tok::Ident && t.text == "FALSE") {
      advance();
      return Formula::fls();
    }
    return parse_atom();
  }

  struct PTerm {
    Rat coeff;
    std::vector<std::pair<VarId, std::uint32_t>> pows;
  };

  Formula parse_atom() {
    std::vector<PTerm> lhs = parse_poly();
    const Token& t = peek();
    if (t.kind != Tok::Rel) throw SyntaxError(t.pos, "a relation");
    Rel rel = t.rel;
    advance();
    std::vector<PTerm> rhs = parse_poly();
    for (auto& pt : rhs) {
      pt.coeff = -pt.coeff;
      lhs.push_back(std::move(pt));
    }
    // clear denominators: multiply through by the (positive) lcm
    Int lcm = 1;
    for (const auto& pt : lhs) {
      Int d = den(pt.coeff);
      lcm = lcm / int_gcd(lcm, d) * d;
    }
    Polynomial p(table_.size());
    for (const auto& pt : lhs) {
      Rat scaled = pt.coeff * Rat(lcm);
      if (den(scaled) != 1) throw InternalError("denominator clearing failed");
      ExpVec ev(table_.size(), 0);
      for (const auto& [v, e] : pt.pows) ev[v] += e;
      p.add_term(ev, num(scaled));
    }
    return Formula::leaf(Atom::make(std::move(p), rel));
  }

  std::vector<PTerm> parse_poly() {
    std::vector<PTerm> terms{parse_term(true)};
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool neg = peek().kind == Tok::Minus;
      advance();
      PTerm t = parse_term(false);
      if (neg) t.coeff = -t.coeff;
      terms.push_back(std::move(t));
    }
    return terms;
  }

  Rat parse_number() {
    // optional sign then NUM [ '/' NUM ]
    bool neg = false;
    while (peek().kind == Tok::Minus || peek().kind == Tok::Plus) {
      if (peek().kind == Tok::Minus) neg = !neg;
      advance();
    }
    const Token& n = expect(Tok::Num, "a number");
    Rat v(n.value);
    if (peek().kind == Tok::Slash) {
      advance();
      const Token& d = expect(Tok::Num, "a denominator");
      if (d.value == 0) throw SyntaxError(d.pos, "a nonzero denominator");
      v /= Rat(d.value);
    }
    return neg ? Rat(-v) : v;
  }

  PTerm parse_term(bool leading) {
    PTerm t;
    t.coeff = 1;
    bool saw_any = false;
    // leading signs
    while (peek().kind == Tok::Minus ||
           (leading && peek().kind == Tok::Plus)) {
      if (peek().kind == Tok::Minus) t.coeff = -t.coeff;
      advance();
    }
    // coefficient: bare number, rational, or parenthesized signed number
    if (peek().kind == Tok::Num) {
      t.coeff *= parse_number();
      saw_any = true;
    } else if (peek().kind == Tok::LParen) {
      advance();
      t.coeff *= parse_number();
      expect(Tok::RParen, "')'");
      saw_any = true;
    }
    // variable powers, implicit or '*'-separated
    while (true) {
      if (peek().kind == Tok::Star) {
        advance();
        continue;
      }
      if (peek().kind != Tok::Ident) break;
      const std::string& name = peek().text;
      if (name == "TRUE" || name == "FALSE") break;
      VarId v = lookup(peek());
      advance();
      std::uint32_t e = 1;
      if (peek().kind == Tok::Caret) {
        advance();
        const Token& n = expect(Tok::Num, "an exponent");
        e = static_cast<std::uint32_t>(n.value);
      }
      t.pows.emplace_back(v, e);
      saw_any = true;
    }
    if (!saw_any) throw SyntaxError(peek().pos, "a term");
    return t;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  VarTable table_;
  std::vector<std::pair<Quant, VarId>> block_;
  bool allow_new_;
};

}  // namespace io_detail

/// Parse the text grammar. Quantified variables take indices in prefix
/// order, free variables follow in first-occurrence order.
inline PrenexFormula parse_formula(const std::string& text) {
  auto toks = io_detail::tokenize(text);
  io_detail::Parser p(std::move(toks), VarTable{}, true);
  PrenexFormula f = p.parse();
  f.check_invariants();
  return f;
}

/// Parse against an existing variable universe; unknown identifiers raise
/// UndeclaredVariable. Used to read answers from external backends.
inline PrenexFormula parse_formula(const std::string& text,
                                   const VarTable& table) {
  auto toks = io_detail::tokenize(text);
  io_detail::Parser p(std::move(toks), table, false);
  PrenexFormula f = p.parse();
  f.check_invariants();
  return f;
}

namespace io_detail {

inline void print_poly(std::ostringstream& os, const Polynomial& p,
                       const VarTable& vars) {
  if (p.is_zero()) {
    os << "(0)";
    return;
  }
  bool first = true;
  const auto& terms = p.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << "(" << it->second.str() << ")";
    for (std::size_t v = 0; v < it->first.size(); ++v)
      if (it->first[v] > 0)
        os << " " << vars.name(static_cast<VarId>(v)) << "^" << it->first[v];
  }
}

inline void print_body(std::ostringstream& os, const Formula& f,
                       const VarTable& vars);

inline void print_wrapped(std::ostringstream& os, const Formula& f,
                          const VarTable& vars) {
  os << "[";
  print_body(os, f, vars);
  os << "]";
}

inline void print_body(std::ostringstream& os, const Formula& f,
                       const VarTable& vars) {
  switch (f.kind()) {
    case Formula::Kind::True: os << "TRUE"; break;
    case Formula::Kind::False: os << "FALSE"; break;
    case Formula::Kind::Leaf:
      print_poly(os, f.atom().poly, vars);
      os << " " << rel_text(f.atom().rel) << " 0";
      break;
    case Formula::Kind::Not:
      os << "~";
      print_wrapped(os, f.children().front(), vars);
      break;
    case Formula::Kind::And: {
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) os << " /\\ ";
        first = false;
        print_wrapped(os, c, vars);
      }
      break;
    }
    case Formula::Kind::Or: {
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) os << " \\/ ";
        first = false;
        print_wrapped(os, c, vars);
      }
      break;
    }
    case Formula::Kind::Quantified:
      os << "(" << (f.quant() == Quant::ForAll ? "A" : "E") << " "
         << vars.name(f.qvar()) << ")";
      print_wrapped(os, f.children().front(), vars);
      break;
  }
}

}  // namespace io_detail

/// Canonical rendering; parse_formula(print_formula(f)) is structurally
/// equal to f.
inline std::string print_formula(const PrenexFormula& f) {
  std::ostringstream os;
  for (const auto& [q, v] : f.block)
    os << "(" << (q == Quant::ForAll ? "A" : "E") << " " << f.vars.name(v)
       << ")";
  os << "[";
  io_detail::print_body(os, f.matrix, f.vars);
  os << "]";
  return os.str();
}

/// Render a bare (quantifier-free or general) formula body.
inline std::string print_matrix(const Formula& f, const VarTable& vars) {
  std::ostringstream os;
  io_detail::print_body(os, f, vars);
  return os.str();
}

}  // namespace parcad

#endif
