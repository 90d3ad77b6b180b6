#ifndef PARCAD_FORMULA_HPP
#define PARCAD_FORMULA_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "parcad/errors.hpp"
#include "parcad/polynomial.hpp"

namespace parcad {

enum class Rel { Eq, Ne, Lt, Le, Gt, Ge };

inline Rel negate_rel(Rel r) {
  switch (r) {
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
  }
  return Rel::Eq;
}

/// Mirror of the relation under negation of the left-hand side: p R 0 is
/// equivalent to -p mirror(R) 0.
inline Rel mirror_rel(Rel r) {
  switch (r) {
    case Rel::Eq: return Rel::Eq;
    case Rel::Ne: return Rel::Ne;
    case Rel::Lt: return Rel::Gt;
    case Rel::Le: return Rel::Ge;
    case Rel::Gt: return Rel::Lt;
    case Rel::Ge: return Rel::Le;
  }
  return Rel::Eq;
}

inline bool rel_holds(Rel r, int sign) {
  switch (r) {
    case Rel::Eq: return sign == 0;
    case Rel::Ne: return sign != 0;
    case Rel::Lt: return sign < 0;
    case Rel::Le: return sign <= 0;
    case Rel::Gt: return sign > 0;
    case Rel::Ge: return sign >= 0;
  }
  return false;
}

inline const char* rel_text(Rel r) {
  switch (r) {
    case Rel::Eq: return "=";
    case Rel::Ne: return "/=";
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
  }
  return "?";
}

enum class Quant { ForAll, Exists };

/// Dense, ordered variable universe of a formula.
struct VarTable {
  std::vector<std::string> names;

  std::size_t size() const { return names.size(); }
  std::optional<VarId> find(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<VarId>(i);
    return std::nullopt;
  }
  VarId add(const std::string& name) {
    if (auto v = find(name)) return *v;
    names.push_back(name);
    return static_cast<VarId>(names.size() - 1);
  }
  const std::string& name(VarId v) const { return names.at(v); }
  bool operator==(const VarTable&) const = default;
};

/// Polynomial constraint compared against zero. The polynomial is kept
/// canonical (integer-content-free, positive leading coefficient); the
/// relation is flipped when canonicalization negates the polynomial.
struct Atom {
  Polynomial poly;
  Rel rel = Rel::Eq;

  static Atom make(Polynomial p, Rel r) {
    Atom a;
    if (p.is_zero()) {
      a.poly = std::move(p);
      a.rel = r;
      return a;
    }
    bool flip = p.leading_coeff() < 0;
    a.poly = p.canonicalized();
    a.rel = flip ? mirror_rel(r) : r;
    return a;
  }

  bool holds_at_sign(int sign) const { return rel_holds(rel, sign); }
  bool operator==(const Atom&) const = default;
};

inline Atom negate_atom(const Atom& a) {
  Atom r = a;
  r.rel = negate_rel(a.rel);
  return r;
}

/// Quantifier-free (plus optional Quantified nodes) formula tree.
class Formula {
 public:
  enum class Kind { True, False, Leaf, Not, And, Or, Quantified };

  Formula() : kind_(Kind::True) {}

  static Formula tru() { return Formula(Kind::True); }
  static Formula fls() { return Formula(Kind::False); }
  static Formula leaf(Atom a) {
    Formula f(Kind::Leaf);
    f.atom_ = std::move(a);
    return f;
  }
  static Formula negation(Formula f) {
    Formula r(Kind::Not);
    r.children_.push_back(std::move(f));
    return r;
  }
  static Formula conj(std::vector<Formula> children) {
    if (children.empty()) throw InternalError("empty conjunction");
    if (children.size() == 1) return std::move(children.front());
    Formula r(Kind::And);
    r.children_ = std::move(children);
    return r;
  }
  static Formula disj(std::vector<Formula> children) {
    if (children.empty()) throw InternalError("empty disjunction");
    if (children.size() == 1) return std::move(children.front());
    Formula r(Kind::Or);
    r.children_ = std::move(children);
    return r;
  }
  static Formula quantified(Quant q, VarId v, Formula body) {
    Formula r(Kind::Quantified);
    r.quant_ = q;
    r.qvar_ = v;
    r.children_.push_back(std::move(body));
    return r;
  }

  Kind kind() const { return kind_; }
  bool is_true() const { return kind_ == Kind::True; }
  bool is_false() const { return kind_ == Kind::False; }
  bool is_const() const { return is_true() || is_false(); }
  const Atom& atom() const { return atom_; }
  Atom& atom() { return atom_; }
  const std::vector<Formula>& children() const { return children_; }
  std::vector<Formula>& children() { return children_; }
  const Formula& body() const { return children_.front(); }
  Quant quant() const { return quant_; }
  VarId qvar() const { return qvar_; }

  bool operator==(const Formula& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
      case Kind::True:
      case Kind::False: return true;
      case Kind::Leaf: return atom_ == o.atom_;
      case Kind::Quantified:
        if (quant_ != o.quant_ || qvar_ != o.qvar_) return false;
        return children_ == o.children_;
      default: return children_ == o.children_;
    }
  }

  void collect_vars(std::set<VarId>& out) const {
    switch (kind_) {
      case Kind::Leaf:
        for (VarId v : atom_.poly.occurring_vars()) out.insert(v);
        break;
      case Kind::Quantified:
        children_.front().collect_vars(out);
        out.insert(qvar_);
        break;
      default:
        for (const auto& c : children_) c.collect_vars(out);
    }
  }

  bool contains_var(VarId v) const {
    switch (kind_) {
      case Kind::Leaf: return atom_.poly.depends_on(v);
      case Kind::Quantified:
        return qvar_ == v || children_.front().contains_var(v);
      case Kind::True:
      case Kind::False: return false;
      default:
        for (const auto& c : children_)
          if (c.contains_var(v)) return true;
        return false;
    }
  }

  bool contains_quantifier() const {
    if (kind_ == Kind::Quantified) return true;
    for (const auto& c : children_)
      if (c.contains_quantifier()) return true;
    return false;
  }

  template <typename Fn>
  void for_each_atom(Fn&& fn) const {
    if (kind_ == Kind::Leaf) {
      fn(atom_);
      return;
    }
    for (const auto& c : children_) c.for_each_atom(fn);
  }

  /// Rebuild the tree with every atom transformed.
  template <typename Fn>
  Formula map_atoms(Fn&& fn) const {
    switch (kind_) {
      case Kind::True:
      case Kind::False: return *this;
      case Kind::Leaf: return fn(atom_);
      case Kind::Not: return negation(children_.front().map_atoms(fn));
      case Kind::Quantified:
        return quantified(quant_, qvar_, children_.front().map_atoms(fn));
      default: {
        std::vector<Formula> cs;
        cs.reserve(children_.size());
        for (const auto& c : children_) cs.push_back(c.map_atoms(fn));
        Formula r(kind_);
        r.children_ = std::move(cs);
        return r;
      }
    }
  }

  /// Truth value at an exact rational point; the tree must be
  /// quantifier-free.
  bool eval(const std::vector<Rat>& point) const {
    switch (kind_) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Leaf:
        return atom_.holds_at_sign(sign_of(atom_.poly.eval(point)));
      case Kind::Not: return !children_.front().eval(point);
      case Kind::And:
        for (const auto& c : children_)
          if (!c.eval(point)) return false;
        return true;
      case Kind::Or:
        for (const auto& c : children_)
          if (c.eval(point)) return true;
        return false;
      case Kind::Quantified:
        throw InternalError("eval on quantified formula");
    }
    return false;
  }

 private:
  explicit Formula(Kind k) : kind_(k) {}

  Kind kind_;
  Atom atom_;
  std::vector<Formula> children_;
  Quant quant_ = Quant::ForAll;
  VarId qvar_ = 0;
};

/// Quantifier block plus quantifier-free matrix over a shared variable table.
struct PrenexFormula {
  VarTable vars;
  std::vector<std::pair<Quant, VarId>> block;
  std::vector<VarId> free_vars;
  Formula matrix;

  std::size_t nvars() const { return vars.size(); }

  bool is_quantified(VarId v) const {
    for (const auto& [q, bv] : block)
      if (bv == v) return true;
    return false;
  }

  std::optional<Quant> quantifier_of(VarId v) const {
    for (const auto& [q, bv] : block)
      if (bv == v) return q;
    return std::nullopt;
  }

  void check_invariants() const {
    if (matrix.contains_quantifier())
      throw InternalError("prenex matrix contains a quantifier");
    std::set<VarId> bound;
    for (const auto& [q, v] : block)
      if (!bound.insert(v).second)
        throw InternalError("variable quantified twice");
    for (VarId v : free_vars)
      if (bound.count(v))
        throw InternalError("free variable also quantified");
    std::set<VarId> occurring;
    matrix.collect_vars(occurring);
    for (VarId v : occurring) {
      if (!bound.count(v) &&
          std::find(free_vars.begin(), free_vars.end(), v) == free_vars.end())
        throw InternalError("matrix variable neither bound nor free");
    }
  }

  bool operator==(const PrenexFormula& o) const {
    return vars == o.vars && block == o.block && free_vars == o.free_vars &&
           matrix == o.matrix;
  }
};

}  // namespace parcad

#endif
