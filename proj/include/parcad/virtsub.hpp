#ifndef PARCAD_VIRTSUB_HPP
#define PARCAD_VIRTSUB_HPP

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "parcad/formula.hpp"
#include "parcad/normalize.hpp"

namespace parcad {

/// One substitution step: var := num/den obtained from an equation that is
/// linear in var with a constant integer coefficient.
struct SubstitutionStep {
  VarId var = 0;
  Atom substitutor;
  Polynomial num;
  Int den = 1;
};

struct SubstitutionPlan {
  std::vector<SubstitutionStep> steps;
  std::vector<std::size_t> applied_to;  // top-level conjunct indices used
  bool empty() const { return steps.empty(); }
};

namespace vs_detail {

/// num/den solving atom's polynomial (an equation) for var, when the
/// coefficient of var is a nonzero integer constant and deg_var = 1.
inline std::optional<std::pair<Polynomial, Int>> solve_linear(
    const Polynomial& p, VarId v) {
  if (p.degree(v) != 1) return std::nullopt;
  Int coeff = 0;
  Polynomial rest(p.nvars());
  for (const auto& [ev, c] : p.terms()) {
    if (ev[v] == 0) {
      rest.add_term(ev, c);
      continue;
    }
    for (std::size_t i = 0; i < ev.size(); ++i)
      if (ev[i] > 0 && static_cast<VarId>(i) != v)
        return std::nullopt;  // coefficient of var is not constant
    coeff += c;
  }
  if (coeff == 0) return std::nullopt;
  return std::make_pair(-rest, coeff);
}

}  // namespace vs_detail

/// Scan the top-level conjuncts of an NNF matrix for equations usable as
/// substitutors; the resulting plan is acyclic and deterministic.
inline SubstitutionPlan find_substitutors(const PrenexFormula& f) {
  SubstitutionPlan plan;
  std::vector<const Formula*> conjuncts;
  if (f.matrix.kind() == Formula::Kind::And) {
    for (const auto& c : f.matrix.children()) conjuncts.push_back(&c);
  } else {
    conjuncts.push_back(&f.matrix);
  }

  struct Candidate {
    VarId var;
    Atom atom;
    Polynomial num;
    Int den;
    std::size_t conjunct;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < conjuncts.size(); ++i) {
    const Formula& c = *conjuncts[i];
    if (c.kind() != Formula::Kind::Leaf || c.atom().rel != Rel::Eq) continue;
    for (VarId v : c.atom().poly.occurring_vars()) {
      auto sol = vs_detail::solve_linear(c.atom().poly, v);
      if (!sol) continue;
      candidates.push_back({v, c.atom(), sol->first, sol->second, i});
    }
  }

  // per variable: smallest |den|, then lexicographically smallest atom
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.var != b.var) return a.var < b.var;
                     Int da = int_abs(a.den), db = int_abs(b.den);
                     if (da != db) return da < db;
                     return a.atom.poly < b.atom.poly;
                   });

  std::set<VarId> accepted;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Candidate& c = candidates[i];
    if (accepted.count(c.var)) continue;
    bool conflict = false;
    for (VarId v : c.num.occurring_vars())
      if (accepted.count(v)) conflict = true;
    if (conflict) continue;
    accepted.insert(c.var);
    plan.steps.push_back({c.var, c.atom, c.num, c.den});
    plan.applied_to.push_back(c.conjunct);
  }
  return plan;
}

/// Substitute var := num/den into the atom with denominators cleared by
/// den^deg; order relations flip when den < 0 and the degree is odd.
inline Atom vsubst_atom(const Atom& target, VarId var, const Polynomial& num,
                        const Int& den) {
  if (den == 0) throw InternalError("vsubst_atom with zero denominator");
  std::int64_t d = target.poly.degree(var);
  if (d <= 0) return target;
  Polynomial cleared = target.poly.subst_poly_cleared(var, num, den);
  // cleared = den^d * (substituted value); a negative multiplier mirrors
  // order relations
  bool neg_mult = den < 0 && d % 2 == 1;
  return Atom::make(std::move(cleared),
                    neg_mult ? mirror_rel(target.rel) : target.rel);
}

/// Algorithm 2 step 2: apply the substitution plan everywhere except to the
/// substitutor equations themselves, which remain in the output.
inline PrenexFormula apply_plan(const PrenexFormula& f) {
  PrenexFormula fn = nnf(f);
  SubstitutionPlan plan = find_substitutors(fn);
  if (plan.empty()) return fn;
  std::vector<Atom> keep;
  for (const auto& s : plan.steps) keep.push_back(s.substitutor);
  Formula matrix = fn.matrix;
  for (const auto& step : plan.steps) {
    matrix = matrix.map_atoms([&](const Atom& a) {
      for (const auto& k : keep)
        if (a == k) return Formula::leaf(a);
      return Formula::leaf(vsubst_atom(a, step.var, step.num, step.den));
    });
  }
  fn.matrix = std::move(matrix);
  return fn;
}

}  // namespace parcad

#endif
