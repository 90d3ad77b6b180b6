#ifndef PARCAD_NORMALIZE_HPP
#define PARCAD_NORMALIZE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "parcad/errors.hpp"
#include "parcad/formula.hpp"

namespace parcad {

constexpr std::size_t kDefaultClauseBudget = 10000;

namespace nnf_detail {

inline Formula nnf_rec(const Formula& f, bool negated) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return negated ? Formula::fls() : Formula::tru();
    case Formula::Kind::False:
      return negated ? Formula::tru() : Formula::fls();
    case Formula::Kind::Leaf:
      return Formula::leaf(negated ? negate_atom(f.atom()) : f.atom());
    case Formula::Kind::Not:
      return nnf_rec(f.children().front(), !negated);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> cs;
      cs.reserve(f.children().size());
      for (const auto& c : f.children()) cs.push_back(nnf_rec(c, negated));
      bool is_and = (f.kind() == Formula::Kind::And) != negated;
      return is_and ? Formula::conj(std::move(cs))
                    : Formula::disj(std::move(cs));
    }
    case Formula::Kind::Quantified: {
      Quant q = f.quant();
      if (negated) q = q == Quant::ForAll ? Quant::Exists : Quant::ForAll;
      return Formula::quantified(q, f.qvar(),
                                 nnf_rec(f.children().front(), negated));
    }
  }
  return Formula::tru();
}

}  // namespace nnf_detail

/// Negation normal form of a general formula tree (quantifier duality
/// applied to any Quantified nodes).
inline Formula nnf(const Formula& f) { return nnf_detail::nnf_rec(f, false); }

/// Negation normal form; negations are absorbed into atom relations.
inline PrenexFormula nnf(const PrenexFormula& f) {
  PrenexFormula r = f;
  r.matrix = nnf(f.matrix);
  return r;
}

namespace mini_detail {

inline Formula push_quantifier(Quant q, VarId v, const Formula& f) {
  if (!f.contains_var(v)) return f;
  if (f.kind() == Formula::Kind::And && q == Quant::ForAll) {
    std::vector<Formula> cs;
    for (const auto& c : f.children()) cs.push_back(push_quantifier(q, v, c));
    return Formula::conj(std::move(cs));
  }
  if (f.kind() == Formula::Kind::Or && q == Quant::Exists) {
    std::vector<Formula> cs;
    for (const auto& c : f.children()) cs.push_back(push_quantifier(q, v, c));
    return Formula::disj(std::move(cs));
  }
  if (f.kind() == Formula::Kind::And || f.kind() == Formula::Kind::Or) {
    // split off the children free of v; the rest stays grouped
    std::vector<Formula> with, without;
    for (const auto& c : f.children())
      (c.contains_var(v) ? with : without).push_back(c);
    bool is_and = f.kind() == Formula::Kind::And;
    Formula grouped = is_and ? Formula::conj(std::move(with))
                             : Formula::disj(std::move(with));
    Formula bound = Formula::quantified(q, v, std::move(grouped));
    if (without.empty()) return bound;
    without.push_back(std::move(bound));
    return is_and ? Formula::conj(std::move(without))
                  : Formula::disj(std::move(without));
  }
  return Formula::quantified(q, v, f);
}

}  // namespace mini_detail

/// Push the quantifier block inward maximally: forall over conjunctions,
/// exists over disjunctions, vacuous scopes dropped.
inline Formula miniscope(const PrenexFormula& f) {
  Formula body = nnf(f.matrix);
  for (auto it = f.block.rbegin(); it != f.block.rend(); ++it)
    body = mini_detail::push_quantifier(it->first, it->second, body);
  return body;
}

/// Ordered clause list with the Algorithm 2 pipeline snapshots.
struct Decomposition {
  enum class Combine { Conjunctive, Disjunctive };

  std::vector<PrenexFormula> clauses;
  Combine combine = Combine::Conjunctive;
  struct Trace {
    PrenexFormula input;  // f
    PrenexFormula nnf;    // f'
    PrenexFormula vs;     // f''
    PrenexFormula cnf;    // f'''
  } trace;
};

namespace sep_detail {

using Clause = std::vector<Formula>;  // disjunction of literals

inline void cnf_distribute(const Formula& f, std::vector<Clause>& out,
                           std::size_t budget) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return;  // no clause
    case Formula::Kind::False:
      out.push_back({});
      return;
    case Formula::Kind::Leaf:
      out.push_back({f});
      return;
    case Formula::Kind::And:
      for (const auto& c : f.children()) {
        cnf_distribute(c, out, budget);
        if (out.size() > budget) throw ClauseExplosion(budget);
      }
      return;
    case Formula::Kind::Or: {
      std::vector<Clause> acc{{}};
      for (const auto& c : f.children()) {
        std::vector<Clause> sub;
        cnf_distribute(c, sub, budget);
        std::vector<Clause> next;
        if (sub.empty()) {
          // disjunct is TRUE: the whole disjunction is TRUE
          return;
        }
        next.reserve(acc.size() * sub.size());
        for (const auto& a : acc)
          for (const auto& s : sub) {
            Clause merged = a;
            merged.insert(merged.end(), s.begin(), s.end());
            next.push_back(std::move(merged));
            if (next.size() > budget) throw ClauseExplosion(budget);
          }
        acc = std::move(next);
      }
      for (auto& c : acc) out.push_back(std::move(c));
      if (out.size() > budget) throw ClauseExplosion(budget);
      return;
    }
    case Formula::Kind::Not:
      throw InternalError("cnf_distribute expects NNF input");
    case Formula::Kind::Quantified:
      throw InternalError("cnf_distribute on quantified formula");
  }
}

struct LiteralLess {
  bool operator()(const Formula& a, const Formula& b) const {
    if (a.atom().poly != b.atom().poly) return a.atom().poly < b.atom().poly;
    return static_cast<int>(a.atom().rel) < static_cast<int>(b.atom().rel);
  }
};

inline std::set<VarId> clause_vars(const Clause& c) {
  std::set<VarId> vars;
  for (const auto& lit : c) lit.collect_vars(vars);
  return vars;
}

}  // namespace sep_detail

/// Clause-normal-form separation (sound fragment): forall distributes over
/// conjunctions, exists over disjunctions; an existential shared between
/// clause groups fuses them.
inline Decomposition separate(const PrenexFormula& f,
                              std::size_t clause_budget = kDefaultClauseBudget) {
  Decomposition d;
  d.trace.input = f;
  PrenexFormula fn = nnf(f);
  d.trace.nnf = fn;
  d.trace.vs = fn;  // virtual substitution is a separate pipeline step
  d.combine = Decomposition::Combine::Conjunctive;

  std::vector<sep_detail::Clause> clauses;
  sep_detail::cnf_distribute(fn.matrix, clauses, clause_budget);

  // canonical literal order within a clause, then deduplicate literals and
  // identical clauses
  for (auto& c : clauses) {
    std::sort(c.begin(), c.end(), sep_detail::LiteralLess{});
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::sort(clauses.begin(), clauses.end(),
            [](const sep_detail::Clause& a, const sep_detail::Clause& b) {
              return std::lexicographical_compare(
                  a.begin(), a.end(), b.begin(), b.end(),
                  sep_detail::LiteralLess{});
            });
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());

  // an empty clause is FALSE; it dominates the conjunction
  for (const auto& c : clauses) {
    if (c.empty()) {
      PrenexFormula cl;
      cl.vars = f.vars;
      cl.matrix = Formula::fls();
      d.clauses.push_back(std::move(cl));
      d.trace.cnf = d.clauses.front();
      return d;
    }
  }
  if (clauses.empty()) {
    PrenexFormula cl;
    cl.vars = f.vars;
    cl.matrix = Formula::tru();
    d.clauses.push_back(std::move(cl));
    d.trace.cnf = d.clauses.front();
    return d;
  }

  // group clauses: innermost-first, an existential variable occurring in
  // several groups forces a merge
  std::vector<std::set<VarId>> group_vars;
  std::vector<std::vector<std::size_t>> group_members;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    group_vars.push_back(sep_detail::clause_vars(clauses[i]));
    group_members.push_back({i});
  }
  for (auto it = fn.block.rbegin(); it != fn.block.rend(); ++it) {
    if (it->first == Quant::ForAll) continue;
    VarId v = it->second;
    std::vector<std::size_t> hit;
    for (std::size_t g = 0; g < group_vars.size(); ++g)
      if (group_vars[g].count(v)) hit.push_back(g);
    if (hit.size() <= 1) continue;
    for (std::size_t k = 1; k < hit.size(); ++k) {
      group_vars[hit[0]].insert(group_vars[hit[k]].begin(),
                                group_vars[hit[k]].end());
      group_members[hit[0]].insert(group_members[hit[0]].end(),
                                   group_members[hit[k]].begin(),
                                   group_members[hit[k]].end());
    }
    for (std::size_t k = hit.size(); k-- > 1;) {
      group_vars.erase(group_vars.begin() + hit[k]);
      group_members.erase(group_members.begin() + hit[k]);
    }
  }

  for (std::size_t g = 0; g < group_members.size(); ++g) {
    std::sort(group_members[g].begin(), group_members[g].end());
    PrenexFormula cl;
    cl.vars = f.vars;
    std::vector<Formula> conjuncts;
    for (std::size_t ci : group_members[g]) {
      std::vector<Formula> lits = clauses[ci];
      conjuncts.push_back(Formula::disj(std::move(lits)));
    }
    cl.matrix = Formula::conj(std::move(conjuncts));
    for (const auto& [q, v] : fn.block)
      if (group_vars[g].count(v)) cl.block.emplace_back(q, v);
    for (VarId v : fn.free_vars)
      if (group_vars[g].count(v)) cl.free_vars.push_back(v);
    d.clauses.push_back(std::move(cl));
  }

  // deterministic clause order: variable-set minimum, then atom count
  auto clause_key = [](const PrenexFormula& c) {
    std::set<VarId> vars;
    c.matrix.collect_vars(vars);
    std::size_t atoms = 0;
    c.matrix.for_each_atom([&](const Atom&) { ++atoms; });
    VarId min_var = vars.empty() ? ~VarId(0) : *vars.begin();
    return std::pair<VarId, std::size_t>(min_var, atoms);
  };
  std::stable_sort(d.clauses.begin(), d.clauses.end(),
                   [&](const PrenexFormula& a, const PrenexFormula& b) {
                     return clause_key(a) < clause_key(b);
                   });

  // f''': the clause normal form under the original prefix
  d.trace.cnf = fn;
  {
    std::vector<Formula> all;
    for (const auto& c : clauses) {
      std::vector<Formula> lits = c;
      all.push_back(Formula::disj(std::move(lits)));
    }
    d.trace.cnf.matrix = Formula::conj(std::move(all));
  }
  return d;
}

inline std::set<VarId> formula_vars(const PrenexFormula& f) {
  std::set<VarId> vars;
  f.matrix.collect_vars(vars);
  return vars;
}

/// Def. 6: number of variables shared by two formulas.
inline std::size_t sharing_factor(const PrenexFormula& f,
                                  const PrenexFormula& g) {
  if (!(f.vars == g.vars))
    throw InternalError("sharing_factor over different variable orders");
  std::set<VarId> vf = formula_vars(f), vg = formula_vars(g);
  std::size_t shared = 0;
  for (VarId v : vf) shared += vg.count(v);
  return shared;
}

/// Def. 8: clause count of the decomposition.
inline std::size_t separability(const PrenexFormula& f) {
  return separate(f).clauses.size();
}

/// Def. 9: at least 2-separable with every clause omitting some variable.
inline bool in_separable_class(const PrenexFormula& f) {
  Decomposition d = separate(f);
  if (d.clauses.size() < 2) return false;
  const std::size_t n = f.nvars();
  for (const auto& c : d.clauses)
    if (formula_vars(c).size() >= n) return false;
  return true;
}

/// Def. 10 (block reading): exactly k clauses, clause i over the i-th
/// contiguous block of n/k variables.
inline bool in_center(const PrenexFormula& f, std::size_t k) {
  const std::size_t n = f.nvars();
  if (k == 0 || n == 0 || n % k != 0)
    throw InvalidK("k must be a positive divisor of the variable count");
  Decomposition d = separate(f);
  if (d.clauses.size() != k) return false;
  const std::size_t width = n / k;
  for (std::size_t i = 0; i < k; ++i) {
    std::set<VarId> expect;
    for (std::size_t j = 0; j < width; ++j)
      expect.insert(static_cast<VarId>(i * width + j));
    if (formula_vars(d.clauses[i]) != expect) return false;
  }
  return true;
}

/// Pairwise sharing factors; diagonal holds each clause's variable count.
struct SharingReport {
  std::vector<std::vector<std::size_t>> pair_factors;
  std::size_t max_factor = 0;
  std::vector<std::set<VarId>> per_clause_vars;
};

inline SharingReport sharing_report(const Decomposition& d) {
  SharingReport r;
  const std::size_t m = d.clauses.size();
  r.per_clause_vars.reserve(m);
  for (const auto& c : d.clauses) r.per_clause_vars.push_back(formula_vars(c));
  r.pair_factors.assign(m, std::vector<std::size_t>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) {
        r.pair_factors[i][j] = r.per_clause_vars[i].size();
        continue;
      }
      std::size_t shared = 0;
      for (VarId v : r.per_clause_vars[i])
        shared += r.per_clause_vars[j].count(v);
      r.pair_factors[i][j] = shared;
      if (i != j) r.max_factor = std::max(r.max_factor, shared);
    }
  }
  return r;
}

}  // namespace parcad

#endif
