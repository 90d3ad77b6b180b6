#ifndef PARCAD_TEST_SUPPORT_HPP
#define PARCAD_TEST_SUPPORT_HPP

#include <cstdint>
#include <vector>

#include "parcad/formula.hpp"
#include "parcad/normalize.hpp"

namespace parcad::testsupport {

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97f4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  int range(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline Polynomial random_poly(Rng& rng, std::size_t nvars, int max_deg,
                              int max_terms) {
  Polynomial p(nvars);
  int terms = rng.range(1, max_terms);
  for (int t = 0; t < terms; ++t) {
    ExpVec ev(nvars, 0);
    for (std::size_t i = 0; i < nvars; ++i)
      ev[i] = static_cast<std::uint32_t>(rng.range(0, max_deg));
    int c = rng.range(-9, 9);
    if (c != 0) p.add_term(ev, Int(c));
  }
  return p;
}

inline Atom random_atom(Rng& rng, std::size_t nvars, int max_deg,
                        int max_terms) {
  static const Rel rels[] = {Rel::Eq, Rel::Ne, Rel::Lt,
                             Rel::Le, Rel::Gt, Rel::Ge};
  return Atom::make(random_poly(rng, nvars, max_deg, max_terms),
                    rels[rng.range(0, 5)]);
}

inline Formula random_tree(Rng& rng, std::size_t nvars, int depth, int max_deg,
                           int max_terms) {
  if (depth == 0 || rng.range(0, 3) == 0)
    return Formula::leaf(random_atom(rng, nvars, max_deg, max_terms));
  int kind = rng.range(0, 4);
  if (kind == 4)
    return Formula::negation(
        random_tree(rng, nvars, depth - 1, max_deg, max_terms));
  std::vector<Formula> cs;
  int fanout = rng.range(2, 3);
  for (int i = 0; i < fanout; ++i)
    cs.push_back(random_tree(rng, nvars, depth - 1, max_deg, max_terms));
  return kind % 2 == 0 ? Formula::conj(std::move(cs))
                       : Formula::disj(std::move(cs));
}

inline PrenexFormula random_prenex(Rng& rng, std::size_t nvars, int depth,
                                   int max_deg, int max_terms,
                                   int quantified) {
  PrenexFormula f;
  for (std::size_t i = 0; i < nvars; ++i)
    f.vars.add("x" + std::to_string(i));
  f.matrix = random_tree(rng, nvars, depth, max_deg, max_terms);
  std::set<VarId> occurring;
  f.matrix.collect_vars(occurring);
  for (int i = 0; i < quantified && i < static_cast<int>(nvars); ++i)
    f.block.emplace_back(rng.range(0, 1) == 0 ? Quant::ForAll : Quant::Exists,
                         static_cast<VarId>(i));
  for (VarId v = 0; v < nvars; ++v)
    if (!f.is_quantified(v) && occurring.count(v)) f.free_vars.push_back(v);
  return f;
}

/// Necessary-condition oracle: evaluate a prenex formula with quantifiers
/// instantiated over a finite rational grid.
inline bool eval_on_grid(const PrenexFormula& f,
                         const std::vector<Rat>& grid,
                         std::vector<Rat>& point, std::size_t block_index) {
  if (block_index == f.block.size()) return f.matrix.eval(point);
  auto [q, v] = f.block[block_index];
  for (const Rat& val : grid) {
    point[v] = val;
    bool r = eval_on_grid(f, grid, point, block_index + 1);
    if (q == Quant::Exists && r) return true;
    if (q == Quant::ForAll && !r) return false;
  }
  return q == Quant::ForAll;
}

inline bool eval_on_grid(const PrenexFormula& f, const std::vector<Rat>& grid,
                         std::vector<Rat> free_point) {
  return eval_on_grid(f, grid, free_point, 0);
}

}  // namespace parcad::testsupport

#endif
