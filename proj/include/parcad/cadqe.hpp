#ifndef PARCAD_CADQE_HPP
#define PARCAD_CADQE_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "parcad/algebraic.hpp"
#include "parcad/errors.hpp"
#include "parcad/formula.hpp"
#include "parcad/formula_io.hpp"
#include "parcad/polynomial.hpp"
#include "parcad/upoly.hpp"

namespace parcad {

struct QeConfig {
  std::size_t cell_cap = 1000000;
  double timeout_ms = 0;  // 0 = unlimited
};

/// Per-level square-free, content-free, pairwise-coprime bases together
/// with the elimination order (order[0] = level 1 = bottom variable).
struct ProjectionSet {
  std::vector<VarId> order;                      // CAD order, bottom first
  std::vector<std::vector<Polynomial>> levels;   // levels[j-1] = level-j basis
  std::size_t constants_dropped = 0;

  std::size_t position_of(VarId v) const {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == v) return i;
    throw InternalError("variable not in the elimination order");
  }
};

namespace cad_detail {

/// Finest square-free basis: canonical, pairwise coprime, no constants.
class BasisBuilder {
 public:
  explicit BasisBuilder(VarId main_var) : main_(main_var) {}

  void insert(Polynomial p) {
    std::vector<Polynomial> work{std::move(p)};
    while (!work.empty()) {
      Polynomial q = std::move(work.back());
      work.pop_back();
      if (q.is_zero() || q.is_constant()) continue;
      if (q.depends_on(main_)) q = squarefree_part(q, main_);
      q = q.canonicalized();
      bool consumed = false;
      for (std::size_t i = 0; i < basis_.size() && !consumed; ++i) {
        if (basis_[i] == q) {
          consumed = true;
          break;
        }
        Polynomial g = poly_gcd(basis_[i], q);
        if (g.is_constant()) continue;
        // split both against the common factor and retry
        Polynomial b_rest = divexact(basis_[i], g).canonicalized();
        Polynomial q_rest = divexact(q, g).canonicalized();
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        work.push_back(g);
        if (!b_rest.is_constant()) work.push_back(b_rest);
        if (!q_rest.is_constant()) work.push_back(q_rest);
        consumed = true;
      }
      if (!consumed) basis_.push_back(std::move(q));
    }
  }

  std::vector<Polynomial> take() {
    std::sort(basis_.begin(), basis_.end());
    return std::move(basis_);
  }

 private:
  VarId main_;
  std::vector<Polynomial> basis_;
};

}  // namespace cad_detail

/// Collins-style projection: coefficients, discriminants, resultants and
/// principal subresultant coefficients, then a finest square-free basis
/// per level.
inline ProjectionSet project(const std::vector<Polynomial>& polys,
                             const std::vector<VarId>& order) {
  ProjectionSet ps;
  ps.order = order;
  const std::size_t n = order.size();
  ps.levels.assign(n == 0 ? 0 : n, {});
  if (n == 0) return ps;

  // place inputs at the level of their highest variable in the order
  std::vector<std::vector<Polynomial>> pending(n);
  for (const Polynomial& p : polys) {
    if (p.is_zero() || p.is_constant()) {
      ++ps.constants_dropped;
      continue;
    }
    std::size_t lev = 0;
    for (VarId v : p.occurring_vars()) lev = std::max(lev, ps.position_of(v));
    pending[lev].push_back(p);
  }

  for (std::size_t j = n; j-- > 0;) {
    VarId main = order[j];
    auto route = [&](const Polynomial& cand) {
      if (cand.is_zero() || cand.is_constant()) {
        ++ps.constants_dropped;
        return;
      }
      std::size_t lev = 0;
      for (VarId v : cand.occurring_vars())
        lev = std::max(lev, ps.position_of(v));
      pending[lev].push_back(cand);
    };
    cad_detail::BasisBuilder builder(main);
    for (Polynomial& p : pending[j]) {
      // separate the content: it lives at a lower level
      if (p.depends_on(main)) {
        Polynomial h = content_wrt(p, main);
        if (!h.is_constant()) {
          route(h);
          p = divexact(p, h);
        }
      }
      builder.insert(std::move(p));
    }
    ps.levels[j] = builder.take();
    if (j == 0) break;
    for (const Polynomial& p : ps.levels[j]) {
      UnivariateView up = univariate_view(p, main);
      for (const Polynomial& c : up.coefficients) route(c);
      std::int64_t dp = up.degree();
      if (dp >= 2) {
        route(discriminant(up, p.nvars()));
        UnivariateView dpv = univariate_view(p.derivative(main), main);
        for (std::size_t k = 1;
             k < static_cast<std::size_t>(std::min(dp, dpv.degree())); ++k)
          route(psc(up, dpv, k, p.nvars()));
      }
    }
    for (std::size_t a = 0; a < ps.levels[j].size(); ++a) {
      for (std::size_t b = a + 1; b < ps.levels[j].size(); ++b) {
        UnivariateView ua = univariate_view(ps.levels[j][a], main);
        UnivariateView ub = univariate_view(ps.levels[j][b], main);
        if (ua.degree() < 1 || ub.degree() < 1) continue;
        route(resultant(ua, ub, ps.levels[j][a].nvars()));
        for (std::size_t k = 1;
             k < static_cast<std::size_t>(std::min(ua.degree(), ub.degree()));
             ++k)
          route(psc(ua, ub, k, ps.levels[j][a].nvars()));
      }
    }
  }
  return ps;
}

enum class CellKind { Sector, Section };

/// One CAD cell; the full sample point is the chain of coordinates from the
/// level-1 ancestor down to this cell.
struct Cell {
  std::size_t parent = static_cast<std::size_t>(-1);
  std::size_t index_in_stack = 0;  // 1-based position within its stack
  CellKind kind = CellKind::Sector;
  Coordinate coord = Rat(0);
  std::vector<std::int8_t> basis_signs;  // per level-basis polynomial
  int truth = -1;                        // -1 undetermined
};

struct CadStats {
  std::size_t total_cells = 0;
  std::vector<std::size_t> cells_per_level;
  std::size_t delineability_warnings = 0;
  std::size_t constants_dropped = 0;
  double project_ms = 0, base_ms = 0, lift_ms = 0, eval_ms = 0,
         solution_ms = 0, wall_ms = 0;
};

struct CadTree {
  ProjectionSet projection;
  std::vector<std::vector<Cell>> levels;  // levels[j-1] = level-j cells
  // children of cell (j,i) occupy [child_begin[j-1][i], child_end[j-1][i])
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> child_ranges;
  CadStats stats;

  PointAssignment sample_point(std::size_t level, std::size_t idx) const {
    PointAssignment pt;
    std::size_t j = level, i = idx;
    while (true) {
      pt.emplace_back(projection.order[j - 1], levels[j - 1][i].coord);
      if (j == 1) break;
      i = levels[j - 1][i].parent;
      --j;
    }
    std::reverse(pt.begin(), pt.end());
    return pt;
  }
};

namespace cad_detail {

struct MergedRoot {
  Coordinate coord;
  std::set<std::size_t> owners;  // indices of basis polynomials vanishing here
};

/// Merge per-polynomial root lists into one strictly increasing sequence.
inline std::vector<MergedRoot> merge_roots(
    std::vector<std::pair<std::size_t, std::vector<Coordinate>>>& per_poly) {
  std::vector<MergedRoot> merged;
  for (auto& [poly_idx, roots] : per_poly) {
    for (auto& r : roots) {
      bool placed = false;
      // linear scan keeps exact comparisons simple; root counts are small
      for (std::size_t i = 0; i < merged.size() && !placed; ++i) {
        int c = compare_coordinates(r, merged[i].coord);
        if (c == 0) {
          merged[i].owners.insert(poly_idx);
          placed = true;
        } else if (c < 0) {
          merged.insert(merged.begin() + static_cast<std::ptrdiff_t>(i),
                        MergedRoot{std::move(r), {poly_idx}});
          placed = true;
        }
      }
      if (!placed) merged.push_back(MergedRoot{std::move(r), {poly_idx}});
    }
  }
  return merged;
}

/// Strictly separating rational points around the merged roots:
/// out[0] < r_0 < out[1] < r_1 < ... < r_{m-1} < out[m].
inline std::vector<Rat> separating_samples(std::vector<MergedRoot>& roots) {
  std::vector<Rat> out;
  if (roots.empty()) {
    out.emplace_back(0);
    return out;
  }
  auto iv = [&](std::size_t i) { return coord_interval(roots[i].coord); };
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    while (iv(i).hi >= iv(i + 1).lo) {
      if (auto* a = std::get_if<AlgebraicNumber>(&roots[i].coord))
        a->refine_once();
      if (auto* b = std::get_if<AlgebraicNumber>(&roots[i + 1].coord))
        b->refine_once();
    }
  }
  out.push_back(iv(0).lo - 1);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i)
    out.push_back((iv(i).hi + iv(i + 1).lo) / 2);
  out.push_back(iv(roots.size() - 1).hi + 1);
  return out;
}

}  // namespace cad_detail

/// Level-1 decomposition: sections at the roots of the basis polynomials,
/// sectors in between with rational samples.
inline std::vector<Cell> base_decompose(const std::vector<Polynomial>& level1,
                                        VarId bottom_var) {
  std::vector<std::pair<std::size_t, std::vector<Coordinate>>> per_poly;
  std::vector<UPoly> dense;
  for (std::size_t i = 0; i < level1.size(); ++i) {
    dense.push_back(up_from_polynomial(level1[i], bottom_var));
    auto iso = sturm_isolate(dense.back());
    std::vector<Coordinate> roots;
    for (auto& r : iso.roots)
      roots.push_back(r.is_point() ? Coordinate(r.lo()) : Coordinate(r));
    per_poly.emplace_back(i, std::move(roots));
  }
  auto merged = cad_detail::merge_roots(per_poly);
  std::vector<Rat> seps;
  if (!merged.empty()) {
    // spec'd end samples: +-(bound + 1) with the Cauchy bound over the basis
    Rat bound = 0;
    for (const auto& u : dense)
      if (up_degree(u) >= 1) bound = std::max(bound, up_root_bound(u));
    seps = cad_detail::separating_samples(merged);
    seps.front() = -(bound + 1);
    seps.back() = bound + 1;
  } else {
    seps = {Rat(0)};
  }

  std::vector<Cell> cells;
  auto sector_signs = [&](const Rat& x) {
    std::vector<std::int8_t> s;
    for (const auto& u : dense)
      s.push_back(static_cast<std::int8_t>(up_sign_at(u, x)));
    return s;
  };
  for (std::size_t i = 0; i < merged.size() + 1; ++i) {
    Cell sector;
    sector.kind = CellKind::Sector;
    sector.index_in_stack = 2 * i + 1;
    sector.coord = seps[i];
    sector.basis_signs = sector_signs(seps[i]);
    cells.push_back(std::move(sector));
    if (i < merged.size()) {
      Cell section;
      section.kind = CellKind::Section;
      section.index_in_stack = 2 * i + 2;
      section.coord = merged[i].coord;
      for (std::size_t p = 0; p < dense.size(); ++p) {
        if (merged[i].owners.count(p)) {
          section.basis_signs.push_back(0);
        } else {
          // continuity: same sign as the adjacent sector
          section.basis_signs.push_back(cells.back().basis_signs[p]);
        }
      }
      cells.push_back(std::move(section));
    }
  }
  return cells;
}

/// Lift one base cell against the level polynomials, producing its stack.
/// Returns the new cells; `warnings` counts identically-vanishing level
/// polynomials (skipped for root production, sign recorded 0).
inline std::vector<Cell> lift(PointAssignment& base_point,
                              std::size_t parent_index,
                              const std::vector<Polynomial>& level_polys,
                              VarId new_var, std::size_t& warnings) {
  std::vector<std::pair<std::size_t, std::vector<Coordinate>>> per_poly;
  std::vector<bool> vanished(level_polys.size(), false);
  for (std::size_t i = 0; i < level_polys.size(); ++i) {
    TowerRoots tr = isolate_over_tower(level_polys[i], new_var, base_point);
    if (tr.identically_zero) {
      vanished[i] = true;
      ++warnings;
      continue;
    }
    per_poly.emplace_back(i, std::move(tr.roots));
  }
  auto merged = cad_detail::merge_roots(per_poly);
  std::vector<Rat> seps = cad_detail::separating_samples(merged);

  std::vector<Cell> stack;
  auto sector_signs = [&](const Rat& x) {
    std::vector<std::int8_t> s(level_polys.size(), 0);
    for (std::size_t p = 0; p < level_polys.size(); ++p) {
      if (vanished[p]) continue;
      PointAssignment pt = base_point;
      pt.emplace_back(new_var, Coordinate(x));
      s[p] = static_cast<std::int8_t>(sign_at(level_polys[p], pt));
    }
    return s;
  };
  for (std::size_t i = 0; i < merged.size() + 1; ++i) {
    Cell sector;
    sector.kind = CellKind::Sector;
    sector.parent = parent_index;
    sector.index_in_stack = 2 * i + 1;
    sector.coord = seps[i];
    sector.basis_signs = sector_signs(seps[i]);
    stack.push_back(std::move(sector));
    if (i < merged.size()) {
      Cell section;
      section.kind = CellKind::Section;
      section.parent = parent_index;
      section.index_in_stack = 2 * i + 2;
      section.coord = merged[i].coord;
      for (std::size_t p = 0; p < level_polys.size(); ++p) {
        if (merged[i].owners.count(p))
          section.basis_signs.push_back(0);
        else
          section.basis_signs.push_back(stack.back().basis_signs[p]);
      }
      stack.push_back(std::move(section));
    }
  }
  return stack;
}

/// Build a sign-invariant CAD for the atom polynomials of f. The
/// elimination order puts free variables at the bottom and the innermost
/// quantified variable on top.
inline CadTree build_cad(const PrenexFormula& f, const QeConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Polynomial> inputs;
  f.matrix.for_each_atom([&](const Atom& a) {
    if (!a.poly.is_constant()) inputs.push_back(a.poly);
  });
  std::vector<VarId> order;
  for (VarId v : f.free_vars) order.push_back(v);
  for (const auto& [q, v] : f.block) order.push_back(v);

  CadTree tree;
  tree.projection = project(inputs, order);
  tree.stats.constants_dropped = tree.projection.constants_dropped;
  auto t1 = std::chrono::steady_clock::now();
  tree.stats.project_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();

  const std::size_t n = order.size();
  tree.levels.assign(n, {});
  tree.child_ranges.assign(n, {});
  if (n == 0) {
    tree.stats.wall_ms = tree.stats.project_ms;
    return tree;
  }
  tree.levels[0] = base_decompose(tree.projection.levels[0], order[0]);
  tree.stats.total_cells = tree.levels[0].size();
  auto t2 = std::chrono::steady_clock::now();
  tree.stats.base_ms =
      std::chrono::duration<double, std::milli>(t2 - t1).count();

  for (std::size_t j = 2; j <= n; ++j) {
    const auto& bases = tree.levels[j - 2];
    tree.child_ranges[j - 2].assign(bases.size(), {0, 0});
    std::vector<Cell> next;
    for (std::size_t b = 0; b < bases.size(); ++b) {
      if (cfg.timeout_ms > 0) {
        auto now = std::chrono::steady_clock::now();
        if (std::chrono::duration<double, std::milli>(now - t0).count() >
            cfg.timeout_ms)
          throw TimeoutExceeded();
      }
      PointAssignment pt;
      {
        std::size_t jj = j - 1, ii = b;
        while (true) {
          pt.emplace_back(order[jj - 1], tree.levels[jj - 1][ii].coord);
          if (jj == 1) break;
          ii = tree.levels[jj - 1][ii].parent;
          --jj;
        }
        std::reverse(pt.begin(), pt.end());
      }
      std::vector<Cell> stack =
          lift(pt, b, tree.projection.levels[j - 1], order[j - 1],
               tree.stats.delineability_warnings);
      tree.child_ranges[j - 2][b] = {next.size(), next.size() + stack.size()};
      for (auto& c : stack) next.push_back(std::move(c));
      if (tree.stats.total_cells + next.size() > cfg.cell_cap)
        throw ResourceLimit(tree.stats.total_cells + next.size());
    }
    tree.levels[j - 1] = std::move(next);
    tree.stats.total_cells += tree.levels[j - 1].size();
  }
  tree.stats.cells_per_level.clear();
  for (const auto& lv : tree.levels)
    tree.stats.cells_per_level.push_back(lv.size());
  auto t3 = std::chrono::steady_clock::now();
  tree.stats.lift_ms =
      std::chrono::duration<double, std::milli>(t3 - t2).count();
  tree.stats.wall_ms =
      std::chrono::duration<double, std::milli>(t3 - t0).count();
  return tree;
}

namespace cad_detail {

/// Input-polynomial factorization over the projection bases: the polynomial
/// splits into basis factors at its own level plus content factors routed to
/// lower levels, so the plan spans several levels.
struct AtomSignPlan {
  int unit = 1;           // sign of the removed integer content
  int const_sign = 0;     // for constant polynomials
  std::size_t top_level = 0;  // 0 = constant polynomial
  // (level, basis index, multiplicity), levels descending
  std::vector<std::tuple<std::size_t, std::size_t, std::uint32_t>> factors;
};

inline AtomSignPlan plan_atom_sign(const Polynomial& p,
                                   const ProjectionSet& ps) {
  AtomSignPlan plan;
  if (p.is_constant()) {
    plan.const_sign = sign_of(p.constant_value());
    return plan;
  }
  std::size_t lev = 0;
  for (VarId v : p.occurring_vars()) lev = std::max(lev, ps.position_of(v));
  plan.top_level = lev + 1;
  Polynomial rest = p;
  for (std::size_t level = lev + 1; level-- > 0 && !rest.is_constant();) {
    const auto& basis = ps.levels[level];
    for (std::size_t i = 0; i < basis.size(); ++i) {
      std::uint32_t mult = 0;
      while (!rest.is_constant()) {
        bool divided = false;
        try {
          Polynomial q = divexact(rest, basis[i]);
          rest = std::move(q);
          divided = true;
        } catch (const InternalError&) {
          divided = false;
        }
        if (!divided) break;
        ++mult;
      }
      if (mult > 0) plan.factors.emplace_back(level + 1, i, mult);
    }
  }
  if (!rest.is_constant())
    throw InternalError("atom polynomial does not factor over the bases");
  plan.unit = sign_of(rest.constant_value());
  if (plan.unit == 0) throw InternalError("zero unit in atom factorization");
  return plan;
}

inline int atom_sign_at_cell(const AtomSignPlan& plan, const CadTree& tree,
                             std::size_t leaf_level, std::size_t leaf_idx) {
  if (plan.top_level == 0) return plan.const_sign;
  int s = plan.unit;
  std::size_t j = leaf_level, i = leaf_idx;
  auto it = plan.factors.begin();
  while (it != plan.factors.end()) {
    auto [lvl, idx, mult] = *it;
    while (j > lvl) {
      i = tree.levels[j - 1][i].parent;
      --j;
    }
    int bs = tree.levels[j - 1][i].basis_signs[idx];
    if (bs == 0) return 0;
    if (mult % 2 == 1) s *= bs;
    ++it;
  }
  return s;
}

inline bool eval_matrix_at_cell(
    const Formula& m, const std::map<const void*, AtomSignPlan>& plans,
    const CadTree& tree, std::size_t leaf_level, std::size_t leaf_idx) {
  switch (m.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Leaf: {
      const AtomSignPlan& plan = plans.at(static_cast<const void*>(&m));
      int s = atom_sign_at_cell(plan, tree, leaf_level, leaf_idx);
      return m.atom().holds_at_sign(s);
    }
    case Formula::Kind::Not:
      return !eval_matrix_at_cell(m.children().front(), plans, tree,
                                  leaf_level, leaf_idx);
    case Formula::Kind::And:
      for (const auto& c : m.children())
        if (!eval_matrix_at_cell(c, plans, tree, leaf_level, leaf_idx))
          return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& c : m.children())
        if (eval_matrix_at_cell(c, plans, tree, leaf_level, leaf_idx))
          return true;
      return false;
    case Formula::Kind::Quantified:
      throw InternalError("quantifier inside a prenex matrix");
  }
  return false;
}

inline void collect_atom_plans(const Formula& m, const ProjectionSet& ps,
                               std::map<const void*, AtomSignPlan>& plans) {
  if (m.kind() == Formula::Kind::Leaf) {
    plans.emplace(static_cast<const void*>(&m),
                  plan_atom_sign(m.atom().poly, ps));
    return;
  }
  for (const auto& c : m.children()) collect_atom_plans(c, ps, plans);
}

}  // namespace cad_detail

/// Algorithm 1 steps 1-2: evaluate the matrix at every leaf sample point,
/// then fold truth down the tree by the quantifier of each level.
inline void evaluate_and_propagate(CadTree& tree, const PrenexFormula& f) {
  auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = tree.levels.size();
  const std::size_t k = f.free_vars.size();
  std::map<const void*, cad_detail::AtomSignPlan> plans;
  cad_detail::collect_atom_plans(f.matrix, tree.projection, plans);

  if (n == 0) {
    tree.stats.eval_ms = 0;
    return;
  }
  for (std::size_t i = 0; i < tree.levels[n - 1].size(); ++i) {
    tree.levels[n - 1][i].truth =
        cad_detail::eval_matrix_at_cell(f.matrix, plans, tree, n, i) ? 1 : 0;
  }
  for (std::size_t j = n - 1; j >= std::max<std::size_t>(k, 1); --j) {
    // quantifier governing level j+1
    Quant q = f.block.at(j - k).first;
    for (std::size_t b = 0; b < tree.levels[j - 1].size(); ++b) {
      auto [lo, hi] = tree.child_ranges[j - 1][b];
      bool acc = q == Quant::ForAll;
      for (std::size_t c = lo; c < hi; ++c) {
        bool v = tree.levels[j][c].truth == 1;
        acc = q == Quant::ForAll ? (acc && v) : (acc || v);
      }
      tree.levels[j - 1][b].truth = acc ? 1 : 0;
    }
    if (j == 1) break;
  }
  auto t1 = std::chrono::steady_clock::now();
  tree.stats.eval_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
}

struct QeResult {
  Formula formula;  // quantifier-free, over the input's variable table
  VarTable vars;
  struct Row {
    Formula cell_formula;
    std::string sample;
    bool truth = false;
  };
  std::vector<Row> truth_table;
  CadStats stats;
  bool extended_output = false;  // sign conditions failed to separate cells
};

namespace cad_detail {

inline Formula cell_sign_formula(const CadTree& tree, std::size_t level,
                                 std::size_t idx) {
  std::vector<Formula> conj;
  std::size_t j = level, i = idx;
  while (true) {
    const Cell& c = tree.levels[j - 1][i];
    const auto& basis = tree.projection.levels[j - 1];
    for (std::size_t p = 0; p < basis.size(); ++p) {
      Rel rel = c.basis_signs[p] == 0
                    ? Rel::Eq
                    : (c.basis_signs[p] < 0 ? Rel::Lt : Rel::Gt);
      conj.push_back(Formula::leaf(Atom::make(basis[p], rel)));
    }
    if (j == 1) break;
    i = tree.levels[j - 1][i].parent;
    --j;
  }
  if (conj.empty()) return Formula::tru();
  std::reverse(conj.begin(), conj.end());
  return Formula::conj(std::move(conj));
}

inline std::string describe_point(const CadTree& tree, std::size_t level,
                                  std::size_t idx, const VarTable& vars) {
  PointAssignment pt = tree.sample_point(level, idx);
  std::string out = "(";
  for (std::size_t i = 0; i < pt.size(); ++i) {
    if (i) out += ", ";
    out += vars.name(pt[i].first) + "=";
    if (coord_is_rational(pt[i].second)) {
      out += to_string(coord_rational_value(pt[i].second));
    } else {
      const auto& a = std::get<AlgebraicNumber>(pt[i].second);
      out += "root in (" + to_string(a.lo()) + ", " + to_string(a.hi()) + ")";
    }
  }
  return out + ")";
}

}  // namespace cad_detail

/// Algorithm 1 step 3: disjunction of the sign-condition formulas of the
/// true cells at the free-variable level.
inline Formula solution_formula(const CadTree& tree, std::size_t k,
                                bool* definable = nullptr) {
  if (definable) *definable = true;
  if (k == 0) {
    // closed formula: aggregate already folded into level 1; the formula is
    // the quantifier over level 1, so fold once more
    throw InternalError("solution_formula requires k >= 1; use qe()");
  }
  const auto& cells = tree.levels[k - 1];
  std::vector<std::vector<std::int8_t>> vectors;
  std::vector<int> truths;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::vector<std::int8_t> sig;
    std::size_t j = k, ii = i;
    while (true) {
      const Cell& c = tree.levels[j - 1][ii];
      sig.insert(sig.end(), c.basis_signs.begin(), c.basis_signs.end());
      if (j == 1) break;
      ii = tree.levels[j - 1][ii].parent;
      --j;
    }
    vectors.push_back(std::move(sig));
    truths.push_back(cells[i].truth);
  }
  for (std::size_t a = 0; a < vectors.size(); ++a)
    for (std::size_t b = a + 1; b < vectors.size(); ++b)
      if (vectors[a] == vectors[b] && truths[a] != truths[b]) {
        if (definable) {
          *definable = false;
          return Formula::fls();
        }
        throw NotSignDefinable("level-" + std::to_string(k) +
                               " cells share a sign vector with different "
                               "truth");
      }

  std::vector<Formula> disj;
  std::set<std::vector<std::int8_t>> seen;
  bool any_false = false;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (truths[i] != 1) {
      any_false = true;
      continue;
    }
    if (!seen.insert(vectors[i]).second) continue;
    disj.push_back(cad_detail::cell_sign_formula(tree, k, i));
  }
  if (disj.empty()) return Formula::fls();
  if (!any_false) return Formula::tru();
  return Formula::disj(std::move(disj));
}

/// Full quantifier elimination: build, evaluate, and emit the solution
/// formula, all over a compacted variable space.
inline QeResult qe(const PrenexFormula& f, const QeConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  f.check_invariants();

  // compact to the variables that matter: free variables plus occurring
  // block variables
  std::set<VarId> occurring;
  f.matrix.collect_vars(occurring);
  PrenexFormula g;
  std::vector<VarId> back_map;  // compact id -> original id
  std::vector<VarId> fwd(f.nvars(), 0);
  for (VarId v : f.free_vars) {
    fwd[v] = static_cast<VarId>(back_map.size());
    back_map.push_back(v);
    g.vars.add(f.vars.name(v));
    g.free_vars.push_back(fwd[v]);
  }
  for (const auto& [q, v] : f.block) {
    if (!occurring.count(v)) continue;
    fwd[v] = static_cast<VarId>(back_map.size());
    back_map.push_back(v);
    g.vars.add(f.vars.name(v));
    g.block.emplace_back(q, fwd[v]);
  }
  std::vector<VarId> perm(f.nvars(), 0);
  for (std::size_t i = 0; i < back_map.size(); ++i) perm[back_map[i]] = static_cast<VarId>(i);
  g.matrix = f.matrix.map_atoms([&](const Atom& a) {
    return Formula::leaf(
        Atom{a.poly.map_vars(perm, back_map.size()), a.rel});
  });

  QeResult res;
  res.vars = f.vars;
  CadTree tree = build_cad(g, cfg);
  evaluate_and_propagate(tree, g);

  const std::size_t k = g.free_vars.size();
  auto t1 = std::chrono::steady_clock::now();
  Formula sol;
  bool definable = true;
  if (k == 0) {
    bool truth;
    if (tree.levels.empty()) {
      // no variables at all: evaluate the constant matrix directly
      std::map<const void*, cad_detail::AtomSignPlan> plans;
      cad_detail::collect_atom_plans(g.matrix, tree.projection, plans);
      truth = cad_detail::eval_matrix_at_cell(g.matrix, plans, tree, 0, 0);
    } else {
      Quant q = g.block.front().first;
      bool acc = q == Quant::ForAll;
      for (const auto& c : tree.levels[0]) {
        bool v = c.truth == 1;
        acc = q == Quant::ForAll ? (acc && v) : (acc || v);
      }
      truth = acc;
    }
    sol = truth ? Formula::tru() : Formula::fls();
  } else {
    sol = solution_formula(tree, k, &definable);
    res.extended_output = !definable;
    for (std::size_t i = 0; i < tree.levels[k - 1].size(); ++i) {
      QeResult::Row row;
      row.cell_formula = cad_detail::cell_sign_formula(tree, k, i);
      row.sample = cad_detail::describe_point(tree, k, i, g.vars);
      row.truth = tree.levels[k - 1][i].truth == 1;
      res.truth_table.push_back(std::move(row));
    }
    if (!definable) sol = Formula::fls();
  }
  // re-embed into the original variable table
  std::vector<VarId> unmap(back_map.size(), 0);
  for (std::size_t i = 0; i < back_map.size(); ++i) unmap[i] = back_map[i];
  res.formula = sol.map_atoms([&](const Atom& a) {
    return Formula::leaf(Atom{a.poly.map_vars(unmap, f.nvars()), a.rel});
  });
  for (auto& row : res.truth_table) {
    row.cell_formula = row.cell_formula.map_atoms([&](const Atom& a) {
      return Formula::leaf(Atom{a.poly.map_vars(unmap, f.nvars()), a.rel});
    });
  }
  auto t2 = std::chrono::steady_clock::now();
  res.stats = tree.stats;
  res.stats.solution_ms =
      std::chrono::duration<double, std::milli>(t2 - t1).count();
  res.stats.wall_ms =
      std::chrono::duration<double, std::milli>(t2 - t0).count();
  res.stats.eval_ms = tree.stats.eval_ms;
  return res;
}

}  // namespace parcad

#endif
