#ifndef PARCAD_EXPGEN_HPP
#define PARCAD_EXPGEN_HPP

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "parcad/orchestrator.hpp"

namespace parcad {

/// Deterministic 64-bit generator (splitmix64). The update function is
/// state += 0x9E3779B97F4A7C15; z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
/// z = (z ^ z>>27) * 0x94D049BB133111EB; output z ^ z>>31.
/// Bounded draws use plain modulo; the bias is irrelevant at these ranges
/// and keeps the fixture values reproducible across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t bounded(std::uint64_t m) { return m ? next() % m : 0; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    bounded(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

enum class SharingPattern { SharedAll, BlockDisjoint, TwoClauseShared };

struct GeneratorParams {
  std::size_t n_vars = 2;          // variables per clause block
  std::size_t clauses = 1;
  std::size_t polys_per_clause = 2;
  std::size_t max_terms = 2;       // T: terms per polynomial, 1..T
  std::uint32_t max_exponent = 2;  // E: exponents drawn from 0..E
  bool mixed_relations = false;    // false = every atom an equation
  std::uint64_t seed = 0;
  SharingPattern pattern = SharingPattern::SharedAll;
  std::size_t shared_count = 0;    // s, TwoClauseShared only

  void validate() const {
    if (max_terms < 1) throw InvalidParams("max_terms must be >= 1");
    if (n_vars < 1) throw InvalidParams("n_vars must be >= 1");
    if (clauses < 1) throw InvalidParams("clauses must be >= 1");
    if (polys_per_clause < 1)
      throw InvalidParams("polys_per_clause must be >= 1");
    if (pattern == SharingPattern::TwoClauseShared) {
      if (shared_count > 3)
        throw InvalidParams("shared_count must be <= 3");
    }
  }
};

namespace gen_detail {

inline Polynomial random_poly(SplitMix64& rng, std::size_t total_vars,
                              const std::vector<VarId>& usable,
                              std::size_t max_terms,
                              std::uint32_t max_exponent) {
  Polynomial p(total_vars);
  std::size_t terms = 1 + rng.bounded(max_terms);
  for (std::size_t t = 0; t < terms; ++t) {
    ExpVec ev(total_vars, 0);
    for (VarId v : usable)
      ev[v] = static_cast<std::uint32_t>(rng.bounded(max_exponent + 1));
    std::int64_t c = 0;
    while (c == 0) c = rng.range(-99, 99);
    p.add_term(ev, Int(c));
  }
  return p;
}

inline Rel random_rel(SplitMix64& rng, bool mixed) {
  if (!mixed) return Rel::Eq;
  static const Rel rels[] = {Rel::Eq, Rel::Ne, Rel::Lt,
                             Rel::Le, Rel::Gt, Rel::Ge};
  return rels[rng.bounded(6)];
}

inline Formula random_clause(SplitMix64& rng, std::size_t total_vars,
                             const std::vector<VarId>& usable,
                             const GeneratorParams& p) {
  std::size_t natoms = 1 + rng.bounded(p.polys_per_clause);
  std::vector<Formula> lits;
  for (std::size_t a = 0; a < natoms; ++a) {
    Polynomial poly =
        random_poly(rng, total_vars, usable, p.max_terms, p.max_exponent);
    lits.push_back(
        Formula::leaf(Atom::make(std::move(poly), random_rel(rng, p.mixed_relations))));
  }
  return Formula::disj(std::move(lits));
}

/// Clause that uses every variable of `usable` at least once; retries are
/// deterministic draws from the same stream, with an exponent patch as the
/// last resort.
inline Formula clause_covering(SplitMix64& rng, std::size_t total_vars,
                               const std::vector<VarId>& usable,
                               const GeneratorParams& p) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Formula c = random_clause(rng, total_vars, usable, p);
    std::set<VarId> occ;
    c.collect_vars(occ);
    bool all = true;
    for (VarId v : usable) all = all && occ.count(v);
    if (all) return c;
  }
  // patch: multiply the first atom by the missing variables
  Formula c = random_clause(rng, total_vars, usable, p);
  std::set<VarId> occ;
  c.collect_vars(occ);
  Polynomial extra = Polynomial::constant(total_vars, 1);
  for (VarId v : usable)
    if (!occ.count(v)) extra = extra * Polynomial::variable(total_vars, v);
  bool patched = false;
  return c.map_atoms([&](const Atom& a) {
    if (patched) return Formula::leaf(a);
    patched = true;
    return Formula::leaf(Atom::make(a.poly * extra, a.rel));
  });
}

}  // namespace gen_detail

/// Seeded CNF-shaped prenex formula generator.
inline PrenexFormula gen_formula(const GeneratorParams& p) {
  p.validate();
  SplitMix64 rng(p.seed);
  PrenexFormula f;

  if (p.pattern == SharingPattern::TwoClauseShared) {
    // sharing-study protocol: two clauses over six variables; the first is
    // a fixed function of the seed, the second reuses s of its variables
    for (int i = 0; i < 6; ++i) f.vars.add("x" + std::to_string(i));
    GeneratorParams q = p;
    q.polys_per_clause = 2;
    q.max_terms = 2;
    SplitMix64 rng1(p.seed);
    std::vector<VarId> first_vars{0, 1, 2};
    Formula c1 = gen_detail::clause_covering(rng1, 6, first_vars, q);
    SplitMix64 rng2(p.seed ^ (0x5851F42D4C957F2DULL + p.shared_count));
    std::vector<VarId> second_vars;
    for (std::size_t i = 0; i < p.shared_count; ++i)
      second_vars.push_back(static_cast<VarId>(i));
    second_vars.push_back(3);
    second_vars.push_back(4);
    second_vars.push_back(5);
    Formula c2 = gen_detail::clause_covering(rng2, 6, second_vars, q);
    f.matrix = Formula::conj({std::move(c1), std::move(c2)});
    for (VarId v = 0; v <= 3; ++v) f.block.emplace_back(Quant::ForAll, v);
    std::set<VarId> occ;
    f.matrix.collect_vars(occ);
    for (VarId v = 4; v <= 5; ++v)
      if (occ.count(v)) f.free_vars.push_back(v);
    return f;
  }

  const bool disjoint = p.pattern == SharingPattern::BlockDisjoint;
  const std::size_t total = disjoint ? p.n_vars * p.clauses : p.n_vars;
  for (std::size_t i = 0; i < total; ++i) f.vars.add("x" + std::to_string(i));
  std::vector<Formula> clauses;
  for (std::size_t c = 0; c < p.clauses; ++c) {
    std::vector<VarId> usable;
    if (disjoint) {
      for (std::size_t i = 0; i < p.n_vars; ++i)
        usable.push_back(static_cast<VarId>(c * p.n_vars + i));
    } else {
      for (std::size_t i = 0; i < p.n_vars; ++i)
        usable.push_back(static_cast<VarId>(i));
    }
    Formula clause = gen_detail::random_clause(rng, total, usable, p);
    if (p.max_exponent >= 1) {
      // all-constant clauses would merge under deduplication; redraw
      for (int attempt = 0; attempt < 16; ++attempt) {
        std::set<VarId> occ;
        clause.collect_vars(occ);
        if (!occ.empty()) break;
        clause = gen_detail::random_clause(rng, total, usable, p);
      }
    }
    clauses.push_back(std::move(clause));
  }
  f.matrix = Formula::conj(std::move(clauses));
  std::set<VarId> occ;
  f.matrix.collect_vars(occ);
  for (std::size_t v = 0; v < total; ++v)
    if (occ.count(static_cast<VarId>(v)))
      f.block.emplace_back(Quant::ForAll, static_cast<VarId>(v));
  return f;
}

namespace gen_detail {

inline bool is_literal_shape(const Formula& f) {
  return f.kind() == Formula::Kind::Leaf ||
         (f.kind() == Formula::Kind::Not &&
          f.children().front().kind() == Formula::Kind::Leaf);
}

inline bool is_clause_shape(const Formula& f) {
  if (is_literal_shape(f)) return true;
  if (f.kind() != Formula::Kind::Or) return false;
  for (const auto& c : f.children())
    if (!is_literal_shape(c)) return false;
  return true;
}

inline bool is_cnf_shape(const Formula& f) {
  if (is_clause_shape(f)) return true;
  if (f.kind() != Formula::Kind::And) return false;
  for (const auto& c : f.children())
    if (!is_clause_shape(c)) return false;
  return true;
}

}  // namespace gen_detail

/// Random non-CNF population for the distribution experiment: boolean trees
/// of depth <= 4 and fan-out <= 3 over sparse random atoms; matrices already
/// in clause-normal shape are redrawn, mirroring the population constraint
/// of the study. Quantifiers are drawn with P(forall) = 0.85: an existential
/// shared between clauses blocks separation in the sound fragment, whereas
/// the study's converter removed existentials by skolemization.
inline PrenexFormula gen_tree_formula(std::size_t n_vars, std::uint64_t seed,
                                      std::size_t max_terms = 2,
                                      std::uint32_t max_exponent = 2) {
  SplitMix64 rng(seed);
  PrenexFormula f;
  for (std::size_t i = 0; i < n_vars; ++i) f.vars.add("x" + std::to_string(i));
  std::vector<VarId> usable;
  for (std::size_t i = 0; i < n_vars; ++i)
    usable.push_back(static_cast<VarId>(i));

  std::function<Formula(int)> build = [&](int depth) -> Formula {
    if (depth >= 4 || (depth > 0 && rng.bounded(4) == 0)) {
      // atoms touch a sparse variable subset so that clauses keep some
      // independence after separation
      std::vector<VarId> subset;
      std::size_t want = 1 + rng.bounded(2);
      for (std::size_t i = 0; i < want; ++i)
        subset.push_back(usable[rng.bounded(usable.size())]);
      Polynomial poly = gen_detail::random_poly(rng, n_vars, subset,
                                                max_terms, max_exponent);
      return Formula::leaf(
          Atom::make(std::move(poly), gen_detail::random_rel(rng, true)));
    }
    std::uint64_t kind = rng.bounded(5);
    if (kind == 4 && depth > 0) return Formula::negation(build(depth + 1));
    std::size_t fanout = 2 + rng.bounded(2);
    std::vector<Formula> cs;
    for (std::size_t i = 0; i < fanout; ++i) cs.push_back(build(depth + 1));
    return kind % 2 == 0 ? Formula::conj(std::move(cs))
                         : Formula::disj(std::move(cs));
  };
  do {
    f.matrix = build(0);
  } while (gen_detail::is_cnf_shape(f.matrix));
  std::set<VarId> occ;
  f.matrix.collect_vars(occ);
  for (std::size_t i = 0; i < n_vars; ++i) {
    VarId v = static_cast<VarId>(i);
    if (!occ.count(v)) continue;
    f.block.emplace_back(
        rng.bounded(100) < 85 ? Quant::ForAll : Quant::Exists, v);
  }
  return f;
}

struct BenchRow {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t n_vars = 0, clauses = 0, polys = 0, max_terms = 0;
  std::uint32_t max_exponent = 0;
  std::size_t shared = 0;
  double time_direct_ms = -1;    // -1 marks an unbounded/failed run
  double time_pipeline_ms = -1;
  std::size_t cells_direct = 0, cells_pipeline = 0;
  std::size_t clause_count = 0;
  int equivalent = -1;           // -1 unknown, else 0/1
  std::size_t repetitions = 1;
  double mean_time_ms = 0;
  std::vector<double> per_run_ms;
};

inline std::string csv_header() {
  return "experiment,seed,n_vars,clauses,polys,T,E,s,time_direct_ms,"
         "time_pipeline_ms,cells_direct,cells_pipeline,clause_count,"
         "equivalent";
}

inline std::string csv_line(const BenchRow& r) {
  std::ostringstream os;
  auto time_field = [](double t) {
    return t < 0 ? std::string("inf") : std::to_string(t);
  };
  os << r.experiment << "," << r.seed << "," << r.n_vars << "," << r.clauses
     << "," << r.polys << "," << r.max_terms << "," << r.max_exponent << ","
     << r.shared << "," << time_field(r.time_direct_ms) << ","
     << time_field(r.time_pipeline_ms) << "," << r.cells_direct << ","
     << r.cells_pipeline << "," << r.clause_count << ","
     << (r.equivalent < 0 ? std::string("-")
                          : std::to_string(r.equivalent));
  return os.str();
}

inline std::vector<BenchRow> csv_parse(std::istream& in) {
  std::vector<BenchRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("experiment,", 0) == 0) continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() < 14) continue;
    BenchRow r;
    r.experiment = f[0];
    r.seed = std::stoull(f[1]);
    r.n_vars = std::stoull(f[2]);
    r.clauses = std::stoull(f[3]);
    r.polys = std::stoull(f[4]);
    r.max_terms = std::stoull(f[5]);
    r.max_exponent = static_cast<std::uint32_t>(std::stoul(f[6]));
    r.shared = std::stoull(f[7]);
    r.time_direct_ms = f[8] == "inf" ? -1 : std::stod(f[8]);
    r.time_pipeline_ms = f[9] == "inf" ? -1 : std::stod(f[9]);
    r.cells_direct = std::stoull(f[10]);
    r.cells_pipeline = std::stoull(f[11]);
    r.clause_count = std::stoull(f[12]);
    r.equivalent = f[13] == "-" ? -1 : std::stoi(f[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

struct SweepConfig {
  GeneratorParams base;
  std::vector<std::size_t> values;
  std::size_t repetitions = 10;
  OrchestratorConfig run;
};

enum class SweepKind { MaxTerms, MaxExponent, TotalTerms };

/// Figs. 1-4: running time against one swept parameter, run_direct per rep.
inline std::vector<BenchRow> experiment_params_sweep(SweepKind kind,
                                                     const SweepConfig& cfg) {
  std::vector<BenchRow> rows;
  for (std::size_t value : cfg.values) {
    GeneratorParams p = cfg.base;
    switch (kind) {
      case SweepKind::MaxTerms: p.max_terms = value; break;
      case SweepKind::MaxExponent:
        p.max_exponent = static_cast<std::uint32_t>(value);
        break;
      case SweepKind::TotalTerms: p.clauses = value; break;
    }
    BenchRow row;
    row.experiment = kind == SweepKind::MaxTerms
                         ? "sweep_T"
                         : (kind == SweepKind::MaxExponent ? "sweep_E"
                                                           : "sweep_clauses");
    row.seed = cfg.base.seed;
    row.n_vars = p.n_vars;
    row.clauses = p.clauses;
    row.polys = p.polys_per_clause;
    row.max_terms = p.max_terms;
    row.max_exponent = p.max_exponent;
    row.repetitions = cfg.repetitions;
    double sum = 0;
    std::size_t completed = 0;
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      GeneratorParams pr = p;
      pr.seed = p.seed + 7919 * (rep + 1) + 104729 * value;
      PrenexFormula f = gen_formula(pr);
      auto [res, ledger] = run_direct(f, cfg.run);
      if (ledger.status == RunLedger::Status::Complete) {
        row.per_run_ms.push_back(ledger.total_wall_ms);
        sum += ledger.total_wall_ms;
        row.cells_direct += res.stats.total_cells;
        ++completed;
      } else {
        row.per_run_ms.push_back(-1);
      }
    }
    row.mean_time_ms = completed ? sum / static_cast<double>(completed) : -1;
    row.time_direct_ms = row.mean_time_ms;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct DistributionResult {
  std::map<std::size_t, std::size_t> histogram;  // clause count -> formulas
  double one_separable_fraction = 0;
};

/// Fig. 5: separability distribution of random non-CNF formulas.
inline DistributionResult experiment_distribution(std::size_t count,
                                                  std::uint64_t seed,
                                                  std::size_t n_vars = 3) {
  DistributionResult out;
  for (std::size_t i = 0; i < count; ++i) {
    PrenexFormula f = gen_tree_formula(n_vars, seed + i);
    std::size_t k;
    try {
      k = separability(f);
    } catch (const ClauseExplosion&) {
      k = 1;  // counted as unseparated
    }
    ++out.histogram[k];
  }
  if (count)
    out.one_separable_fraction =
        static_cast<double>(out.histogram[1]) / static_cast<double>(count);
  return out;
}

struct SpeedupConfig {
  GeneratorParams base;     // pattern forced to BlockDisjoint
  std::size_t seeds = 10;
  OrchestratorConfig run;   // workers used for the pipeline runs
};

/// Table 1 analog: direct vs pipeline on block-disjoint CNF inputs.
inline std::vector<BenchRow> experiment_speedup(const SpeedupConfig& cfg) {
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < cfg.seeds; ++i) {
    GeneratorParams p = cfg.base;
    p.pattern = SharingPattern::BlockDisjoint;
    p.seed = cfg.base.seed + i;
    PrenexFormula f = gen_formula(p);
    BenchRow row;
    row.experiment = "speedup";
    row.seed = p.seed;
    row.n_vars = p.n_vars;
    row.clauses = p.clauses;
    row.polys = p.polys_per_clause;
    row.max_terms = p.max_terms;
    row.max_exponent = p.max_exponent;

    auto [rd, ld] = run_direct(f, cfg.run);
    if (ld.status == RunLedger::Status::Complete) {
      row.time_direct_ms = ld.total_wall_ms;
      row.cells_direct = rd.stats.total_cells;
    }
    auto [rp, lp] = run_pipeline(f, cfg.run);
    if (lp.status == RunLedger::Status::Complete) {
      row.time_pipeline_ms = lp.total_wall_ms;
      row.cells_pipeline = rp.stats.total_cells;
      row.clause_count = lp.trace.clauses.size();
    }
    if (row.time_direct_ms >= 0 && row.time_pipeline_ms >= 0 &&
        rd.formula.is_const() && rp.formula.is_const())
      row.equivalent = rd.formula.is_true() == rp.formula.is_true() ? 1 : 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct SharingRow {
  std::size_t shared = 0;
  std::size_t cells_with = 0;     // whole two-clause formula
  std::size_t cells_without = 0;  // second clause alone
  bool with_capped = false;
  bool without_capped = false;
};

/// Table 2 analog: cell counts with and without the fixed first clause, for
/// sharing factors 0..3.
inline std::vector<SharingRow> experiment_sharing(std::uint64_t seed,
                                                  const QeConfig& qc = {}) {
  std::vector<SharingRow> rows;
  for (std::size_t s = 0; s <= 3; ++s) {
    GeneratorParams p;
    p.pattern = SharingPattern::TwoClauseShared;
    p.shared_count = s;
    p.seed = seed;
    p.n_vars = 6;
    p.clauses = 2;
    p.polys_per_clause = 2;
    p.max_terms = 2;
    PrenexFormula whole = gen_formula(p);
    Decomposition d = separate(whole);
    SharingRow row;
    row.shared = s;
    try {
      row.cells_with = qe(whole, qc).stats.total_cells;
    } catch (const ResourceLimit& e) {
      row.cells_with = e.cells;
      row.with_capped = true;
    }
    // second clause alone: the decomposition clause not equal to the fixed
    // first clause (the one containing x3, x4 or x5)
    const PrenexFormula* second = nullptr;
    for (const auto& c : d.clauses) {
      std::set<VarId> vars = formula_vars(c);
      if (vars.count(3) || vars.count(4) || vars.count(5)) second = &c;
    }
    if (!second && !d.clauses.empty()) second = &d.clauses.back();
    if (second) {
      try {
        row.cells_without = qe(*second, qc).stats.total_cells;
      } catch (const ResourceLimit& e) {
        row.cells_without = e.cells;
        row.without_capped = true;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace parcad

#endif
