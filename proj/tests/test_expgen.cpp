#include <catch2/catch_amalgamated.hpp>

#include "parcad/expgen.hpp"
#include "parcad/formula_io.hpp"

using namespace parcad;

TEST_CASE("generator respects bounds") {
  GeneratorParams p;
  p.n_vars = 2;
  p.clauses = 3;
  p.polys_per_clause = 2;
  p.max_terms = 5;
  p.max_exponent = 10;
  p.seed = 42;
  PrenexFormula f = gen_formula(p);
  REQUIRE(f.matrix.kind() == Formula::Kind::And);
  REQUIRE(f.matrix.children().size() == 3);
  f.matrix.for_each_atom([&](const Atom& a) {
    REQUIRE(a.poly.terms().size() <= 5);
    for (const auto& [ev, c] : a.poly.terms())
      for (auto e : ev) REQUIRE(e <= 10);
  });
}

TEST_CASE("bound compliance over many generations") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    GeneratorParams p;
    p.n_vars = 2;
    p.clauses = 2;
    p.polys_per_clause = 3;
    p.max_terms = 3;
    p.max_exponent = 4;
    p.seed = seed;
    PrenexFormula f = gen_formula(p);
    std::size_t clause_count =
        f.matrix.kind() == Formula::Kind::And ? f.matrix.children().size() : 1;
    REQUIRE(clause_count == 2);
    f.matrix.for_each_atom([&](const Atom& a) {
      REQUIRE(a.poly.terms().size() <= 3);
      for (const auto& [ev, c] : a.poly.terms())
        for (auto e : ev) REQUIRE(e <= 4);
    });
  }
}

TEST_CASE("degenerate bounds give constant atoms") {
  GeneratorParams p;
  p.max_terms = 1;
  p.max_exponent = 0;
  p.seed = 7;
  PrenexFormula f = gen_formula(p);
  f.matrix.for_each_atom(
      [&](const Atom& a) { REQUIRE(a.poly.is_constant()); });
}

TEST_CASE("same seed gives byte-identical formulas") {
  GeneratorParams p;
  p.n_vars = 3;
  p.clauses = 4;
  p.max_terms = 4;
  p.max_exponent = 3;
  p.seed = 123456789;
  REQUIRE(print_formula(gen_formula(p)) == print_formula(gen_formula(p)));
  p.seed += 1;
  GeneratorParams q = p;
  REQUIRE(print_formula(gen_formula(p)) == print_formula(gen_formula(q)));
}

TEST_CASE("block-disjoint pattern separates cleanly") {
  GeneratorParams p;
  p.n_vars = 2;
  p.clauses = 6;
  p.pattern = SharingPattern::BlockDisjoint;
  p.seed = 5;
  PrenexFormula f = gen_formula(p);
  REQUIRE(f.vars.size() == 12);
  Decomposition d = separate(f);
  REQUIRE(d.clauses.size() == 6);
  SharingReport r = sharing_report(d);
  REQUIRE(r.max_factor == 0);
}

TEST_CASE("generated disjoint CNF hits its clause count") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorParams p;
    p.n_vars = 2;
    p.clauses = 5;
    p.pattern = SharingPattern::BlockDisjoint;
    p.seed = seed;
    PrenexFormula f = gen_formula(p);
    REQUIRE(separability(f) == 5);
  }
}

TEST_CASE("two-clause sharing protocol") {
  for (std::size_t s = 0; s <= 3; ++s) {
    GeneratorParams p;
    p.pattern = SharingPattern::TwoClauseShared;
    p.shared_count = s;
    p.seed = 99;
    PrenexFormula f = gen_formula(p);
    REQUIRE(f.vars.size() == 6);
    REQUIRE(f.block.size() == 4);
    Decomposition d = separate(f);
    REQUIRE(d.clauses.size() == 2);
    REQUIRE(sharing_factor(d.clauses[0], d.clauses[1]) == s);
  }
  // clause 1 is identical across sharing factors
  GeneratorParams a, b;
  a.pattern = b.pattern = SharingPattern::TwoClauseShared;
  a.seed = b.seed = 99;
  a.shared_count = 0;
  b.shared_count = 3;
  PrenexFormula fa = gen_formula(a), fb = gen_formula(b);
  REQUIRE(fa.matrix.children().front() == fb.matrix.children().front());
}

TEST_CASE("tree generator produces non-CNF populations") {
  std::size_t with_quant = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PrenexFormula f = gen_tree_formula(3, seed);
    f.check_invariants();
    if (!f.block.empty()) ++with_quant;
  }
  REQUIRE(with_quant > 10);
}

TEST_CASE("distribution experiment") {
  DistributionResult r = experiment_distribution(100, 2025);
  std::size_t total = 0;
  for (auto& [k, v] : r.histogram) total += v;
  REQUIRE(total == 100);
  REQUIRE(r.one_separable_fraction <= 0.25);

  DistributionResult empty = experiment_distribution(0, 1);
  REQUIRE(empty.histogram.empty());
}

TEST_CASE("csv round trip") {
  BenchRow r;
  r.experiment = "speedup";
  r.seed = 12;
  r.n_vars = 2;
  r.clauses = 100;
  r.polys = 5;
  r.max_terms = 5;
  r.max_exponent = 3;
  r.time_direct_ms = -1;
  r.time_pipeline_ms = 123.5;
  r.cells_pipeline = 4242;
  r.clause_count = 100;
  r.equivalent = 1;
  std::stringstream ss;
  ss << csv_header() << "\n" << csv_line(r) << "\n";
  auto rows = csv_parse(ss);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].experiment == "speedup");
  REQUIRE(rows[0].time_direct_ms == -1);
  REQUIRE(rows[0].time_pipeline_ms > 123);
  REQUIRE(rows[0].cells_pipeline == 4242);
  REQUIRE(rows[0].equivalent == 1);
}

TEST_CASE("sweep shapes") {
  SweepConfig cfg;
  cfg.base.n_vars = 2;
  cfg.base.clauses = 1;
  cfg.base.polys_per_clause = 1;
  cfg.base.max_exponent = 2;
  cfg.base.seed = 3;
  cfg.values = {1, 2};
  cfg.repetitions = 1;
  auto rows = experiment_params_sweep(SweepKind::MaxTerms, cfg);
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].per_run_ms.size() == 1);
  REQUIRE(rows[0].max_terms == 1);
  REQUIRE(rows[1].max_terms == 2);

  SweepConfig none = cfg;
  none.values = {};
  REQUIRE(experiment_params_sweep(SweepKind::MaxExponent, none).empty());
}

TEST_CASE("small speedup experiment records both runs") {
  SpeedupConfig cfg;
  cfg.base.n_vars = 1;
  cfg.base.clauses = 3;
  cfg.base.polys_per_clause = 1;
  cfg.base.max_terms = 2;
  cfg.base.max_exponent = 2;
  cfg.base.seed = 17;
  cfg.seeds = 2;
  cfg.run.workers = 2;
  auto rows = experiment_speedup(cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    REQUIRE(r.time_pipeline_ms >= 0);
    REQUIRE(r.clause_count == 3);
    if (r.time_direct_ms >= 0) REQUIRE(r.equivalent == 1);
  }
}

TEST_CASE("one-clause speedup input has ratio near one") {
  SpeedupConfig cfg;
  cfg.base.n_vars = 2;
  cfg.base.clauses = 1;
  cfg.base.polys_per_clause = 2;
  cfg.base.max_terms = 2;
  cfg.base.max_exponent = 2;
  cfg.base.seed = 29;
  cfg.seeds = 1;
  auto rows = experiment_speedup(cfg);
  REQUIRE(rows.size() == 1);
  // same work plus overhead only; generous factor-2 band
  if (rows[0].time_direct_ms > 1.0) {
    double ratio = rows[0].time_pipeline_ms / rows[0].time_direct_ms;
    REQUIRE(ratio > 0.2);
    REQUIRE(ratio < 5.0);
  }
}
