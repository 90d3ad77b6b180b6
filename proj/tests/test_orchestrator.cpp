#include <catch2/catch_amalgamated.hpp>

#include "parcad/orchestrator.hpp"
#include "test_support.hpp"

using namespace parcad;
using namespace parcad::testsupport;

TEST_CASE("two disjoint tautological clauses conjoin to TRUE") {
  PrenexFormula f =
      parse_formula("(A x0)(A x1)[[x0^2 >= 0] /\\ [x1^2 + 1 > 0]]");
  OrchestratorConfig cfg;
  cfg.workers = 2;
  auto [res, ledger] = run_pipeline(f, cfg);
  REQUIRE(res.formula.is_true());
  REQUIRE(ledger.per_clause.size() == 2);
  REQUIRE(ledger.status == RunLedger::Status::Complete);
}

TEST_CASE("a false clause dominates the conjunction") {
  PrenexFormula f =
      parse_formula("(A x0)(A x1)[[x0^2 >= 0] /\\ [x1^2 < 0]]");
  OrchestratorConfig cfg;
  cfg.workers = 1;
  auto [res, ledger] = run_pipeline(f, cfg);
  REQUIRE(res.formula.is_false());
}

TEST_CASE("pipeline equals direct on a single-atom formula") {
  PrenexFormula f = parse_formula("(E x)[x^2 + b x + c = 0]");
  OrchestratorConfig cfg;
  auto [rp, lp] = run_pipeline(f, cfg);
  auto [rd, ld] = run_direct(f, cfg);
  REQUIRE(print_matrix(rp.formula, f.vars) == print_matrix(rd.formula, f.vars));
  REQUIRE(ld.per_clause.size() == 1);
}

TEST_CASE("pipeline and direct agree on two disjoint clauses") {
  PrenexFormula f = parse_formula(
      "(A x0)(A x1)[[x0^2 - 1 <= 0 \\/ x0 > 2] /\\ [x1^2 - 2 x1 + 1 >= 0]]");
  OrchestratorConfig cfg;
  cfg.workers = 4;
  auto [rp, lp] = run_pipeline(f, cfg);
  auto [rd, ld] = run_direct(f, cfg);
  REQUIRE(rp.formula.is_const());
  REQUIRE(rd.formula.is_const());
  REQUIRE(rp.formula.is_true() == rd.formula.is_true());
}

TEST_CASE("cell cap failure is recorded per clause") {
  PrenexFormula f = parse_formula("(E x1)[x1^2 + x0^2 - 1 = 0]");
  OrchestratorConfig cfg;
  cfg.cell_cap = 2;
  auto [res, ledger] = run_direct(f, cfg);
  REQUIRE(ledger.status == RunLedger::Status::Partial);
  REQUIRE(ledger.per_clause.front().status == ClauseOutcome::Status::Failed);
  REQUIRE_FALSE(ledger.per_clause.front().error.empty());
}

TEST_CASE("scheduling independence across worker counts") {
  Rng rng(11);
  for (int it = 0; it < 6; ++it) {
    // conjunction of variable-disjoint clauses
    std::string text = "(A x0)(A x1)(A x2)[";
    for (int c = 0; c < 3; ++c) {
      if (c) text += " /\\ ";
      int a = rng.range(-3, 3), b = rng.range(-3, 3);
      text += "[x" + std::to_string(c) + "^2 + (" + std::to_string(a) +
              ") x" + std::to_string(c) + " + (" + std::to_string(b) +
              ") >= 0]";
    }
    text += "]";
    PrenexFormula f = parse_formula(text);
    std::string baseline;
    for (std::size_t workers : {1u, 2u, 4u, 8u}) {
      OrchestratorConfig cfg;
      cfg.workers = workers;
      auto [res, ledger] = run_pipeline(f, cfg);
      std::string printed = print_matrix(res.formula, f.vars);
      if (baseline.empty())
        baseline = printed;
      else
        REQUIRE(printed == baseline);
    }
  }
}

TEST_CASE("ledger accounting") {
  PrenexFormula f = parse_formula(
      "(A x0)(A x1)[[x0^2 >= 0] /\\ [x1^2 + 1 > 0]]");
  OrchestratorConfig cfg;
  cfg.workers = 1;
  auto [res, ledger] = run_pipeline(f, cfg);
  double sum = 0, mx = 0;
  for (const auto& o : ledger.per_clause) {
    sum += o.wall_ms;
    mx = std::max(mx, o.wall_ms);
  }
  REQUIRE(ledger.total_wall_ms >= mx);
  REQUIRE(ledger.total_wall_ms >= 0.9 * sum);
}

TEST_CASE("disjunctive combination honors the combiner") {
  Decomposition d;
  d.combine = Decomposition::Combine::Disjunctive;
  std::vector<ClauseOutcome> outcomes(2);
  outcomes[0].status = ClauseOutcome::Status::Done;
  outcomes[0].result.formula = Formula::fls();
  outcomes[1].status = ClauseOutcome::Status::Done;
  outcomes[1].result.formula = Formula::tru();
  REQUIRE(combine_results(d, outcomes).is_true());
  outcomes[1].result.formula = Formula::fls();
  REQUIRE(combine_results(d, outcomes).is_false());
}

TEST_CASE("external backend: constant answers") {
  PrenexFormula f = parse_formula("(A x0)[x0^2 >= 0]");
  Formula t = external_eliminate(f, "echo TRUE");
  REQUIRE(t.is_true());
  Formula fls = external_eliminate(f, "echo FALSE");
  REQUIRE(fls.is_false());
}

TEST_CASE("external backend: formula answer is parsed against the clause") {
  PrenexFormula f = parse_formula("(E x)[x^2 + b x + c = 0]");
  Formula ans = external_eliminate(f, "echo 'b^2 - 4 c >= 0'");
  REQUIRE(ans.kind() == Formula::Kind::Leaf);
  REQUIRE(ans.atom().rel == Rel::Ge);
  REQUIRE(ans.atom().poly.degree(1) == 2);  // b is id 1 in f's table
}

TEST_CASE("external backend: failures surface") {
  PrenexFormula f = parse_formula("(A x0)[x0^2 >= 0]");
  REQUIRE_THROWS_AS(external_eliminate(f, "exit 1"), BackendError);
  REQUIRE_THROWS_AS(external_eliminate(f, "echo 'x0 +'"), ParseBackError);
  REQUIRE_THROWS_AS(external_eliminate(f, "echo 'zz > 0'"), ParseBackError);
  REQUIRE_THROWS_AS(external_eliminate(f, "sleep 5", 200.0), BackendTimeout);
}

TEST_CASE("external backend drives the pipeline") {
  PrenexFormula f =
      parse_formula("(A x0)(A x1)[[x0^2 >= 0] /\\ [x1^2 + 1 > 0]]");
  OrchestratorConfig cfg;
  cfg.backend = OrchestratorConfig::Backend::External;
  cfg.external_template = "echo TRUE";
  auto [res, ledger] = run_pipeline(f, cfg);
  REQUIRE(res.formula.is_true());
  REQUIRE(ledger.per_clause.size() == 2);
}

TEST_CASE("template placeholders are substituted") {
  PrenexFormula f = parse_formula("(E x)[x^2 + b x + c = 0]");
  std::string cmd = instantiate_template("run {vars} n={free_count}", f);
  REQUIRE(cmd == "run x,b,c n=2");
}
