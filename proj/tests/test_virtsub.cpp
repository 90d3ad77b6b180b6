#include <catch2/catch_amalgamated.hpp>

#include "parcad/formula_io.hpp"
#include "parcad/virtsub.hpp"
#include "test_support.hpp"

using namespace parcad;
using namespace parcad::testsupport;

TEST_CASE("linear constant-coefficient substitutor is found") {
  PrenexFormula f = parse_formula("[[2 x + 3 y - 1 = 0] /\\ [x + y > 0]]");
  SubstitutionPlan plan = find_substitutors(nnf(f));
  REQUIRE(plan.steps.size() >= 1);
  const auto& s = plan.steps.front();
  REQUIRE(f.vars.name(s.var) == "x");
  REQUIRE(s.den == 2);
  // num = 1 - 3y
  Polynomial expect(2);
  expect.add_term({0, 0}, Int(1));
  expect.add_term({0, 1}, Int(-3));
  REQUIRE(s.num == expect);
}

TEST_CASE("nonlinear and parametric coefficients are rejected") {
  PrenexFormula f = parse_formula("[[x^2 - y = 0] /\\ [x > 0]]");
  SubstitutionPlan p1 = find_substitutors(nnf(f));
  for (const auto& s : p1.steps) REQUIRE(f.vars.name(s.var) != "x");

  PrenexFormula g = parse_formula("[[a x + 1 = 0] /\\ [x > 0]]");
  SubstitutionPlan p2 = find_substitutors(nnf(g));
  REQUIRE(p2.steps.empty());
}

TEST_CASE("vsubst_atom clears denominators relation-safely") {
  // x := 1/2 into x + y > 0  ->  2y + 1 > 0
  PrenexFormula env = parse_formula("[x + y > 0]");
  Atom target = env.matrix.atom();
  Polynomial one = Polynomial::constant(2, 1);
  Atom got = vsubst_atom(target, 0, one, Int(2));
  Polynomial e1(2);
  e1.add_term({0, 1}, Int(2));
  e1.add_term({0, 0}, Int(1));
  REQUIRE(got == Atom::make(e1, Rel::Gt));

  // x := 1/2 into x^2 - y = 0  ->  1 - 4y = 0 (times 4)
  PrenexFormula env2 = parse_formula("[x^2 - y = 0]");
  Atom got2 = vsubst_atom(env2.matrix.atom(), 0, one, Int(2));
  Polynomial e2(2);
  e2.add_term({0, 0}, Int(1));
  e2.add_term({0, 1}, Int(-4));
  REQUIRE(got2 == Atom::make(e2, Rel::Eq));

  // x := -y into x < 0 -> y > 0 after canonicalization
  PrenexFormula env3 = parse_formula("[x + 0 y < 0]");
  Polynomial negy(2);
  negy.add_term({0, 1}, Int(-1));
  Atom got3 = vsubst_atom(env3.matrix.atom(), 0, negy, Int(1));
  PrenexFormula expect3 = parse_formula("[y > 0]");
  // both formulas parsed over different tables; compare by value
  REQUIRE(got3.rel == Rel::Gt);
  REQUIRE(got3.poly == Polynomial::variable(2, 1));

  // negative denominator with odd degree mirrors the relation
  PrenexFormula env4 = parse_formula("[x + y > 0]");
  Atom got4 = vsubst_atom(env4.matrix.atom(), 0, one, Int(-2));
  // x := -1/2: x + y > 0 becomes y - 1/2 > 0, i.e. 2y - 1 > 0
  Polynomial e4(2);
  e4.add_term({0, 1}, Int(2));
  e4.add_term({0, 0}, Int(-1));
  REQUIRE(got4 == Atom::make(e4, Rel::Gt));
}

TEST_CASE("apply_plan substitutes and keeps the substitutor") {
  PrenexFormula f = parse_formula("[[2 x - 1 = 0] /\\ [x + y > 0]]");
  PrenexFormula g = apply_plan(f);
  PrenexFormula expect = parse_formula("[[2 x - 1 = 0] /\\ [2 y + 1 > 0]]");
  REQUIRE(g.matrix == expect.matrix);
}

TEST_CASE("apply_plan with empty plan is the identity after nnf") {
  PrenexFormula f = parse_formula("[[x^2 - y^2 = 0] /\\ [x + y > 0]]");
  REQUIRE(find_substitutors(nnf(f)).empty());
  PrenexFormula g = apply_plan(f);
  REQUIRE(g.matrix == nnf(f).matrix);
}

TEST_CASE("apply_plan is idempotent when no further substitutor applies") {
  PrenexFormula f = parse_formula("[[2 x - 1 = 0] /\\ [x + y > 0]]");
  PrenexFormula g = apply_plan(f);
  SubstitutionPlan again = find_substitutors(g);
  PrenexFormula h = apply_plan(g);
  REQUIRE(h.matrix == g.matrix);
}

TEST_CASE("substitution preserves truth at sampled points") {
  Rng rng(4242);
  int done = 0;
  for (int it = 0; it < 100 && done < 20; ++it) {
    // random formula with one planted linear conjunct
    std::size_t nvars = 3;
    PrenexFormula f;
    for (std::size_t i = 0; i < nvars; ++i) f.vars.add("x" + std::to_string(i));
    Polynomial lin(nvars);
    int c = 0;
    while (c == 0) c = rng.range(-3, 3);
    lin.add_term({1, 0, 0}, Int(c));
    for (std::size_t i = 1; i < nvars; ++i) {
      ExpVec ev(nvars, 0);
      ev[i] = 1;
      lin.add_term(ev, Int(rng.range(-3, 3)));
    }
    lin.add_term(ExpVec(nvars, 0), Int(rng.range(-3, 3)));
    std::vector<Formula> conj;
    conj.push_back(Formula::leaf(Atom::make(lin, Rel::Eq)));
    conj.push_back(random_tree(rng, nvars, 2, 2, 2));
    f.matrix = Formula::conj(std::move(conj));
    std::set<VarId> occ;
    f.matrix.collect_vars(occ);
    for (VarId v = 0; v < nvars; ++v)
      if (occ.count(v)) f.free_vars.push_back(v);

    SubstitutionPlan plan = find_substitutors(nnf(f));
    if (plan.empty()) continue;
    PrenexFormula g = apply_plan(f);
    ++done;
    // 1000 random rational points
    for (int p = 0; p < 1000; ++p) {
      std::vector<Rat> pt;
      for (std::size_t i = 0; i < nvars; ++i)
        pt.emplace_back(rng.range(-20, 20), rng.range(1, 7));
      REQUIRE(nnf(f).matrix.eval(pt) == g.matrix.eval(pt));
    }
  }
  REQUIRE(done >= 20);
}

TEST_CASE("variable count per atom never grows") {
  Rng rng(909);
  for (int it = 0; it < 30; ++it) {
    PrenexFormula f = random_prenex(rng, 3, 2, 2, 2, 0);
    PrenexFormula fn = nnf(f);
    SubstitutionPlan plan = find_substitutors(fn);
    PrenexFormula g = apply_plan(f);
    std::set<VarId> subst_vars;
    std::set<VarId> num_vars;
    for (const auto& s : plan.steps) {
      subst_vars.insert(s.var);
      for (VarId v : s.num.occurring_vars()) num_vars.insert(v);
    }
    // collect atoms pairwise in order
    std::vector<Atom> before, after;
    fn.matrix.for_each_atom([&](const Atom& a) { before.push_back(a); });
    g.matrix.for_each_atom([&](const Atom& a) { after.push_back(a); });
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
      auto bv = before[i].poly.occurring_vars();
      auto av = after[i].poly.occurring_vars();
      for (VarId v : av) {
        bool allowed = num_vars.count(v) ||
                       (std::find(bv.begin(), bv.end(), v) != bv.end());
        REQUIRE(allowed);
      }
    }
  }
}
