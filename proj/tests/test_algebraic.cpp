#include <catch2/catch_amalgamated.hpp>

#include "parcad/algebraic.hpp"

using namespace parcad;

namespace {

std::uint64_t rng_state = 777;
std::uint64_t next_u64() {
  rng_state += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = rng_state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
int rnd_int(int lo, int hi) {
  return lo + static_cast<int>(next_u64() % (hi - lo + 1));
}

// independent oracle: count sign changes on a grid, refining the step until
// the count stabilizes
int grid_root_count(const UPoly& p) {
  Rat bound = up_root_bound(p) + 1;
  int prev = -1;
  for (Rat step = Rat(1, 8);; step /= 4) {
    int count = 0;
    int last = 0;
    for (Rat x = -bound; x <= bound; x += step) {
      int s = up_sign_at(p, x);
      if (s == 0) {
        ++count;
        last = 0;
        continue;
      }
      if (last != 0 && s != last) ++count;
      last = s;
    }
    if (count == prev) return count;
    prev = count;
  }
}

AlgebraicNumber sqrt2() {
  return AlgebraicNumber::make({Int(-2), Int(0), Int(1)}, Rat(1), Rat(2));
}

}  // namespace

TEST_CASE("isolation of x^2 - 2") {
  auto res = sturm_isolate(UPoly{Int(-2), Int(0), Int(1)});
  REQUIRE(res.count == 2);
  REQUIRE(compare_alg_rat(res.roots[0], Rat(-2)) > 0);
  REQUIRE(compare_alg_rat(res.roots[0], Rat(-1)) < 0);
  REQUIRE(compare_alg_rat(res.roots[1], Rat(1)) > 0);
  REQUIRE(compare_alg_rat(res.roots[1], Rat(2)) < 0);
}

TEST_CASE("no real roots") {
  auto res = sturm_isolate(UPoly{Int(1), Int(0), Int(1)});
  REQUIRE(res.count == 0);
}

TEST_CASE("zero polynomial rejected") {
  REQUIRE_THROWS_AS(sturm_isolate(UPoly{}), ZeroPolynomial);
}

TEST_CASE("cubic with roots 1,2,3") {
  // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
  UPoly p{Int(-6), Int(11), Int(-6), Int(1)};
  auto res = sturm_isolate(p);
  REQUIRE(res.count == 3);
  for (int k = 0; k < 3; ++k) {
    REQUIRE(compare_alg_rat(res.roots[k], Rat(k)) > 0);
    REQUIRE(compare_alg_rat(res.roots[k], Rat(k + 2)) < 0);
  }
  REQUIRE(grid_root_count(p) == 3);
}

TEST_CASE("isolation invariants on random polynomials") {
  for (int iter = 0; iter < 60; ++iter) {
    UPoly p(static_cast<std::size_t>(rnd_int(2, 7)));
    for (auto& c : p) c = Int(rnd_int(-9, 9));
    up_normalize(p);
    if (up_is_zero(p) || up_degree(p) < 1) continue;
    auto res = sturm_isolate(p);
    UPoly sf = up_squarefree(p);
    for (std::size_t i = 0; i < res.roots.size(); ++i) {
      const auto& r = res.roots[i];
      if (!r.is_point()) {
        REQUIRE(up_sign_at(sf, r.lo()) * up_sign_at(sf, r.hi()) < 0);
      } else {
        REQUIRE(up_sign_at(sf, r.lo()) == 0);
      }
      if (i > 0) REQUIRE(res.roots[i - 1].hi() <= res.roots[i].lo());
    }
    REQUIRE(static_cast<int>(res.count) == grid_root_count(p));
  }
}

TEST_CASE("refine narrows the interval around sqrt(2)") {
  AlgebraicNumber a = sqrt2();
  AlgebraicNumber b = refine(a, Rat(1, 16));
  REQUIRE(b.width() <= Rat(1, 16));
  REQUIRE(b.lo() <= Rat(141422, 100000));
  REQUIRE(b.hi() >= Rat(141421, 100000));
  // width larger than current: unchanged value allowed
  AlgebraicNumber c = refine(b, Rat(10));
  REQUIRE(compare_alg_alg(b, c) == 0);
  // degenerate rational root stays put
  AlgebraicNumber d = AlgebraicNumber::make({Int(-3), Int(1)}, Rat(3), Rat(3));
  REQUIRE(d.is_point());
  REQUIRE(refine(d, Rat(1, 1000)).lo() == Rat(3));
}

TEST_CASE("sign_at with algebraic coordinates") {
  Polynomial x = Polynomial::variable(2, 0);
  Polynomial y = Polynomial::variable(2, 1);

  PointAssignment pt;
  pt.emplace_back(0, Coordinate(sqrt2()));
  // defining polynomial itself vanishes
  Polynomial p = x * x - Polynomial::constant(2, 2);
  REQUIRE(sign_at(p, pt) == 0);
  // x + 1 at sqrt(2) is positive
  REQUIRE(sign_at(x + Polynomial::constant(2, 1), pt) == 1);

  // x*y - 1 at (sqrt2, sqrt2) = 1 > 0
  PointAssignment pt2;
  pt2.emplace_back(0, Coordinate(sqrt2()));
  pt2.emplace_back(1, Coordinate(sqrt2()));
  REQUIRE(sign_at(x * y - Polynomial::constant(2, 1), pt2) == 1);
  // x*y - 2 at (sqrt2, sqrt2) = 0 exactly
  REQUIRE(sign_at(x * y - Polynomial::constant(2, 2), pt2) == 0);
  // x - y at (sqrt2, sqrt2) = 0
  REQUIRE(sign_at(x - y, pt2) == 0);
  // x + y at (sqrt2, -sqrt2) = 0
  auto both = sturm_isolate(UPoly{Int(-2), Int(0), Int(1)});
  PointAssignment pt3;
  pt3.emplace_back(0, Coordinate(both.roots[1]));
  pt3.emplace_back(1, Coordinate(both.roots[0]));
  REQUIRE(sign_at(x + y, pt3) == 0);
  REQUIRE(sign_at(x - y, pt3) == 1);
}

TEST_CASE("sign_at at rational points equals direct evaluation") {
  for (int iter = 0; iter < 30; ++iter) {
    Polynomial p(2);
    for (int t = 0; t < 4; ++t) {
      ExpVec ev{static_cast<std::uint32_t>(rnd_int(0, 3)),
                static_cast<std::uint32_t>(rnd_int(0, 3))};
      p.add_term(ev, Int(rnd_int(-5, 5)));
    }
    Rat a(rnd_int(-8, 8), rnd_int(1, 5));
    Rat b(rnd_int(-8, 8), rnd_int(1, 5));
    PointAssignment pt;
    pt.emplace_back(0, Coordinate(a));
    pt.emplace_back(1, Coordinate(b));
    REQUIRE(sign_at(p, pt) == sign_of(p.eval({a, b})));
  }
}

TEST_CASE("coordinate comparison") {
  auto roots = sturm_isolate(UPoly{Int(-2), Int(0), Int(1)}).roots;
  AlgebraicNumber neg = roots[0], pos = roots[1];
  REQUIRE(compare_alg_alg(neg, pos) == -1);
  REQUIRE(compare_alg_alg(pos, neg) == 1);
  AlgebraicNumber pos2 = sqrt2();
  REQUIRE(compare_alg_alg(pos, pos2) == 0);
  // same number through a different defining polynomial:
  // x^4 - 4 k eeps sqrt(2) as a root
  AlgebraicNumber via4 = AlgebraicNumber::make(
      {Int(-4), Int(0), Int(0), Int(0), Int(1)}, Rat(1), Rat(3, 2));
  REQUIRE(compare_alg_alg(pos, via4) == 0);
  Coordinate c1{Rat(141421, 100000)}, c2{sqrt2()};
  REQUIRE(compare_coordinates(c1, c2) == -1);
}

TEST_CASE("tower root isolation over a rational base") {
  // substitute x0 = 0 into x1^2 + x0 - 1: roots at +-1
  Polynomial p(2);
  p.add_term({0, 2}, Int(1));
  p.add_term({1, 0}, Int(1));
  p.add_term({0, 0}, Int(-1));
  PointAssignment pt;
  pt.emplace_back(0, Coordinate(Rat(0)));
  auto r = isolate_over_tower(p, 1, pt);
  REQUIRE_FALSE(r.identically_zero);
  REQUIRE(r.roots.size() == 2);
  Coordinate m1{Rat(-1)}, p1{Rat(1)};
  REQUIRE(compare_coordinates(r.roots[0], m1) == 0);
  REQUIRE(compare_coordinates(r.roots[1], p1) == 0);
}

TEST_CASE("tower root isolation over an algebraic base") {
  // x1 - x0 at x0 = sqrt(2): single root sqrt(2)
  Polynomial p(2);
  p.add_term({0, 1}, Int(1));
  p.add_term({1, 0}, Int(-1));
  PointAssignment pt;
  pt.emplace_back(0, Coordinate(sqrt2()));
  auto r = isolate_over_tower(p, 1, pt);
  REQUIRE(r.roots.size() == 1);
  Coordinate expect{sqrt2()};
  REQUIRE(compare_coordinates(r.roots[0], expect) == 0);
  // and the defining polynomial vanishes there exactly
  Polynomial check(2);
  check.add_term({0, 2}, Int(1));
  check.add_term({0, 0}, Int(-2));
  PointAssignment full = pt;
  full.emplace_back(1, r.roots[0]);
  REQUIRE(sign_at(check, full) == 0);
}

TEST_CASE("tower isolation detects identically vanishing input") {
  // (x0^2 - 2) * x1 vanishes identically at x0 = sqrt(2)
  Polynomial p(2);
  p.add_term({2, 1}, Int(1));
  p.add_term({0, 1}, Int(-2));
  PointAssignment pt;
  pt.emplace_back(0, Coordinate(sqrt2()));
  auto r = isolate_over_tower(p, 1, pt);
  REQUIRE(r.identically_zero);
}

TEST_CASE("tower isolation with quadratic over algebraic base") {
  // x1^2 - x0 at x0 = sqrt(2): roots +-2^(1/4)
  Polynomial p(2);
  p.add_term({0, 2}, Int(1));
  p.add_term({1, 0}, Int(-1));
  PointAssignment pt;
  pt.emplace_back(0, Coordinate(sqrt2()));
  auto r = isolate_over_tower(p, 1, pt);
  REQUIRE(r.roots.size() == 2);
  PointAssignment full = pt;
  full.emplace_back(1, r.roots[1]);
  REQUIRE(sign_at(p, full) == 0);
  // fourth power of the positive root is 2
  Polynomial x1_4(2);
  x1_4.add_term({0, 4}, Int(1));
  x1_4.add_term({0, 0}, Int(-2));
  REQUIRE(sign_at(x1_4, full) == 0);
}

TEST_CASE("two-level tower") {
  // base (sqrt2, sqrt2); isolate x2 roots of x2^2 - x0*x1 -> x2 = +-sqrt(2)
  Polynomial p(3);
  p.add_term({0, 0, 2}, Int(1));
  p.add_term({1, 1, 0}, Int(-1));
  PointAssignment pt;
  pt.emplace_back(0, Coordinate(sqrt2()));
  pt.emplace_back(1, Coordinate(sqrt2()));
  auto r = isolate_over_tower(p, 2, pt);
  REQUIRE(r.roots.size() == 2);
  Coordinate expect{sqrt2()};
  REQUIRE(compare_coordinates(r.roots[1], expect) == 0);
}
