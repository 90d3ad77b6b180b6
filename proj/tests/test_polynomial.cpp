#include <catch2/catch_amalgamated.hpp>

#include "parcad/polynomial.hpp"
#include "parcad/upoly.hpp"

using namespace parcad;

namespace {

// independent naive oracle: expand the Sylvester determinant by cofactors
Polynomial naive_det(std::vector<std::vector<Polynomial>> m,
                     std::size_t nvars) {
  const std::size_t s = m.size();
  if (s == 1) return m[0][0];
  Polynomial acc(nvars);
  for (std::size_t i = 0; i < s; ++i) {
    if (m[i][0].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    for (std::size_t r = 0; r < s; ++r) {
      if (r == i) continue;
      std::vector<Polynomial> row(m[r].begin() + 1, m[r].end());
      minor.push_back(std::move(row));
    }
    Polynomial term = m[i][0] * naive_det(std::move(minor), nvars);
    if (i % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

Polynomial naive_sylvester_resultant(const Polynomial& p, const Polynomial& q,
                                     VarId v) {
  auto up = univariate_view(p, v);
  auto uq = univariate_view(q, v);
  const std::size_t m = static_cast<std::size_t>(up.degree());
  const std::size_t n = static_cast<std::size_t>(uq.degree());
  std::vector<std::vector<Polynomial>> s(
      m + n, std::vector<Polynomial>(m + n, Polynomial(p.nvars())));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= m; ++k) s[i][i + k] = up.coefficients[m - k];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k <= n; ++k)
      s[n + i][i + k] = uq.coefficients[n - k];
  return naive_det(std::move(s), p.nvars());
}

std::uint64_t rng_state = 12345;
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

Polynomial random_poly(std::size_t nvars, int max_deg, int terms) {
  Polynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    ExpVec ev(nvars, 0);
    for (std::size_t i = 0; i < nvars; ++i)
      ev[i] = static_cast<std::uint32_t>(rnd_int(0, max_deg));
    int c = rnd_int(-9, 9);
    if (c != 0) p.add_term(ev, Int(c));
  }
  return p;
}

Polynomial bivar(std::initializer_list<std::tuple<int, int, int>> terms) {
  Polynomial p(2);
  for (auto [c, e0, e1] : terms)
    p.add_term({static_cast<std::uint32_t>(e0), static_cast<std::uint32_t>(e1)},
               Int(c));
  return p;
}

}  // namespace

TEST_CASE("arithmetic basics") {
  Polynomial x = Polynomial::variable(2, 0);
  Polynomial y = Polynomial::variable(2, 1);
  Polynomial p = x * x - y;
  REQUIRE(p.degree(0) == 2);
  REQUIRE(p.degree(1) == 1);
  REQUIRE((p + y) == x * x);
  REQUIRE((p - p).is_zero());
  REQUIRE(p.eval({Rat(3), Rat(9)}) == 0);
  REQUIRE(p.eval({Rat(3), Rat(8)}) == 1);
}

TEST_CASE("canonicalization strips content and fixes the leading sign") {
  Polynomial p = bivar({{-4, 2, 0}, {-6, 0, 1}});
  Polynomial c = p.canonicalized();
  REQUIRE(c == bivar({{2, 2, 0}, {3, 0, 1}}));
  REQUIRE(c.canonicalized() == c);
}

TEST_CASE("divexact and prem") {
  Polynomial x = Polynomial::variable(2, 0);
  Polynomial y = Polynomial::variable(2, 1);
  Polynomial a = (x + y) * (x - y) * (x + Polynomial::constant(2, 3));
  REQUIRE(divexact(a, x + y) == (x - y) * (x + Polynomial::constant(2, 3)));
  Polynomial r = prem(x * x * x, x * x - y, 0);
  // x^3 mod (x^2 - y) = x*y
  REQUIRE(r == x * y);
}

TEST_CASE("gcd and squarefree part") {
  Polynomial x = Polynomial::variable(2, 0);
  Polynomial y = Polynomial::variable(2, 1);
  Polynomial g = x + y;
  Polynomial a = g * g * (x - y);
  Polynomial b = g * (x * x + Polynomial::constant(2, 1));
  Polynomial got = poly_gcd(a, b);
  REQUIRE(got == g);
  Polynomial sf = squarefree_part(a, 0);
  // square-free part removes the repeated factor
  REQUIRE(poly_gcd(sf, g) == g);
  REQUIRE(sf.degree(0) < a.degree(0));
}

TEST_CASE("resultant of linear pair") {
  // res_x(x - y, x - z) = y - z  (vars: x=0, y=1, z=2)
  Polynomial x = Polynomial::variable(3, 0);
  Polynomial y = Polynomial::variable(3, 1);
  Polynomial z = Polynomial::variable(3, 2);
  REQUIRE(resultant(x - y, x - z, 0) == y - z);
}

TEST_CASE("resultant against monic linear divisor") {
  // res_x(x^2 - 2, x - y) = y^2 - 2
  Polynomial x = Polynomial::variable(2, 0);
  Polynomial y = Polynomial::variable(2, 1);
  Polynomial f = x * x - Polynomial::constant(2, 2);
  REQUIRE(resultant(f, x - y, 0) == y * y - Polynomial::constant(2, 2));
}

TEST_CASE("resultant matches naive Sylvester expansion") {
  for (int iter = 0; iter < 40; ++iter) {
    Polynomial p = random_poly(2, 3, 4);
    Polynomial q = random_poly(2, 3, 4);
    if (p.degree(0) < 1 || q.degree(0) < 1) continue;
    REQUIRE(resultant(p, q, 0) == naive_sylvester_resultant(p, q, 0));
  }
}

TEST_CASE("resultant antisymmetry") {
  for (int iter = 0; iter < 25; ++iter) {
    Polynomial p = random_poly(2, 3, 3);
    Polynomial q = random_poly(2, 3, 3);
    std::int64_t dp = p.degree(0), dq = q.degree(0);
    if (dp < 1 || dq < 1) continue;
    Polynomial lhs = resultant(p, q, 0);
    Polynomial rhs = resultant(q, p, 0);
    if ((dp * dq) % 2 == 1) rhs = -rhs;
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("resultant is multiplicative in the second argument") {
  for (int iter = 0; iter < 15; ++iter) {
    Polynomial p = random_poly(2, 2, 3);
    Polynomial q1 = random_poly(2, 2, 2);
    Polynomial q2 = random_poly(2, 2, 2);
    if (p.degree(0) < 1 || q1.degree(0) < 1 || q2.degree(0) < 1) continue;
    REQUIRE(resultant(p, q1 * q2, 0) ==
            resultant(p, q1, 0) * resultant(p, q2, 0));
  }
}

TEST_CASE("discriminant identities") {
  // disc_x(x^2 + b x + c) = b^2 - 4c   (vars: x=0, b=1, c=2)
  Polynomial x = Polynomial::variable(3, 0);
  Polynomial b = Polynomial::variable(3, 1);
  Polynomial c = Polynomial::variable(3, 2);
  Polynomial p = x * x + b * x + c;
  REQUIRE(discriminant(p, 0) ==
          b * b - Polynomial::constant(3, 4) * c);

  Polynomial q = Polynomial::variable(1, 0) * Polynomial::variable(1, 0) -
                 Polynomial::constant(1, 2);
  REQUIRE(discriminant(q, 0) == Polynomial::constant(1, 8));
}

TEST_CASE("discriminant of random cubic against resultant oracle") {
  for (int iter = 0; iter < 10; ++iter) {
    Polynomial p = random_poly(2, 3, 4);
    if (p.degree(0) < 2) continue;
    Polynomial r = naive_sylvester_resultant(p, p.derivative(0), 0);
    Polynomial lc = univariate_view(p, 0).leading();
    Polynomial expect = divexact(r, lc);
    std::int64_t d = p.degree(0);
    if ((d * (d - 1) / 2) % 2 == 1) expect = -expect;
    REQUIRE(discriminant(p, 0) == expect);
  }
}

TEST_CASE("degree errors") {
  Polynomial c5 = Polynomial::constant(1, 5);
  Polynomial x = Polynomial::variable(1, 0);
  REQUIRE_THROWS_AS(resultant(c5, x, 0), DegreeZero);
  REQUIRE_THROWS_AS(discriminant(x, 0), DegreeTooLow);
}

TEST_CASE("psc zero index equals the resultant") {
  for (int iter = 0; iter < 10; ++iter) {
    Polynomial p = random_poly(2, 2, 3);
    Polynomial q = random_poly(2, 2, 3);
    if (p.degree(0) < 1 || q.degree(0) < 1) continue;
    auto up = univariate_view(p, 0);
    auto uq = univariate_view(q, 0);
    REQUIRE(psc(up, uq, 0, 2) == resultant(p, q, 0));
  }
}

TEST_CASE("univariate dense layer") {
  UPoly p{Int(-2), Int(0), Int(1)};  // x^2 - 2
  REQUIRE(up_sign_at(p, Rat(1)) < 0);
  REQUIRE(up_sign_at(p, Rat(2)) > 0);
  REQUIRE(up_eval(p, Rat(3, 2)) == Rat(1, 4));
  UPoly d = up_derivative(p);
  REQUIRE(d == UPoly{Int(0), Int(2)});
  UPoly prod = up_mul(p, d);
  REQUIRE(up_degree(prod) == 3);
  UPoly g = up_gcd(prod, p);
  REQUIRE(g == up_monic_sign(p));
  // (x-1)^2 (x+2) has square-free part (x-1)(x+2)
  UPoly f{Int(2), Int(-3), Int(0), Int(1)};
  UPoly sf = up_squarefree(f);
  REQUIRE(sf == UPoly{Int(-2), Int(1), Int(1)});
}
