#ifndef PARCAD_POLYNOMIAL_HPP
#define PARCAD_POLYNOMIAL_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "parcad/errors.hpp"
#include "parcad/numeric.hpp"

namespace parcad {

using VarId = std::uint32_t;
using ExpVec = std::vector<std::uint32_t>;

/// Graded-lexicographic term order; x0 beats x1 on ties.
struct GrlexLess {
  bool operator()(const ExpVec& a, const ExpVec& b) const {
    std::uint64_t ta = 0, tb = 0;
    for (auto e : a) ta += e;
    for (auto e : b) tb += e;
    if (ta != tb) return ta < tb;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

/// Exact multivariate polynomial with integer coefficients over a fixed
/// variable count. Terms map exponent vectors to nonzero coefficients.
class Polynomial {
 public:
  using TermMap = std::map<ExpVec, Int, GrlexLess>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, Int c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_.emplace(ExpVec(nvars, 0), std::move(c));
    return p;
  }

  static Polynomial variable(std::size_t nvars, VarId v, std::uint32_t e = 1) {
    Polynomial p(nvars);
    ExpVec ev(nvars, 0);
    ev.at(v) = e;
    p.terms_.emplace(std::move(ev), Int(1));
    return p;
  }

  static Polynomial monomial(std::size_t nvars, ExpVec ev, Int c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_.emplace(std::move(ev), std::move(c));
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && total_degree_of(terms_.begin()->first) == 0);
  }

  /// Constant term (0 if absent).
  Int constant_value() const {
    if (terms_.empty()) return 0;
    auto it = terms_.find(ExpVec(nvars_, 0));
    return it == terms_.end() ? Int(0) : it->second;
  }

  void add_term(const ExpVec& ev, const Int& c) {
    if (c == 0) return;
    auto it = terms_.find(ev);
    if (it == terms_.end()) {
      terms_.emplace(ev, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  static std::uint64_t total_degree_of(const ExpVec& ev) {
    std::uint64_t d = 0;
    for (auto e : ev) d += e;
    return d;
  }

  std::int64_t total_degree() const {
    if (terms_.empty()) return -1;
    return static_cast<std::int64_t>(total_degree_of(terms_.rbegin()->first));
  }

  std::int64_t degree(VarId v) const {
    std::int64_t d = -1;
    if (terms_.empty()) return -1;
    d = 0;
    for (const auto& [ev, c] : terms_)
      d = std::max<std::int64_t>(d, ev[v]);
    return d;
  }

  /// Leading term under graded-lex.
  std::pair<ExpVec, Int> leading_term() const {
    if (terms_.empty()) throw ZeroPolynomial();
    return *terms_.rbegin();
  }

  Int leading_coeff() const { return leading_term().second; }

  bool depends_on(VarId v) const {
    for (const auto& [ev, c] : terms_)
      if (ev[v] > 0) return true;
    return false;
  }

  std::vector<VarId> occurring_vars() const {
    std::vector<VarId> out;
    for (VarId v = 0; v < nvars_; ++v)
      if (depends_on(v)) out.push_back(v);
    return out;
  }

  Polynomial operator-() const {
    Polynomial r(nvars_);
    for (const auto& [ev, c] : terms_) r.terms_.emplace(ev, -c);
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [ev, c] : o.terms_) add_term(ev, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [ev, c] : o.terms_) add_term(ev, -c);
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    a += b;
    return a;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    a -= b;
    return a;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        ExpVec ev(a.nvars_);
        for (std::size_t i = 0; i < a.nvars_; ++i) ev[i] = ea[i] + eb[i];
        r.add_term(ev, ca * cb);
      }
    }
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Int& c) {
    Polynomial r(a.nvars_);
    if (c == 0) return r;
    for (const auto& [ev, cc] : a.terms_) r.terms_.emplace(ev, cc * c);
    return r;
  }
  friend Polynomial operator*(const Int& c, const Polynomial& a) {
    return a * c;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) {
    return !(a == b);
  }
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) return a.nvars_ < b.nvars_;
    return std::lexicographical_compare(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
        [](const auto& x, const auto& y) {
          GrlexLess less;
          if (less(x.first, y.first)) return true;
          if (less(y.first, x.first)) return false;
          return x.second < y.second;
        });
  }

  Polynomial pow(unsigned e) const {
    Polynomial r = constant(nvars_, 1);
    Polynomial b = *this;
    while (e) {
      if (e & 1u) r = r * b;
      b = b * b;
      e >>= 1u;
    }
    return r;
  }

  /// gcd of all integer coefficients; 0 for the zero polynomial.
  Int content() const {
    Int g = 0;
    for (const auto& [ev, c] : terms_) {
      g = int_gcd(g, c);
      if (g == 1) break;
    }
    return g;
  }

  Polynomial divexact_int(const Int& d) const {
    Polynomial r(nvars_);
    for (const auto& [ev, c] : terms_) {
      Int q = c / d;
      if (q * d != c) throw InternalError("inexact integer division");
      r.terms_.emplace(ev, std::move(q));
    }
    return r;
  }

  /// Integer-content-free copy with positive graded-lex leading coefficient.
  Polynomial canonicalized() const {
    if (terms_.empty()) return *this;
    Int g = content();
    if (leading_coeff() < 0) g = -g;
    return divexact_int(g);
  }

  Polynomial derivative(VarId v) const {
    Polynomial r(nvars_);
    for (const auto& [ev, c] : terms_) {
      if (ev[v] == 0) continue;
      ExpVec e2 = ev;
      e2[v] -= 1;
      r.add_term(e2, c * Int(ev[v]));
    }
    return r;
  }

  Rat eval(const std::vector<Rat>& point) const {
    Rat acc = 0;
    for (const auto& [ev, c] : terms_) {
      Rat t(c);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (ev[i]) t *= rat_pow(point[i], ev[i]);
      acc += t;
    }
    return acc;
  }

  /// Substitute var := value and clear the (positive) denominator by
  /// multiplying through by den(value)^deg; the sign at any point of the
  /// remaining variables is unchanged.
  Polynomial subst_rational_cleared(VarId v, const Rat& value) const {
    std::int64_t d = degree(v);
    if (d <= 0) return *this;
    const Int a = num(value);
    const Int b = den(value);
    Polynomial r(nvars_);
    for (const auto& [ev, c] : terms_) {
      std::uint32_t k = ev[v];
      ExpVec e2 = ev;
      e2[v] = 0;
      r.add_term(e2, c * int_pow(a, k) *
                         int_pow(b, static_cast<unsigned>(d - k)));
    }
    return r;
  }

  /// Substitute var := num/den with den a nonzero integer; result is the
  /// substituted polynomial multiplied by den^deg (denominators cleared).
  Polynomial subst_poly_cleared(VarId v, const Polynomial& numer,
                                const Int& denom) const {
    std::int64_t d = degree(v);
    if (d <= 0) return *this;
    Polynomial r(nvars_);
    for (const auto& [ev, c] : terms_) {
      std::uint32_t k = ev[v];
      ExpVec e2 = ev;
      e2[v] = 0;
      Polynomial t = Polynomial::monomial(nvars_, e2, c) *
                     int_pow(denom, static_cast<unsigned>(d - k));
      if (k) t = t * numer.pow(k);
      r += t;
    }
    return r;
  }

  /// Remap variables: new_ev[perm[i]] = old_ev[i]; perm values < new_nvars.
  Polynomial map_vars(const std::vector<VarId>& perm,
                      std::size_t new_nvars) const {
    Polynomial r(new_nvars);
    for (const auto& [ev, c] : terms_) {
      ExpVec e2(new_nvars, 0);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (ev[i] == 0) continue;
        e2.at(perm[i]) = ev[i];
      }
      r.terms_.emplace(std::move(e2), c);
    }
    return r;
  }

 private:
  std::size_t nvars_;
  TermMap terms_;
};

/// Coefficient list of p in the main variable; index = degree.
/// Entries are polynomials free of the main variable.
struct UnivariateView {
  std::vector<Polynomial> coefficients;
  VarId main_var = 0;

  std::int64_t degree() const {
    return static_cast<std::int64_t>(coefficients.size()) - 1;
  }
  const Polynomial& leading() const { return coefficients.back(); }
};

inline UnivariateView univariate_view(const Polynomial& p, VarId v) {
  UnivariateView uv;
  uv.main_var = v;
  std::int64_t d = p.degree(v);
  if (p.is_zero()) return uv;
  if (d < 0) d = 0;
  uv.coefficients.assign(static_cast<std::size_t>(d) + 1,
                         Polynomial(p.nvars()));
  for (const auto& [ev, c] : p.terms()) {
    ExpVec e2 = ev;
    std::uint32_t k = e2[v];
    e2[v] = 0;
    uv.coefficients[k].add_term(e2, c);
  }
  while (uv.coefficients.size() > 1 && uv.coefficients.back().is_zero())
    uv.coefficients.pop_back();
  return uv;
}

inline Polynomial from_univariate_view(const UnivariateView& uv,
                                       std::size_t nvars) {
  Polynomial p(nvars);
  for (std::size_t k = 0; k < uv.coefficients.size(); ++k) {
    for (const auto& [ev, c] : uv.coefficients[k].terms()) {
      ExpVec e2 = ev;
      e2[uv.main_var] += static_cast<std::uint32_t>(k);
      p.add_term(e2, c);
    }
  }
  return p;
}

/// Exact polynomial division; throws InternalError when not divisible.
inline Polynomial divexact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw InternalError("division by zero polynomial");
  if (a.is_zero()) return Polynomial(a.nvars());
  if (b.is_constant()) return a.divexact_int(b.constant_value());
  VarId v = b.occurring_vars().back();
  UnivariateView ua = univariate_view(a, v);
  UnivariateView ub = univariate_view(b, v);
  std::int64_t db = ub.degree();
  std::vector<Polynomial> q(
      static_cast<std::size_t>(std::max<std::int64_t>(ua.degree() - db, 0)) +
          1,
      Polynomial(a.nvars()));
  UnivariateView r = ua;
  auto rdeg = [&]() -> std::int64_t {
    std::int64_t d = static_cast<std::int64_t>(r.coefficients.size()) - 1;
    while (d >= 0 && r.coefficients[static_cast<std::size_t>(d)].is_zero())
      --d;
    return d;
  };
  std::int64_t dr = rdeg();
  while (dr >= db) {
    Polynomial t =
        divexact(r.coefficients[static_cast<std::size_t>(dr)], ub.leading());
    q[static_cast<std::size_t>(dr - db)] = t;
    for (std::int64_t i = 0; i <= db; ++i) {
      r.coefficients[static_cast<std::size_t>(dr - db + i)] -=
          t * ub.coefficients[static_cast<std::size_t>(i)];
    }
    std::int64_t nd = rdeg();
    if (nd >= dr) throw InternalError("inexact polynomial division");
    dr = nd;
  }
  if (dr >= 0) throw InternalError("inexact polynomial division: remainder");
  UnivariateView uq;
  uq.main_var = v;
  uq.coefficients = std::move(q);
  return from_univariate_view(uq, a.nvars());
}

/// Pseudo-remainder lc(g)^(deg f - deg g + 1) * f mod g in variable v.
inline Polynomial prem(const Polynomial& f, const Polynomial& g, VarId v) {
  std::int64_t df = f.degree(v), dg = g.degree(v);
  if (dg < 0) throw InternalError("prem by zero polynomial");
  if (df < dg) {
    // still scale by the full factor for the canonical pseudo-remainder
    return f;
  }
  UnivariateView uf = univariate_view(f, v);
  UnivariateView ug = univariate_view(g, v);
  Polynomial l = ug.leading();
  std::int64_t e = df - dg + 1;
  std::vector<Polynomial> r = uf.coefficients;
  auto rdeg = [&]() -> std::int64_t {
    std::int64_t d = static_cast<std::int64_t>(r.size()) - 1;
    while (d >= 0 && r[static_cast<std::size_t>(d)].is_zero()) --d;
    return d;
  };
  std::int64_t dr = rdeg();
  while (dr >= dg) {
    Polynomial lead = r[static_cast<std::size_t>(dr)];
    for (std::int64_t i = 0; i <= dr; ++i)
      r[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] * l;
    for (std::int64_t i = 0; i <= dg; ++i)
      r[static_cast<std::size_t>(dr - dg + i)] -=
          lead * ug.coefficients[static_cast<std::size_t>(i)];
    --e;
    std::int64_t nd = rdeg();
    if (nd >= dr) throw InternalError("prem failed to reduce degree");
    dr = nd;
  }
  UnivariateView ur;
  ur.main_var = v;
  ur.coefficients = std::move(r);
  Polynomial out = from_univariate_view(ur, f.nvars());
  for (std::int64_t i = 0; i < e; ++i) out = out * l;
  return out;
}

/// Content of p with respect to v: gcd of the coefficient polynomials.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

inline Polynomial content_wrt(const Polynomial& p, VarId v) {
  UnivariateView uv = univariate_view(p, v);
  Polynomial g(p.nvars());
  for (const auto& c : uv.coefficients) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : poly_gcd(g, c);
    if (g.is_constant() && int_abs(g.constant_value()) == 1) break;
  }
  return g;
}

/// Multivariate gcd by the primitive PRS; result canonical (positive lead).
inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.canonicalized();
  if (b.is_zero()) return a.canonicalized();
  if (a.is_constant() || b.is_constant()) {
    Int g = int_gcd(a.content(), b.content());
    return Polynomial::constant(a.nvars(), g < 0 ? -g : g);
  }
  auto va = a.occurring_vars();
  auto vb = b.occurring_vars();
  // main variable: the highest one occurring in both, else integer-content gcd
  // times gcd of the contents in a shared-variable-free split is just the
  // integer gcd of contents.
  std::vector<VarId> shared;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(),
                        std::back_inserter(shared));
  if (shared.empty()) {
    Int g = int_gcd(a.content(), b.content());
    return Polynomial::constant(a.nvars(), g < 0 ? -g : g);
  }
  VarId v = shared.back();
  Polynomial ca = content_wrt(a, v);
  Polynomial cb = content_wrt(b, v);
  Polynomial pa = divexact(a, ca);
  Polynomial pb = divexact(b, cb);
  Polynomial cont_gcd = poly_gcd(ca, cb);
  // primitive PRS on pa, pb
  Polynomial f = pa, g = pb;
  if (f.degree(v) < g.degree(v)) std::swap(f, g);
  while (true) {
    Polynomial r = prem(f, g, v);
    if (r.is_zero()) break;
    if (r.degree(v) <= 0) {
      g = Polynomial::constant(a.nvars(), 1);
      break;
    }
    Polynomial c = content_wrt(r, v);
    f = g;
    g = divexact(r, c);
  }
  Polynomial pp = g.degree(v) > 0 ? divexact(g, content_wrt(g, v)) : g;
  if (pp.is_constant())
    return cont_gcd.canonicalized();
  return (cont_gcd * pp).canonicalized();
}

/// Square-free part of p with respect to v.
inline Polynomial squarefree_part(const Polynomial& p, VarId v) {
  if (p.degree(v) <= 0) return p;
  Polynomial d = p.derivative(v);
  Polynomial g = poly_gcd(p, d);
  if (g.is_constant()) return p;
  return divexact(p, g);
}

namespace detail {

/// Bareiss fraction-free determinant of a square polynomial matrix.
/// Destroys the input. Exact, including the sign.
inline Polynomial bareiss_det(std::vector<std::vector<Polynomial>>& m,
                              std::size_t nvars) {
  const std::size_t s = m.size();
  if (s == 0) return Polynomial::constant(nvars, 1);
  int sign = 1;
  Polynomial prev = Polynomial::constant(nvars, 1);
  for (std::size_t k = 0; k + 1 < s; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t piv = k + 1;
      while (piv < s && m[piv][k].is_zero()) ++piv;
      if (piv == s) return Polynomial(nvars);
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < s; ++i) {
      for (std::size_t j = k + 1; j < s; ++j) {
        m[i][j] = divexact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
      }
      m[i][k] = Polynomial(nvars);
    }
    prev = m[k][k];
  }
  Polynomial det = m[s - 1][s - 1];
  return sign < 0 ? -det : det;
}

inline std::vector<std::vector<Polynomial>> sylvester_matrix(
    const UnivariateView& p, const UnivariateView& q, std::size_t nvars) {
  const std::size_t m = static_cast<std::size_t>(p.degree());
  const std::size_t n = static_cast<std::size_t>(q.degree());
  std::vector<std::vector<Polynomial>> s(
      m + n, std::vector<Polynomial>(m + n, Polynomial(nvars)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= m; ++k)
      s[i][i + k] = p.coefficients[m - k];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k <= n; ++k)
      s[n + i][i + k] = q.coefficients[n - k];
  return s;
}

}  // namespace detail

/// Determinant of the Sylvester matrix of p and q in their main variable.
inline Polynomial resultant(const UnivariateView& p, const UnivariateView& q,
                            std::size_t nvars) {
  if (p.degree() < 1 || q.degree() < 1) throw DegreeZero();
  auto m = detail::sylvester_matrix(p, q, nvars);
  return detail::bareiss_det(m, nvars);
}

inline Polynomial resultant(const Polynomial& p, const Polynomial& q,
                            VarId v) {
  return resultant(univariate_view(p, v), univariate_view(q, v), p.nvars());
}

/// j-th principal subresultant coefficient: determinant of the Sylvester
/// matrix with the last j rows of each block and the last 2j columns removed.
inline Polynomial psc(const UnivariateView& p, const UnivariateView& q,
                      std::size_t j, std::size_t nvars) {
  const std::size_t m = static_cast<std::size_t>(p.degree());
  const std::size_t n = static_cast<std::size_t>(q.degree());
  if (j >= std::min(m, n)) throw InternalError("psc index out of range");
  auto full = detail::sylvester_matrix(p, q, nvars);
  const std::size_t s = m + n - 2 * j;
  std::vector<std::vector<Polynomial>> sub(
      s, std::vector<Polynomial>(s, Polynomial(nvars)));
  for (std::size_t i = 0; i < n - j; ++i)
    for (std::size_t c = 0; c < s; ++c) sub[i][c] = full[i][c];
  for (std::size_t i = 0; i < m - j; ++i)
    for (std::size_t c = 0; c < s; ++c) sub[n - j + i][c] = full[n + i][c];
  return detail::bareiss_det(sub, nvars);
}

/// disc(p) = (-1)^(d(d-1)/2) res(p, p') / lc(p).
inline Polynomial discriminant(const UnivariateView& p, std::size_t nvars) {
  std::int64_t d = p.degree();
  if (d < 2) throw DegreeTooLow();
  Polynomial whole = from_univariate_view(p, nvars);
  Polynomial dp = whole.derivative(p.main_var);
  Polynomial r = resultant(whole, dp, p.main_var);
  Polynomial q = divexact(r, p.leading());
  return ((d * (d - 1) / 2) % 2 == 1) ? -q : q;
}

inline Polynomial discriminant(const Polynomial& p, VarId v) {
  return discriminant(univariate_view(p, v), p.nvars());
}

}  // namespace parcad

#endif
