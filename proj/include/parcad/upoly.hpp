#ifndef PARCAD_UPOLY_HPP
#define PARCAD_UPOLY_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "parcad/errors.hpp"
#include "parcad/numeric.hpp"
#include "parcad/polynomial.hpp"

namespace parcad {

/// Dense univariate integer polynomial; index = degree, no trailing zeros.
using UPoly = std::vector<Int>;

inline void up_normalize(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline bool up_is_zero(const UPoly& p) { return p.empty(); }

inline std::int64_t up_degree(const UPoly& p) {
  return static_cast<std::int64_t>(p.size()) - 1;
}

inline UPoly up_from_polynomial(const Polynomial& p, VarId v) {
  UPoly out;
  std::int64_t d = p.degree(v);
  if (d < 0) return out;
  out.assign(static_cast<std::size_t>(d) + 1, Int(0));
  for (const auto& [ev, c] : p.terms()) {
    for (std::size_t i = 0; i < ev.size(); ++i)
      if (ev[i] != 0 && static_cast<VarId>(i) != v)
        throw InternalError("polynomial not univariate in requested variable");
    out[ev[v]] = c;
  }
  up_normalize(out);
  return out;
}

inline Polynomial up_to_polynomial(const UPoly& p, std::size_t nvars,
                                   VarId v) {
  Polynomial out(nvars);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0) continue;
    ExpVec ev(nvars, 0);
    ev[v] = static_cast<std::uint32_t>(k);
    out.add_term(ev, p[k]);
  }
  return out;
}

inline Rat up_eval(const UPoly& p, const Rat& x) {
  Rat acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + Rat(*it);
  return acc;
}

inline int up_sign_at(const UPoly& p, const Rat& x) {
  return sign_of(up_eval(p, x));
}

inline RatInterval up_eval_interval(const UPoly& p, const RatInterval& x) {
  RatInterval acc{0, 0};
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = iv_mul(acc, x);
    acc = iv_add(acc, RatInterval{Rat(*it), Rat(*it)});
  }
  return acc;
}

inline UPoly up_derivative(const UPoly& p) {
  UPoly d;
  if (p.size() <= 1) return d;
  d.resize(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * Int(k);
  up_normalize(d);
  return d;
}

inline Int up_content(const UPoly& p) {
  Int g = 0;
  for (const auto& c : p) {
    g = int_gcd(g, c);
    if (g == 1) break;
  }
  return g;
}

/// Divide by content, keep the leading sign.
inline UPoly up_primitive(UPoly p) {
  up_normalize(p);
  if (p.empty()) return p;
  Int g = up_content(p);
  if (g != 1)
    for (auto& c : p) c /= g;
  return p;
}

/// Primitive with positive leading coefficient.
inline UPoly up_monic_sign(UPoly p) {
  p = up_primitive(std::move(p));
  if (!p.empty() && p.back() < 0)
    for (auto& c : p) c = -c;
  return p;
}

inline UPoly up_neg(UPoly p) {
  for (auto& c : p) c = -c;
  return p;
}

inline UPoly up_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  up_normalize(r);
  return r;
}

/// r = pos * (f mod g) for some positive rational pos; exact signs preserved.
inline UPoly up_prem_signed(const UPoly& f, const UPoly& g) {
  if (g.empty()) throw InternalError("up_prem by zero");
  UPoly r = f;
  up_normalize(r);
  const Int& l = g.back();
  std::int64_t dg = up_degree(g);
  int mults = 0;
  while (up_degree(r) >= dg) {
    std::int64_t dr = up_degree(r);
    Int lead = r.back();
    for (auto& c : r) c *= l;
    ++mults;
    for (std::int64_t i = 0; i <= dg; ++i)
      r[static_cast<std::size_t>(dr - dg + i)] -=
          lead * g[static_cast<std::size_t>(i)];
    up_normalize(r);
    if (up_degree(r) >= dr) throw InternalError("up_prem did not reduce");
  }
  // multiplier l^mults; flip sign when it was negative
  if (l < 0 && (mults % 2) == 1) r = up_neg(std::move(r));
  return r;
}

inline UPoly up_gcd(const UPoly& a, const UPoly& b) {
  UPoly f = up_primitive(a), g = up_primitive(b);
  if (f.empty()) return up_monic_sign(std::move(g));
  if (g.empty()) return up_monic_sign(std::move(f));
  if (up_degree(f) < up_degree(g)) std::swap(f, g);
  while (!g.empty()) {
    UPoly r = up_prem_signed(f, g);
    f = std::move(g);
    g = up_primitive(std::move(r));
  }
  return up_monic_sign(std::move(f));
}

inline UPoly up_squarefree(const UPoly& p) {
  if (up_degree(p) <= 1) return up_monic_sign(p);
  UPoly g = up_gcd(p, up_derivative(p));
  if (up_degree(g) < 1) return up_monic_sign(p);
  // exact division p / g
  UPoly r = p;
  UPoly q(p.size() - g.size() + 1, Int(0));
  while (up_degree(r) >= up_degree(g)) {
    std::int64_t shift = up_degree(r) - up_degree(g);
    Int c = r.back() / g.back();
    if (c * g.back() != r.back())
      throw InternalError("up_squarefree inexact division");
    q[static_cast<std::size_t>(shift)] = c;
    for (std::size_t i = 0; i < g.size(); ++i)
      r[static_cast<std::size_t>(shift) + i] -= c * g[i];
    up_normalize(r);
  }
  if (!r.empty()) throw InternalError("up_squarefree nonzero remainder");
  up_normalize(q);
  return up_monic_sign(std::move(q));
}

/// Cauchy root bound: every real root lies in (-B, B).
inline Rat up_root_bound(const UPoly& p) {
  if (p.empty()) throw ZeroPolynomial();
  Int m = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    m = std::max(m, int_abs(p[i]));
  return Rat(1) + Rat(m) / Rat(int_abs(p.back()));
}

/// Sturm chain of p: p, p', then negated remainders, content-reduced.
inline std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain;
  chain.push_back(up_primitive(p));
  UPoly d = up_derivative(p);
  if (d.empty()) return chain;
  chain.push_back(up_primitive(std::move(d)));
  while (true) {
    const UPoly& a = chain[chain.size() - 2];
    const UPoly& b = chain[chain.size() - 1];
    UPoly r = up_prem_signed(a, b);
    if (r.empty()) break;
    chain.push_back(up_primitive(up_neg(std::move(r))));
    if (up_degree(chain.back()) == 0) break;
  }
  return chain;
}

inline int up_sign_at_neg_inf(const UPoly& p) {
  if (p.empty()) return 0;
  int s = sign_of(p.back());
  return (up_degree(p) % 2 == 0) ? s : -s;
}

inline int up_sign_at_pos_inf(const UPoly& p) {
  return p.empty() ? 0 : sign_of(p.back());
}

inline int sturm_variations(const std::vector<UPoly>& chain, const Rat& x) {
  int count = 0, prev = 0;
  for (const auto& s : chain) {
    int sg = up_sign_at(s, x);
    if (sg == 0) continue;
    if (prev != 0 && sg != prev) ++count;
    prev = sg;
  }
  return count;
}

/// Number of distinct real roots of the chain's polynomial in (a, b].
inline int sturm_count(const std::vector<UPoly>& chain, const Rat& a,
                       const Rat& b) {
  return sturm_variations(chain, a) - sturm_variations(chain, b);
}

inline int sturm_count_all(const std::vector<UPoly>& chain) {
  int va = 0, vb = 0, prev = 0;
  for (const auto& s : chain) {
    int sg = up_sign_at_neg_inf(s);
    if (sg != 0) {
      if (prev != 0 && sg != prev) ++va;
      prev = sg;
    }
  }
  prev = 0;
  for (const auto& s : chain) {
    int sg = up_sign_at_pos_inf(s);
    if (sg != 0) {
      if (prev != 0 && sg != prev) ++vb;
      prev = sg;
    }
  }
  return va - vb;
}

}  // namespace parcad

#endif
