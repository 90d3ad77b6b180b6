#ifndef PARCAD_ALGEBRAIC_HPP
#define PARCAD_ALGEBRAIC_HPP

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "parcad/errors.hpp"
#include "parcad/numeric.hpp"
#include "parcad/polynomial.hpp"
#include "parcad/upoly.hpp"

namespace parcad {

/// Real algebraic number: square-free primitive integer polynomial plus an
/// isolating rational interval. A degenerate interval [r, r] means the number
/// is the rational r itself.
class AlgebraicNumber {
 public:
  AlgebraicNumber() = default;

  /// defining must be square-free with exactly one root in [lo, hi].
  static AlgebraicNumber make(UPoly defining, Rat lo, Rat hi) {
    AlgebraicNumber a;
    a.defining_ = up_monic_sign(std::move(defining));
    if (up_degree(a.defining_) == 1) {
      Rat root = Rat(-a.defining_[0]) / Rat(a.defining_[1]);
      a.lo_ = a.hi_ = root;
      a.sign_lo_ = 0;
      return a;
    }
    a.lo_ = std::move(lo);
    a.hi_ = std::move(hi);
    if (a.lo_ == a.hi_) {
      a.sign_lo_ = 0;
      return a;
    }
    int slo = up_sign_at(a.defining_, a.lo_);
    int shi = up_sign_at(a.defining_, a.hi_);
    if (slo == 0) {
      a.hi_ = a.lo_;
      a.sign_lo_ = 0;
      return a;
    }
    if (shi == 0) {
      a.lo_ = a.hi_;
      a.sign_lo_ = 0;
      return a;
    }
    if (slo * shi > 0)
      throw InternalError("isolating interval lacks a sign change");
    a.sign_lo_ = slo;
    return a;
  }

  static AlgebraicNumber from_rational(const Rat& r) {
    AlgebraicNumber a;
    a.defining_ = {Int(-num(r)), Int(den(r))};
    a.defining_ = up_monic_sign(std::move(a.defining_));
    a.lo_ = a.hi_ = r;
    a.sign_lo_ = 0;
    return a;
  }

  const UPoly& defining() const { return defining_; }
  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  bool is_point() const { return lo_ == hi_; }
  Rat width() const { return hi_ - lo_; }
  RatInterval interval() const { return {lo_, hi_}; }

  void refine_once() {
    if (is_point()) return;
    Rat mid = (lo_ + hi_) / 2;
    int sm = up_sign_at(defining_, mid);
    if (sm == 0) {
      lo_ = hi_ = mid;
      sign_lo_ = 0;
      return;
    }
    if (sm == sign_lo_)
      lo_ = mid;
    else
      hi_ = mid;
  }

  void refine_below(const Rat& w) {
    while (!is_point() && width() > w) refine_once();
  }

 private:
  UPoly defining_;
  Rat lo_ = 0, hi_ = 0;
  int sign_lo_ = 0;
};

/// Spec operation: same root, interval width at most `width`.
inline AlgebraicNumber refine(AlgebraicNumber a, const Rat& width) {
  a.refine_below(width);
  return a;
}

/// A sample-point coordinate: exact rational or real algebraic.
using Coordinate = std::variant<Rat, AlgebraicNumber>;

inline bool coord_is_rational(const Coordinate& c) {
  if (std::holds_alternative<Rat>(c)) return true;
  return std::get<AlgebraicNumber>(c).is_point();
}

inline Rat coord_rational_value(const Coordinate& c) {
  if (std::holds_alternative<Rat>(c)) return std::get<Rat>(c);
  return std::get<AlgebraicNumber>(c).lo();
}

inline RatInterval coord_interval(const Coordinate& c) {
  if (std::holds_alternative<Rat>(c)) {
    const Rat& r = std::get<Rat>(c);
    return {r, r};
  }
  return std::get<AlgebraicNumber>(c).interval();
}

inline Rat coord_approx(const Coordinate& c) {
  auto iv = coord_interval(c);
  return (iv.lo + iv.hi) / 2;
}

/// Exact order of an algebraic number against a rational.
inline int compare_alg_rat(const AlgebraicNumber& a, const Rat& q) {
  if (a.is_point()) return a.lo() < q ? -1 : (a.lo() == q ? 0 : 1);
  if (q <= a.lo()) return 1;   // root strictly inside (lo, hi)
  if (q >= a.hi()) return -1;
  int sq = up_sign_at(a.defining(), q);
  if (sq == 0) return 0;
  // same sign as at lo: the root is to the right of q
  return sq == up_sign_at(a.defining(), a.lo()) ? 1 : -1;
}

/// Exact order of two algebraic numbers. Refines both as a side effect.
inline int compare_alg_alg(AlgebraicNumber& a, AlgebraicNumber& b) {
  if (a.is_point()) return -compare_alg_rat(b, a.lo());
  if (b.is_point()) return compare_alg_rat(a, b.lo());
  UPoly g = up_gcd(a.defining(), b.defining());
  const bool common_possible = up_degree(g) >= 1;
  std::vector<UPoly> gchain;
  if (common_possible) gchain = sturm_chain(g);
  while (true) {
    if (a.is_point()) return -compare_alg_rat(b, a.lo());
    if (b.is_point()) return compare_alg_rat(a, b.lo());
    // both roots lie strictly inside their intervals
    if (a.hi() <= b.lo()) return -1;
    if (b.hi() <= a.lo()) return 1;
    if (common_possible) {
      Rat lo = std::max(a.lo(), b.lo());
      Rat hi = std::min(a.hi(), b.hi());
      if (lo < hi && sturm_count(gchain, lo, hi) >= 1) {
        // the shared root lies in both isolating intervals, hence equals both
        return 0;
      }
    }
    a.refine_once();
    b.refine_once();
  }
}

inline int compare_coordinates(Coordinate& x, Coordinate& y) {
  if (coord_is_rational(x) && coord_is_rational(y)) {
    Rat a = coord_rational_value(x), b = coord_rational_value(y);
    return a < b ? -1 : (a == b ? 0 : 1);
  }
  if (coord_is_rational(x))
    return -compare_alg_rat(std::get<AlgebraicNumber>(y),
                            coord_rational_value(x));
  if (coord_is_rational(y))
    return compare_alg_rat(std::get<AlgebraicNumber>(x),
                           coord_rational_value(y));
  return compare_alg_alg(std::get<AlgebraicNumber>(x),
                         std::get<AlgebraicNumber>(y));
}

struct IsolationResult {
  std::vector<AlgebraicNumber> roots;
  std::size_t count = 0;
};

namespace detail {

inline void isolate_rec(const UPoly& sf, const std::vector<UPoly>& chain,
                        const Rat& a, const Rat& b,
                        std::vector<AlgebraicNumber>& out) {
  int c = sturm_count(chain, a, b);
  if (c == 0) return;
  if (c == 1) {
    out.push_back(AlgebraicNumber::make(sf, a, b));
    return;
  }
  Rat mid = (a + b) / 2;
  Rat step = (b - a) / 4;
  while (up_sign_at(sf, mid) == 0) {
    mid += step;
    step /= 2;
  }
  isolate_rec(sf, chain, a, mid, out);
  isolate_rec(sf, chain, mid, b, out);
}

}  // namespace detail

/// Isolate all distinct real roots of p (square-free part taken internally).
inline IsolationResult sturm_isolate(const UPoly& p) {
  if (up_is_zero(p)) throw ZeroPolynomial();
  IsolationResult res;
  if (up_degree(p) == 0) return res;
  UPoly sf = up_squarefree(p);
  if (up_degree(sf) < 1) return res;
  auto chain = sturm_chain(sf);
  Rat bound = up_root_bound(sf);
  // endpoints outside the root bound are never roots
  detail::isolate_rec(sf, chain, -bound, bound, res.roots);
  res.count = res.roots.size();
  if (static_cast<int>(res.count) != sturm_count_all(chain))
    throw InternalError("sturm isolation miscount");
  return res;
}

inline IsolationResult sturm_isolate(const Polynomial& p, VarId v) {
  return sturm_isolate(up_from_polynomial(p, v));
}

/// Partial point: assigns coordinates to a subset of the variables.
using PointAssignment = std::vector<std::pair<VarId, Coordinate>>;

inline const Coordinate* assignment_find(const PointAssignment& pt, VarId v) {
  for (const auto& [var, c] : pt)
    if (var == v) return &c;
  return nullptr;
}

/// Sign of a univariate integer polynomial at an algebraic number; exact.
inline int sign_alg_uni(const UPoly& c, AlgebraicNumber& alpha) {
  if (up_is_zero(c)) return 0;
  if (alpha.is_point()) return up_sign_at(c, alpha.lo());
  UPoly g = up_gcd(c, alpha.defining());
  if (up_degree(g) >= 1 &&
      up_sign_at(g, alpha.lo()) * up_sign_at(g, alpha.hi()) < 0)
    return 0;
  while (true) {
    RatInterval iv = up_eval_interval(c, alpha.interval());
    if (!iv.contains_zero()) return iv.lo > 0 ? 1 : -1;
    if (alpha.is_point()) return up_sign_at(c, alpha.lo());
    alpha.refine_once();
  }
}

namespace detail {

inline Polynomial embed(const Polynomial& p, std::size_t new_nvars) {
  std::vector<VarId> perm(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i)
    perm[i] = static_cast<VarId>(i);
  return p.map_vars(perm, new_nvars);
}

inline std::optional<Polynomial> try_divexact(const Polynomial& a,
                                              const Polynomial& b) {
  try {
    return divexact(a, b);
  } catch (const InternalError&) {
    return std::nullopt;
  }
}

/// Eliminate the tower variables from C by iterated resultants against the
/// defining polynomials; the result (a polynomial in out_var alone) vanishes
/// wherever C vanishes at the tower point. Returns nullopt when a defining
/// branch divides an intermediate and the chain degenerates.
inline std::optional<UPoly> eliminate_chain(
    Polynomial C, const std::vector<std::pair<VarId, AlgebraicNumber*>>& tower,
    VarId out_var) {
  std::vector<Polynomial> work{std::move(C)};
  UPoly acc{Int(1)};
  while (!work.empty()) {
    Polynomial cur = std::move(work.back());
    work.pop_back();
    if (cur.is_zero()) throw InternalError("eliminate_chain on zero");
    bool eliminated = true;
    while (eliminated) {
      eliminated = false;
      for (const auto& [v, alpha] : tower) {
        if (!cur.depends_on(v)) continue;
        Polynomial d =
            up_to_polynomial(alpha->defining(), cur.nvars(), v);
        Polynomial h = content_wrt(cur, v);
        if (!h.is_constant()) {
          work.push_back(h);
          cur = divexact(cur, h);
        } else {
          Int ic = cur.content();
          if (ic != 1 && ic != 0) cur = cur.divexact_int(ic);
        }
        // peel every factor shared with the defining polynomial; recompute
        // the gcd each round so no partial branch survives
        while (true) {
          Polynomial g = poly_gcd(d, cur);
          if (g.is_constant()) break;
          UPoly gu = up_from_polynomial(g, v);
          if (sign_alg_uni(gu, *alpha) == 0) return std::nullopt;
          cur = divexact(cur, g);
        }
        if (cur.depends_on(v)) cur = resultant(d, cur, v);
        eliminated = true;
        break;
      }
    }
    // cur now involves at most out_var
    for (VarId v = 0; v < cur.nvars(); ++v)
      if (v != out_var && cur.depends_on(v))
        throw InternalError("eliminate_chain left a stray variable");
    UPoly u = up_from_polynomial(cur, out_var);
    if (up_is_zero(u)) throw InternalError("eliminate_chain produced zero");
    acc = up_mul(acc, up_primitive(u));
  }
  return acc;
}

}  // namespace detail

int sign_at(const Polynomial& p, PointAssignment& point);

namespace detail {

/// Nonzero integer polynomial annihilating the value q(alpha_1..alpha_m).
inline std::optional<UPoly> value_certificate(
    const Polynomial& q,
    const std::vector<std::pair<VarId, AlgebraicNumber*>>& tower) {
  const std::size_t n = q.nvars();
  const VarId z = static_cast<VarId>(n);
  Polynomial P = Polynomial::variable(n + 1, z) - embed(q, n + 1);
  std::vector<std::pair<VarId, AlgebraicNumber*>> tw = tower;
  // try a few elimination orders before giving up
  for (std::size_t attempt = 0; attempt <= tw.size(); ++attempt) {
    auto r = eliminate_chain(P, tw, z);
    if (r) return r;
    std::rotate(tw.begin(), tw.begin() + 1, tw.end());
  }
  return std::nullopt;
}

/// Lower bound on |nonzero roots| of Z: returns r with every nonzero real
/// root of Z having absolute value > r.
inline Rat nonzero_root_lower_bound(const UPoly& z) {
  std::size_t m = 0;
  while (m < z.size() && z[m] == 0) ++m;
  if (m >= z.size()) throw InternalError("zero certificate");
  Int a0 = int_abs(z[m]);
  Int rest = 0;
  for (std::size_t i = m + 1; i < z.size(); ++i) rest += int_abs(z[i]);
  if (rest == 0) return Rat(1);  // z = c * x^m: only root is 0
  return Rat(a0) / Rat(a0 + rest);
}

inline bool certificate_has_zero_root(const UPoly& z) {
  return !z.empty() && z[0] == 0;
}

}  // namespace detail

/// Exact sign of p at a partial point covering all its variables.
/// Coordinates may be refined in place.
inline int sign_at(const Polynomial& p, PointAssignment& point) {
  Polynomial q = p;
  for (auto& [v, coord] : point) {
    if (!q.depends_on(v)) continue;
    if (coord_is_rational(coord))
      q = q.subst_rational_cleared(v, coord_rational_value(coord));
  }
  if (q.is_constant()) return sign_of(q.constant_value());
  std::vector<std::pair<VarId, AlgebraicNumber*>> tower;
  for (auto& [v, coord] : point) {
    if (!q.depends_on(v)) continue;
    tower.emplace_back(v, &std::get<AlgebraicNumber>(coord));
  }
  for (VarId v : q.occurring_vars()) {
    if (!assignment_find(point, v))
      throw InternalError("sign_at: unassigned variable");
  }
  if (tower.size() == 1) {
    UPoly c = up_from_polynomial(q, tower.front().first);
    return sign_alg_uni(c, *tower.front().second);
  }
  // several algebraic coordinates: interval refinement with an exact
  // certificate for the zero decision
  std::optional<UPoly> cert;
  std::optional<Rat> zero_radius;
  bool cert_failed = false;
  for (int round = 0;; ++round) {
    std::vector<RatInterval> box(q.nvars(), RatInterval{0, 0});
    for (const auto& [v, alpha] : tower) box[v] = alpha->interval();
    RatInterval val{0, 0};
    for (const auto& [ev, c] : q.terms()) {
      RatInterval t{Rat(c), Rat(c)};
      for (std::size_t i = 0; i < ev.size(); ++i)
        if (ev[i]) t = iv_mul(t, iv_pow(box[i], ev[i]));
      val = iv_add(val, t);
    }
    if (!val.contains_zero()) return val.lo > 0 ? 1 : -1;
    if (zero_radius && rat_abs(val.lo) < *zero_radius &&
        rat_abs(val.hi) < *zero_radius)
      return 0;
    if (!cert && !cert_failed && round >= 4) {
      cert = detail::value_certificate(q, tower);
      if (!cert) {
        cert_failed = true;
      } else if (!detail::certificate_has_zero_root(*cert)) {
        cert.reset();  // the value cannot be zero; refinement will resolve
        zero_radius.reset();
      } else {
        zero_radius = detail::nonzero_root_lower_bound(*cert);
      }
    }
    if (cert_failed && round > 512)
      throw InternalError("sign_at: certificate degenerated");
    bool all_points = true;
    for (auto& [v, alpha] : tower) {
      alpha->refine_once();
      all_points = all_points && alpha->is_point();
    }
    if (all_points) {
      // every coordinate collapsed to a rational: restart exactly
      Polynomial r = q;
      for (auto& [v, alpha] : tower)
        r = r.subst_rational_cleared(v, alpha->lo());
      return sign_of(r.constant_value());
    }
  }
}

/// Convenience overload evaluating at an exact rational point.
inline int sign_at(const Polynomial& p, const std::vector<Rat>& point) {
  return sign_of(p.eval(point));
}

/// Result of specializing a polynomial at a tower and isolating its roots in
/// the remaining variable.
struct TowerRoots {
  bool identically_zero = false;
  std::vector<Coordinate> roots;  // strictly increasing
};

namespace detail {

/// Truncate q (viewed in x) to its highest coefficient with nonzero value at
/// the tower point; returns the effective degree, -1 when all vanish.
inline std::int64_t effective_degree(const Polynomial& q, VarId x,
                                     PointAssignment& pt,
                                     UnivariateView& uv_out) {
  uv_out = univariate_view(q, x);
  for (std::int64_t j = uv_out.degree(); j >= 0; --j) {
    const Polynomial& c = uv_out.coefficients[static_cast<std::size_t>(j)];
    if (c.is_zero()) continue;
    if (sign_at(c, pt) != 0) return j;
  }
  return -1;
}

inline Polynomial truncate_to_degree(const UnivariateView& uv, std::int64_t d,
                                     std::size_t nvars) {
  UnivariateView t;
  t.main_var = uv.main_var;
  t.coefficients.assign(uv.coefficients.begin(),
                        uv.coefficients.begin() + d + 1);
  return from_univariate_view(t, nvars);
}

/// Sturm-style root isolation of q(alpha, x) for a single algebraic base
/// coordinate. The chain lives in Z[t, x]; each element is kept a positive
/// multiple of the true remainder at t = alpha.
class QAlphaSturm {
 public:
  QAlphaSturm(Polynomial q, VarId t, VarId x, AlgebraicNumber& alpha)
      : t_(t), x_(x), alpha_(&alpha), nvars_(q.nvars()) {
    d_poly_ = up_to_polynomial(alpha.defining(), nvars_, t_);
    q = prem(q, d_poly_, t_);  // positive-factor reduction mod the defining
    q = reduce_entry(std::move(q));
    if (q.is_zero()) {
      identically_zero_ = true;
      return;
    }
    chain_.push_back(q);
    Polynomial der = reduce_entry(q.derivative(x_));
    if (der.is_zero()) return;
    chain_.push_back(der);
    while (true) {
      const Polynomial& a = chain_[chain_.size() - 2];
      const Polynomial& b = chain_.back();
      if (b.degree(x_) < 1) break;
      std::int64_t delta = a.degree(x_) - b.degree(x_);
      Polynomial r = prem(a, b, x_);
      UPoly lc = up_from_polynomial(
          univariate_view(b, x_).leading(), t_);
      int slc = sign_alg_uni(lc, *alpha_);
      if (slc == 0) throw InternalError("qalpha chain lost its lead");
      int mult_sign = (slc < 0 && ((delta + 1) % 2 == 1)) ? -1 : 1;
      // next = -(true remainder) * positive
      Polynomial next = mult_sign > 0 ? -r : r;
      next = reduce_entry(std::move(next));
      if (next.is_zero()) break;
      chain_.push_back(std::move(next));
    }
  }

  bool identically_zero() const { return identically_zero_; }

  std::int64_t specialized_degree() {
    if (identically_zero_) return -1;
    UnivariateView uv = univariate_view(chain_.front(), x_);
    for (std::int64_t j = uv.degree(); j >= 0; --j) {
      UPoly c = up_from_polynomial(
          uv.coefficients[static_cast<std::size_t>(j)], t_);
      if (sign_alg_uni(c, *alpha_) != 0) return j;
    }
    return -1;
  }

  int sign_of_value(const Polynomial& s, const Rat& x0) {
    Polynomial sub = s.subst_rational_cleared(x_, x0);
    UPoly c = up_from_polynomial(sub, t_);
    return sign_alg_uni(c, *alpha_);
  }

  int variations(const Rat& x0) {
    int count = 0, prev = 0;
    for (const auto& s : chain_) {
      int sg = sign_of_value(s, x0);
      if (sg == 0) continue;
      if (prev != 0 && sg != prev) ++count;
      prev = sg;
    }
    return count;
  }

  int count_roots(const Rat& a, const Rat& b) {
    return variations(a) - variations(b);
  }

  int sign_at_point(const Rat& x0) { return sign_of_value(chain_.front(), x0); }

  /// Upper bound on |roots| of the specialized polynomial.
  Rat root_bound() {
    UnivariateView uv = univariate_view(chain_.front(), x_);
    std::int64_t d = specialized_degree();
    if (d < 1) return Rat(1);
    UPoly lead = up_from_polynomial(
        uv.coefficients[static_cast<std::size_t>(d)], t_);
    while (true) {
      RatInterval li = up_eval_interval(lead, alpha_->interval());
      if (!li.contains_zero()) {
        Rat lmin = std::min(rat_abs(li.lo), rat_abs(li.hi));
        Rat m = 0;
        for (std::int64_t j = 0; j < d; ++j) {
          UPoly cj = up_from_polynomial(
              uv.coefficients[static_cast<std::size_t>(j)], t_);
          RatInterval ci = up_eval_interval(cj, alpha_->interval());
          m = std::max(m, std::max(rat_abs(ci.lo), rat_abs(ci.hi)));
        }
        return Rat(1) + m / lmin;
      }
      alpha_->refine_once();
    }
  }

 private:
  /// Reduce mod the defining polynomial in t, strip zero-value leading
  /// x-coefficients, remove integer and t-only content (sign-corrected).
  Polynomial reduce_entry(Polynomial s) {
    if (s.is_zero()) return s;
    if (s.degree(t_) >= up_degree(alpha_->defining()))
      s = prem(s, d_poly_, t_);
    UnivariateView uv = univariate_view(s, x_);
    std::int64_t j = uv.degree();
    for (; j >= 0; --j) {
      const Polynomial& c = uv.coefficients[static_cast<std::size_t>(j)];
      if (c.is_zero()) continue;
      UPoly cu = up_from_polynomial(c, t_);
      if (sign_alg_uni(cu, *alpha_) != 0) break;
    }
    if (j < 0) return Polynomial(nvars_);
    if (j < uv.degree()) s = truncate_to_degree(uv, j, nvars_);
    Int ic = s.content();
    if (ic != 0 && ic != 1) s = s.divexact_int(ic);
    Polynomial h = content_wrt(s, x_);
    if (!h.is_constant() && h.depends_on(t_)) {
      UPoly hu = up_from_polynomial(h, t_);
      int sh = sign_alg_uni(hu, *alpha_);
      if (sh != 0) {
        s = divexact(s, h);
        if (sh < 0) s = -s;
      }
    }
    return s;
  }

  VarId t_, x_;
  AlgebraicNumber* alpha_;
  std::size_t nvars_;
  Polynomial d_poly_;
  std::vector<Polynomial> chain_;
  bool identically_zero_ = false;
};

inline void qalpha_isolate_rec(QAlphaSturm& st, const Rat& a, const Rat& b,
                               std::vector<std::pair<Rat, Rat>>& out) {
  int c = st.count_roots(a, b);
  if (c == 0) return;
  if (c == 1) {
    out.emplace_back(a, b);
    return;
  }
  Rat mid = (a + b) / 2;
  Rat step = (b - a) / 4;
  while (st.sign_at_point(mid) == 0) {
    mid += step;
    step /= 2;
  }
  qalpha_isolate_rec(st, a, mid, out);
  qalpha_isolate_rec(st, mid, b, out);
}

}  // namespace detail

/// Isolate the real roots of q at the given point in the variable x.
/// All variables of q except x must be assigned; rational coordinates are
/// substituted exactly, algebraic ones handled by Sturm sequences over the
/// extension (one coordinate) or by resultant elimination (several).
inline TowerRoots isolate_over_tower(const Polynomial& q_in, VarId x,
                                     PointAssignment& point) {
  TowerRoots out;
  Polynomial q = q_in;
  for (auto& [v, coord] : point) {
    if (v == x || !q.depends_on(v)) continue;
    if (coord_is_rational(coord))
      q = q.subst_rational_cleared(v, coord_rational_value(coord));
  }
  if (q.is_zero()) {
    out.identically_zero = true;
    return out;
  }
  std::vector<std::pair<VarId, AlgebraicNumber*>> tower;
  for (auto& [v, coord] : point) {
    if (v == x || !q.depends_on(v)) continue;
    tower.emplace_back(v, &std::get<AlgebraicNumber>(coord));
  }

  if (tower.empty()) {
    UPoly u = up_from_polynomial(q, x);
    if (up_is_zero(u)) {
      out.identically_zero = true;
      return out;
    }
    if (up_degree(u) < 1) return out;
    auto iso = sturm_isolate(u);
    for (auto& r : iso.roots) {
      if (r.is_point())
        out.roots.emplace_back(r.lo());
      else
        out.roots.emplace_back(std::move(r));
    }
    return out;
  }

  // identically-vanishing test: every x-coefficient zero at the point
  UnivariateView uv;
  std::int64_t effdeg = detail::effective_degree(q, x, point, uv);
  if (effdeg < 0) {
    out.identically_zero = true;
    return out;
  }
  if (effdeg == 0) return out;

  if (tower.size() == 1) {
    VarId t = tower.front().first;
    AlgebraicNumber& alpha = *tower.front().second;
    detail::QAlphaSturm st(q, t, x, alpha);
    if (st.identically_zero()) {
      out.identically_zero = true;
      return out;
    }
    // integer defining polynomial for the section roots
    Polynomial d_poly = up_to_polynomial(alpha.defining(), q.nvars(), t);
    Polynomial core = q;
    Polynomial h = content_wrt(core, x);  // t-only (and constant) content
    if (!h.is_constant()) {
      UPoly hu = up_from_polynomial(h, t);
      if (sign_alg_uni(hu, alpha) == 0)
        throw InternalError("content vanished after effective-degree check");
      core = divexact(core, h);
    }
    while (true) {
      Polynomial g = poly_gcd(d_poly, core);
      if (g.is_constant()) break;
      UPoly gu = up_from_polynomial(g, t);
      if (sign_alg_uni(gu, alpha) == 0)
        throw InternalError("shared branch vanished after degree check");
      core = divexact(core, g);
    }
    UPoly cand;
    if (core.depends_on(t))
      cand = up_from_polynomial(resultant(d_poly, core, t), x);
    else
      cand = up_from_polynomial(core, x);
    if (up_is_zero(cand))
      throw InternalError("candidate polynomial vanished");
    UPoly cand_sf = up_squarefree(cand);
    std::vector<UPoly> cchain = sturm_chain(cand_sf);

    Rat bound = st.root_bound();
    std::vector<std::pair<Rat, Rat>> intervals;
    detail::qalpha_isolate_rec(st, -bound, bound, intervals);
    for (auto& [a, b] : intervals) {
      Rat lo = a, hi = b;
      // shrink until the interval isolates within the candidate's roots too
      while (sturm_count(cchain, lo, hi) != 1 ||
             up_sign_at(cand_sf, lo) == 0 || up_sign_at(cand_sf, hi) == 0) {
        Rat mid = (lo + hi) / 2;
        Rat step = (hi - lo) / 4;
        while (st.sign_at_point(mid) == 0) {
          mid += step;
          step /= 2;
        }
        if (st.count_roots(lo, mid) == 1)
          hi = mid;
        else
          lo = mid;
      }
      AlgebraicNumber root = AlgebraicNumber::make(cand_sf, lo, hi);
      if (root.is_point())
        out.roots.emplace_back(root.lo());
      else
        out.roots.emplace_back(std::move(root));
    }
    return out;
  }

  // several algebraic coordinates: candidate roots by elimination, then an
  // exact membership test per candidate
  auto cand = detail::eliminate_chain(q, tower, x);
  if (!cand) {
    std::vector<std::pair<VarId, AlgebraicNumber*>> tw = tower;
    for (std::size_t i = 1; i < tw.size() && !cand; ++i) {
      std::rotate(tw.begin(), tw.begin() + 1, tw.end());
      cand = detail::eliminate_chain(q, tw, x);
    }
    if (!cand)
      throw InternalError("tower root isolation: elimination degenerated");
  }
  UPoly cand_sf = up_squarefree(*cand);
  if (up_degree(cand_sf) < 1) return out;
  auto iso = sturm_isolate(cand_sf);
  for (auto& r : iso.roots) {
    Coordinate c = r.is_point() ? Coordinate(r.lo()) : Coordinate(r);
    PointAssignment ext = point;
    ext.emplace_back(x, std::move(c));
    if (sign_at(q_in, ext) == 0) {
      // keep any refinement of the base coordinates
      for (std::size_t i = 0; i + 1 < ext.size(); ++i) point[i] = ext[i];
      out.roots.push_back(std::move(ext.back().second));
    }
  }
  return out;
}

}  // namespace parcad

#endif
