#ifndef PARCAD_NUMERIC_HPP
#define PARCAD_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace parcad {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline int sign_of(const Int& v) { return v.sign(); }
inline int sign_of(const Rat& v) { return v.sign(); }

inline Int int_gcd(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Int int_pow(const Int& base, unsigned e) {
  Int r = 1, b = base;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

inline Rat rat_pow(const Rat& base, unsigned e) {
  Rat r = 1, b = base;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

inline Rat rat_abs(const Rat& v) { return v < 0 ? Rat(-v) : v; }
inline Int int_abs(const Int& v) { return v < 0 ? Int(-v) : v; }

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline std::string to_string(const Int& v) { return v.str(); }
inline std::string to_string(const Rat& q) {
  if (den(q) == 1) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

/// Closed rational interval; lo <= hi always.
struct RatInterval {
  Rat lo, hi;
  Rat width() const { return hi - lo; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }
  bool is_point() const { return lo == hi; }
};

inline RatInterval iv_add(const RatInterval& a, const RatInterval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

inline RatInterval iv_mul(const RatInterval& a, const RatInterval& b) {
  Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  Rat lo = p1, hi = p1;
  for (const Rat& p : {p2, p3, p4}) {
    if (p < lo) lo = p;
    if (p > hi) hi = p;
  }
  return {lo, hi};
}

inline RatInterval iv_scale(const RatInterval& a, const Rat& c) {
  if (c >= 0) return {a.lo * c, a.hi * c};
  return {a.hi * c, a.lo * c};
}

inline RatInterval iv_pow(const RatInterval& a, unsigned e) {
  RatInterval r{1, 1};
  for (unsigned i = 0; i < e; ++i) r = iv_mul(r, a);
  return r;
}

}  // namespace parcad

#endif
