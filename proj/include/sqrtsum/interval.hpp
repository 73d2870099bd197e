#pragma once

#include <cstdint>
#include <optional>

#include "sqrtsum/fixed_point.hpp"

namespace sqrtsum {

/// Closed interval [lo, hi] of dyadic endpoints enclosing a real value.
///
/// Every operation returns an interval containing the exact real-number
/// result. Add/sub/mul on dyadics are exact, so those operations do not
/// widen beyond the operands' widths; rounding happens only in the
/// explicitly directed entry points (of_rational, round_outward,
/// divided_by_positive).
class Interval {
 public:
  Interval() = default;
  Interval(FixedPoint lo, FixedPoint hi);  // throws if lo > hi

  static Interval point(const FixedPoint& v) { return Interval(v, v); }
  static Interval point_integer(const mpz_class& v) {
    return point(FixedPoint(v));
  }
  /// Tightest dyadic enclosure of q at the given scale (width <= 2^-scale).
  static Interval of_rational(const mpq_class& q, std::int64_t scale);

  const FixedPoint& lo() const { return lo_; }
  const FixedPoint& hi() const { return hi_; }

  FixedPoint width() const { return hi_ - lo_; }
  /// Exact midpoint (lo+hi)/2; dyadic, so no rounding.
  FixedPoint midpoint() const;
  /// Exact radius (hi-lo)/2.
  FixedPoint radius() const;

  bool contains(const FixedPoint& v) const { return lo_ <= v && v <= hi_; }
  bool contains(const mpq_class& q) const;
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool strictly_positive() const { return lo_.sign() > 0; }
  bool strictly_negative() const { return hi_.sign() < 0; }
  bool intersects(const Interval& o) const {
    return !(hi_ < o.lo_ || o.hi_ < lo_);
  }

  Interval operator-() const { return Interval(-hi_, -lo_); }
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);

  /// Exact scaling by an integer constant.
  Interval scaled(const mpz_class& c) const;
  /// Enclosure of {v/d : v in this} for d > 0, outward-rounded at scale.
  Interval divided_by_positive(const mpz_class& d, std::int64_t scale) const;
  /// Enclosure of |x| over the interval.
  Interval abs() const;
  /// Outward rounding of both endpoints to the given scale.
  Interval round_outward(std::int64_t scale) const;

 private:
  FixedPoint lo_, hi_;
};

/// Certified enclosure of sqrt(a) for integer a >= 1.
///
/// Computed as r = floor_sqrt(a * 4^precision_bits): the enclosure is
/// [r, r+1] * 2^-precision_bits, collapsed to the exact point [r, r] when a
/// is a perfect square. Width <= 2^-precision_bits always. Throws
/// std::domain_error for a < 1.
Interval sqrt_enclosure(const mpz_class& a, std::int64_t precision_bits);

/// Result of locating an interval relative to the integers.
struct NearestInteger {
  mpz_class value;    // the integer m the interval is committed to
  Interval distance;  // enclosure of |x - m|, i.e. of ||x||
};

/// Nearest-integer bracketing with the distance ||x|| enclosed.
///
/// Requires width(x) < 1/4 (throws std::domain_error otherwise). Returns
/// nullopt when x is not strictly inside (m - 1/2, m + 1/2) for any integer
/// m; the caller is expected to retry at higher precision.
std::optional<NearestInteger> frac_nearest(const Interval& x);

}  // namespace sqrtsum
