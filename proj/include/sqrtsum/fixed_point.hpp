#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace sqrtsum {

/// Rounding direction for the few places where precision is deliberately
/// lowered. Certified code paths use Down for lower endpoints and Up for
/// upper endpoints; round-to-nearest never appears in a certified path.
enum class Round { Down, Up };

/// Dyadic fixed-point number: value = mantissa * 2^(-scale) with scale >= 0.
///
/// The representation is exact. Addition, subtraction and multiplication are
/// closed on dyadics and performed exactly (add/sub first align both operands
/// to the larger scale, which is lossless). Precision is only ever lowered
/// through with_scale(), which takes an explicit rounding direction.
class FixedPoint {
 public:
  FixedPoint() : mantissa_(0), scale_(0) {}
  explicit FixedPoint(long v) : mantissa_(v), scale_(0) {}
  explicit FixedPoint(const mpz_class& v) : mantissa_(v), scale_(0) {}
  FixedPoint(mpz_class mantissa, std::int64_t scale);

  /// The value 2^e, exact for any sign of e.
  static FixedPoint pow2(std::int64_t e);

  /// Nearest dyadic with the given scale in the given direction:
  /// result <= q (Down) or result >= q (Up), |result - q| < 2^(-scale).
  static FixedPoint from_rational(const mpq_class& q, std::int64_t scale,
                                  Round dir);

  const mpz_class& mantissa() const { return mantissa_; }
  std::int64_t scale() const { return scale_; }

  int sign() const { return sgn(mantissa_); }
  bool is_zero() const { return mantissa_ == 0; }

  /// Re-expresses the value at scale s. Raising the scale is exact;
  /// lowering it rounds in the requested direction.
  FixedPoint with_scale(std::int64_t s, Round dir) const;

  /// Canonical form with trailing zero bits stripped from the mantissa.
  FixedPoint trimmed() const;

  FixedPoint operator-() const { return FixedPoint(-mantissa_, scale_); }
  FixedPoint abs() const { return FixedPoint(::abs(mantissa_), scale_); }

  friend FixedPoint operator+(const FixedPoint& a, const FixedPoint& b);
  friend FixedPoint operator-(const FixedPoint& a, const FixedPoint& b);
  friend FixedPoint operator*(const FixedPoint& a, const FixedPoint& b);
  friend FixedPoint operator*(const FixedPoint& a, const mpz_class& c);

  /// Three-way comparison of the represented values.
  static int cmp(const FixedPoint& a, const FixedPoint& b);

  friend bool operator==(const FixedPoint& a, const FixedPoint& b) {
    return cmp(a, b) == 0;
  }
  friend bool operator!=(const FixedPoint& a, const FixedPoint& b) {
    return cmp(a, b) != 0;
  }
  friend bool operator<(const FixedPoint& a, const FixedPoint& b) {
    return cmp(a, b) < 0;
  }
  friend bool operator<=(const FixedPoint& a, const FixedPoint& b) {
    return cmp(a, b) <= 0;
  }
  friend bool operator>(const FixedPoint& a, const FixedPoint& b) {
    return cmp(a, b) > 0;
  }
  friend bool operator>=(const FixedPoint& a, const FixedPoint& b) {
    return cmp(a, b) >= 0;
  }

  mpz_class floor() const;
  mpz_class ceil() const;
  /// floor(x + 1/2); exact halves round toward +infinity.
  mpz_class round_nearest() const;

  mpq_class to_rational() const;
  /// Nearest double; convenience for reporting, not certified.
  double to_double() const;
  /// Decimal rendering with the given number of significant digits.
  std::string to_decimal(int significant_digits) const;

 private:
  mpz_class mantissa_;
  std::int64_t scale_;
};

/// floor(sqrt(n)) for n >= 0 by integer Newton iteration; exact.
mpz_class floor_sqrt(const mpz_class& n);

}  // namespace sqrtsum
