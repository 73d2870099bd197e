#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "sqrtsum/fixed_point.hpp"

namespace sqrtsum {

/// Point on the torus R/Z stored as a 128-bit fixed-point fraction:
/// value = (hi * 2^64 + lo) / 2^128 in [0, 1).
///
/// Addition and subtraction wrap mod 2^128, which is exactly arithmetic
/// mod 1. Multiplication by a 64-bit integer is exact on the representation
/// (the dropped bits are below 2^-128). Used as a sortable, allocation-free
/// key for fractional parts; anything decided off these keys leaves a
/// margin for the per-entry error and is re-certified in exact arithmetic.
struct Frac128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend bool operator==(const Frac128&, const Frac128&) = default;
  friend bool operator<(const Frac128& a, const Frac128& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  }
  friend bool operator<=(const Frac128& a, const Frac128& b) {
    return !(b < a);
  }

  friend Frac128 operator+(const Frac128& a, const Frac128& b) {
    Frac128 r;
    r.lo = a.lo + b.lo;
    r.hi = a.hi + b.hi + (r.lo < a.lo ? 1 : 0);
    return r;
  }
  friend Frac128 operator-(const Frac128& a, const Frac128& b) {
    Frac128 r;
    r.lo = a.lo - b.lo;
    r.hi = a.hi - b.hi - (a.lo < b.lo ? 1 : 0);
    return r;
  }

  /// this * m mod 1, exact on the representation.
  Frac128 times(std::uint64_t m) const {
    const unsigned __int128 low = static_cast<unsigned __int128>(m) * lo;
    const unsigned __int128 high = static_cast<unsigned __int128>(m) * hi +
                                   static_cast<std::uint64_t>(low >> 64);
    return Frac128{static_cast<std::uint64_t>(high),
                   static_cast<std::uint64_t>(low)};
  }

  bool is_zero() const { return hi == 0 && lo == 0; }

  /// Distance to 0 on the torus: min(f, 1 - f).
  Frac128 torus_distance() const {
    if (hi >> 63) {
      return Frac128{} - *this;
    }
    return *this;
  }

  double to_double() const {
    return std::ldexp(static_cast<double>(hi), -64) +
           std::ldexp(static_cast<double>(lo), -128);
  }

  /// frac(q) rounded to the grid in the given direction.
  static Frac128 from_rational(const mpq_class& q, Round dir);
  /// Saturating addition of a small margin (no wrap past 1).
  Frac128 plus_saturating(const Frac128& margin) const {
    const Frac128 s = *this + margin;
    if (s < *this) {
      return Frac128{~0ull, ~0ull};
    }
    return s;
  }
};

/// Table of frac(sqrt(a)) for 1 <= a <= n, truncated to 128 bits with
/// one-sided error below 2^-127, plus the integer parts floor(sqrt(a)).
/// frac bits are all-zero iff a is a perfect square.
class SqrtFracTable {
 public:
  explicit SqrtFracTable(std::uint64_t n);

  std::uint64_t n() const { return n_; }
  const Frac128& frac(std::uint64_t a) const { return fracs_[a - 1]; }
  std::uint64_t integer_part(std::uint64_t a) const { return iparts_[a - 1]; }
  bool is_square(std::uint64_t a) const { return fracs_[a - 1].is_zero(); }

 private:
  std::uint64_t n_;
  std::vector<Frac128> fracs_;
  std::vector<std::uint64_t> iparts_;
};

/// frac(sqrt(a)) as above for a single radicand.
Frac128 sqrt_frac128(std::uint64_t a);

}  // namespace sqrtsum
