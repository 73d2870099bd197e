#include "sqrtsum/interval.hpp"

#include <algorithm>
#include <stdexcept>

namespace sqrtsum {

Interval::Interval(FixedPoint lo, FixedPoint hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) {
    throw std::invalid_argument("Interval: lo > hi");
  }
}

Interval Interval::of_rational(const mpq_class& q, std::int64_t scale) {
  return Interval(FixedPoint::from_rational(q, scale, Round::Down),
                  FixedPoint::from_rational(q, scale, Round::Up));
}

FixedPoint Interval::midpoint() const {
  const FixedPoint sum = lo_ + hi_;
  return FixedPoint(sum.mantissa(), sum.scale() + 1);
}

FixedPoint Interval::radius() const {
  const FixedPoint w = width();
  return FixedPoint(w.mantissa(), w.scale() + 1);
}

bool Interval::contains(const mpq_class& q) const {
  return lo_.to_rational() <= q && q <= hi_.to_rational();
}

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

Interval operator*(const Interval& a, const Interval& b) {
  const FixedPoint p1 = a.lo_ * b.lo_;
  const FixedPoint p2 = a.lo_ * b.hi_;
  const FixedPoint p3 = a.hi_ * b.lo_;
  const FixedPoint p4 = a.hi_ * b.hi_;
  FixedPoint lo = std::min({p1, p2, p3, p4});
  FixedPoint hi = std::max({p1, p2, p3, p4});
  return Interval(std::move(lo), std::move(hi));
}

Interval Interval::scaled(const mpz_class& c) const {
  if (sgn(c) >= 0) {
    return Interval(lo_ * c, hi_ * c);
  }
  return Interval(hi_ * c, lo_ * c);
}

Interval Interval::divided_by_positive(const mpz_class& d,
                                       std::int64_t scale) const {
  if (sgn(d) <= 0) {
    throw std::domain_error("divided_by_positive: divisor must be > 0");
  }
  const mpq_class qd(d);
  return Interval(
      FixedPoint::from_rational(lo_.to_rational() / qd, scale, Round::Down),
      FixedPoint::from_rational(hi_.to_rational() / qd, scale, Round::Up));
}

Interval Interval::abs() const {
  if (lo_.sign() >= 0) {
    return *this;
  }
  if (hi_.sign() <= 0) {
    return Interval(-hi_, -lo_);
  }
  return Interval(FixedPoint(), std::max(-lo_, hi_));
}

Interval Interval::round_outward(std::int64_t scale) const {
  return Interval(lo_.with_scale(scale, Round::Down),
                  hi_.with_scale(scale, Round::Up));
}

Interval sqrt_enclosure(const mpz_class& a, std::int64_t precision_bits) {
  if (a < 1) {
    throw std::domain_error("sqrt_enclosure: radicand must be >= 1");
  }
  if (precision_bits < 1) {
    throw std::domain_error("sqrt_enclosure: precision must be >= 1");
  }
  const mpz_class shifted = a << static_cast<unsigned long>(2 * precision_bits);
  mpz_class r = floor_sqrt(shifted);
  if (r * r == shifted) {
    FixedPoint exact(r, precision_bits);
    return Interval(exact, exact);
  }
  return Interval(FixedPoint(r, precision_bits),
                  FixedPoint(r + 1, precision_bits));
}

std::optional<NearestInteger> frac_nearest(const Interval& x) {
  static const FixedPoint kQuarter = FixedPoint::pow2(-2);
  static const FixedPoint kHalf = FixedPoint::pow2(-1);
  if (x.width() >= kQuarter) {
    throw std::domain_error("frac_nearest: interval width must be < 1/4");
  }
  const FixedPoint m_fp(x.midpoint().round_nearest());
  // x must sit strictly inside (m - 1/2, m + 1/2).
  if (!(x.lo() > m_fp - kHalf && x.hi() < m_fp + kHalf)) {
    return std::nullopt;
  }
  Interval dist = (Interval::point(m_fp) - x).abs();
  return NearestInteger{m_fp.mantissa(), std::move(dist)};
}

}  // namespace sqrtsum
