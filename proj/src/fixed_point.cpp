#include "sqrtsum/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "sqrtsum/decimal.hpp"

namespace sqrtsum {

namespace {

// Both mantissas brought to the common (larger) scale; exact.
std::int64_t align(const FixedPoint& a, const FixedPoint& b, mpz_class& ma,
                   mpz_class& mb) {
  const std::int64_t s = std::max(a.scale(), b.scale());
  ma = a.mantissa() << static_cast<unsigned long>(s - a.scale());
  mb = b.mantissa() << static_cast<unsigned long>(s - b.scale());
  return s;
}

}  // namespace

FixedPoint::FixedPoint(mpz_class mantissa, std::int64_t scale)
    : mantissa_(std::move(mantissa)), scale_(scale) {
  if (scale < 0) {
    throw std::invalid_argument("FixedPoint: scale must be non-negative");
  }
}

FixedPoint FixedPoint::pow2(std::int64_t e) {
  if (e >= 0) {
    return FixedPoint(mpz_class(1) << static_cast<unsigned long>(e), 0);
  }
  return FixedPoint(mpz_class(1), -e);
}

FixedPoint FixedPoint::from_rational(const mpq_class& q, std::int64_t scale,
                                     Round dir) {
  if (scale < 0) {
    throw std::invalid_argument("from_rational: negative scale");
  }
  mpz_class num = q.get_num() << static_cast<unsigned long>(scale);
  mpz_class m;
  if (dir == Round::Down) {
    mpz_fdiv_q(m.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  } else {
    mpz_cdiv_q(m.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  }
  return FixedPoint(std::move(m), scale);
}

FixedPoint FixedPoint::with_scale(std::int64_t s, Round dir) const {
  if (s < 0) {
    throw std::invalid_argument("with_scale: negative scale");
  }
  if (s >= scale_) {
    return FixedPoint(mantissa_ << static_cast<unsigned long>(s - scale_), s);
  }
  mpz_class m;
  const auto shift = static_cast<unsigned long>(scale_ - s);
  if (dir == Round::Down) {
    mpz_fdiv_q_2exp(m.get_mpz_t(), mantissa_.get_mpz_t(), shift);
  } else {
    mpz_cdiv_q_2exp(m.get_mpz_t(), mantissa_.get_mpz_t(), shift);
  }
  return FixedPoint(std::move(m), s);
}

FixedPoint FixedPoint::trimmed() const {
  if (mantissa_ == 0) {
    return FixedPoint();
  }
  const auto tz = mpz_scan1(mantissa_.get_mpz_t(), 0);
  const auto drop = std::min<std::int64_t>(static_cast<std::int64_t>(tz), scale_);
  if (drop == 0) {
    return *this;
  }
  mpz_class m;
  mpz_fdiv_q_2exp(m.get_mpz_t(), mantissa_.get_mpz_t(),
                  static_cast<unsigned long>(drop));
  return FixedPoint(std::move(m), scale_ - drop);
}

FixedPoint operator+(const FixedPoint& a, const FixedPoint& b) {
  mpz_class ma, mb;
  const std::int64_t s = align(a, b, ma, mb);
  return FixedPoint(ma + mb, s);
}

FixedPoint operator-(const FixedPoint& a, const FixedPoint& b) {
  mpz_class ma, mb;
  const std::int64_t s = align(a, b, ma, mb);
  return FixedPoint(ma - mb, s);
}

FixedPoint operator*(const FixedPoint& a, const FixedPoint& b) {
  return FixedPoint(a.mantissa_ * b.mantissa_, a.scale_ + b.scale_);
}

FixedPoint operator*(const FixedPoint& a, const mpz_class& c) {
  return FixedPoint(a.mantissa_ * c, a.scale_);
}

int FixedPoint::cmp(const FixedPoint& a, const FixedPoint& b) {
  mpz_class ma, mb;
  align(a, b, ma, mb);
  return ::cmp(ma, mb);
}

mpz_class FixedPoint::floor() const {
  mpz_class r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), mantissa_.get_mpz_t(),
                  static_cast<unsigned long>(scale_));
  return r;
}

mpz_class FixedPoint::ceil() const {
  mpz_class r;
  mpz_cdiv_q_2exp(r.get_mpz_t(), mantissa_.get_mpz_t(),
                  static_cast<unsigned long>(scale_));
  return r;
}

mpz_class FixedPoint::round_nearest() const {
  if (scale_ == 0) {
    return mantissa_;
  }
  mpz_class shifted = mantissa_ + (mpz_class(1) << static_cast<unsigned long>(scale_ - 1));
  mpz_class r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), shifted.get_mpz_t(),
                  static_cast<unsigned long>(scale_));
  return r;
}

mpq_class FixedPoint::to_rational() const {
  mpq_class q(mantissa_, mpz_class(1) << static_cast<unsigned long>(scale_));
  q.canonicalize();
  return q;
}

double FixedPoint::to_double() const {
  signed long exp = 0;
  const double d = mpz_get_d_2exp(&exp, mantissa_.get_mpz_t());
  return std::ldexp(d, static_cast<int>(exp - scale_));
}

std::string FixedPoint::to_decimal(int significant_digits) const {
  return format_decimal(to_rational(), significant_digits);
}

mpz_class floor_sqrt(const mpz_class& n) {
  if (n < 0) {
    throw std::domain_error("floor_sqrt: negative argument");
  }
  if (n <= 1) {
    return n;
  }
  // Newton iteration on integers. Starting from x >= sqrt(n) the sequence
  // x <- (x + n/x)/2 decreases strictly until it reaches floor(sqrt(n)).
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  mpz_class x = mpz_class(1) << static_cast<unsigned long>((bits + 1) / 2);
  for (;;) {
    mpz_class y = (x + n / x) >> 1;
    if (y >= x) {
      break;
    }
    x = std::move(y);
  }
  return x;
}

}  // namespace sqrtsum
