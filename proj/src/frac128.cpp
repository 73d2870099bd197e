#include "sqrtsum/frac128.hpp"

#include <stdexcept>

#include "sqrtsum/interval.hpp"

namespace sqrtsum {

namespace {

// Low 128 bits of a non-negative mpz, split into two words.
Frac128 low_bits_128(const mpz_class& v) {
  mpz_class lo64 = v & mpz_class((mpz_class(1) << 64) - 1);
  mpz_class hi_part;
  mpz_fdiv_q_2exp(hi_part.get_mpz_t(), v.get_mpz_t(), 64);
  mpz_class hi64 = hi_part & mpz_class((mpz_class(1) << 64) - 1);
  Frac128 f;
  f.lo = mpz_get_ui(lo64.get_mpz_t());
  f.hi = mpz_get_ui(hi64.get_mpz_t());
  return f;
}

}  // namespace

Frac128 Frac128::from_rational(const mpq_class& q, Round dir) {
  // frac(q) in [0,1): frac = (num mod den) / den, then scale by 2^128
  mpz_class rem;
  mpz_fdiv_r(rem.get_mpz_t(), q.get_num().get_mpz_t(),
             q.get_den().get_mpz_t());
  mpz_class scaled = rem << 128;
  mpz_class grid;
  if (dir == Round::Down) {
    mpz_fdiv_q(grid.get_mpz_t(), scaled.get_mpz_t(),
               q.get_den().get_mpz_t());
  } else {
    mpz_cdiv_q(grid.get_mpz_t(), scaled.get_mpz_t(),
               q.get_den().get_mpz_t());
  }
  // rounding up can hit 2^128 exactly; wrap to 0 (same torus point)
  return low_bits_128(grid);
}

Frac128 sqrt_frac128(std::uint64_t a) {
  // 4 guard bits: truncation to the 2^-128 grid plus the enclosure error
  // stays below 2^-127, one-sided.
  const Interval enc = sqrt_enclosure(mpz_class(static_cast<unsigned long>(a)),
                                      132);
  const mpz_class& r = enc.lo().mantissa();  // floor(sqrt(a) * 2^132)
  mpz_class frac_bits;
  mpz_fdiv_r_2exp(frac_bits.get_mpz_t(), r.get_mpz_t(), 132);
  mpz_class top;
  mpz_fdiv_q_2exp(top.get_mpz_t(), frac_bits.get_mpz_t(), 4);
  return low_bits_128(top);
}

SqrtFracTable::SqrtFracTable(std::uint64_t n) : n_(n) {
  if (n == 0) {
    throw std::invalid_argument("SqrtFracTable: n must be >= 1");
  }
  fracs_.reserve(n);
  iparts_.reserve(n);
  std::uint64_t root = 1;
  for (std::uint64_t a = 1; a <= n; ++a) {
    while ((root + 1) * (root + 1) <= a) {
      ++root;
    }
    iparts_.push_back(root);
    fracs_.push_back(sqrt_frac128(a));
  }
}

}  // namespace sqrtsum
