#include "sqrtsum/exp_sum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "sqrtsum/errors.hpp"
#include "sqrtsum/frac128.hpp"
#include "sqrtsum/interval.hpp"
#include "sqrtsum/number_theory.hpp"
#include "sqrtsum/parallel.hpp"

namespace sqrtsum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// per-term budget for double-precision trig and accumulation
constexpr double kTrigBudget = 0x1p-48;

// compensated accumulator (Kahan-Babuska)
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + c; }
};

// sin(pi x) with exact zeros at integer x
double sinpi(double x) {
  const double k = std::nearbyint(x);
  const double r = x - k;
  const double s = std::sin(std::numbers::pi * r);
  return static_cast<long long>(k) % 2 == 0 ? s : -s;
}

void validate_kernel(const HatKernel& kernel) {
  if (!(kernel.s > 1.0)) {
    throw std::invalid_argument("HatKernel: scale s must be > 1");
  }
}

// Multiplicity of a non-decreasing tuple among ordered tuples: k!/prod(m_i!).
double permutation_count(const std::vector<std::uint64_t>& tuple) {
  double count = 1.0;
  std::size_t i = 0;
  std::size_t placed = 0;
  while (i < tuple.size()) {
    std::size_t j = i;
    while (j < tuple.size() && tuple[j] == tuple[i]) {
      ++j;
    }
    // multiply by C(placed + run, run)
    const std::size_t run = j - i;
    for (std::size_t r = 1; r <= run; ++r) {
      count = count * static_cast<double>(placed + r) / static_cast<double>(r);
    }
    placed += run;
    i = j;
  }
  return std::round(count);
}

struct ExpSumAccum {
  KahanSum re, im;
  double phase_err = 0.0;  // accumulated fractional-part error, in cycles
};

// One term e^(2 pi i frac), frac given on the 2^-128 grid.
inline void add_term(ExpSumAccum& acc, const Frac128& frac) {
  if (frac.is_zero()) {
    acc.re.add(1.0);
    return;
  }
  const double phi = kTwoPi * frac.to_double();
  acc.re.add(std::cos(phi));
  acc.im.add(std::sin(phi));
}

}  // namespace

double hat_eval(const HatKernel& kernel, double x) {
  validate_kernel(kernel);
  double f = x - std::floor(x);
  const double dist = std::min(f, 1.0 - f);
  return std::max(1.0 - kernel.s * dist, 0.0);
}

double hat_fourier(const HatKernel& kernel, long long ell) {
  validate_kernel(kernel);
  if (ell == 0) {
    return 1.0 / kernel.s;
  }
  const double l = static_cast<double>(ell);
  const double sp = sinpi(static_cast<double>(ell) / kernel.s);
  return (kernel.s / (std::numbers::pi * std::numbers::pi)) * (sp * sp) /
         (l * l);
}

ExpSumEngine::ExpSumEngine(std::uint64_t n)
    : table_(std::make_shared<SqrtFracTable>(n)) {}

std::uint64_t ExpSumEngine::n() const { return table_->n(); }

ExpSumValue ExpSumEngine::sum(long long ell, int precision_bits) const {
  if (precision_bits < 1) {
    throw std::invalid_argument("exp_sum: precision_bits must be >= 1");
  }
  const std::uint64_t n = table_->n();
  ExpSumValue out;
  out.ell = ell;
  out.n = n;
  if (ell == 0) {
    out.value = {static_cast<double>(n), 0.0};
    out.error_radius = 0.0;
    return out;
  }
  const std::uint64_t ell_abs =
      ell > 0 ? static_cast<std::uint64_t>(ell)
              : static_cast<std::uint64_t>(-(ell + 1)) + 1;

  ExpSumAccum acc;
  double phase_err;  // per-term bound on |frac error|, in cycles
  // The table fracs carry a one-sided error below 2^-127, which scales by
  // ell under multiplication; fall back to a direct high-precision
  // reduction when that (or the requested precision) is no longer covered.
  const int ell_bits = 64 - static_cast<int>(__builtin_clzll(ell_abs));
  if (ell_bits + precision_bits + 2 <= 127 && precision_bits <= 52) {
    for (std::uint64_t a = 1; a <= n; ++a) {
      add_term(acc, table_->frac(a).times(ell_abs));
    }
    phase_err = std::ldexp(1.0, ell_bits - 127) + 0x1p-53;
  } else {
    const std::int64_t p = precision_bits + ell_bits + 8;
    for (std::uint64_t a = 1; a <= n; ++a) {
      const Interval s = sqrt_enclosure(
          mpz_class(static_cast<unsigned long>(a)), p);
      // frac(ell * sqrt(a)) from the scaled mantissa, exact mod 2^-p
      const mpz_class scaled = s.lo().mantissa() *
                               mpz_class(static_cast<unsigned long>(ell_abs));
      mpz_class fracpart;
      mpz_fdiv_r_2exp(fracpart.get_mpz_t(), scaled.get_mpz_t(),
                      static_cast<unsigned long>(p));
      mpq_class q(fracpart, mpz_class(1) << static_cast<unsigned long>(p));
      add_term(acc, Frac128::from_rational(q, Round::Down));
    }
    phase_err = std::ldexp(1.0, -precision_bits) + 0x1p-53;
  }
  out.value = {acc.re.value(), acc.im.value()};
  if (ell < 0) {
    out.value = std::conj(out.value);
  }
  out.error_radius =
      static_cast<double>(n) * (kTwoPi * phase_err + kTrigBudget);
  return out;
}

ExpSumValue exp_sum(long long ell, std::uint64_t n, int precision_bits) {
  return ExpSumEngine(n).sum(ell, precision_bits);
}

CountNearResult count_near(int k, std::uint64_t n, const HatKernel& kernel,
                           const mpq_class& y) {
  validate_kernel(kernel);
  if (k < 1) {
    throw std::invalid_argument("count_near: k must be >= 1");
  }
  mpz_class ordered;
  mpz_ui_pow_ui(ordered.get_mpz_t(), static_cast<unsigned long>(n),
                static_cast<unsigned long>(k));
  if (ordered > 1'000'000'000) {
    throw infeasible_error("count_near: n^k = " + ordered.get_str() +
                           " exceeds the 1e9 direct-enumeration limit");
  }

  const SqrtFracTable table(n);
  const Frac128 y128 = Frac128::from_rational(y, Round::Down);
  // 1/s on the Frac128 grid, rounded up (cardinality is diagnostic data)
  const mpq_class s_q(kernel.s);
  const Frac128 inv_s = Frac128::from_rational(1 / s_q, Round::Up);

  KahanSum weighted;
  long long cardinality = 0;
  std::vector<std::uint64_t> tuple(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int depth, std::uint64_t min_a,
                 Frac128 sum) -> void {
    if (depth == k) {
      const Frac128 dist = (sum - y128).torus_distance();
      const double mult = permutation_count(tuple);
      if (dist <= inv_s) {
        cardinality += static_cast<long long>(mult);
      }
      const double h = std::max(1.0 - kernel.s * dist.to_double(), 0.0);
      if (h > 0.0) {
        weighted.add(mult * h);
      }
      return;
    }
    for (std::uint64_t a = min_a; a <= n; ++a) {
      tuple[static_cast<std::size_t>(depth)] = a;
      self(self, depth + 1, a, sum + table.frac(a));
    }
  };
  rec(rec, 0, 1, Frac128{});

  CountNearResult out;
  out.weighted = weighted.value();
  out.cardinality = cardinality;
  long long trivial = 1;
  const long long root = static_cast<long long>(isqrt_u64(n));
  for (int i = 0; i < k; ++i) {
    trivial *= root;
  }
  out.trivial = trivial;
  return out;
}

FourierCountResult fourier_count(int k, std::uint64_t n,
                                 const HatKernel& kernel, long long L,
                                 const mpq_class& y, int parallelism) {
  validate_kernel(kernel);
  if (k < 1) {
    throw std::invalid_argument("fourier_count: k must be >= 1");
  }
  if (static_cast<double>(L) < kernel.s) {
    throw std::invalid_argument("fourier_count: need L >= s");
  }

  const ExpSumEngine engine(n);
  const double nk = std::pow(static_cast<double>(n), k);

  constexpr long long kBlock = 4096;
  const long long blocks = (L + kBlock - 1) / kBlock;
  std::vector<double> block_sum(static_cast<std::size_t>(blocks), 0.0);
  std::vector<double> block_err(static_cast<std::size_t>(blocks), 0.0);

  const mpz_class y_num = y.get_num();
  const mpz_class y_den = y.get_den();
  const bool has_offset = y != 0;

  parallel_blocks(blocks, parallelism, [&](std::int64_t b) {
    KahanSum sum;
    KahanSum err;
    const long long lo = b * kBlock + 1;
    const long long hi = std::min(L, (b + 1) * kBlock);
    for (long long ell = lo; ell <= hi; ++ell) {
      const double h = hat_fourier(kernel, ell);
      if (h == 0.0) {
        continue;
      }
      const ExpSumValue s = engine.sum(ell);
      // S(ell)^k by repeated multiplication
      std::complex<double> power(1.0, 0.0);
      for (int i = 0; i < k; ++i) {
        power *= s.value;
      }
      std::complex<double> phase(1.0, 0.0);
      if (has_offset) {
        // frac(ell * y) computed exactly in integers
        mpz_class num = y_num * static_cast<long>(ell);
        mpz_class rem;
        mpz_fdiv_r(rem.get_mpz_t(), num.get_mpz_t(), y_den.get_mpz_t());
        const double f = mpq_class(rem, y_den).get_d();
        phase = std::polar(1.0, -kTwoPi * f);
      }
      // both ell and -ell: conjugate pair sums to twice the real part
      sum.add(2.0 * h * std::real(phase * power));
      // |z^k - w^k| <= k max(|z|,|w|)^(k-1) |z - w|
      const double mag = std::abs(s.value) + s.error_radius;
      err.add(2.0 * h * k * std::pow(mag, k - 1) * s.error_radius);
    }
    block_sum[static_cast<std::size_t>(b)] = sum.value();
    block_err[static_cast<std::size_t>(b)] = err.value();
  });

  KahanSum estimate;
  estimate.add(hat_fourier(kernel, 0) * nk);
  KahanSum phase_error;
  for (std::size_t b = 0; b < block_sum.size(); ++b) {
    estimate.add(block_sum[b]);
    phase_error.add(block_err[b]);
  }

  FourierCountResult out;
  out.estimate = estimate.value();
  out.tail_bound = nk * 2.0 * kernel.s /
                   (std::numbers::pi * std::numbers::pi *
                    static_cast<double>(L)) *
                   (1.0 + 0x1p-30);
  out.phase_error = phase_error.value() * (1.0 + 0x1p-30) + 0x1p-40;
  return out;
}

std::vector<BoundProbeRow> bound_probe(std::uint64_t n,
                                       const std::vector<long long>& ell_grid,
                                       int parallelism) {
  for (long long ell : ell_grid) {
    if (ell < 0) {
      throw std::invalid_argument("bound_probe: grid values must be >= 0");
    }
  }
  const ExpSumEngine engine(n);
  std::vector<BoundProbeRow> rows(ell_grid.size());
  const double vdc = std::pow(static_cast<double>(n), 59.0 / 60.0);
  const double eph = std::sqrt(static_cast<double>(n));
  parallel_blocks(static_cast<std::int64_t>(ell_grid.size()), parallelism,
                  [&](std::int64_t i) {
                    const auto idx = static_cast<std::size_t>(i);
                    const ExpSumValue s = engine.sum(ell_grid[idx]);
                    rows[idx] = BoundProbeRow{
                        s.ell,           n,
                        s.value.real(),  s.value.imag(),
                        std::abs(s.value), s.error_radius,
                        vdc,             eph};
                  });
  return rows;
}

std::string bound_probe_csv(const std::vector<BoundProbeRow>& rows) {
  std::string out = "ell,n,re,im,abs,err_radius,vdc_shape,eph_shape\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%lld,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.ell,
                  static_cast<unsigned long long>(r.n), r.re, r.im, r.abs,
                  r.error_radius, r.vdc_shape, r.eph_shape);
    out += buf;
  }
  return out;
}

}  // namespace sqrtsum
