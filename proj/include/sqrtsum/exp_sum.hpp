#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace sqrtsum {

/// The triangular bump h(x) = max(1 - s*||x||, 0) on the torus, an
/// approximate indicator of the 1/s-neighbourhood of the integers.
struct HatKernel {
  double s = 2.0;  // scale parameter, > 1
};

/// h evaluated at x mod 1 (via the torus distance ||x||).
double hat_eval(const HatKernel& kernel, double x);

/// Fourier coefficient of the kernel: 1/s at ell = 0, otherwise
/// (1/pi^2) (s/ell^2) sin^2(pi ell / s). Non-negative and even in ell;
/// exactly zero when ell is a nonzero multiple of an integer s.
double hat_fourier(const HatKernel& kernel, long long ell);

/// S(ell, n) = sum_{a=1..n} e^(2 pi i ell sqrt(a)) with a certified error
/// radius. Phases frac(ell*sqrt(a)) are reduced in fixed point before the
/// trig call (naive floating evaluation of ell*sqrt(a) loses the entire
/// phase once ell*sqrt(a) outgrows the double mantissa); the trig itself
/// runs at machine double with a 2^-48 per-term budget in the certificate.
struct ExpSumValue {
  long long ell = 0;
  std::uint64_t n = 0;
  std::complex<double> value;
  double error_radius = 0.0;
};

/// Shared sqrt fraction table for repeated sums over the same range.
class ExpSumEngine {
 public:
  explicit ExpSumEngine(std::uint64_t n);

  std::uint64_t n() const;
  ExpSumValue sum(long long ell, int precision_bits = 48) const;

 private:
  std::shared_ptr<const class SqrtFracTable> table_;
};

ExpSumValue exp_sum(long long ell, std::uint64_t n, int precision_bits = 48);

/// Direct side of the counting identity: the hat-weighted count of ordered
/// tuples, the cardinality of ||sum - y|| <= 1/s, and the all-square
/// (trivial) tuple count floor(sqrt(n))^k. Refuses when n^k > 1e9.
struct CountNearResult {
  double weighted = 0.0;
  long long cardinality = 0;
  long long trivial = 0;
};
CountNearResult count_near(int k, std::uint64_t n, const HatKernel& kernel,
                           const mpq_class& y);

/// Fourier side: sum over |ell| <= L of hat(ell) e^(-2 pi i ell y)
/// S(ell,n)^k, real by symmetry, with a certified tail bound
/// n^k * 2s/(pi^2 L) for the discarded frequencies and the accumulated
/// error of the S(ell,n)^k factors. Requires L >= s.
struct FourierCountResult {
  double estimate = 0.0;
  double tail_bound = 0.0;
  double phase_error = 0.0;
};
FourierCountResult fourier_count(int k, std::uint64_t n,
                                 const HatKernel& kernel, long long L,
                                 const mpq_class& y, int parallelism = 1);

/// Empirical |S(ell,n)| against the n^(59/60) and sqrt(n) bound shapes.
/// Data only; the theoretical constants are unspecified, so no pass/fail.
struct BoundProbeRow {
  long long ell = 0;
  std::uint64_t n = 0;
  double re = 0.0;
  double im = 0.0;
  double abs = 0.0;
  double error_radius = 0.0;
  double vdc_shape = 0.0;  // n^(59/60)
  double eph_shape = 0.0;  // sqrt(n)
};
std::vector<BoundProbeRow> bound_probe(std::uint64_t n,
                                       const std::vector<long long>& ell_grid,
                                       int parallelism = 1);
std::string bound_probe_csv(const std::vector<BoundProbeRow>& rows);

}  // namespace sqrtsum
