#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace sqrtsum {

/// a = s^2 * d with d squarefree.
struct SquarefreeDecomposition {
  std::uint64_t s = 1;
  std::uint64_t d = 1;
};

/// Returns sqrt(a) iff a >= 1 is a perfect square.
std::optional<mpz_class> perfect_square_root(const mpz_class& a);

/// floor(sqrt(a)) for 64-bit a.
std::uint64_t isqrt_u64(std::uint64_t a);
bool is_perfect_square_u64(std::uint64_t a);

/// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime_u64(std::uint64_t n);

/// Prime factorization, sorted by prime. Trial division over primes up to
/// 10^6, then Brent's variant of Pollard rho with Miller-Rabin certificates
/// for the cofactors; unconditional below 2^64.
std::vector<std::pair<std::uint64_t, int>> factorize_u64(std::uint64_t n);

/// Squarefree decomposition of 1 <= a <= 2^63; throws std::domain_error for
/// inputs outside the supported factorization range (never a wrong answer).
SquarefreeDecomposition squarefree_decompose(std::uint64_t a);

/// m!! for m >= -1, with (-1)!! = 0!! = 1 (empty products).
mpz_class double_factorial(long m);

/// Exact binomial coefficient; 0 when i > m.
mpz_class binomial(unsigned long m, unsigned long i);

}  // namespace sqrtsum
