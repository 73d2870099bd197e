#include "sqrtsum/number_theory.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "sqrtsum/fixed_point.hpp"

namespace sqrtsum {

namespace {

constexpr std::uint64_t kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> sieve(kTrialLimit + 1, true);
    std::vector<std::uint32_t> out;
    for (std::uint64_t p = 2; p <= kTrialLimit; ++p) {
      if (!sieve[p]) {
        continue;
      }
      out.push_back(static_cast<std::uint32_t>(p));
      for (std::uint64_t q = p * p; q <= kTrialLimit; q += p) {
        sieve[q] = false;
      }
    }
    return out;
  }();
  return primes;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) {
      r = mulmod_u64(r, b, m);
    }
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// Brent's cycle-finding variant of Pollard rho; n must be composite.
std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) {
    return 2;
  }
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    std::uint64_t x = 2, y = 2, ys = 2, d = 1, q = 1, r = 1;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) {
        y = f(y);
      }
      for (std::uint64_t k = 0; k < r && d == 1; k += 128) {
        ys = y;
        const std::uint64_t lim = std::min<std::uint64_t>(128, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          y = f(y);
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        d = gcd_u64(q, n);
      }
      r <<= 1;
    } while (d == 1);
    if (d == n) {
      // the batched gcd overshot; redo single steps from the checkpoint
      d = 1;
      while (d == 1) {
        ys = f(ys);
        d = gcd_u64(x > ys ? x - ys : ys - x, n);
      }
    }
    if (d != n && d != 1) {
      return d;
    }
  }
}

void factor_rec(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) {
    return;
  }
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::optional<mpz_class> perfect_square_root(const mpz_class& a) {
  if (a < 1) {
    throw std::domain_error("perfect_square_root: argument must be >= 1");
  }
  mpz_class r = floor_sqrt(a);
  if (r * r == a) {
    return r;
  }
  return std::nullopt;
}

std::uint64_t isqrt_u64(std::uint64_t a) {
  if (a == 0) {
    return 0;
  }
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(a)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > a) {
    --r;
  }
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= a) {
    ++r;
  }
  return r;
}

bool is_perfect_square_u64(std::uint64_t a) {
  const std::uint64_t r = isqrt_u64(a);
  return r * r == a;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) {
    return false;
  }
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) {
      return n == p;
    }
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic witness set for n < 2^64
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) {
      continue;
    }
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) {
      return false;
    }
  }
  return true;
}

std::vector<std::pair<std::uint64_t, int>> factorize_u64(std::uint64_t n) {
  if (n == 0) {
    throw std::domain_error("factorize_u64: argument must be >= 1");
  }
  std::vector<std::uint64_t> primes;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<std::uint64_t>(p) * p > n) {
      break;
    }
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) {
    // any cofactor surviving trial division below 10^6 is either prime
    // (certified by Miller-Rabin) or split recursively
    factor_rec(n, primes);
  }
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

SquarefreeDecomposition squarefree_decompose(std::uint64_t a) {
  if (a == 0 || a > (1ull << 63)) {
    throw std::domain_error(
        "squarefree_decompose: argument outside supported range [1, 2^63]");
  }
  SquarefreeDecomposition r;
  for (const auto& [p, e] : factorize_u64(a)) {
    for (int i = 0; i < e / 2; ++i) {
      r.s *= p;
    }
    if (e % 2 == 1) {
      r.d *= p;
    }
  }
  return r;
}

mpz_class double_factorial(long m) {
  if (m < -1) {
    throw std::domain_error("double_factorial: argument must be >= -1");
  }
  mpz_class r = 1;
  for (long v = m; v > 1; v -= 2) {
    r *= v;
  }
  return r;
}

mpz_class binomial(unsigned long m, unsigned long i) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), m, i);
  return r;
}

}  // namespace sqrtsum
