#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sqrtsum/fixed_point.hpp"
#include "sqrtsum/number_theory.hpp"

using namespace sqrtsum;

TEST_CASE("perfect square detection") {
  auto r = perfect_square_root(mpz_class(49));
  REQUIRE(r.has_value());
  CHECK(*r == 7);
  CHECK_FALSE(perfect_square_root(mpz_class(48)).has_value());
  CHECK_FALSE(perfect_square_root(mpz_class(50)).has_value());
  CHECK(perfect_square_root(mpz_class(1)).value() == 1);
  CHECK_THROWS_AS(perfect_square_root(mpz_class(0)), std::domain_error);

  // large even powers constructed from random 30-digit roots
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    mpz_class s = 1;
    for (int d = 0; d < 30; ++d) {
      s = s * 10 + static_cast<unsigned long>(rng() % 10);
    }
    s += 1;
    const auto root = perfect_square_root(s * s);
    REQUIRE(root.has_value());
    CHECK(*root == s);
    CHECK_FALSE(perfect_square_root(s * s + 1).has_value());
  }
}

TEST_CASE("is_perfect_square_u64 agrees with floor_sqrt on random 60-bit") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100000; ++i) {
    const std::uint64_t a = (rng() >> 4) + 1;
    const mpz_class z(static_cast<unsigned long>(a));
    const mpz_class r = floor_sqrt(z);
    CHECK(is_perfect_square_u64(a) == (r * r == z));
  }
}

TEST_CASE("squarefree decomposition examples") {
  auto d8 = squarefree_decompose(8);
  CHECK(d8.s == 2);
  CHECK(d8.d == 2);
  auto d1 = squarefree_decompose(1);
  CHECK(d1.s == 1);
  CHECK(d1.d == 1);
  auto d = squarefree_decompose(11075);  // 25 * 443, 443 prime
  CHECK(d.s == 5);
  CHECK(d.d == 443);
  CHECK(is_prime_u64(443));

  CHECK_THROWS_AS(squarefree_decompose(0), std::domain_error);
  CHECK_THROWS_AS(squarefree_decompose((1ull << 63) + 1), std::domain_error);
}

TEST_CASE("squarefree decomposition round trip up to 1e6") {
  for (std::uint64_t a = 1; a <= 1000000; ++a) {
    const auto [s, d] = squarefree_decompose(a);
    REQUIRE(s * s * d == a);
    // d squarefree: no prime square divides it
    for (std::uint64_t p = 2; p * p <= d; ++p) {
      REQUIRE(d % (p * p) != 0);
    }
  }
}

TEST_CASE("deterministic Miller-Rabin") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(3));
  CHECK(is_prime_u64(443));
  CHECK(is_prime_u64((1ull << 61) - 1));  // Mersenne prime
  CHECK(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
  CHECK_FALSE(is_prime_u64(0));
  CHECK_FALSE(is_prime_u64(1));
  CHECK_FALSE(is_prime_u64(561));          // Carmichael
  CHECK_FALSE(is_prime_u64(3215031751ull));  // strong pseudoprime to 2,3,5,7
  CHECK_FALSE(is_prime_u64(3825123056546413051ull));  // spsp to 2..23
}

TEST_CASE("factorization at 64-bit scale") {
  auto f = factorize_u64(1ull << 62);
  REQUIRE(f.size() == 1);
  CHECK(f[0].first == 2);
  CHECK(f[0].second == 62);

  // semiprime with both factors above the trial-division bound
  const std::uint64_t p = 1000003, q = 1000033;
  f = factorize_u64(p * q);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == std::make_pair(p, 1));
  CHECK(f[1] == std::make_pair(q, 1));

  // square of a large prime
  f = factorize_u64(p * p);
  REQUIRE(f.size() == 1);
  CHECK(f[0] == std::make_pair(p, 2));

  // random reconstruction check
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t n = (rng() % ((1ull << 62) - 2)) + 2;
    std::uint64_t back = 1;
    for (const auto& [prime, exp] : factorize_u64(n)) {
      CHECK(is_prime_u64(prime));
      for (int e = 0; e < exp; ++e) {
        back *= prime;
      }
    }
    CHECK(back == n);
  }
}

TEST_CASE("double factorial and binomial") {
  CHECK(double_factorial(5) == 15);
  CHECK(double_factorial(-1) == 1);  // empty product, makes m=1 evaluable
  CHECK(double_factorial(0) == 1);
  CHECK(double_factorial(1) == 1);
  CHECK(double_factorial(7) == 105);
  CHECK(double_factorial(9) == 945);
  CHECK_THROWS_AS(double_factorial(-2), std::domain_error);

  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(20, 10) == 184756);
}
