#include "sqrtsum/root_sum.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "sqrtsum/number_theory.hpp"

namespace sqrtsum {

namespace {

constexpr std::int64_t kInitialPrecision = 128;
constexpr std::int64_t kMaxPrecision = std::int64_t{1} << 24;

// sqrt_enclosure with a per-thread memo; search and verification workloads
// hit the same few thousand radicands at the same precision over and over.
const Interval& cached_sqrt(std::uint64_t a, std::int64_t precision_bits) {
  struct Key {
    std::uint64_t a;
    std::int64_t p;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::uint64_t>()(k.a * 0x9e3779b97f4a7c15ull ^
                                        static_cast<std::uint64_t>(k.p));
    }
  };
  thread_local std::unordered_map<Key, Interval, KeyHash> cache;
  if (cache.size() > 200'000) {
    cache.clear();
  }
  auto [it, inserted] = cache.try_emplace(Key{a, precision_bits});
  if (inserted) {
    it->second = sqrt_enclosure(mpz_class(static_cast<unsigned long>(a)),
                                precision_bits);
  }
  return it->second;
}

long long to_longlong(const mpz_class& v) {
  if (!v.fits_slong_p()) {
    throw std::overflow_error("value does not fit in long long");
  }
  return v.get_si();
}

// Internal evaluation precision such that the k-term sum (plus an optional
// offset enclosure) has width <= 2^-target_bits.
std::int64_t eval_bits(std::int64_t target_bits, int k) {
  std::int64_t extra = 2;
  while ((std::int64_t{1} << extra) < k + 2) {
    ++extra;
  }
  return target_bits + extra;
}

Interval evaluate_at(const RootSumExpr& e, const mpq_class& y,
                     std::int64_t target_bits) {
  const std::int64_t p = eval_bits(target_bits, e.k());
  Interval acc = Interval::point(FixedPoint(mpz_class(0), p));
  for (const auto& t : e.terms()) {
    const Interval& s = cached_sqrt(t.radicand, p);
    acc = t.sign > 0 ? acc + s : acc - s;
  }
  if (y != 0) {
    acc = acc - Interval::of_rational(y, p);
  }
  return acc;
}

}  // namespace

RootSumExpr::RootSumExpr(std::vector<SignedRadicand> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw std::invalid_argument("RootSumExpr: need at least one term");
  }
  for (const auto& t : terms_) {
    if (t.radicand == 0) {
      throw std::invalid_argument("RootSumExpr: radicand must be >= 1");
    }
    if (t.radicand > (1ull << 63)) {
      throw std::invalid_argument(
          "RootSumExpr: radicand exceeds factorization range 2^63");
    }
    if (t.sign != 1 && t.sign != -1) {
      throw std::invalid_argument("RootSumExpr: sign must be +1 or -1");
    }
    n_max_ = std::max(n_max_, t.radicand);
  }
}

RootSumExpr RootSumExpr::unsigned_sum(
    const std::vector<std::uint64_t>& radicands) {
  std::vector<SignedRadicand> terms;
  terms.reserve(radicands.size());
  for (std::uint64_t a : radicands) {
    terms.push_back(SignedRadicand{a, 1});
  }
  return RootSumExpr(std::move(terms));
}

CanonicalRadicalForm canonicalize(const RootSumExpr& e) {
  CanonicalRadicalForm f;
  for (const auto& t : e.terms()) {
    const SquarefreeDecomposition sd = squarefree_decompose(t.radicand);
    const auto coeff = static_cast<long long>(sd.s) * t.sign;
    if (sd.d == 1) {
      f.rational_part += coeff;
    } else {
      auto it = f.radical_terms.try_emplace(sd.d, 0).first;
      it->second += coeff;
      if (it->second == 0) {
        f.radical_terms.erase(it);
      }
    }
  }
  return f;
}

std::optional<long long> exact_integer_value(const RootSumExpr& e) {
  const CanonicalRadicalForm f = canonicalize(e);
  if (f.is_integer()) {
    return f.rational_part;
  }
  return std::nullopt;
}

Interval evaluate(const RootSumExpr& e, std::int64_t precision_bits) {
  Interval acc = Interval::point(FixedPoint(mpz_class(0), precision_bits));
  for (const auto& t : e.terms()) {
    const Interval& s = cached_sqrt(t.radicand, precision_bits);
    acc = t.sign > 0 ? acc + s : acc - s;
  }
  return acc;
}

Interval evaluate(const CanonicalRadicalForm& f, std::int64_t precision_bits) {
  Interval acc = Interval::point_integer(mpz_class(static_cast<long>(f.rational_part)));
  for (const auto& [d, c] : f.radical_terms) {
    acc = acc + cached_sqrt(d, precision_bits).scaled(mpz_class(static_cast<long>(c)));
  }
  return acc;
}

mpq_class separation_bound(const RootSumExpr& e) {
  const CanonicalRadicalForm f = canonicalize(e);
  if (f.is_integer()) {
    throw std::logic_error("separation_bound: expression is an exact integer");
  }
  const std::size_t t = f.radical_terms.size();
  if (t > 32) {
    throw std::domain_error(
        "separation_bound: more than 32 distinct radicals unsupported");
  }

  // nearest integer m, found at whatever precision resolves the bracketing
  mpz_class m;
  for (std::int64_t p = 64;; p *= 2) {
    if (p > kMaxPrecision) {
      throw std::runtime_error("separation_bound: precision cap exceeded");
    }
    const auto nearest = frac_nearest(evaluate_at(e, mpq_class(0), p));
    if (nearest) {
      m = nearest->value;
      break;
    }
  }

  // M >= |m - c1| + sum |c_d| sqrt(d), rounded up coarsely; every conjugate
  // factor except the distance itself is <= M in absolute value.
  FixedPoint upper(mpz_class(abs(m - static_cast<long>(f.rational_part))));
  for (const auto& [d, c] : f.radical_terms) {
    const Interval s = cached_sqrt(d, 64);
    upper = upper + s.hi() * mpz_class(static_cast<long>(std::abs(c)));
  }
  upper = upper.with_scale(32, Round::Up);

  mpz_class exponent_count = (mpz_class(1) << t) - 1;  // 2^t - 1 factors
  const auto exp = static_cast<unsigned long>(exponent_count.get_ui());
  mpz_class num_pow;
  mpz_pow_ui(num_pow.get_mpz_t(), upper.mantissa().get_mpz_t(), exp);
  // B = (P / 2^32)^-exp = 2^(32 exp) / P^exp
  mpq_class bound(mpz_class(1) << static_cast<unsigned long>(32 * exp),
                  num_pow);
  bound.canonicalize();
  return bound;
}

DistanceCertificate certified_distance(const RootSumExpr& e,
                                       std::int64_t requested_bits) {
  return certified_distance(e, mpq_class(0), requested_bits);
}

DistanceCertificate certified_distance(const RootSumExpr& e,
                                       const mpq_class& offset_y,
                                       std::int64_t requested_bits) {
  const CanonicalRadicalForm f = canonicalize(e);
  if (f.is_integer()) {
    if (offset_y != 0) {
      throw std::logic_error(
          "certified_distance: exact-integer expression with nonzero offset");
    }
    DistanceCertificate cert;
    cert.nearest_integer = f.rational_part;
    cert.distance = Interval::point(FixedPoint(0L));
    cert.precision_bits = 0;
    cert.exactly_integer = true;
    return cert;
  }

  std::int64_t p = std::max(requested_bits, kInitialPrecision);
  for (;; p *= 2) {
    if (p > kMaxPrecision) {
      throw std::runtime_error("certified_distance: precision cap exceeded");
    }
    const Interval x = evaluate_at(e, offset_y, p);
    const auto nearest = frac_nearest(x);
    if (!nearest || nearest->distance.lo().sign() <= 0) {
      continue;  // straddles a half-integer or still touches zero
    }
    DistanceCertificate cert;
    cert.nearest_integer = to_longlong(nearest->value);
    cert.distance = nearest->distance;
    cert.precision_bits = p;
    cert.exactly_integer = false;
    return cert;
  }
}

bool distance_leq(const RootSumExpr& e, const mpq_class& offset_y,
                  const mpq_class& threshold, std::int64_t requested_bits,
                  DistanceCertificate* out) {
  std::int64_t p = std::max(requested_bits, kInitialPrecision);
  for (;; p *= 2) {
    if (p > kMaxPrecision) {
      throw std::runtime_error("distance_leq: precision cap exceeded");
    }
    const DistanceCertificate cert = certified_distance(e, offset_y, p);
    if (cert.exactly_integer) {
      if (out) {
        *out = cert;
      }
      return threshold >= 0;
    }
    if (cert.distance.hi().to_rational() <= threshold) {
      if (out) {
        *out = cert;
      }
      return true;
    }
    if (cert.distance.lo().to_rational() > threshold) {
      if (out) {
        *out = cert;
      }
      return false;
    }
    // enclosure straddles the threshold; retry tighter
  }
}

}  // namespace sqrtsum
