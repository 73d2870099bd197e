#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "sqrtsum/decimal.hpp"
#include "sqrtsum/gaps.hpp"

using namespace sqrtsum;

namespace {

std::uint64_t histogram_total(const GapReport& r) {
  std::uint64_t total = 0;
  for (const auto& [e, count] : r.histogram) {
    total += count;
  }
  return total;
}

// Independent point-count oracle: fractional parts coincide exactly iff the
// radical parts of the canonical forms coincide (the rational part only
// shifts by integers). Enumerates canonical forms directly.
std::uint64_t distinct_fraction_oracle(int k, std::uint64_t n) {
  std::set<std::map<std::uint64_t, long long>> formes;
  std::vector<std::uint64_t> tuple(static_cast<std::size_t>(k));
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, int depth, std::uint64_t min_a) -> void {
    if (depth == k) {
      const CanonicalRadicalForm f =
          canonicalize(RootSumExpr::unsigned_sum(tuple));
      if (formes.insert(f.radical_terms).second) {
        ++count;
      }
      return;
    }
    for (std::uint64_t a = min_a; a <= n; ++a) {
      tuple[static_cast<std::size_t>(depth)] = a;
      self(self, depth + 1, a);
    }
  };
  rec(rec, 0, 1);
  return count;
}

}  // namespace

TEST_CASE("gap report for k=1, n=4 by hand") {
  const GapReport r = gap_report(1, 4);
  // fractional parts {0, sqrt2-1, sqrt3-1, 0}: three distinct points
  CHECK(r.point_count == 3);
  CHECK(r.largest_gap == doctest::Approx(0.41421356237309).epsilon(1e-12));
  CHECK(r.largest_gap_from == doctest::Approx(0.0));
  CHECK(r.largest_gap_to == doctest::Approx(0.41421356237309).epsilon(1e-12));
  CHECK(r.smallest_nonzero ==
        doctest::Approx(0.41421356237309).epsilon(1e-12));
  CHECK(histogram_total(r) == r.point_count);
  CHECK(r.gap_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gap report deduplicates coincident values exactly") {
  // {2,32} and {8,18} are both 5*sqrt(2); {4,2} and {9,2} share a fraction
  for (std::uint64_t n : {32ull, 40ull}) {
    const GapReport r = gap_report(2, n);
    CHECK(r.point_count == distinct_fraction_oracle(2, n));
    CHECK(histogram_total(r) == r.point_count);
    CHECK(r.gap_sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  const GapReport r3 = gap_report(3, 12);
  CHECK(r3.point_count == distinct_fraction_oracle(3, 12));
}

TEST_CASE("gap report pigeonhole sanity and serialization") {
  const GapReport r = gap_report(2, 100);
  CHECK(r.point_count >= 1);
  CHECK(r.largest_gap >= 1.0 / static_cast<double>(r.point_count));
  CHECK(r.gap_sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(histogram_total(r) == r.point_count);

  const std::string json = r.to_json();
  CHECK(json.find("\"point_count\":\"") != std::string::npos);
  CHECK(json.find("\"histogram\"") != std::string::npos);
  const std::string csv = r.histogram_csv();
  CHECK(csv.rfind("bucket_exponent,gap_lo,gap_hi,count\n", 0) == 0);

  CHECK_THROWS_AS(gap_report(4, 1000), infeasible_error);
  CHECK_THROWS_AS(gap_report(0, 10), std::invalid_argument);
}

TEST_CASE("gap scale data at n=2000 (recorded, not asserted)") {
  const GapReport r = gap_report(2, 2000);
  const double shape = 10.0 * std::pow(2000.0, -1.5);
  MESSAGE("largest gap at k=2, n=2000: ", r.largest_gap, " vs 10 n^-3/2 = ",
          shape);
  CHECK(r.largest_gap > 0.0);
  CHECK(r.gap_sum == doctest::Approx(1.0).epsilon(1e-12));

  // smallest nonzero element scale: the measured constant c with
  // A cap [0, c n^-3/2] empty
  for (std::uint64_t n : {20ull, 50ull}) {
    const GapReport g = gap_report(2, n);
    const double c =
        g.smallest_nonzero * std::pow(static_cast<double>(n), 1.5);
    MESSAGE("smallest nonzero element constant at n=", n, ": ", c);
    CHECK(g.smallest_nonzero > 0.0);
  }
}

TEST_CASE("largest gap monotonicity is a data-quality flag only") {
  double prev = 2.0;
  for (std::uint64_t n : {50ull, 100ull, 150ull, 200ull}) {
    const GapReport r = gap_report(2, n);
    if (r.largest_gap > prev) {
      WARN_MESSAGE(false, "largest gap increased from n-50 to n=", n,
                   " (not a theorem, recording only)");
    }
    prev = r.largest_gap;
  }
}

TEST_CASE("min nonzero distance: k=1, n=100 is a=99") {
  const MinDistanceResult m = min_nonzero_distance(1, 100);
  CHECK(m.radicands == std::vector<std::uint64_t>{99});
  CHECK(m.certificate.nearest_integer == 10);
  CHECK(m.certificate.distance.contains(
      parse_decimal("0.05012562893380045265520178998793994821873436323193921")));
}

TEST_CASE("min nonzero distance: k=2, n=101 is {44,70}") {
  const MinDistanceResult m = min_nonzero_distance(2, 101);
  CHECK(m.radicands == std::vector<std::uint64_t>{44, 70});
  CHECK(m.certificate.nearest_integer == 15);
  CHECK(m.certificate.distance.contains(
      parse_decimal("0.0001501539484448219884142688067517382176692158345708078")));
  // k=2 lower-bound shape: distance * n^(3/2) stays away from zero
  const mpq_class lo = m.certificate.distance.lo().to_rational();
  CHECK(lo * lo * (101 * 101 * 101) >= mpq_class(1, 10000));
}

TEST_CASE("min nonzero pair distance clears 0.05 * n^(-3/2)") {
  for (std::uint64_t n : {20ull, 50ull, 100ull, 200ull}) {
    const MinDistanceResult m = min_nonzero_distance(2, n);
    const mpq_class lo = m.certificate.distance.lo().to_rational();
    // lo >= (1/20) n^(-3/2)  <=>  400 lo^2 n^3 >= 1
    mpz_class n3 = 1;
    for (int i = 0; i < 3; ++i) {
      n3 *= static_cast<unsigned long>(n);
    }
    CHECK(lo * lo * n3 * 400 >= 1);
  }
}

TEST_CASE("min nonzero distance: k=3, n=25 is {3,20,23}") {
  const MinDistanceResult m = min_nonzero_distance(3, 25);
  CHECK(m.radicands == std::vector<std::uint64_t>{3, 20, 23});
  CHECK(m.certificate.nearest_integer == 11);
  CHECK(m.certificate.distance.contains(parse_decimal(
      "1.8285881176227943231743131118757820749014937561423e-5")));
}

TEST_CASE("min nonzero distance rejects the all-square degenerate case") {
  CHECK_THROWS_AS(min_nonzero_distance(1, 1), std::domain_error);
}
