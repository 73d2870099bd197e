#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sqrtsum/decimal.hpp"
#include "sqrtsum/number_theory.hpp"
#include "sqrtsum/search.hpp"

using namespace sqrtsum;

namespace {

SearchConfig base_config(int k, std::uint64_t n, const char* threshold) {
  SearchConfig cfg;
  cfg.k = k;
  cfg.n_max = n;
  cfg.threshold = parse_decimal(threshold);
  return cfg;
}

std::set<std::vector<std::uint64_t>> tuple_set(
    const std::vector<NearIntegerRecord>& records) {
  std::set<std::vector<std::uint64_t>> out;
  for (const auto& r : records) {
    out.insert(r.radicands);
  }
  return out;
}

// everything but the method tag; mitm and exhaustive must agree on this
std::string equivalence_signature(
    const std::vector<NearIntegerRecord>& records) {
  std::string s;
  for (const auto& r : records) {
    for (std::uint64_t a : r.radicands) {
      s += std::to_string(a);
      s += ',';
    }
    s += '|';
    s += std::to_string(r.nearest_integer);
    s += '|';
    s += r.distance;
    s += '|';
    s += r.radius;
    s += '|';
    s += std::to_string(r.precision_bits);
    s += '\n';
  }
  return s;
}

}  // namespace

TEST_CASE("exhaustive k=2 n=50 threshold 1e-2 matches the scan oracle") {
  auto records = exhaustive_search(base_config(2, 50, "1e-2"));
  const std::set<std::vector<std::uint64_t>> expected = {
      {2, 21},  {6, 43},  {7, 19},  {8, 10},  {8, 38},  {10, 34},
      {11, 22}, {13, 29}, {13, 41}, {15, 17}, {19, 44}, {23, 27},
      {24, 26}, {28, 45}, {34, 38}, {35, 37}, {48, 50}};
  CHECK(tuple_set(records) == expected);
  for (const auto& r : records) {
    if (r.radicands == std::vector<std::uint64_t>{24, 26}) {
      CHECK(r.nearest_integer == 10);
      CHECK(r.distance_enclosure.contains(
          parse_decimal("0.002001000840858973577207741565435226504334092587063336")));
    }
    // lexicographic output order
    CHECK(std::is_sorted(records.begin(), records.end(),
                         [](const NearIntegerRecord& a,
                            const NearIntegerRecord& b) {
                           return a.radicands < b.radicands;
                         }));
  }
}

TEST_CASE("exhaustive k=3 n=25 threshold 1e-4 finds exactly {3,20,23}") {
  auto records = exhaustive_search(base_config(3, 25, "1e-4"));
  REQUIRE(records.size() == 1);
  CHECK(records[0].radicands == std::vector<std::uint64_t>{3, 20, 23});
  CHECK(records[0].nearest_integer == 11);
  CHECK(records[0].distance_enclosure.contains(parse_decimal(
      "1.8285881176227943231743131118757820749014937561423e-5")));
}

TEST_CASE("exhaustive k=1 n=100 threshold 1e-3 is empty") {
  CHECK(exhaustive_search(base_config(1, 100, "1e-3")).empty());
}

TEST_CASE("exhaustive equals an independent double scan with certification") {
  // no false negatives on k=2, n <= 100: a plain double-precision scan with
  // a safety margin, filtered by the exact threshold comparison
  const mpq_class threshold = parse_decimal("2e-3");
  std::set<std::vector<std::uint64_t>> oracle;
  for (std::uint64_t a = 1; a <= 100; ++a) {
    for (std::uint64_t b = a; b <= 100; ++b) {
      if (is_perfect_square_u64(a) && is_perfect_square_u64(b)) {
        continue;
      }
      const double v = std::sqrt(static_cast<double>(a)) +
                       std::sqrt(static_cast<double>(b));
      const double dist = std::abs(v - std::round(v));
      if (dist > 2.5e-3) {
        continue;  // margin keeps the double rounding harmless
      }
      if (distance_leq(RootSumExpr::unsigned_sum({a, b}), mpq_class(0),
                       threshold, 128)) {
        oracle.insert({a, b});
      }
    }
  }
  auto records = exhaustive_search(base_config(2, 100, "2e-3"));
  CHECK(tuple_set(records) == oracle);
  CHECK_FALSE(oracle.empty());
}

TEST_CASE("meet-in-the-middle equals exhaustive and is shard independent") {
  struct Config {
    int k;
    std::uint64_t n;
    const char* threshold;
  };
  for (const Config& c : {Config{2, 30, "5e-3"}, Config{3, 25, "1e-4"},
                          Config{4, 20, "1e-3"}}) {
    SearchConfig cfg = base_config(c.k, c.n, c.threshold);
    cfg.parallelism = 2;
    const auto exhaustive = exhaustive_search(cfg);
    const std::string reference = equivalence_signature(exhaustive);
    const std::string reference_jsonl = records_to_jsonl(exhaustive);
    for (int shards : {1, 2, 8}) {
      cfg.shard_count = shards;
      auto mitm = meet_in_the_middle(cfg);
      CHECK(equivalence_signature(mitm) == reference);
      auto exh2 = exhaustive_search(cfg);
      CHECK(records_to_jsonl(exh2) == reference_jsonl);
    }
  }
}

TEST_CASE("records certify: positive distance at or below the threshold") {
  SearchConfig cfg = base_config(2, 60, "5e-3");
  for (const auto& r : meet_in_the_middle(cfg)) {
    CHECK(r.distance_enclosure.lo().sign() > 0);
    CHECK(r.distance_enclosure.hi().to_rational() <= cfg.threshold);
    CHECK(r.method == SearchMethod::mitm);
    CHECK(r.k == 2);
    CHECK(r.precision_bits >= 128);
  }
}

TEST_CASE("offset search targets Z + y") {
  SearchConfig cfg = base_config(1, 20, "6e-2");
  cfg.offset_y = mpq_class(1, 2);
  auto records = exhaustive_search(cfg);
  const std::set<std::vector<std::uint64_t>> expected = {{6}, {12}, {20}};
  CHECK(tuple_set(records) == expected);
}

TEST_CASE("record limit keeps the smallest distances") {
  SearchConfig cfg = base_config(2, 50, "1e-2");
  cfg.record_limit = 2;
  auto records = exhaustive_search(cfg);
  REQUIRE(records.size() == 2);
  // smallest two distances are {28,45} at 2.93e-4 and {48,50} at 7.29e-4
  CHECK(records[0].radicands == std::vector<std::uint64_t>{28, 45});
  CHECK(records[1].radicands == std::vector<std::uint64_t>{48, 50});
}

TEST_CASE("infeasible configurations refuse with an estimate") {
  SearchConfig cfg = base_config(12, 1000000, "1e-3");
  CHECK_THROWS_AS(exhaustive_search(cfg), infeasible_error);
  CHECK_THROWS_WITH_AS(exhaustive_search(cfg),
                       doctest::Contains("enumeration limit"),
                       infeasible_error);
  SearchConfig small = base_config(4, 3000000, "1e-3");
  small.memory_budget_bytes = 1 << 20;
  CHECK_THROWS_AS(meet_in_the_middle(small), infeasible_error);
}

TEST_CASE("search progress file enables resume") {
  const std::string progress = "/tmp/sqrtsum_test_progress.jsonl";
  std::remove(progress.c_str());

  SearchConfig cfg = base_config(2, 50, "1e-2");
  cfg.shard_count = 2;
  cfg.progress_path = progress;
  const auto first = exhaustive_search(cfg);
  const std::string reference = records_to_jsonl(first);

  // forget shard 1: keep only shard 0's marker, forcing a partial recompute
  {
    std::ifstream in(progress);
    std::string line, kept;
    while (std::getline(in, line)) {
      if (line.find("\"shard\":\"0\"") != std::string::npos) {
        kept += line + "\n";
      }
    }
    std::ofstream out(progress);
    out << kept;
  }
  const auto resumed = exhaustive_search(cfg);
  CHECK(records_to_jsonl(resumed) == reference);

  // a fully recorded progress file reproduces the result without recompute
  const auto replayed = exhaustive_search(cfg);
  CHECK(records_to_jsonl(replayed) == reference);

  // a different search sharing the progress path must not contaminate it
  SearchConfig other = base_config(2, 30, "1e-2");
  other.shard_count = 2;
  other.progress_path = progress;
  const auto other_records = exhaustive_search(other);
  CHECK(tuple_set(other_records) !=
        tuple_set(first));  // genuinely different result sets
  const auto after = exhaustive_search(cfg);
  CHECK(records_to_jsonl(after) == reference);
}

TEST_CASE("family_k2 records") {
  const NearIntegerRecord a2 = family_k2(2);
  CHECK(a2.radicands == std::vector<std::uint64_t>{3, 5});
  CHECK(a2.nearest_integer == 4);
  CHECK(a2.distance_enclosure.contains(
      parse_decimal("0.03188121493133301006337998976285139761657638657809365")));

  const NearIntegerRecord a10 = family_k2(10);
  CHECK(a10.radicands == std::vector<std::uint64_t>{99, 101});
  CHECK(a10.nearest_integer == 20);
  CHECK(a10.distance_enclosure.contains(
      parse_decimal("0.0002500078129101824359368772283637612737108932055619183")));

  // asymptotic: distance * 4a^3 -> 1
  const NearIntegerRecord a100 = family_k2(100);
  const mpq_class ratio =
      a100.distance_enclosure.midpoint().to_rational() * 4 * 1000000;
  CHECK(ratio > mpq_class(99, 100));
  CHECK(ratio < mpq_class(101, 100));

  CHECK_THROWS_AS(family_k2(1), std::invalid_argument);
}

TEST_CASE("family_k3 records") {
  const NearIntegerRecord t3 = family_k3(3);
  CHECK(t3.radicands == std::vector<std::uint64_t>{6, 18, 28});
  CHECK(t3.distance_enclosure.lo().sign() > 0);
  CHECK(t3.distance_enclosure.contains(
      parse_decimal("0.01636694796835557439441824538649352090451852704758529")));

  const NearIntegerRecord t10 = family_k3(10);
  CHECK(t10.radicands == std::vector<std::uint64_t>{83, 123, 392});
  CHECK(t10.nearest_integer == 40);
  CHECK(t10.distance_enclosure.contains(
      parse_decimal("4.004122295327277913165376562479146207783400375110015e-5")));

  const NearIntegerRecord t100 = family_k3(100);
  const mpq_class ratio = t100.distance_enclosure.midpoint().to_rational() *
                          mpq_class(10000000000L) / 4;
  CHECK(ratio > mpq_class(9, 10));
  CHECK(ratio < mpq_class(11, 10));

  CHECK_THROWS_AS(family_k3(2), std::invalid_argument);
}

TEST_CASE("binomial cancellation inequality") {
  const BinomialCancellation m2 = binomial_cancellation(2, 100);
  CHECK(m2.holds);
  CHECK(m2.lhs.contains(
      parse_decimal("0.0002463038797025870751439084495516632861479755731416393")));
  CHECK(m2.rhs.contains(mpq_class(1, 4000)));  // exactly (1)!!/(4*100^1.5)
  CHECK(m2.rhs_lower <= mpq_class(1, 4000));
  CHECK(m2.rhs_lower > mpq_class(1, 4001));

  const BinomialCancellation m1 = binomial_cancellation(1, 5);
  CHECK(m1.holds);
  CHECK(m1.lhs.contains(
      parse_decimal("0.2134217652833884017881104059746151565253291210451444")));
  CHECK(m1.rhs.contains(
      parse_decimal("0.2236067977499789696409173668731276235440618359611526")));

  CHECK(binomial_cancellation(3, 1000).holds);
  CHECK_THROWS_AS(binomial_cancellation(0, 10), std::invalid_argument);
}

TEST_CASE("records round trip through JSONL") {
  auto records = exhaustive_search(base_config(3, 25, "1e-4"));
  REQUIRE(records.size() == 1);
  const std::string line = records[0].to_jsonl();
  const NearIntegerRecord back = NearIntegerRecord::from_jsonl(line);
  CHECK(back.radicands == records[0].radicands);
  CHECK(back.signs == records[0].signs);
  CHECK(back.k == records[0].k);
  CHECK(back.n_max == records[0].n_max);
  CHECK(back.nearest_integer == records[0].nearest_integer);
  CHECK(back.distance == records[0].distance);
  CHECK(back.radius == records[0].radius);
  CHECK(back.method == records[0].method);

  // re-evaluating reproduces the stored enclosure
  const DistanceCertificate again =
      certified_distance(back.to_expr(), back.precision_bits);
  CHECK(again.distance.intersects(back.distance_enclosure));
  CHECK(again.nearest_integer == back.nearest_integer);

  // all numeric fields ride as strings
  CHECK(line.find("\"k\":\"3\"") != std::string::npos);
  CHECK(line.find("\"radicands\":[\"3\",\"20\",\"23\"]") != std::string::npos);
}
