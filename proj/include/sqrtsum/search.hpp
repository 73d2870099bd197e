#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqrtsum/errors.hpp"
#include "sqrtsum/root_sum.hpp"

namespace sqrtsum {

enum class SearchMethod { exhaustive, mitm, family_k2, family_k3, binomial };

const char* to_string(SearchMethod m);
SearchMethod search_method_from_string(const std::string& s);

struct SearchConfig {
  int k = 2;
  std::uint64_t n_max = 100;
  mpq_class threshold = mpq_class(1, 1000);
  mpq_class offset_y = 0;  // search near Z + y instead of Z
  int shard_count = 1;
  std::int64_t record_limit = 0;  // 0 = keep everything
  std::int64_t precision_bits = 128;
  int parallelism = 1;
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
  std::string progress_path;  // non-empty enables resumable sharding
};

/// A certified near-integer find. distance/radius are decimal strings such
/// that the true distance lies in [distance - radius, distance + radius];
/// the exact enclosure is kept alongside for in-process consumers.
struct NearIntegerRecord {
  std::vector<std::uint64_t> radicands;  // sorted ascending
  std::vector<int> signs;                // aligned with radicands
  int k = 0;
  std::uint64_t n_max = 0;
  long long nearest_integer = 0;
  std::string distance;
  std::string radius;
  std::int64_t precision_bits = 0;
  SearchMethod method = SearchMethod::exhaustive;
  Interval distance_enclosure;

  RootSumExpr to_expr() const;
  std::string to_jsonl() const;
  static NearIntegerRecord from_jsonl(const std::string& line);
};

/// All non-integer multisets a_1 <= ... <= a_k <= n_max with certified
/// ||sum sqrt(a_i) - y|| <= threshold. Tuples whose radicands are all
/// perfect squares (exact integers) are skipped before evaluation. Output
/// is lexicographic by tuple and independent of shard_count/parallelism.
/// Refuses (infeasible_error) when C(n+k-1, k) > 1e9 or the sqrt table
/// exceeds the memory budget.
std::vector<NearIntegerRecord> exhaustive_search(const SearchConfig& cfg);

/// Same output contract as exhaustive_search, via a sorted table of
/// ceil(k/2)-subset fractional parts matched against the complementary
/// sums. Table keys are 64-bit fractions with per-entry error below 2^-60;
/// the match window is widened accordingly and every candidate is
/// re-certified, so there are no false positives and no misses.
std::vector<NearIntegerRecord> meet_in_the_middle(const SearchConfig& cfg);

/// The k=2 identity family {a^2-1, a^2+1}, whose distance is
/// 1/(4a^3) + o(a^-3); requires a >= 2.
NearIntegerRecord family_k2(std::uint64_t a, std::int64_t precision_bits = 128);

/// The k=3 identity family {(t-1)^2+2, (t+1)^2+2, (2t)^2-8}, whose distance
/// is asymptotically 4/t^5; requires t >= 3.
NearIntegerRecord family_k3(std::uint64_t t, std::int64_t precision_bits = 128);

/// Certified check of the binomial cancellation inequality
///   |sum_{i=0..m} C(m,i) (-1)^i sqrt(n+i)| <= (2m-3)!! / (2^m n^(m-1/2)).
/// lhs and rhs are certified enclosures; holds is decided exactly
/// (lhs.hi <= rhs.lo after escalation), so holds == true certifies the
/// inequality and holds == false certifies its failure.
struct BinomialCancellation {
  Interval lhs;
  Interval rhs;
  mpq_class rhs_lower;  // certified lower bound on the right-hand side
  bool holds = false;
};
BinomialCancellation binomial_cancellation(int m, std::uint64_t n);

/// Serialization helpers for record streams (one JSON object per line).
std::string records_to_jsonl(const std::vector<NearIntegerRecord>& records);
std::vector<NearIntegerRecord> records_from_jsonl(const std::string& text);

}  // namespace sqrtsum
