#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqrtsum/errors.hpp"
#include "sqrtsum/root_sum.hpp"

namespace sqrtsum {

/// Gap statistics of the set {sum sqrt(a_i) mod 1 : 1 <= a_i <= n}.
///
/// The set is a genuine set: exact-integer tuples contribute the point 0
/// once, and numerically coincident values (equal keys, or keys within
/// 2^-60 of each other) are separated or merged by an exact algebraic
/// comparison, never by the floating keys alone.
struct GapReport {
  int k = 0;
  std::uint64_t n = 0;
  std::uint64_t point_count = 0;
  double largest_gap = 0.0;
  double largest_gap_from = 0.0;  // flanking pair of values
  double largest_gap_to = 0.0;
  double smallest_nonzero = 0.0;
  double gap_sum = 0.0;  // circular gaps add up to 1 (diagnostic)
  // circular gap histogram over power-of-two buckets: entry (e, count)
  // holds gaps in [2^e, 2^(e+1)) for -60 <= e <= -2, with e = -61 catching
  // anything below 2^-60 and e = -1 catching [1/2, 1]; counts sum to
  // point_count.
  std::vector<std::pair<int, std::uint64_t>> histogram;

  std::string to_json() const;
  std::string histogram_csv() const;
};

/// Full scan of the fractional-part set; refuses when n^k > 1e8.
GapReport gap_report(int k, std::uint64_t n);

/// The non-integer multiset minimizing ||sum sqrt(a_i)||, certified.
/// Ties on the exact distance resolve to the lexicographically smallest
/// tuple. Same feasibility limit as gap_report.
struct MinDistanceResult {
  std::vector<std::uint64_t> radicands;
  DistanceCertificate certificate;
};
MinDistanceResult min_nonzero_distance(int k, std::uint64_t n);

}  // namespace sqrtsum
