#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sqrtsum/interval.hpp"

namespace sqrtsum {

struct SignedRadicand {
  std::uint64_t radicand = 1;  // >= 1
  int sign = 1;                // +1 or -1
};

/// A signed sum of square roots: sum over terms of sign * sqrt(radicand).
/// The unsigned problem is the all-plus special case; radicands may repeat.
class RootSumExpr {
 public:
  explicit RootSumExpr(std::vector<SignedRadicand> terms);
  static RootSumExpr unsigned_sum(const std::vector<std::uint64_t>& radicands);

  const std::vector<SignedRadicand>& terms() const { return terms_; }
  int k() const { return static_cast<int>(terms_.size()); }
  std::uint64_t n_max() const { return n_max_; }

 private:
  std::vector<SignedRadicand> terms_;
  std::uint64_t n_max_ = 1;
};

/// Exact reduction c1 + sum over d of c_d * sqrt(d) with the d distinct
/// squarefree integers > 1 and every c_d nonzero. Square roots of distinct
/// squarefree integers are linearly independent over Q, so the value is an
/// integer iff radical_terms is empty.
struct CanonicalRadicalForm {
  long long rational_part = 0;                      // c1
  std::map<std::uint64_t, long long> radical_terms;  // d -> c_d, c_d != 0
  bool is_integer() const { return radical_terms.empty(); }
};

CanonicalRadicalForm canonicalize(const RootSumExpr& e);

/// The exact integer value when the expression is one, nullopt otherwise.
std::optional<long long> exact_integer_value(const RootSumExpr& e);

/// Enclosure of the expression's value. Each sqrt is enclosed to
/// precision_bits, sums are exact, so width <= k * 2^-precision_bits.
Interval evaluate(const RootSumExpr& e, std::int64_t precision_bits);
Interval evaluate(const CanonicalRadicalForm& f, std::int64_t precision_bits);

/// Certified positive lower bound B <= ||value(e)|| for non-integer e.
///
/// Over the t distinct radicals of the canonical form, the product of
/// (m - c1 - sum of eps_d c_d sqrt(d)) over all sign patterns eps is a
/// nonzero integer, so it is >= 1 in absolute value; each factor other than
/// the distance itself is at most M = |m - c1| + sum |c_d| sqrt(d), bounded
/// above in certified arithmetic, giving B = M^-(2^t - 1). Canonicalizing
/// first is what makes every factor nonzero even when input radicands share
/// squarefree parts. Throws std::logic_error on exact-integer input.
mpq_class separation_bound(const RootSumExpr& e);

struct DistanceCertificate {
  long long nearest_integer = 0;
  Interval distance;  // [0,0] when exactly_integer, else lower endpoint > 0
  std::int64_t precision_bits = 0;
  bool exactly_integer = false;
};

/// Certified distance to the nearest integer (or to Z + y for rational y).
///
/// Exact integers are decided exactly through the canonical form. Otherwise
/// the working precision starts at max(requested_bits, 128) and doubles
/// until the distance enclosure excludes zero, which the separation bound
/// guarantees to happen. The y-offset variant requires a non-integer
/// expression when y != 0.
DistanceCertificate certified_distance(const RootSumExpr& e,
                                       std::int64_t requested_bits = 128);
DistanceCertificate certified_distance(const RootSumExpr& e,
                                       const mpq_class& offset_y,
                                       std::int64_t requested_bits);

/// Certified comparison of the distance against an exact rational threshold;
/// escalates precision until decidable. Fills *out with the deciding
/// certificate when provided.
bool distance_leq(const RootSumExpr& e, const mpq_class& offset_y,
                  const mpq_class& threshold, std::int64_t requested_bits,
                  DistanceCertificate* out = nullptr);

}  // namespace sqrtsum
