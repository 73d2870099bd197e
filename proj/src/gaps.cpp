#include "sqrtsum/gaps.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sqrtsum/frac128.hpp"

namespace sqrtsum {

namespace {

constexpr std::uint64_t kEnumerationLimit = 100'000'000;  // n^k cap

void validate(int k, std::uint64_t n) {
  if (k < 1) {
    throw std::invalid_argument("gaps: k must be >= 1");
  }
  if (n < 1) {
    throw std::invalid_argument("gaps: n must be >= 1");
  }
  mpz_class ordered;
  mpz_ui_pow_ui(ordered.get_mpz_t(), static_cast<unsigned long>(n),
                static_cast<unsigned long>(k));
  if (ordered > kEnumerationLimit) {
    throw infeasible_error("gaps: n^k = " + ordered.get_str() +
                           " exceeds the 1e8 enumeration limit");
  }
}

template <typename Visit>
void for_each_multiset(const SqrtFracTable& table, int k, Visit&& visit) {
  std::vector<std::uint64_t> tuple(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int depth, std::uint64_t min_a, Frac128 sum,
                 bool all_square) -> void {
    if (depth == k) {
      visit(tuple, sum, all_square);
      return;
    }
    for (std::uint64_t a = min_a; a <= table.n(); ++a) {
      tuple[static_cast<std::size_t>(depth)] = a;
      self(self, depth + 1, a, sum + table.frac(a),
           all_square && table.is_square(a));
    }
  };
  rec(rec, 0, 1, Frac128{}, true);
}

// Exact test of frac(value(a)) == frac(value(b)): the difference is an
// integer iff the canonical form of a - b has no radical part.
bool same_fraction(const std::vector<std::uint64_t>& a,
                   const std::vector<std::uint64_t>& b) {
  std::vector<SignedRadicand> terms;
  terms.reserve(a.size() + b.size());
  for (std::uint64_t r : a) {
    terms.push_back(SignedRadicand{r, 1});
  }
  for (std::uint64_t r : b) {
    terms.push_back(SignedRadicand{r, -1});
  }
  return canonicalize(RootSumExpr(std::move(terms))).is_integer();
}

// Orders two inequivalent fractional parts exactly, by escalating interval
// evaluation of frac(value) until the enclosures separate.
bool fraction_less(const std::vector<std::uint64_t>& a,
                   const std::vector<std::uint64_t>& b) {
  for (std::int64_t p = 192; p <= (std::int64_t{1} << 20); p *= 2) {
    const Interval xa = evaluate(RootSumExpr::unsigned_sum(a), p);
    const Interval xb = evaluate(RootSumExpr::unsigned_sum(b), p);
    const Interval fa = xa - Interval::point(FixedPoint(xa.lo().floor()));
    const Interval fb = xb - Interval::point(FixedPoint(xb.lo().floor()));
    if (fa.hi() < fb.lo()) {
      return true;
    }
    if (fb.hi() < fa.lo()) {
      return false;
    }
  }
  throw std::runtime_error("fraction_less: could not separate values");
}

int gap_bucket(const Frac128& g) {
  int e;
  if (g.hi != 0) {
    e = -1 - __builtin_clzll(g.hi);
  } else if (g.lo != 0) {
    e = -65 - __builtin_clzll(g.lo);
  } else {
    e = -1;  // the degenerate whole-circle gap of a single-point set
  }
  return std::clamp(e, -61, -1);
}

}  // namespace

GapReport gap_report(int k, std::uint64_t n) {
  validate(k, n);
  const SqrtFracTable table(n);

  std::vector<Frac128> keys;
  for_each_multiset(table, k,
                    [&](const std::vector<std::uint64_t>&, const Frac128& sum,
                        bool) { keys.push_back(sum); });
  std::sort(keys.begin(), keys.end());

  // Runs of keys closer than 2^-60 are not trusted to separate or merge
  // points; those clusters are re-resolved with exact arithmetic below.
  const Frac128 kTieWindow{0, 1ull << 4};  // 2^-60 on the 2^-128 grid
  struct Cluster {
    Frac128 lo, hi;
    std::vector<std::vector<std::uint64_t>> reps;  // one per distinct value
    std::vector<Frac128> rep_keys;
  };
  std::vector<Frac128> points;
  std::vector<Cluster> clusters;
  std::vector<std::size_t> insert_pos;  // where each cluster's points belong
  std::size_t i = 0;
  while (i < keys.size()) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] - keys[j - 1] <= kTieWindow) {
      ++j;
    }
    if (j == i + 1) {
      points.push_back(keys[i]);
    } else {
      clusters.push_back(Cluster{keys[i], keys[j - 1], {}, {}});
      insert_pos.push_back(points.size());
    }
    i = j;
  }

  if (!clusters.empty()) {
    for_each_multiset(
        table, k,
        [&](const std::vector<std::uint64_t>& tuple, const Frac128& sum,
            bool) {
          // clusters are disjoint and sorted; find the one containing sum
          auto it = std::upper_bound(
              clusters.begin(), clusters.end(), sum,
              [](const Frac128& v, const Cluster& c) { return v < c.lo; });
          if (it == clusters.begin()) {
            return;
          }
          Cluster& c = *std::prev(it);
          if (c.hi < sum) {
            return;
          }
          for (const auto& rep : c.reps) {
            if (same_fraction(tuple, rep)) {
              return;
            }
          }
          c.reps.push_back(tuple);
          c.rep_keys.push_back(sum);
        });
    // splice the exactly-ordered cluster points into the point list
    std::vector<Frac128> merged;
    merged.reserve(points.size() + keys.size());
    std::size_t next_point = 0;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      while (next_point < insert_pos[ci]) {
        merged.push_back(points[next_point++]);
      }
      Cluster& c = clusters[ci];
      std::vector<std::size_t> order(c.reps.size());
      for (std::size_t t = 0; t < order.size(); ++t) {
        order[t] = t;
      }
      std::sort(order.begin(), order.end(),
                [&](std::size_t x, std::size_t y) {
                  return fraction_less(c.reps[x], c.reps[y]);
                });
      for (std::size_t t : order) {
        merged.push_back(c.rep_keys[t]);
      }
    }
    while (next_point < points.size()) {
      merged.push_back(points[next_point++]);
    }
    points = std::move(merged);
  }

  GapReport report;
  report.k = k;
  report.n = n;
  report.point_count = points.size();

  std::array<std::uint64_t, 61> hist{};
  auto add_gap = [&](const Frac128& g, double from, double to) {
    ++hist[static_cast<std::size_t>(gap_bucket(g) + 61)];
    const double width = points.size() == 1 ? 1.0 : g.to_double();
    report.gap_sum += width;
    if (width > report.largest_gap) {
      report.largest_gap = width;
      report.largest_gap_from = from;
      report.largest_gap_to = to;
    }
  };

  if (points.size() == 1) {
    add_gap(Frac128{}, points[0].to_double(), points[0].to_double());
  } else {
    for (std::size_t t = 0; t + 1 < points.size(); ++t) {
      add_gap(points[t + 1] - points[t], points[t].to_double(),
              points[t + 1].to_double());
    }
    add_gap(points.front() - points.back(), points.back().to_double(),
            points.front().to_double() + 1.0);
  }
  for (int e = -61; e <= -1; ++e) {
    const std::uint64_t count = hist[static_cast<std::size_t>(e + 61)];
    if (count > 0) {
      report.histogram.emplace_back(e, count);
    }
  }

  report.smallest_nonzero = 0.0;
  for (const Frac128& p : points) {
    if (!p.is_zero()) {
      report.smallest_nonzero = p.to_double();
      break;
    }
  }
  return report;
}

std::string GapReport::to_json() const {
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  nlohmann::ordered_json j;
  j["k"] = std::to_string(k);
  j["n"] = std::to_string(n);
  j["point_count"] = std::to_string(point_count);
  j["largest_gap"] = fmt(largest_gap);
  j["largest_gap_from"] = fmt(largest_gap_from);
  j["largest_gap_to"] = fmt(largest_gap_to);
  j["smallest_nonzero"] = fmt(smallest_nonzero);
  j["gap_sum"] = fmt(gap_sum);
  auto hist = nlohmann::ordered_json::array();
  for (const auto& [e, count] : histogram) {
    nlohmann::ordered_json h;
    h["bucket_exponent"] = std::to_string(e);
    h["count"] = std::to_string(count);
    hist.push_back(h);
  }
  j["histogram"] = hist;
  return j.dump();
}

std::string GapReport::histogram_csv() const {
  std::string out = "bucket_exponent,gap_lo,gap_hi,count\n";
  char buf[128];
  for (const auto& [e, count] : histogram) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%llu\n", e,
                  std::ldexp(1.0, e), std::ldexp(1.0, e + 1),
                  static_cast<unsigned long long>(count));
    out += buf;
  }
  return out;
}

MinDistanceResult min_nonzero_distance(int k, std::uint64_t n) {
  validate(k, n);
  const SqrtFracTable table(n);

  bool found = false;
  Frac128 best{~0ull, ~0ull};
  for_each_multiset(table, k,
                    [&](const std::vector<std::uint64_t>&, const Frac128& sum,
                        bool all_square) {
                      if (all_square) {
                        return;
                      }
                      const Frac128 d = sum.torus_distance();
                      if (!found || d < best) {
                        best = d;
                        found = true;
                      }
                    });
  if (!found) {
    throw std::domain_error(
        "min_nonzero_distance: every tuple is an exact integer");
  }

  const Frac128 window = best.plus_saturating(Frac128{0, 1ull << 9});
  std::vector<std::vector<std::uint64_t>> candidates;
  for_each_multiset(table, k,
                    [&](const std::vector<std::uint64_t>& tuple,
                        const Frac128& sum, bool all_square) {
                      if (all_square) {
                        return;
                      }
                      if (sum.torus_distance() <= window) {
                        candidates.push_back(tuple);
                      }
                    });

  MinDistanceResult result;
  bool have = false;
  DistanceCertificate best_cert;
  std::vector<std::uint64_t> best_tuple;
  for (const auto& tuple : candidates) {
    DistanceCertificate cert =
        certified_distance(RootSumExpr::unsigned_sum(tuple));
    if (!have) {
      best_cert = cert;
      best_tuple = tuple;
      have = true;
      continue;
    }
    // compare exactly, escalating while the enclosures overlap
    std::int64_t p = std::max(cert.precision_bits, best_cert.precision_bits);
    DistanceCertificate challenger = cert;
    DistanceCertificate incumbent = best_cert;
    for (;;) {
      if (challenger.distance.hi() < incumbent.distance.lo()) {
        best_cert = challenger;
        best_tuple = tuple;
        break;
      }
      if (incumbent.distance.hi() < challenger.distance.lo()) {
        break;  // incumbent stays
      }
      if (same_fraction(tuple, best_tuple)) {
        // identical distances: lexicographically smallest tuple wins
        if (tuple < best_tuple) {
          best_cert = challenger;
          best_tuple = tuple;
        }
        break;
      }
      p *= 2;
      challenger = certified_distance(RootSumExpr::unsigned_sum(tuple), p);
      incumbent = certified_distance(RootSumExpr::unsigned_sum(best_tuple), p);
    }
  }
  result.radicands = best_tuple;
  result.certificate = best_cert;
  return result;
}

}  // namespace sqrtsum
