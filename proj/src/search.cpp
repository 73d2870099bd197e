#include "sqrtsum/search.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "sqrtsum/decimal.hpp"
#include "sqrtsum/frac128.hpp"
#include "sqrtsum/number_theory.hpp"
#include "sqrtsum/parallel.hpp"

namespace sqrtsum {

namespace {

// Frac128 keys carry errors well below 2^-120 for any realistic k; the
// prefilter window is widened by 2^-120 before exact re-certification.
const Frac128 kPrefilterMargin{0, 1ull << 8};

mpz_class mpz_u64(std::uint64_t v) {
  return mpz_class(static_cast<unsigned long>(v));
}

mpz_class multiset_count(std::uint64_t n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n) +
                                  static_cast<unsigned long>(k) - 1,
               static_cast<unsigned long>(k));
  return r;
}

NearIntegerRecord make_record(std::vector<std::uint64_t> radicands,
                              std::vector<int> signs, std::uint64_t n_max,
                              const DistanceCertificate& cert,
                              SearchMethod method) {
  NearIntegerRecord r;
  r.radicands = std::move(radicands);
  r.signs = std::move(signs);
  r.k = static_cast<int>(r.radicands.size());
  r.n_max = n_max;
  r.nearest_integer = cert.nearest_integer;
  r.precision_bits = cert.precision_bits;
  r.method = method;
  r.distance_enclosure = cert.distance;
  const mpq_class mid = cert.distance.midpoint().to_rational();
  r.distance = format_decimal(mid, 24);
  // fold the decimal rendering error of the midpoint into the radius so the
  // printed value +- radius still encloses the true distance
  const mpq_class render_err = abs(mid - parse_decimal(r.distance));
  const mpq_class radius_q = cert.distance.radius().to_rational() + render_err;
  r.radius = format_decimal_magnitude_up(radius_q, 3);
  return r;
}

std::vector<int> all_plus(int k) { return std::vector<int>(k, 1); }

// Candidate tuples from the shared prefilter, certified one by one.
void certify_candidates(const std::set<std::vector<std::uint64_t>>& candidates,
                        const SearchConfig& cfg, SearchMethod method,
                        std::vector<NearIntegerRecord>& out) {
  for (const auto& tuple : candidates) {
    const RootSumExpr expr = RootSumExpr::unsigned_sum(tuple);
    DistanceCertificate cert;
    if (distance_leq(expr, cfg.offset_y, cfg.threshold, cfg.precision_bits,
                     &cert)) {
      out.push_back(
          make_record(tuple, all_plus(cfg.k), cfg.n_max, cert, method));
    }
  }
}

// Recursively visits non-decreasing tuples with the running fractional sum;
// first coordinate restricted to [first_lo, first_hi].
template <typename Visit>
void enumerate_multisets(const SqrtFracTable& table, int k,
                         std::uint64_t first_lo, std::uint64_t first_hi,
                         Visit&& visit) {
  std::vector<std::uint64_t> tuple(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int depth, std::uint64_t min_a,
                 std::uint64_t max_first, Frac128 sum,
                 bool all_square) -> void {
    if (depth == k) {
      visit(tuple, sum, all_square);
      return;
    }
    const std::uint64_t hi = depth == 0 ? max_first : table.n();
    for (std::uint64_t a = min_a; a <= hi; ++a) {
      tuple[static_cast<std::size_t>(depth)] = a;
      self(self, depth + 1, a, max_first, sum + table.frac(a),
           all_square && table.is_square(a));
    }
  };
  rec(rec, 0, first_lo, first_hi, Frac128{}, true);
}

struct PrefilterWindow {
  Frac128 y128;
  Frac128 bound;    // accept when torus distance <= bound
  bool accept_all;  // threshold >= 1/2 covers the whole torus
};

PrefilterWindow make_window(const SearchConfig& cfg) {
  PrefilterWindow w;
  w.y128 = Frac128::from_rational(cfg.offset_y, Round::Down);
  // beyond 1/4 the window arithmetic could wrap; just scan everything and
  // let certification decide (degenerate thresholds anyway)
  w.accept_all = cfg.threshold >= mpq_class(1, 4);
  if (!w.accept_all) {
    w.bound = Frac128::from_rational(cfg.threshold, Round::Up)
                  .plus_saturating(kPrefilterMargin);
  }
  return w;
}

void validate_common(const SearchConfig& cfg) {
  if (cfg.k < 1) {
    throw std::invalid_argument("search: k must be >= 1");
  }
  if (cfg.n_max < 1) {
    throw std::invalid_argument("search: n_max must be >= 1");
  }
  if (cfg.threshold <= 0) {
    throw std::invalid_argument("search: threshold must be > 0");
  }
  if (cfg.offset_y < 0 || cfg.offset_y >= 1) {
    throw std::invalid_argument("search: offset y must be in [0, 1)");
  }
  if (cfg.shard_count < 1) {
    throw std::invalid_argument("search: shard_count must be >= 1");
  }
  const std::size_t table_bytes = static_cast<std::size_t>(cfg.n_max) * 24;
  if (table_bytes > cfg.memory_budget_bytes) {
    throw infeasible_error("search: sqrt table needs about " +
                           std::to_string(table_bytes) +
                           " bytes, over the budget of " +
                           std::to_string(cfg.memory_budget_bytes));
  }
}

// --- resumable shard orchestration ------------------------------------

std::string config_fingerprint(const SearchConfig& cfg, SearchMethod method) {
  std::ostringstream os;
  os << to_string(method) << " k=" << cfg.k << " n=" << cfg.n_max
     << " thr=" << cfg.threshold.get_str() << " y=" << cfg.offset_y.get_str()
     << " shards=" << cfg.shard_count << " prec=" << cfg.precision_bits;
  return os.str();
}

// Sidecar names carry a digest of the configuration so that reusing one
// progress path across different searches can never resurrect stale records.
std::string shard_file(const std::string& progress_path,
                       const std::string& fingerprint, int shard) {
  std::uint64_t digest = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : fingerprint) {
    digest = (digest ^ c) * 1099511628211ull;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(digest));
  return progress_path + "." + hex + ".shard" + std::to_string(shard) +
         ".jsonl";
}

std::vector<NearIntegerRecord> run_sharded(
    const SearchConfig& cfg, SearchMethod method,
    const std::function<std::vector<NearIntegerRecord>(int)>& shard_fn) {
  const std::string fingerprint = config_fingerprint(cfg, method);
  std::vector<bool> done(static_cast<std::size_t>(cfg.shard_count), false);
  std::vector<std::vector<NearIntegerRecord>> results(
      static_cast<std::size_t>(cfg.shard_count));

  if (!cfg.progress_path.empty()) {
    std::ifstream in(cfg.progress_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) {
        continue;
      }
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || j.value("config", "") != fingerprint) {
        continue;
      }
      const int shard = std::stoi(j.value("shard", "-1"));
      if (shard < 0 || shard >= cfg.shard_count) {
        continue;
      }
      std::ifstream rec_in(shard_file(cfg.progress_path, fingerprint, shard));
      if (!rec_in) {
        continue;  // marker without records: recompute
      }
      std::stringstream buffer;
      buffer << rec_in.rdbuf();
      results[static_cast<std::size_t>(shard)] =
          records_from_jsonl(buffer.str());
      done[static_cast<std::size_t>(shard)] = true;
    }
  }

  std::vector<int> pending;
  for (int s = 0; s < cfg.shard_count; ++s) {
    if (!done[static_cast<std::size_t>(s)]) {
      pending.push_back(s);
    }
  }

  std::mutex progress_mutex;
  parallel_blocks(static_cast<std::int64_t>(pending.size()), cfg.parallelism,
                  [&](std::int64_t i) {
                    const int shard = pending[static_cast<std::size_t>(i)];
                    auto records = shard_fn(shard);
                    if (!cfg.progress_path.empty()) {
                      std::lock_guard<std::mutex> lock(progress_mutex);
                      {
                        std::ofstream rec_out(
                            shard_file(cfg.progress_path, fingerprint, shard));
                        rec_out << records_to_jsonl(records);
                      }
                      std::ofstream marker(cfg.progress_path, std::ios::app);
                      nlohmann::ordered_json j;
                      j["config"] = fingerprint;
                      j["shard"] = std::to_string(shard);
                      marker << j.dump() << "\n";
                    }
                    results[static_cast<std::size_t>(shard)] =
                        std::move(records);
                  });

  std::vector<NearIntegerRecord> merged;
  for (auto& part : results) {
    for (auto& r : part) {
      merged.push_back(std::move(r));
    }
  }
  std::sort(merged.begin(), merged.end(),
            [](const NearIntegerRecord& a, const NearIntegerRecord& b) {
              return a.radicands < b.radicands;
            });
  merged.erase(std::unique(merged.begin(), merged.end(),
                           [](const NearIntegerRecord& a,
                              const NearIntegerRecord& b) {
                             return a.radicands == b.radicands;
                           }),
               merged.end());

  if (cfg.record_limit > 0 &&
      static_cast<std::int64_t>(merged.size()) > cfg.record_limit) {
    // keep the smallest distances; ties resolved by lexicographic tuple
    std::sort(merged.begin(), merged.end(),
              [](const NearIntegerRecord& a, const NearIntegerRecord& b) {
                const int c = FixedPoint::cmp(a.distance_enclosure.lo(),
                                              b.distance_enclosure.lo());
                if (c != 0) {
                  return c < 0;
                }
                return a.radicands < b.radicands;
              });
    merged.resize(static_cast<std::size_t>(cfg.record_limit));
    std::sort(merged.begin(), merged.end(),
              [](const NearIntegerRecord& a, const NearIntegerRecord& b) {
                return a.radicands < b.radicands;
              });
  }
  return merged;
}

}  // namespace

const char* to_string(SearchMethod m) {
  switch (m) {
    case SearchMethod::exhaustive:
      return "exhaustive";
    case SearchMethod::mitm:
      return "mitm";
    case SearchMethod::family_k2:
      return "family_k2";
    case SearchMethod::family_k3:
      return "family_k3";
    case SearchMethod::binomial:
      return "binomial";
  }
  return "unknown";
}

SearchMethod search_method_from_string(const std::string& s) {
  if (s == "exhaustive") return SearchMethod::exhaustive;
  if (s == "mitm") return SearchMethod::mitm;
  if (s == "family_k2" || s == "family-k2") return SearchMethod::family_k2;
  if (s == "family_k3" || s == "family-k3") return SearchMethod::family_k3;
  if (s == "binomial") return SearchMethod::binomial;
  throw std::invalid_argument("unknown search method '" + s + "'");
}

RootSumExpr NearIntegerRecord::to_expr() const {
  std::vector<SignedRadicand> terms;
  terms.reserve(radicands.size());
  for (std::size_t i = 0; i < radicands.size(); ++i) {
    terms.push_back(SignedRadicand{radicands[i], signs[i]});
  }
  return RootSumExpr(std::move(terms));
}

std::string NearIntegerRecord::to_jsonl() const {
  nlohmann::ordered_json j;
  auto rad = nlohmann::ordered_json::array();
  for (std::uint64_t a : radicands) {
    rad.push_back(std::to_string(a));
  }
  auto sgn = nlohmann::ordered_json::array();
  for (int s : signs) {
    sgn.push_back(std::to_string(s));
  }
  j["radicands"] = rad;
  j["signs"] = sgn;
  j["k"] = std::to_string(k);
  j["n_max"] = std::to_string(n_max);
  j["nearest_integer"] = std::to_string(nearest_integer);
  j["distance"] = distance;
  j["radius"] = radius;
  j["precision_bits"] = std::to_string(precision_bits);
  j["method"] = to_string(method);
  return j.dump();
}

NearIntegerRecord NearIntegerRecord::from_jsonl(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  NearIntegerRecord r;
  for (const auto& v : j.at("radicands")) {
    r.radicands.push_back(std::stoull(v.get<std::string>()));
  }
  for (const auto& v : j.at("signs")) {
    r.signs.push_back(std::stoi(v.get<std::string>()));
  }
  r.k = std::stoi(j.at("k").get<std::string>());
  r.n_max = std::stoull(j.at("n_max").get<std::string>());
  r.nearest_integer = std::stoll(j.at("nearest_integer").get<std::string>());
  r.distance = j.at("distance").get<std::string>();
  r.radius = j.at("radius").get<std::string>();
  r.precision_bits = std::stoll(j.at("precision_bits").get<std::string>());
  r.method = search_method_from_string(j.at("method").get<std::string>());
  const mpq_class mid = parse_decimal(r.distance);
  const mpq_class rad = parse_decimal(r.radius);
  const std::int64_t scale = r.precision_bits + 16;
  r.distance_enclosure =
      Interval(FixedPoint::from_rational(mid - rad, scale, Round::Down),
               FixedPoint::from_rational(mid + rad, scale, Round::Up));
  return r;
}

std::string records_to_jsonl(const std::vector<NearIntegerRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.to_jsonl();
    out += '\n';
  }
  return out;
}

std::vector<NearIntegerRecord> records_from_jsonl(const std::string& text) {
  std::vector<NearIntegerRecord> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      out.push_back(NearIntegerRecord::from_jsonl(line));
    }
  }
  return out;
}

std::vector<NearIntegerRecord> exhaustive_search(const SearchConfig& cfg) {
  validate_common(cfg);
  const mpz_class count = multiset_count(cfg.n_max, cfg.k);
  if (count > 1'000'000'000) {
    throw infeasible_error(
        "exhaustive_search: about " + count.get_str() +
        " multisets exceed the 1e9 enumeration limit; reduce k or n");
  }
  const SqrtFracTable table(cfg.n_max);
  const PrefilterWindow window = make_window(cfg);

  auto shard_fn = [&](int shard) {
    // static partition of the smallest element's range
    const std::uint64_t lo =
        1 + cfg.n_max * static_cast<std::uint64_t>(shard) /
                static_cast<std::uint64_t>(cfg.shard_count);
    const std::uint64_t hi = cfg.n_max *
                             (static_cast<std::uint64_t>(shard) + 1) /
                             static_cast<std::uint64_t>(cfg.shard_count);
    std::set<std::vector<std::uint64_t>> candidates;
    if (lo <= hi) {
      enumerate_multisets(
          table, cfg.k, lo, hi,
          [&](const std::vector<std::uint64_t>& tuple, const Frac128& sum,
              bool all_square) {
            if (all_square) {
              return;  // exact integer, a trivial solution
            }
            if (!window.accept_all) {
              const Frac128 d = (sum - window.y128).torus_distance();
              if (!(d <= window.bound)) {
                return;
              }
            }
            candidates.insert(tuple);
          });
    }
    std::vector<NearIntegerRecord> records;
    certify_candidates(candidates, cfg, SearchMethod::exhaustive, records);
    return records;
  };

  return run_sharded(cfg, SearchMethod::exhaustive, shard_fn);
}

std::vector<NearIntegerRecord> meet_in_the_middle(const SearchConfig& cfg) {
  validate_common(cfg);
  if (cfg.k < 2) {
    throw std::invalid_argument("meet_in_the_middle: k must be >= 2");
  }
  if (cfg.k > 8) {
    throw std::invalid_argument("meet_in_the_middle: k > 8 unsupported");
  }
  const int k1 = (cfg.k + 1) / 2;  // table half
  const int k2 = cfg.k - k1;
  const mpz_class table_count = multiset_count(cfg.n_max, k1);
  const mpz_class table_bytes = table_count * 24;
  if (table_bytes > static_cast<long>(cfg.memory_budget_bytes)) {
    throw infeasible_error("meet_in_the_middle: half-sum table needs about " +
                           table_bytes.get_str() + " bytes, over the budget");
  }

  const SqrtFracTable table(cfg.n_max);
  const PrefilterWindow window = make_window(cfg);

  struct Entry {
    std::uint64_t key;
    std::array<std::uint32_t, 4> tuple;  // zero-padded
  };
  std::vector<Entry> half;
  half.reserve(table_count.get_ui());
  enumerate_multisets(table, k1, 1, cfg.n_max,
                      [&](const std::vector<std::uint64_t>& tuple,
                          const Frac128& sum, bool) {
                        Entry e;
                        e.key = sum.hi;
                        e.tuple = {0, 0, 0, 0};
                        for (std::size_t i = 0; i < tuple.size(); ++i) {
                          e.tuple[i] = static_cast<std::uint32_t>(tuple[i]);
                        }
                        half.push_back(e);
                      });
  std::sort(half.begin(), half.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });

  // window in key space: the 64-bit keys truncate the 128-bit sums, so the
  // window grows by one key unit on each side on top of the prefilter margin
  const Frac128 w128 =
      window.accept_all
          ? Frac128{~0ull, ~0ull}
          : window.bound.plus_saturating(Frac128{1, 0} /* 2^-64 */);

  auto scan_range = [&](std::uint64_t key_lo, std::uint64_t key_hi,
                        auto&& emit) {
    auto it = std::lower_bound(
        half.begin(), half.end(), key_lo,
        [](const Entry& e, std::uint64_t v) { return e.key < v; });
    for (; it != half.end() && it->key <= key_hi; ++it) {
      emit(*it);
    }
  };

  auto shard_fn = [&](int shard) {
    const std::uint64_t lo =
        1 + cfg.n_max * static_cast<std::uint64_t>(shard) /
                static_cast<std::uint64_t>(cfg.shard_count);
    const std::uint64_t hi = cfg.n_max *
                             (static_cast<std::uint64_t>(shard) + 1) /
                             static_cast<std::uint64_t>(cfg.shard_count);
    std::set<std::vector<std::uint64_t>> candidates;
    auto consider = [&](const std::vector<std::uint64_t>& b_tuple,
                        const Entry& a_entry) {
      std::vector<std::uint64_t> combined;
      combined.reserve(static_cast<std::size_t>(cfg.k));
      for (int i = 0; i < k1; ++i) {
        combined.push_back(a_entry.tuple[static_cast<std::size_t>(i)]);
      }
      combined.insert(combined.end(), b_tuple.begin(), b_tuple.end());
      std::sort(combined.begin(), combined.end());
      bool all_square = true;
      for (std::uint64_t a : combined) {
        all_square = all_square && table.is_square(a);
      }
      if (!all_square) {
        candidates.insert(std::move(combined));
      }
    };
    auto handle_b = [&](const std::vector<std::uint64_t>& b_tuple,
                        const Frac128& b_sum) {
      if (window.accept_all) {
        for (const Entry& e : half) {
          consider(b_tuple, e);
        }
        return;
      }
      const Frac128 target = window.y128 - b_sum;
      const Frac128 a = target - w128;
      const Frac128 b = target + w128;
      if (a <= b) {
        scan_range(a.hi, b.hi, [&](const Entry& e) { consider(b_tuple, e); });
      } else {  // window wraps around 0
        scan_range(a.hi, ~0ull, [&](const Entry& e) { consider(b_tuple, e); });
        scan_range(0, b.hi, [&](const Entry& e) { consider(b_tuple, e); });
      }
    };
    if (lo <= hi) {
      enumerate_multisets(table, k2, lo, hi,
                          [&](const std::vector<std::uint64_t>& tuple,
                              const Frac128& sum,
                              bool) { handle_b(tuple, sum); });
    }
    std::vector<NearIntegerRecord> records;
    certify_candidates(candidates, cfg, SearchMethod::mitm, records);
    return records;
  };

  return run_sharded(cfg, SearchMethod::mitm, shard_fn);
}

NearIntegerRecord family_k2(std::uint64_t a, std::int64_t precision_bits) {
  if (a < 2) {
    throw std::invalid_argument("family_k2: a must be >= 2");
  }
  if (a > 3037000499ull) {
    throw std::invalid_argument("family_k2: a^2 exceeds the radicand range");
  }
  const std::uint64_t sq = a * a;
  const RootSumExpr expr = RootSumExpr::unsigned_sum({sq - 1, sq + 1});
  const DistanceCertificate cert = certified_distance(expr, precision_bits);
  return make_record({sq - 1, sq + 1}, all_plus(2), sq + 1, cert,
                     SearchMethod::family_k2);
}

NearIntegerRecord family_k3(std::uint64_t t, std::int64_t precision_bits) {
  if (t < 3) {
    throw std::invalid_argument("family_k3: t must be >= 3");
  }
  if (t > 1518500249ull) {
    throw std::invalid_argument("family_k3: radicands exceed the range");
  }
  const std::uint64_t r1 = (t - 1) * (t - 1) + 2;
  const std::uint64_t r2 = (t + 1) * (t + 1) + 2;
  const std::uint64_t r3 = 4 * t * t - 8;
  const RootSumExpr expr = RootSumExpr::unsigned_sum({r1, r2, r3});
  const DistanceCertificate cert = certified_distance(expr, precision_bits);
  return make_record({r1, r2, r3}, all_plus(3), r3, cert,
                     SearchMethod::family_k3);
}

BinomialCancellation binomial_cancellation(int m, std::uint64_t n) {
  if (m < 1 || m > 20) {
    throw std::invalid_argument("binomial_cancellation: need 1 <= m <= 20");
  }
  if (n == 0 || n + static_cast<std::uint64_t>(m) > (1ull << 63)) {
    throw std::invalid_argument("binomial_cancellation: n out of range");
  }
  std::vector<SignedRadicand> terms;
  for (int i = 0; i <= m; ++i) {
    const mpz_class c = binomial(static_cast<unsigned long>(m),
                                 static_cast<unsigned long>(i));
    const int sign = i % 2 == 0 ? 1 : -1;
    for (mpz_class j = 0; j < c; ++j) {
      terms.push_back(
          SignedRadicand{n + static_cast<std::uint64_t>(i), sign});
    }
  }
  const RootSumExpr expr(std::move(terms));

  const mpz_class dfact = double_factorial(2L * m - 3);
  mpz_class denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(n),
                static_cast<unsigned long>(m));
  denom <<= static_cast<unsigned long>(m);  // 2^m * n^m

  BinomialCancellation result;
  for (std::int64_t p = 128; p <= (std::int64_t{1} << 13); p *= 2) {
    const Interval lhs = evaluate(expr, p).abs();
    const Interval rhs =
        sqrt_enclosure(mpz_u64(n), p).scaled(dfact).divided_by_positive(denom,
                                                                        p);
    if (lhs.hi() <= rhs.lo()) {
      result.lhs = lhs;
      result.rhs = rhs;
      result.rhs_lower = rhs.lo().to_rational();
      result.holds = true;
      return result;
    }
    if (lhs.lo() > rhs.hi()) {
      result.lhs = lhs;
      result.rhs = rhs;
      result.rhs_lower = rhs.lo().to_rational();
      result.holds = false;
      return result;
    }
  }
  throw std::runtime_error(
      "binomial_cancellation: sides too close to separate at 2^13 bits");
}

}  // namespace sqrtsum
