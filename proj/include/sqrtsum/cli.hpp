#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqrtsum/root_sum.hpp"
#include "sqrtsum/search.hpp"

namespace sqrtsum::cli {

struct GlobalOptions {
  std::int64_t precision_bits = 128;  // >= 32
  int parallelism = 0;                // 0 = SQRTSUM_THREADS or core count
  std::string output;                 // empty = the command's stream
  std::string format = "text";        // text | json
};

int effective_parallelism(const GlobalOptions& opts);

/// Parses a signed term list such as "+3 +20 +23" or
/// "29 1097 3153 -226 -2324 -987". Throws std::invalid_argument naming the
/// offending token position; radicand 0 is rejected.
RootSumExpr parse_terms(const std::string& text);

int run_eval(const std::string& terms, const GlobalOptions& opts,
             std::ostream& out);
int run_decide(const std::string& terms, const GlobalOptions& opts,
               std::ostream& out);

struct SearchArgs {
  std::string method = "exhaustive";
  int k = 2;
  std::uint64_t n = 100;
  std::string threshold = "1e-3";
  std::string offset_y = "0";
  int shards = 1;
  std::int64_t limit = 0;
  std::string resume_path;
};
int run_search(const SearchArgs& args, const GlobalOptions& opts,
               std::ostream& out);

struct ExpSumArgs {
  std::uint64_t n = 10000;
  std::string ell_grid = "1,10,100,1000";
};
int run_expsum(const ExpSumArgs& args, const GlobalOptions& opts,
               std::ostream& out);

struct CountArgs {
  int k = 2;
  std::uint64_t n = 50;
  double s = 500.0;
  long long L = 1000000;
  std::string offset_y = "0";
};
int run_count(const CountArgs& args, const GlobalOptions& opts,
              std::ostream& out);

struct GapsArgs {
  int k = 2;
  std::uint64_t n = 100;
  std::string histogram_csv_path;
  bool min_distance = false;
};
int run_gaps(const GapsArgs& args, const GlobalOptions& opts,
             std::ostream& out);

/// One row of the known-example regression table.
struct VerifyRow {
  std::string name;
  std::string expected;
  std::string computed;
  bool pass = false;
};
std::vector<VerifyRow> verify_known_rows(std::int64_t precision_bits);
int run_verify_known(const GlobalOptions& opts, std::ostream& out);

}  // namespace sqrtsum::cli
