#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <sstream>

#include "sqrtsum/cli.hpp"

using namespace sqrtsum;

namespace {

std::string run_to_string(int* code, auto&& fn) {
  std::ostringstream out;
  *code = fn(out);
  return out.str();
}

}  // namespace

TEST_CASE("term parsing") {
  const RootSumExpr e = cli::parse_terms("+3 +20 +23");
  CHECK(e.k() == 3);
  CHECK(e.terms()[0].radicand == 3);
  CHECK(e.terms()[0].sign == 1);

  const RootSumExpr mixed =
      cli::parse_terms("29 1097 3153 -226 -2324 -987");
  CHECK(mixed.k() == 6);
  CHECK(mixed.terms()[3].sign == -1);
  CHECK(mixed.terms()[3].radicand == 226);

  CHECK_THROWS_WITH_AS(cli::parse_terms("+3 x20"),
                       doctest::Contains("term 2"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(cli::parse_terms("+3 +0"),
                       doctest::Contains("radicand 0"),
                       std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_terms(""), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_terms("1.5"), std::invalid_argument);
}

TEST_CASE("eval command output") {
  cli::GlobalOptions opts;
  int code = 0;
  const std::string text = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_eval("+3 +20 +23", opts, out);
  });
  CHECK(code == 0);
  CHECK(text.find("nearest integer: 11") != std::string::npos);
  CHECK(text.find("distance: 1.82858811762279432") != std::string::npos);
  CHECK(text.find("±") != std::string::npos);

  const std::string exact = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_eval("+4 +9", opts, out);
  });
  CHECK(code == 0);
  CHECK(exact.find("EXACT INTEGER 5") != std::string::npos);

  opts.format = "json";
  const std::string json_text = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_eval("+11075 +27187 +68057", opts, out);
  });
  const auto j = nlohmann::json::parse(json_text);
  CHECK(j.at("nearest_integer").get<std::string>() == "531");
  CHECK(j.at("distance").get<std::string>().substr(0, 6) == "1.2646");
  CHECK(j.at("exact_integer").get<std::string>() == "false");
}

TEST_CASE("decide command reports integrality and sign") {
  cli::GlobalOptions opts;
  int code = 0;
  const std::string irrational = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_decide("+10 +11 -5 -18", opts, out);
  });
  CHECK(code == 0);
  CHECK(irrational.find("NOT AN INTEGER") != std::string::npos);
  CHECK(irrational.find("sign: +") != std::string::npos);

  const std::string negative = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_decide("+5 +18 -10 -11", opts, out);
  });
  CHECK(negative.find("sign: -") != std::string::npos);

  const std::string integer = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_decide("+8 -2 -2", opts, out);
  });
  CHECK(integer.find("INTEGER 0") != std::string::npos);
}

TEST_CASE("search command emits JSONL records") {
  cli::GlobalOptions opts;
  cli::SearchArgs args;
  args.method = "exhaustive";
  args.k = 3;
  args.n = 25;
  args.threshold = "1e-4";
  int code = 0;
  const std::string payload = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_search(args, opts, out);
  });
  CHECK(code == 0);
  std::istringstream lines(payload);
  std::string line;
  REQUIRE(std::getline(lines, line));
  const auto j = nlohmann::json::parse(line);
  CHECK(j.at("radicands")[0].get<std::string>() == "3");
  CHECK(j.at("method").get<std::string>() == "exhaustive");
  CHECK_FALSE(std::getline(lines, line));
}

TEST_CASE("search output is byte-identical across parallelism degrees") {
  cli::SearchArgs args;
  args.method = "mitm";
  args.k = 3;
  args.n = 30;
  args.threshold = "1e-3";
  args.shards = 8;
  std::string payloads[2];
  for (int threads : {1, 2}) {
    cli::GlobalOptions opts;
    opts.parallelism = threads;
    int code = 0;
    payloads[threads - 1] = run_to_string(&code, [&](std::ostream& out) {
      return cli::run_search(args, opts, out);
    });
    CHECK(code == 0);
  }
  CHECK(payloads[0] == payloads[1]);
}

TEST_CASE("family searches respect the radicand bound") {
  cli::GlobalOptions opts;
  cli::SearchArgs args;
  args.method = "family-k2";
  args.n = 150;  // admits a = 2 .. 12
  args.threshold = "1";
  int code = 0;
  const std::string payload = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_search(args, opts, out);
  });
  const auto records = records_from_jsonl(payload);
  REQUIRE(records.size() == 11);
  for (const auto& r : records) {
    CHECK(r.n_max <= 150);
    CHECK(r.method == SearchMethod::family_k2);
  }
}

TEST_CASE("count command self-checks the identity") {
  cli::GlobalOptions opts;
  opts.parallelism = 2;
  cli::CountArgs args;
  args.k = 2;
  args.n = 20;
  args.s = 100.0;
  args.L = 20000;
  int code = 0;
  const std::string payload = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_count(args, opts, out);
  });
  CHECK(code == 0);
  CHECK(payload.find("identity_within_tolerance: yes") != std::string::npos);
  CHECK(payload.find("trivial_count: 16") != std::string::npos);  // 4^2
}

TEST_CASE("gaps command serializes the report") {
  cli::GlobalOptions opts;
  cli::GapsArgs args;
  args.k = 1;
  args.n = 4;
  args.min_distance = true;
  int code = 0;
  const std::string payload = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_gaps(args, opts, out);
  });
  CHECK(code == 0);
  const auto j = nlohmann::json::parse(payload);
  CHECK(j.at("point_count").get<std::string>() == "3");
  // smallest ||sqrt(a)|| over non-squares a <= 4 is at a = 3
  CHECK(j.at("min_distance_tuple")[0].get<std::string>() == "3");
}

TEST_CASE("expsum command emits the CSV table") {
  cli::GlobalOptions opts;
  cli::ExpSumArgs args;
  args.n = 100;
  args.ell_grid = "0,1,10";
  int code = 0;
  const std::string payload = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_expsum(args, opts, out);
  });
  CHECK(code == 0);
  CHECK(payload.rfind("ell,n,re,im,abs,err_radius,vdc_shape,eph_shape\n",
                      0) == 0);
}

TEST_CASE("verify-known reproduces every stated example") {
  const auto rows = cli::verify_known_rows(128);
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    INFO(row.name, ": ", row.computed);
    CHECK(row.pass);
  }
  cli::GlobalOptions opts;
  int code = 0;
  const std::string payload = run_to_string(&code, [&](std::ostream& out) {
    return cli::run_verify_known(opts, out);
  });
  CHECK(code == 0);
  CHECK(payload.find("FAIL") == std::string::npos);
  CHECK(payload.find("all known examples reproduced") != std::string::npos);
}

TEST_CASE("installed binary smoke test") {
  const std::string cli = SQRTSUM_CLI_PATH;
  CHECK(std::system((cli + " verify-known > /dev/null").c_str()) == 0);
  CHECK(std::system((cli + " eval \"+3 +20 +23\" > /dev/null").c_str()) == 0);
  CHECK(std::system((cli + " decide \"+2 +8\" > /dev/null").c_str()) == 0);
  CHECK(std::system(
            (cli + " eval \"+0\" > /dev/null 2> /dev/null").c_str()) != 0);
  CHECK(std::system((cli + " gaps --k 1 --n 4 > /dev/null").c_str()) == 0);
}
