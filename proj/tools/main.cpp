#include <CLI11.hpp>

#include <iostream>

#include "sqrtsum/cli.hpp"

using namespace sqrtsum;

int main(int argc, char** argv) {
  CLI::App app{
      "sqrtsum - certified near-integer analysis of sums of square roots"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::GlobalOptions opts;
  app.add_option("-p,--precision-bits", opts.precision_bits,
                 "working precision in bits (default 128)")
      ->check(CLI::Range(std::int64_t{32}, std::int64_t{1} << 20));
  app.add_option("-j,--threads", opts.parallelism,
                 "worker threads (default: SQRTSUM_THREADS or core count)")
      ->check(CLI::PositiveNumber);
  app.add_option("-o,--output", opts.output, "write the payload to this file");
  app.add_option("--format", opts.format,
                 "text or json (expsum and gap histograms are always CSV)")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  std::string terms;
  auto* eval = app.add_subcommand(
      "eval", "certified distance of a signed root sum to the integers");
  eval->add_option("terms", terms, "signed radicands, e.g. \"+3 +20 +23\"")
      ->required();

  auto* decide = app.add_subcommand(
      "decide", "exact integrality and sign of a signed root sum");
  decide->add_option("terms", terms, "signed radicands")->required();

  cli::SearchArgs search_args;
  auto* search =
      app.add_subcommand("search", "find tuples with small ||sum sqrt(a_i)||");
  search
      ->add_option("--method", search_args.method,
                   "exhaustive | mitm | family-k2 | family-k3")
      ->check(CLI::IsMember(
          {"exhaustive", "mitm", "family-k2", "family-k3"}));
  search->add_option("--k", search_args.k, "terms per tuple");
  search->add_option("--n", search_args.n, "radicand bound");
  search->add_option("--threshold", search_args.threshold,
                     "report distances <= this decimal");
  search->add_option("--offset-y", search_args.offset_y,
                     "search near Z + y instead of Z");
  search->add_option("--shards", search_args.shards, "static shard count");
  search->add_option("--limit", search_args.limit,
                     "keep only this many smallest records");
  search->add_option("--resume", search_args.resume_path,
                     "progress file for resumable sharding");

  cli::ExpSumArgs expsum_args;
  auto* expsum = app.add_subcommand(
      "expsum", "exponential sum magnitudes against the bound shapes (CSV)");
  expsum->add_option("--n", expsum_args.n, "summation length");
  expsum->add_option("--ell-grid", expsum_args.ell_grid,
                     "comma-separated frequencies");

  cli::CountArgs count_args;
  auto* count = app.add_subcommand(
      "count", "near-integer counting identity: direct vs Fourier side");
  count->add_option("--k", count_args.k, "terms per tuple");
  count->add_option("--n", count_args.n, "radicand bound");
  count->add_option("--s", count_args.s, "kernel scale");
  count->add_option("--L", count_args.L, "frequency cutoff");
  count->add_option("--offset-y", count_args.offset_y, "target Z + y");

  cli::GapsArgs gaps_args;
  auto* gaps = app.add_subcommand(
      "gaps", "gap structure of {sum sqrt(a_i) mod 1} (JSON)");
  gaps->add_option("--k", gaps_args.k, "terms per tuple");
  gaps->add_option("--n", gaps_args.n, "radicand bound");
  gaps->add_option("--csv", gaps_args.histogram_csv_path,
                   "also write the gap histogram as CSV");
  gaps->add_flag("--min-distance", gaps_args.min_distance,
                 "include the certified minimal nonzero distance");

  auto* verify = app.add_subcommand(
      "verify-known", "re-derive the known record examples and check them");

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval->parsed()) {
      return cli::run_eval(terms, opts, std::cout);
    }
    if (decide->parsed()) {
      return cli::run_decide(terms, opts, std::cout);
    }
    if (search->parsed()) {
      return cli::run_search(search_args, opts, std::cout);
    }
    if (expsum->parsed()) {
      return cli::run_expsum(expsum_args, opts, std::cout);
    }
    if (count->parsed()) {
      return cli::run_count(count_args, opts, std::cout);
    }
    if (gaps->parsed()) {
      return cli::run_gaps(gaps_args, opts, std::cout);
    }
    if (verify->parsed()) {
      return cli::run_verify_known(opts, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
