// Command-line driver: load or generate a graph, count its triangles on p
// simulated PEs and print a JSON or CSV report.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tricount/app/run.hpp"

namespace {

constexpr char const* kEnvPrefix = "TRICOUNT_";

auto env(std::string const& name) -> std::string { return kEnvPrefix + name; }

}  // namespace

auto main(int argc, char** argv) -> int {
  using tricount::app::OutputFormat;
  using tricount::runtime::Scheduler;

  tricount::app::RunConfig config;
  std::vector<tricount::PeId> pes{1};
  std::optional<std::string> out_path;
  std::string exchange = "sparse";
  bool no_timing = false;

  CLI::App app{"Distributed triangle counting on a simulated message-passing machine.\n"
               "Every flag can also be set through an environment variable TRICOUNT_<FLAG>."};
  app.option_defaults()->always_capture_default();

  app.add_option("--algo", config.algorithm, "Algorithm")
      ->check(CLI::IsMember({"seq", "ditric", "ditric2", "cetric", "cetric2"}))
      ->envname(env("ALGO"));
  app.add_option("--pes", pes, "PE count; a comma-separated list runs a sweep")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->envname(env("PES"));
  auto* input = app.add_option("--input", config.input, "Edge list file (one 'u v' pair per line)")
                    ->envname(env("INPUT"));
  auto* gen = app.add_option("--gen", config.generator, "Generator spec, e.g. family=gnm,n=65536,m=1048576,seed=42")
                  ->envname(env("GEN"));
  input->excludes(gen);
  app.add_option("--delta", config.delta, "Aggregation threshold in words for every PE")
      ->check(CLI::PositiveNumber)
      ->envname(env("DELTA"));
  app.add_option("--alpha", config.alpha, "Per-message cost")->envname(env("ALPHA"));
  app.add_option("--beta", config.beta, "Per-word cost")->envname(env("BETA"));
  app.add_flag("--lcc", config.lcc, "Compute per-vertex triangle counts and clustering coefficients")
      ->envname(env("LCC"));
  app.add_option("--lcc-out", config.lcc_out, "Write 'vertex delta lcc' lines to this file")
      ->envname(env("LCC_OUT"));
  app.add_flag("--approx", config.approx, "Approximate the cut-graph phase with Bloom filters (cetric only)")
      ->envname(env("APPROX"));
  app.add_option("--fpr", config.fpr, "Bloom filter false-positive rate")->envname(env("FPR"));
  app.add_option("--seed", config.seed, "Seed for generators without an explicit seed and for filters")
      ->envname(env("SEED"));
  std::map<std::string, Scheduler> const schedulers{{"deterministic", Scheduler::deterministic},
                                                    {"threaded", Scheduler::threaded}};
  app.add_option("--scheduler", config.scheduler, "PE scheduler")
      ->transform(CLI::CheckedTransformer(schedulers, CLI::ignore_case))
      ->envname(env("SCHEDULER"));
  app.add_option("--exchange", exchange, "All-to-all flavor for degree and Δ exchange")
      ->check(CLI::IsMember({"sparse", "dense"}))
      ->envname(env("EXCHANGE"));
  std::map<std::string, OutputFormat> const formats{{"json", OutputFormat::json}, {"csv", OutputFormat::csv}};
  app.add_option("--format", config.format, "Report format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->envname(env("FORMAT"));
  app.add_option("--out", out_path, "Write the report here instead of stdout")->envname(env("OUT"));
  app.add_flag("--no-timing", no_timing, "Zero all wall-clock fields so reports are reproducible")
      ->envname(env("NO_TIMING"));

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    return app.exit(e);
  }

  config.exchange = exchange == "dense" ? tricount::algo::ExchangeMode::dense : tricount::algo::ExchangeMode::sparse;
  config.timing = !no_timing;
  config.pes = pes.front();

  try {
    auto const reports = tricount::app::run_sweep(config, pes);
    std::string const text = tricount::app::emit(reports, config.format);
    if (out_path) {
      std::ofstream out(*out_path);
      out << text;
      if (!out) {
        tricount::fail(tricount::ErrorKind::io, "cannot write '" + *out_path + "'");
      }
    } else {
      std::cout << text;
    }
  } catch (tricount::Error const& e) {
    std::cerr << "tricount: " << e.what() << '\n';
    return tricount::app::exit_code(e.kind());
  } catch (std::exception const& e) {
    std::cerr << "tricount: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
