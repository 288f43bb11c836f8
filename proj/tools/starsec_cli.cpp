// Command-line front end: batch sweeps, summaries and single-run traces.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "starsec/ao_driver.hpp"
#include "starsec/harness.hpp"
#include "starsec/scenario.hpp"

namespace {

std::vector<starsec::Scheme> parse_scheme_list(const std::vector<std::string>& names) {
  std::vector<starsec::Scheme> out;
  for (const auto& raw : names) {
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(starsec::parse_scheme(item));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STAR-RIS secrecy beamforming experiments"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
  std::vector<std::string> schemes;
  bool no_timing = false;
  auto* run = app.add_subcommand("run", "Run an experiment spec and write per-trial records");
  run->add_option("--spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "Records CSV (overrides the spec's output)");
  run->add_option("--seed", seed, "Seed base");
  run->add_option("--trials", trials, "Trials per sweep value")->check(CLI::PositiveNumber);
  run->add_option("--schemes", schemes, "Schemes: proposed,mmse-sdr,mmse-qcqp,mrt");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--no-timing", no_timing, "Write wall_ms as 0");

  std::string in_path;
  std::string summary_out;
  std::uint64_t summary_seed = 2024;
  auto* summ = app.add_subcommand("summarize", "Per-cell mean, standard error and bootstrap CI");
  summ->add_option("--in", in_path, "Records CSV")->required()->check(CLI::ExistingFile);
  summ->add_option("--out", summary_out, "Summary CSV")->required();
  summ->add_option("--seed", summary_seed, "Bootstrap seed");

  std::string scenario_path;
  std::string trace_out;
  std::vector<std::string> trace_schemes{"proposed"};
  std::uint64_t trace_seed = 1;
  auto* trace = app.add_subcommand("trace", "Per-iteration trace of one channel draw");
  trace->add_option("--scenario", scenario_path, "Scenario JSON (default: built-in geometry)")
      ->check(CLI::ExistingFile);
  trace->add_option("--schemes", trace_schemes, "Schemes to trace");
  trace->add_option("--seed", trace_seed, "Channel seed");
  trace->add_option("--out", trace_out, "Trace CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      starsec::ExperimentSpec spec = starsec::load_experiment_spec(spec_path);
      if (seed) spec.seed_base = *seed;
      if (trials) spec.n_trials = *trials;
      if (threads) spec.threads = *threads;
      if (!schemes.empty()) spec.schemes = parse_scheme_list(schemes);
      if (no_timing) spec.record_timing = false;
      if (!out_path.empty()) spec.output = out_path;
      if (spec.output.empty()) throw std::invalid_argument("no output path (use --out)");

      const auto records = starsec::run_experiment(spec);
      std::ostringstream csv;
      starsec::write_records_csv(records, csv);
      starsec::write_file_atomic(spec.output, csv.str());

      int failed = 0;
      for (const auto& r : records) failed += r.ok() ? 0 : 1;
      std::cerr << records.size() << " records, " << failed << " failed -> " << spec.output << '\n';
      return starsec::all_cells_succeeded(records) ? 0 : 1;
    }

    if (*summ) {
      std::ifstream in(in_path);
      const auto records = starsec::read_records_csv(in);
      std::vector<std::string> warnings;
      const auto rows = starsec::summarize(records, summary_seed, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      std::ostringstream csv;
      starsec::write_summary_csv(rows, csv);
      starsec::write_file_atomic(summary_out, csv.str());
      return warnings.empty() ? 0 : 1;
    }

    if (*trace) {
      starsec::SystemConfig config =
          scenario_path.empty() ? starsec::SystemConfig{} : starsec::load_config(scenario_path);
      config.rng_seed = trace_seed;
      const auto channels = starsec::generate_channels(config, trace_seed);
      std::ostringstream csv;
      csv << "scheme,iter,sum_secrecy_bits,surrogate,power,slack_c1,slack_c2\n";
      csv.precision(17);
      int status = 0;
      for (const auto scheme : parse_scheme_list(trace_schemes)) {
        starsec::AoOptions opts;
        opts.scheme = scheme;
        const auto res = starsec::run_ao(channels, config, opts);
        if (res.aborted) {
          std::cerr << starsec::to_string(scheme) << ": " << res.diagnostic << '\n';
          status = 1;
        }
        for (const auto& r : res.trace.rows) {
          csv << starsec::to_string(scheme) << ',' << r.iter << ',' << r.sum_secrecy_bits << ','
              << r.surrogate_bits << ',' << r.beam_power << ',' << r.slack_c1 << ',' << r.slack_c2
              << '\n';
        }
      }
      starsec::write_file_atomic(trace_out, csv.str());
      return status;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
