#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "starsec/ao_driver.hpp"
#include "starsec/benchmarks.hpp"
#include "starsec/scenario.hpp"

namespace starsec {

enum class SweepAxis { kNone, kPowerDbm, kRisElements };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct ExperimentSpec {
  SystemConfig base{};
  std::vector<Scheme> schemes{Scheme::kProposed};
  SweepAxis axis = SweepAxis::kNone;
  std::vector<double> values{};
  int n_trials = 100;
  std::uint64_t seed_base = 1;
  std::string output;
  int n_randomizations = 200;
  QcqpRecovery qcqp_recovery = QcqpRecovery::kRelaxedModuli;
  /// When false, wall_ms is written as 0 so reruns are byte-identical.
  bool record_timing = true;
  int threads = 1;

  void validate() const;
};

/// JSON document:
/// {"scenario": "<path>" | {...}, "schemes": [...],
///  "sweep": {"axis": "power_dbm", "values": [...]}, "n_trials": 100,
///  "seed_base": 1, "output": "out.csv", "n_randomizations": 200,
///  "qcqp_recovery": "relaxed-moduli", "record_timing": true, "threads": 1}
/// A relative scenario path resolves against `base_dir`.
ExperimentSpec experiment_spec_from_json_text(const std::string& text,
                                              const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

/// L_x = ceil(sqrt(L)) lowered to the nearest divisor of L, L_y = L / L_x.
/// Throws std::invalid_argument when only the trivial 1 x L split exists.
std::array<int, 2> factor_grid(int n_elements);

SystemConfig apply_sweep(const SystemConfig& base, SweepAxis axis, double value);

struct ResultRecord {
  std::string scheme;
  std::string sweep_axis;
  double sweep_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double sum_secrecy_bits = 0.0;
  double secrecy_r_bits = 0.0;
  double secrecy_t_bits = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// Runs every scheme on the identical channel draw of each
/// (sweep value, trial) cell. Records are ordered by scheme (spec order),
/// sweep value (spec order) and trial.
std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec);

inline constexpr const char* kRecordHeader =
    "scheme,sweep_axis,sweep_value,trial,seed,sum_secrecy_bits,secrecy_r_bits,secrecy_t_bits,"
    "iterations,wall_ms,status";

void write_records_csv(const std::vector<ResultRecord>& records, std::ostream& out);
std::vector<ResultRecord> read_records_csv(std::istream& in);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error (sample standard deviation / sqrt(n)).
SampleStats sample_stats(const std::vector<double>& values);

/// Percentile bootstrap interval of the mean.
std::array<double, 2> bootstrap_mean_interval(const std::vector<double>& values, std::uint64_t seed,
                                              int n_resamples = 2000, double level = 0.95);

struct SummaryRow {
  std::string scheme;
  std::string sweep_axis;
  double sweep_value = 0.0;
  int n = 0;
  double mean_bits = 0.0;
  double se_bits = 0.0;
  double ci_low_bits = 0.0;
  double ci_high_bits = 0.0;
};

/// One row per (scheme, sweep value) with at least one successful record,
/// in first-appearance order. Cells without successes are listed in
/// `warnings`.
std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records,
                                  std::uint64_t seed = 2024,
                                  std::vector<std::string>* warnings = nullptr);

inline constexpr const char* kSummaryHeader =
    "scheme,sweep_axis,sweep_value,n,mean_bits,se_bits,ci_low_bits,ci_high_bits";

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

/// True when every (scheme, sweep value) cell has at least one success.
bool all_cells_succeeded(const std::vector<ResultRecord>& records);

}  // namespace starsec
