#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "starsec/benchmarks.hpp"
#include "starsec/rates.hpp"
#include "starsec/scenario.hpp"

namespace starsec {

enum class Scheme { kProposed, kMmseSdr, kMmseQcqp, kMrt };

/// "proposed", "mmse-sdr", "mmse-qcqp", "mrt".
std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

struct IterationRecord {
  int iter = 0;
  double sum_secrecy_bits = 0.0;  // clamped objective
  double surrogate_bits = 0.0;    // weighted MMSE surrogate after the last block
  double beam_power = 0.0;
  std::array<double, 4> step_ms{};  // aux, beams, phases, amplitudes
  double slack_c1 = 0.0;            // P - ||w||^2
  double slack_c2 = 0.0;            // min element slack
};

struct IterationTrace {
  std::vector<IterationRecord> rows;

  /// iter,sum_secrecy_bits,surrogate,power,slack_c1,slack_c2
  void write_csv(std::ostream& out) const;
};

struct InitialPoint {
  BeamPair beams;
  StarProfile profile;
};

/// Equal-power copies of the dominant right singular vector of H, a = 0.5 on
/// both sides, phases uniform in [0, 2pi) from `seed`.
InitialPoint default_initial_point(const ChannelSet& channels, const SystemConfig& config,
                                   std::uint64_t seed);

struct AoOptions {
  Scheme scheme = Scheme::kProposed;
  int n_randomizations = 200;
  QcqpRecovery qcqp_recovery = QcqpRecovery::kRelaxedModuli;
  SdpOptions sdp{};
  PgOptions pg{};
};

struct AoResult {
  BeamPair beams;
  StarProfile profile;
  RateReport rates;
  IterationTrace trace;
  int iterations = 0;
  bool converged = false;
  bool aborted = false;
  std::string diagnostic;
};

/// Alternates aux refresh, beam solve, phase step and amplitude solve until
/// the clamped sum secrecy rate changes by at most
/// ao_tolerance * max(1, |previous|) or ao_max_iters is reached.
///
/// Each outer iteration weights region k by 1 when its current secrecy rate
/// is positive and by 0 otherwise (all ones when neither is positive), so
/// every block step improves a lower bound of the clamped objective.
AoResult run_ao(const ChannelSet& channels, const SystemConfig& config, const AoOptions& options,
                const std::optional<InitialPoint>& init = std::nullopt);

}  // namespace starsec
