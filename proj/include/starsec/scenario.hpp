#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "starsec/types.hpp"

namespace starsec {

using Position = std::array<double, 3>;

struct NodePositions {
  Position ris{0.0, 0.0, 30.0};
  Position bs{100.0, 0.0, 30.0};
  Position bob_r{120.0, 20.0, 0.0};
  Position eve_r{150.0, 150.0, 0.0};
  Position bob_t{-120.0, 0.0, 30.0};
  Position eve_t{-120.0, 50.0, 60.0};
};

/// Scenario constants. Defaults reproduce the reference operating point
/// (N = Z = M = 4, L = 5x4, P = 30 dBm, sigma^2 = -90 dBm).
struct SystemConfig {
  int n_bs_antennas = 4;
  int n_user_antennas = 4;
  int n_eve_antennas = 4;
  std::array<int, 2> ris_grid{5, 4};
  double tx_power_dbm = 30.0;
  double noise_user_dbm = -90.0;
  double noise_eve_dbm = -90.0;
  double path_loss_exponent = 2.2;
  double rician_k = 3.0;
  double ref_path_loss_db = -30.0;
  NodePositions positions{};
  double element_spacing_wavelengths = 0.5;
  double ao_tolerance = 1e-4;
  int ao_max_iters = 100;
  std::uint64_t rng_seed = 1;

  int n_elements() const { return ris_grid[0] * ris_grid[1]; }
  double tx_power_w() const;
  double noise_user_w() const;
  double noise_eve_w() const;

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

double dbm_to_watts(double dbm);
double distance(const Position& a, const Position& b);

/// rho_0 * d^(-alpha) with rho_0 taken from ref_path_loss_db.
double path_loss_linear(double distance_m, const SystemConfig& config);

/// Parses a scenario document (JSON object, keys named after SystemConfig
/// fields). Missing keys keep their defaults; unknown keys throw.
SystemConfig config_from_json_text(const std::string& text);
SystemConfig load_config(const std::filesystem::path& path);
std::string config_to_json_text(const SystemConfig& config);

/// Seedable generator with deterministic child streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent child stream; the parent is not advanced.
  Rng split(std::uint64_t stream) const;

  double uniform();
  double normal();
  /// Circularly-symmetric CN(0, 1) sample.
  cdouble complex_normal();

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct ChannelSet {
  CMat h_bs_ris;                   // L x N
  PerRegion<CMat> t_ris_user;      // Z x L
  PerRegion<CMat> g_ris_eve;       // M x L
};

/// Array response of a uniform linear array along x for unit direction `u`.
CVec ula_response(int n, double spacing_wavelengths, const Position& u);
/// Array response of an Lx x Ly planar array in the x-z plane; element
/// index l = iz * Lx + ix.
CVec upa_response(int lx, int ly, double spacing_wavelengths, const Position& u);

/// Rician channels drawn in the fixed order H, T_r, T_t, G_r, G_t from a
/// stream seeded by `seed`. NLoS entries are drawn row-major.
ChannelSet generate_channels(const SystemConfig& config, std::uint64_t seed);

}  // namespace starsec
