#include "starsec/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace starsec {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid config: " + what);
}

bool finite_position(const Position& p) {
  return std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]);
}

Position unit_direction(const Position& from, const Position& to) {
  const double d = distance(from, to);
  if (d <= 0.0) throw std::invalid_argument("coincident node positions");
  return {(to[0] - from[0]) / d, (to[1] - from[1]) / d, (to[2] - from[2]) / d};
}

Position read_position(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("position '" + key + "' must have exactly 3 components");
  }
  Position p{};
  for (int i = 0; i < 3; ++i) p[i] = j.at(i).get<double>();
  return p;
}

// One Rician draw: sqrt(PL) * (sqrt(K/(K+1)) * los + sqrt(1/(K+1)) * nlos).
CMat rician(const CVec& rx_response, const CVec& tx_response, double pl, double k_factor,
            Rng& rng) {
  const auto rows = rx_response.size();
  const auto cols = tx_response.size();
  const double los_w = std::sqrt(k_factor / (k_factor + 1.0));
  const double nlos_w = std::sqrt(1.0 / (k_factor + 1.0));
  CMat x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const cdouble los = rx_response(i) * std::conj(tx_response(j));
      x(i, j) = los_w * los + nlos_w * rng.complex_normal();
    }
  }
  return std::sqrt(pl) * x;
}

}  // namespace

double SystemConfig::tx_power_w() const { return dbm_to_watts(tx_power_dbm); }
double SystemConfig::noise_user_w() const { return dbm_to_watts(noise_user_dbm); }
double SystemConfig::noise_eve_w() const { return dbm_to_watts(noise_eve_dbm); }

void SystemConfig::validate() const {
  require(n_bs_antennas >= 1, "n_bs_antennas >= 1");
  require(n_user_antennas >= 1, "n_user_antennas >= 1");
  require(n_eve_antennas >= 1, "n_eve_antennas >= 1");
  require(ris_grid[0] >= 1 && ris_grid[1] >= 1, "ris_grid entries >= 1");
  require(std::isfinite(tx_power_dbm) && tx_power_w() > 0.0, "tx_power_dbm finite");
  require(std::isfinite(noise_user_dbm) && noise_user_w() > 0.0, "noise_user_dbm finite");
  require(std::isfinite(noise_eve_dbm) && noise_eve_w() > 0.0, "noise_eve_dbm finite");
  require(std::isfinite(path_loss_exponent), "path_loss_exponent finite");
  require(std::isfinite(rician_k) && rician_k >= 0.0, "rician_k >= 0");
  require(std::isfinite(ref_path_loss_db), "ref_path_loss_db finite");
  require(std::isfinite(element_spacing_wavelengths) && element_spacing_wavelengths > 0.0,
          "element_spacing_wavelengths > 0");
  require(ao_tolerance > 0.0, "ao_tolerance > 0");
  require(ao_max_iters >= 1, "ao_max_iters >= 1");
  const auto& p = positions;
  for (const Position* q : {&p.ris, &p.bs, &p.bob_r, &p.eve_r, &p.bob_t, &p.eve_t}) {
    require(finite_position(*q), "positions must be finite");
  }
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double distance(const Position& a, const Position& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double path_loss_linear(double distance_m, const SystemConfig& config) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("path_loss_linear: distance must be > 0");
  const double rho0 = std::pow(10.0, config.ref_path_loss_db / 10.0);
  return rho0 * std::pow(distance_m, -config.path_loss_exponent);
}

SystemConfig config_from_json_text(const std::string& text) {
  const json doc = json::parse(text);
  if (!doc.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  SystemConfig c;
  for (const auto& [key, val] : doc.items()) {
    if (key == "n_bs_antennas") c.n_bs_antennas = val.get<int>();
    else if (key == "n_user_antennas") c.n_user_antennas = val.get<int>();
    else if (key == "n_eve_antennas") c.n_eve_antennas = val.get<int>();
    else if (key == "ris_grid") {
      if (!val.is_array() || val.size() != 2) throw std::invalid_argument("ris_grid must be [Lx, Ly]");
      c.ris_grid = {val.at(0).get<int>(), val.at(1).get<int>()};
    }
    else if (key == "tx_power_dbm") c.tx_power_dbm = val.get<double>();
    else if (key == "noise_user_dbm") c.noise_user_dbm = val.get<double>();
    else if (key == "noise_eve_dbm") c.noise_eve_dbm = val.get<double>();
    else if (key == "path_loss_exponent") c.path_loss_exponent = val.get<double>();
    else if (key == "rician_k") c.rician_k = val.get<double>();
    else if (key == "ref_path_loss_db") c.ref_path_loss_db = val.get<double>();
    else if (key == "element_spacing_wavelengths") c.element_spacing_wavelengths = val.get<double>();
    else if (key == "ao_tolerance") c.ao_tolerance = val.get<double>();
    else if (key == "ao_max_iters") c.ao_max_iters = val.get<int>();
    else if (key == "rng_seed") c.rng_seed = val.get<std::uint64_t>();
    else if (key == "positions") {
      if (!val.is_object()) throw std::invalid_argument("positions must be an object");
      for (const auto& [node, pos] : val.items()) {
        if (node == "ris") c.positions.ris = read_position(pos, node);
        else if (node == "bs") c.positions.bs = read_position(pos, node);
        else if (node == "bob_r") c.positions.bob_r = read_position(pos, node);
        else if (node == "eve_r") c.positions.eve_r = read_position(pos, node);
        else if (node == "bob_t") c.positions.bob_t = read_position(pos, node);
        else if (node == "eve_t") c.positions.eve_t = read_position(pos, node);
        else throw std::invalid_argument("unknown position key: " + node);
      }
    }
    else throw std::invalid_argument("unknown scenario key: " + key);
  }
  c.validate();
  return c;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const SystemConfig& c) {
  const auto& p = c.positions;
  json doc = {
      {"n_bs_antennas", c.n_bs_antennas},
      {"n_user_antennas", c.n_user_antennas},
      {"n_eve_antennas", c.n_eve_antennas},
      {"ris_grid", {c.ris_grid[0], c.ris_grid[1]}},
      {"tx_power_dbm", c.tx_power_dbm},
      {"noise_user_dbm", c.noise_user_dbm},
      {"noise_eve_dbm", c.noise_eve_dbm},
      {"path_loss_exponent", c.path_loss_exponent},
      {"rician_k", c.rician_k},
      {"ref_path_loss_db", c.ref_path_loss_db},
      {"positions",
       {{"ris", p.ris}, {"bs", p.bs}, {"bob_r", p.bob_r},
        {"eve_r", p.eve_r}, {"bob_t", p.bob_t}, {"eve_t", p.eve_t}}},
      {"element_spacing_wavelengths", c.element_spacing_wavelengths},
      {"ao_tolerance", c.ao_tolerance},
      {"ao_max_iters", c.ao_max_iters},
      {"rng_seed", c.rng_seed},
  };
  return doc.dump(2);
}

// SplitMix64 finalizer.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed, 0)) {}

Rng Rng::split(std::uint64_t stream) const { return Rng(mix_seed(seed_, stream + 1)); }

double Rng::uniform() { return uniform_(engine_); }
double Rng::normal() { return normal_(engine_); }

cdouble Rng::complex_normal() {
  constexpr double kHalf = 0.70710678118654752440;
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {kHalf * re, kHalf * im};
}

CVec ula_response(int n, double spacing, const Position& u) {
  CVec a(n);
  for (int i = 0; i < n; ++i) {
    a(i) = std::polar(1.0, kTwoPi * spacing * i * u[0]);
  }
  return a;
}

CVec upa_response(int lx, int ly, double spacing, const Position& u) {
  CVec a(lx * ly);
  for (int iz = 0; iz < ly; ++iz) {
    for (int ix = 0; ix < lx; ++ix) {
      a(iz * lx + ix) = std::polar(1.0, kTwoPi * spacing * (ix * u[0] + iz * u[2]));
    }
  }
  return a;
}

ChannelSet generate_channels(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  const auto& pos = config.positions;
  const double d = config.element_spacing_wavelengths;
  const double k = config.rician_k;
  const int lx = config.ris_grid[0];
  const int ly = config.ris_grid[1];
  Rng rng(seed);

  auto link_to_ris = [&](const Position& node, int n_ant) {
    // node -> RIS: rows are RIS elements.
    const CVec tx = ula_response(n_ant, d, unit_direction(node, pos.ris));
    const CVec rx = upa_response(lx, ly, d, unit_direction(pos.ris, node));
    return rician(rx, tx, path_loss_linear(distance(node, pos.ris), config), k, rng);
  };
  auto link_from_ris = [&](const Position& node, int n_ant) {
    const CVec tx = upa_response(lx, ly, d, unit_direction(pos.ris, node));
    const CVec rx = ula_response(n_ant, d, unit_direction(node, pos.ris));
    return rician(rx, tx, path_loss_linear(distance(node, pos.ris), config), k, rng);
  };

  ChannelSet ch;
  ch.h_bs_ris = link_to_ris(pos.bs, config.n_bs_antennas);
  ch.t_ris_user[Region::kReflect] = link_from_ris(pos.bob_r, config.n_user_antennas);
  ch.t_ris_user[Region::kTransmit] = link_from_ris(pos.bob_t, config.n_user_antennas);
  ch.g_ris_eve[Region::kReflect] = link_from_ris(pos.eve_r, config.n_eve_antennas);
  ch.g_ris_eve[Region::kTransmit] = link_from_ris(pos.eve_t, config.n_eve_antennas);
  return ch;
}

}  // namespace starsec
