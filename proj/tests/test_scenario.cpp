#include <doctest.h>

#include <cmath>

#include "starsec/scenario.hpp"

using namespace starsec;

TEST_SUITE("scenario") {

TEST_CASE("path loss at the reference distance is rho0") {
  SystemConfig c;
  CHECK(path_loss_linear(1.0, c) == doctest::Approx(1e-3).epsilon(1e-12));
  c.path_loss_exponent = 3.7;
  CHECK(path_loss_linear(1.0, c) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("path loss at 100 m matches the dB-domain evaluation") {
  SystemConfig c;
  const double pl = path_loss_linear(100.0, c);
  const double db = -30.0 - 22.0 * std::log10(100.0);
  CHECK(pl == doctest::Approx(std::pow(10.0, db / 10.0)).epsilon(1e-12));
  CHECK(pl == doctest::Approx(3.981e-8).epsilon(1e-3));
}

TEST_CASE("nonpositive distance is rejected") {
  SystemConfig c;
  CHECK_THROWS_AS(path_loss_linear(0.0, c), std::invalid_argument);
  CHECK_THROWS_AS(path_loss_linear(-2.0, c), std::invalid_argument);
}

TEST_CASE("dBm conversion") {
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
  CHECK(dbm_to_watts(-90.0) == doctest::Approx(1e-12));
}

TEST_CASE("default geometry distances") {
  const SystemConfig c;
  CHECK(distance(c.positions.bs, c.positions.ris) == 100.0);
}

TEST_CASE("config validation") {
  SystemConfig c;
  CHECK_NOTHROW(c.validate());
  c.n_eve_antennas = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SystemConfig{};
  c.ris_grid = {0, 4};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SystemConfig{};
  c.rician_k = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SystemConfig{};
  c.positions.bs[1] = std::nan("");
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("scenario JSON round trip and unknown keys") {
  SystemConfig c;
  c.n_eve_antennas = 6;
  c.ris_grid = {2, 5};
  c.tx_power_dbm = 17.5;
  c.positions.eve_t = {1.0, 2.0, 3.0};
  c.rng_seed = 12345678901234ULL;
  const SystemConfig back = config_from_json_text(config_to_json_text(c));
  CHECK(back.n_eve_antennas == 6);
  CHECK(back.ris_grid == std::array<int, 2>{2, 5});
  CHECK(back.tx_power_dbm == 17.5);
  CHECK(back.positions.eve_t == Position{1.0, 2.0, 3.0});
  CHECK(back.rng_seed == 12345678901234ULL);

  CHECK_THROWS_AS(config_from_json_text(R"({"n_bs_antenas": 4})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text(R"({"positions": {"eve_x": [0, 0, 0]}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text(R"({"positions": {"bs": [0, 0]}})"),
                  std::invalid_argument);
  CHECK_THROWS(config_from_json_text("[1, 2]"));
}

TEST_CASE("array responses have unit-modulus entries") {
  const Position u{0.3, -0.5, std::sqrt(1.0 - 0.09 - 0.25)};
  const CVec a = ula_response(7, 0.5, u);
  const CVec b = upa_response(5, 4, 0.5, u);
  CHECK(b.size() == 20);
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(std::abs(a(i)) == doctest::Approx(1.0));
  for (Eigen::Index i = 0; i < b.size(); ++i) CHECK(std::abs(b(i)) == doctest::Approx(1.0));
  CHECK(std::abs(a(0) - 1.0) < 1e-15);
}

TEST_CASE("channel dimensions and determinism") {
  SystemConfig c;
  c.n_bs_antennas = 3;
  c.n_user_antennas = 2;
  c.n_eve_antennas = 5;
  c.ris_grid = {2, 3};
  const ChannelSet a = generate_channels(c, 77);
  const ChannelSet b = generate_channels(c, 77);
  const ChannelSet d = generate_channels(c, 78);
  CHECK(a.h_bs_ris.rows() == 6);
  CHECK(a.h_bs_ris.cols() == 3);
  for (Region k : kRegions) {
    CHECK(a.t_ris_user[k].rows() == 2);
    CHECK(a.t_ris_user[k].cols() == 6);
    CHECK(a.g_ris_eve[k].rows() == 5);
    CHECK(a.g_ris_eve[k].cols() == 6);
    CHECK(a.t_ris_user[k] == b.t_ris_user[k]);
    CHECK(a.g_ris_eve[k] == b.g_ris_eve[k]);
    CHECK(a.t_ris_user[k].allFinite());
  }
  CHECK(a.h_bs_ris == b.h_bs_ris);
  CHECK(a.h_bs_ris != d.h_bs_ris);
}

TEST_CASE("pure line of sight has the deterministic Frobenius norm") {
  SystemConfig c;
  c.rician_k = 1e12;
  const ChannelSet ch = generate_channels(c, 3);
  const auto& p = c.positions;
  auto check = [&](const CMat& x, const Position& a, const Position& b) {
    const double pl = path_loss_linear(distance(a, b), c);
    const double expect = std::sqrt(pl * x.rows() * x.cols());
    CHECK(x.norm() == doctest::Approx(expect).epsilon(1e-3));
  };
  check(ch.h_bs_ris, p.bs, p.ris);
  check(ch.t_ris_user[Region::kReflect], p.ris, p.bob_r);
  check(ch.t_ris_user[Region::kTransmit], p.ris, p.bob_t);
  check(ch.g_ris_eve[Region::kReflect], p.ris, p.eve_r);
  check(ch.g_ris_eve[Region::kTransmit], p.ris, p.eve_t);
}

TEST_CASE("Rayleigh entries have unit normalized variance") {
  SystemConfig c;
  c.rician_k = 0.0;
  const double pl = path_loss_linear(100.0, c);
  double sum = 0.0;
  long count = 0;
  for (std::uint64_t s = 0; count < 100000; ++s) {
    const CMat& h = generate_channels(c, s).h_bs_ris;
    sum += h.squaredNorm() / pl;
    count += h.size();
  }
  CHECK(sum / count == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Rician entries keep mean power equal to the path loss") {
  SystemConfig c;
  c.ris_grid = {2, 2};
  c.n_eve_antennas = 2;
  const double pl = path_loss_linear(distance(c.positions.ris, c.positions.eve_t), c);
  RVec samples(4000);
  for (int s = 0; s < samples.size(); ++s) {
    samples(s) = generate_channels(c, 1000 + s).g_ris_eve[Region::kTransmit].squaredNorm() / (8 * pl);
  }
  const double mean = samples.mean();
  const double sd = std::sqrt((samples.array() - mean).square().sum() / (samples.size() - 1));
  CHECK(std::abs(mean - 1.0) <= 3.0 * sd / std::sqrt(double(samples.size())));
}

TEST_CASE("rng streams") {
  Rng a(5);
  Rng b(5);
  CHECK(a.uniform() == b.uniform());
  Rng s1 = Rng(5).split(1);
  Rng s2 = Rng(5).split(2);
  CHECK(s1.uniform() != s2.uniform());
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  double acc = 0.0;
  Rng r(9);
  for (int i = 0; i < 20000; ++i) acc += std::norm(r.complex_normal());
  CHECK(acc / 20000.0 == doctest::Approx(1.0).epsilon(0.03));
}

}
