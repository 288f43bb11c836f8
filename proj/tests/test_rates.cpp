#include <doctest.h>

#include "starsec/rates.hpp"
#include "test_support.hpp"

using namespace starsec;
using namespace starsec::testing;

namespace {

// log(1 + q^H (S + s I)^{-1} q) for 2 x 2 S via the explicit inverse.
double lemma_oracle_2x2(const CVec& q, const CMat& s, double noise) {
  const cdouble a = s(0, 0) + noise, b = s(0, 1), c = s(1, 0), d = s(1, 1) + noise;
  const cdouble det = a * d - b * c;
  const cdouble i00 = d / det, i01 = -b / det, i10 = -c / det, i11 = a / det;
  const cdouble y0 = i00 * q(0) + i01 * q(1);
  const cdouble y1 = i10 * q(0) + i11 * q(1);
  const cdouble quad = std::conj(q(0)) * y0 + std::conj(q(1)) * y1;
  return std::log(1.0 + quad.real());
}

}  // namespace

TEST_SUITE("rates") {

TEST_CASE("coefficient matrix examples") {
  CHECK(coefficient_matrix(StarProfile::uniform(3, 0.0), Region::kReflect).norm() == 0.0);
  const CMat id = coefficient_matrix(StarProfile::uniform(3, 1.0, 0.0), Region::kTransmit);
  CHECK((id - CMat::Identity(3, 3)).norm() < 1e-15);
  const CMat q = coefficient_matrix(StarProfile::uniform(2, 0.25, kTwoPi / 4), Region::kReflect);
  CHECK(std::abs(q(0, 0) - cdouble(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(q(1, 1) - cdouble(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(q(0, 1)) == 0.0);
}

TEST_CASE("profile helpers") {
  Rng rng(4);
  const StarProfile p = random_profile(5, rng);
  CHECK(p.element_slack() >= 0.0);
  const StarProfile back = StarProfile::from_coefficients(
      p.coefficients(Region::kReflect), p.coefficients(Region::kTransmit), p.phase);
  CHECK((back.amp - p.amp).norm() < 1e-14);
  for (Region k : kRegions) {
    CHECK((p.sqrt_amplitudes(k).array().square() - p.amp.col(index(k)).array()).matrix().norm() <
          1e-15);
  }
  CHECK(wrap_phase(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_phase(kTwoPi) == 0.0);
}

TEST_CASE("zero beams or dark surface give zero rates") {
  Rng rng(1);
  const SystemConfig c = unit_config(3, 2, 2, 2, 2);
  const ChannelSet ch = random_channels(c, rng);
  const StarProfile p = random_profile(4, rng);
  BeamPair w = random_beams(3, 1.0, rng);
  BeamPair w0 = w;
  w0[Region::kReflect].setZero();
  CHECK(user_rate(ch, w0, p, Region::kReflect, 1.0) == 0.0);
  CHECK(eve_rate(ch, w0, p, Region::kReflect, 1.0) == 0.0);
  const StarProfile dark = StarProfile::uniform(4, 0.0);
  for (Region k : kRegions) {
    CHECK(user_rate(ch, w, dark, k, 1.0) == 0.0);
    CHECK(eve_rate(ch, w, dark, k, 1.0) == 0.0);
  }
}

TEST_CASE("rank-one rates match the determinant-lemma oracle") {
  Rng rng(2);
  const SystemConfig c = unit_config(3, 2, 2, 2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const ChannelSet ch = random_channels(c, rng);
    const StarProfile p = random_profile(4, rng);
    const BeamPair w = random_beams(3, 1.0, rng);
    const double noise = 0.3 + rng.uniform();
    for (Region k : kRegions) {
      for (int eve = 0; eve < 2; ++eve) {
        const CMat& rx = eve ? ch.g_ris_eve[k] : ch.t_ris_user[k];
        const CMat eff = rx * coefficient_matrix(p, k) * ch.h_bs_ris;
        const CVec q = eff * w[k];
        const CVec qi = eff * w[other(k)];
        const double oracle = lemma_oracle_2x2(q, qi * qi.adjoint(), noise);
        const double got = eve ? eve_rate(ch, w, p, k, noise) : user_rate(ch, w, p, k, noise);
        CHECK(std::abs(got - oracle) <= 1e-10 * std::max(1.0, oracle));
      }
    }
  }
}

TEST_CASE("secrecy clamps identical user and eavesdropper channels to zero") {
  Rng rng(3);
  const SystemConfig c = unit_config(3, 2, 2, 2, 2);
  ChannelSet ch = random_channels(c, rng);
  ch.g_ris_eve = ch.t_ris_user;
  const RateReport r = secrecy_report(ch, random_beams(3, 1.0, rng), random_profile(4, rng), c);
  for (Region k : kRegions) {
    CHECK(r.r_secrecy[k] == 0.0);
    CHECK(r.r_user[k] == doctest::Approx(r.r_eve[k]));
  }
  CHECK(r.sum_secrecy == 0.0);
}

TEST_CASE("zeroed eavesdropper channels give secrecy equal to user rate") {
  Rng rng(5);
  const SystemConfig c = unit_config(3, 2, 3, 2, 2);
  ChannelSet ch = random_channels(c, rng);
  for (Region k : kRegions) ch.g_ris_eve[k].setZero();
  const RateReport r = secrecy_report(ch, random_beams(3, 1.0, rng), random_profile(4, rng), c);
  for (Region k : kRegions) CHECK(r.r_secrecy[k] == r.r_user[k]);
  CHECK(r.sum_secrecy == doctest::Approx(r.r_user[Region::kReflect] + r.r_user[Region::kTransmit]));
  CHECK(r.sum_secrecy_bits() == doctest::Approx(r.sum_secrecy / std::log(2.0)));
}

TEST_CASE("rates are invariant to a global channel phase rotation") {
  Rng rng(6);
  const SystemConfig c = unit_config(4, 3, 2, 3, 2);
  const ChannelSet ch = random_channels(c, rng);
  const StarProfile p = random_profile(6, rng);
  const BeamPair w = random_beams(4, 1.0, rng);
  ChannelSet rot = ch;
  for (Region k : kRegions) {
    rot.t_ris_user[k] *= std::polar(1.0, 0.7);
    rot.g_ris_eve[k] *= std::polar(1.0, -2.1);
  }
  for (Region k : kRegions) {
    CHECK(user_rate(rot, w, p, k, 1.0) == doctest::Approx(user_rate(ch, w, p, k, 1.0)).epsilon(1e-12));
    CHECK(eve_rate(rot, w, p, k, 1.0) == doctest::Approx(eve_rate(ch, w, p, k, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("interference-free user rate grows with beam norm") {
  Rng rng(7);
  const SystemConfig c = unit_config(3, 2, 2, 2, 2);
  const ChannelSet ch = random_channels(c, rng);
  const StarProfile p = random_profile(4, rng);
  BeamPair w = BeamPair::zeros(3);
  const CVec dir = random_vector(3, rng).normalized();
  double prev = -1.0;
  for (double s : {0.0, 0.1, 0.5, 1.0, 2.0, 10.0}) {
    w[Region::kTransmit] = s * dir;
    const double r = user_rate(ch, w, p, Region::kTransmit, 1.0);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("secrecy values are finite and nonnegative") {
  Rng rng(8);
  const SystemConfig c = unit_config(2, 2, 3, 3, 1);
  for (int t = 0; t < 50; ++t) {
    const RateReport r =
        secrecy_report(random_channels(c, rng, 10.0), random_beams(2, 1.0, rng), random_profile(3, rng), c);
    for (Region k : kRegions) {
      CHECK(std::isfinite(r.r_secrecy[k]));
      CHECK(r.r_secrecy[k] >= 0.0);
      CHECK(r.r_secrecy[k] == std::max(0.0, r.unclamped(k)));
    }
  }
}

TEST_CASE("log-det guards") {
  CMat x(2, 2);
  x << 2.0, 1.0, 0.0, 2.0;
  CHECK_THROWS_AS(log_det_hpd(x), NumericDegeneracyError);
  CMat indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(log_det_hpd(indefinite), NumericDegeneracyError);
  CMat d = CMat::Identity(3, 3);
  d(1, 1) = 4.0;
  CHECK(log_det_hpd(d) == doctest::Approx(std::log(4.0)));
}

}
