#pragma once

#include "starsec/scenario.hpp"
#include "starsec/types.hpp"

namespace starsec {

/// Transmit beamformers for the reflect-side and transmit-side users.
struct BeamPair {
  PerRegion<CVec> w;

  CVec& operator[](Region k) { return w[k]; }
  const CVec& operator[](Region k) const { return w[k]; }

  double power() const { return w[Region::kReflect].squaredNorm() + w[Region::kTransmit].squaredNorm(); }

  static BeamPair zeros(int n);
};

/// Per-element energy split and phases. Column 0 is the reflect side,
/// column 1 the transmit side.
struct StarProfile {
  RMat amp;    // L x 2, a_{l,k} in [0, 1], a_{l,r} + a_{l,t} <= 1
  RMat phase;  // L x 2, in [0, 2pi)

  int n_elements() const { return static_cast<int>(amp.rows()); }

  /// theta_k with entries sqrt(a_{l,k}) * exp(j * phase_{l,k}).
  CVec coefficients(Region k) const;
  /// sqrt(a_{l,k}) column.
  RVec sqrt_amplitudes(Region k) const;

  /// Builds a profile from complex coefficient vectors: amp = |theta|^2,
  /// phase = arg(theta). Entries with theta == 0 keep `fallback` phases.
  static StarProfile from_coefficients(const CVec& theta_r, const CVec& theta_t,
                                       const RMat& fallback_phase);
  static StarProfile uniform(int n_elements, double amp_each, double phase = 0.0);

  /// min over elements of 1 - a_r - a_t, also covering a >= 0 and a <= 1.
  double element_slack() const;
};

/// Rates in nats per channel use.
struct RateReport {
  PerRegion<double> r_user{};
  PerRegion<double> r_eve{};
  PerRegion<double> r_secrecy{};
  double sum_secrecy = 0.0;

  double unclamped(Region k) const { return r_user[k] - r_eve[k]; }
  double sum_secrecy_bits() const { return nats_to_bits(sum_secrecy); }
};

/// diag(sqrt(a_{l,k}) exp(j theta_{l,k})).
CMat coefficient_matrix(const StarProfile& profile, Region k);

/// log det(I + S^{-1/2} D S^{-1/2}) for Hermitian D >= 0 and S > 0, i.e.
/// log det(I + D S^{-1}). Throws NumericDegeneracyError when either input is
/// not Hermitian within 1e-8 relative or S is not positive definite.
double log_det_ratio(const CMat& desired, const CMat& interference_plus_noise);

/// Log-determinant of a Hermitian positive definite matrix through Cholesky.
double log_det_hpd(const CMat& x);

double user_rate(const ChannelSet& channels, const BeamPair& beams, const StarProfile& profile,
                 Region k, double noise_w);
double eve_rate(const ChannelSet& channels, const BeamPair& beams, const StarProfile& profile,
                Region k, double noise_w);

RateReport secrecy_report(const ChannelSet& channels, const BeamPair& beams,
                          const StarProfile& profile, const SystemConfig& config);

}  // namespace starsec
