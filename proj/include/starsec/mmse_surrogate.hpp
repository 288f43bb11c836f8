#pragma once

#include "starsec/rates.hpp"
#include "starsec/scenario.hpp"
#include "starsec/types.hpp"

namespace starsec {

/// Cascaded channels through the surface for both regions.
struct EffectiveChannels {
  PerRegion<CMat> h;  // T_k Theta_k H, Z x N
  PerRegion<CMat> g;  // G_k Theta_k H, M x N
};

EffectiveChannels effective_channels(const ChannelSet& channels, const StarProfile& profile);

/// MMSE auxiliary variables of one region.
///   u1, w1: receive filter and MSE weight of the legitimate user (own stream).
///   u2, w2: receive filter and MSE weight of the eavesdropper for the other
///           user's stream.
///   w3:     matrix weight of the eavesdropper's received covariance.
struct AuxRegion {
  CVec u1;
  double w1 = 1.0;
  CVec u2;
  double w2 = 1.0;
  CMat w3;
};

using AuxState = PerRegion<AuxRegion>;

/// Closed-form maximizers of the MMSE surrogate for fixed beams and profile.
AuxState update_aux(const ChannelSet& channels, const BeamPair& beams, const StarProfile& profile,
                    const SystemConfig& config);

/// Per-region MMSE surrogate of R_b - R_e (nats, no positive-part clamp).
/// For aux from update_aux it equals R_b - R_e; otherwise it is a lower bound.
PerRegion<double> surrogate_terms(const AuxState& aux, const ChannelSet& channels,
                                  const BeamPair& beams, const StarProfile& profile,
                                  const SystemConfig& config);

double surrogate_value(const AuxState& aux, const ChannelSet& channels, const BeamPair& beams,
                       const StarProfile& profile, const SystemConfig& config);

/// The unclamped decomposition g1 + g2 - g3 evaluated with log-dets.
PerRegion<double> logdet_decomposition(const ChannelSet& channels, const BeamPair& beams,
                                       const StarProfile& profile, const SystemConfig& config);

/// Constant part of the surrogate for one region.
double surrogate_constant(const AuxRegion& aux, const SystemConfig& config);

/// Surrogate of region k as -w_k^H A w_k - w_k'^H B w_k' + linear terms + d.
struct BeamQuadRegion {
  CMat a;   // N x N, weights the own beam
  CMat b;   // N x N, weights the other beam
  CVec own_linear;    // W1 * H~_k^H u1, pairs with w_k
  CVec other_linear;  // W2 * G~_k^H u2, pairs with w_k'
  double d = 0.0;
};

using BeamQuadratics = PerRegion<BeamQuadRegion>;

BeamQuadratics beam_quadratics(const AuxState& aux, const ChannelSet& channels,
                               const StarProfile& profile, const SystemConfig& config);

/// Value of sum_k -f(w_k, w_k') for the given quadratics.
double beam_quadratic_value(const BeamQuadratics& quads, const BeamPair& beams);

/// g(theta_k) = theta^H Gamma theta - 2 Re(z^H theta) - d, equal to the
/// negated region-k surrogate as a function of the surface coefficients.
struct RisQuadRegion {
  CMat gamma1;  // own + interfering stream at the legitimate user
  CMat gamma2;  // other stream at the eavesdropper filter
  CMat gamma3;  // eavesdropper covariance weight
  CMat gamma;   // gamma1 + gamma2 + gamma3
  CVec z1;
  CVec z2;
  double d = 0.0;

  CVec z() const { return z1 + z2; }
  double objective(const CVec& theta) const;
  RisQuadRegion scaled(double weight) const;
};

using RisQuadratics = PerRegion<RisQuadRegion>;

/// Assembles Gamma_{k,i} = X_{k,i} (.) Y_{k,i}^T and z_{k,i} with z chosen so
/// that z^H theta = tr(Theta Z).
RisQuadratics ris_quadratics(const AuxState& aux, const ChannelSet& channels,
                             const BeamPair& beams, const SystemConfig& config);

/// sum_k g(theta_k) for the profile's coefficients.
double ris_objective(const RisQuadratics& quads, const StarProfile& profile);

/// The trace form sum_i tr(Theta^H X_i Theta Y_i) - 2 Re tr(Theta Z) - d for
/// one region, assembled from the unvectorized factors.
double ris_trace_form(const AuxRegion& aux, const ChannelSet& channels, const BeamPair& beams,
                      const SystemConfig& config, Region k, const CVec& theta);

/// Per-region weight applied to both quadratics types.
RisQuadratics weighted(const RisQuadratics& quads, const PerRegion<double>& weights);

}  // namespace starsec
