#pragma once

#include <string>

#include "starsec/mmse_surrogate.hpp"
#include "starsec/passive_beamforming.hpp"
#include "starsec/projected_gradient.hpp"
#include "starsec/rates.hpp"
#include "starsec/scenario.hpp"

namespace starsec {

/// Lifted objective [[Gamma_k, -z_k], [-z_k^H, 0]] so that
/// v^H Pi_k v = g(theta_k) + d_k for v = (theta_k; 1).
PerRegion<CMat> lifted_objective(const RisQuadratics& quads);

struct SdpOptions {
  double tolerance = 1e-6;  // primal and dual residual, objective scaled to unit norm
  int max_iters = 50000;
};

struct SdpSolution {
  PerRegion<CMat> phi;  // (L+1) x (L+1), PSD
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double randomized_objective = 0.0;  // best candidate before the amplitude re-fit
};

/// ADMM for  min sum_k tr(Pi_k Phi_k)  s.t. diag(Phi_r)_l + diag(Phi_t)_l = 1,
/// (Phi_k)_{L+1,L+1} = 1, Phi_k PSD. Alternates the affine projection with a
/// PSD-cone projection. Throws ConvergenceError carrying the residuals.
SdpSolution solve_star_sdp(const PerRegion<CMat>& pi, const SdpOptions& opts = {});

/// Semidefinite relaxation of the phase subproblem followed by Gaussian
/// randomization. Candidates take phases arg(v_l / v_{L+1}) and the relaxed
/// amplitudes diag(Phi_k); the best candidate's amplitudes are then
/// re-fitted with solve_amplitudes.
StarProfile sdr_phase_step(const RisQuadratics& quads, const StarProfile& profile,
                           int n_randomizations, Rng& rng, const SdpOptions& opts = {},
                           SdpSolution* info = nullptr);

/// Convex relaxation over complex coefficients with per-element
/// |theta_{l,r}|^2 + |theta_{l,t}|^2 <= 1. The result carries the relaxed
/// moduli as amplitudes.
StarProfile relaxed_phase_step(const RisQuadratics& quads, const StarProfile& profile,
                               PgResult* info = nullptr, const PgOptions& opts = {});

/// Projects each complex (theta_{l,r}, theta_{l,t}) pair onto the unit ball.
CVec project_coefficient_pairs(const CVec& stacked);

/// Rescales each element to a_{l,r} + a_{l,t} = 1 keeping the split ratio
/// and phases; dark elements get an even split.
StarProfile restore_unit_energy(const StarProfile& profile);

/// How the relaxed-QCQP benchmark maps its relaxed coefficients back to a
/// profile.
enum class QcqpRecovery {
  kRelaxedModuli,  // relaxed moduli as amplitudes
  kUnitEnergy,     // relaxed moduli rescaled to a_r + a_t = 1
  kPhasesOnly,     // relaxed phases, amplitudes kept
};

std::string to_string(QcqpRecovery mode);
QcqpRecovery parse_qcqp_recovery(const std::string& name);

StarProfile recover_relaxed(const StarProfile& relaxed, const StarProfile& previous,
                            QcqpRecovery mode);

/// Beamforming along the principal right singular vector of each cascaded
/// user channel, P/2 per user. A zero channel gives a zero beam.
BeamPair mrt_beams(const ChannelSet& channels, const StarProfile& profile, double p_watts);

}  // namespace starsec
