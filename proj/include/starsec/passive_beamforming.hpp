#pragma once

#include "starsec/mmse_surrogate.hpp"
#include "starsec/projected_gradient.hpp"
#include "starsec/rates.hpp"
#include "starsec/types.hpp"

namespace starsec {

/// Largest eigenvalue of a Hermitian PSD matrix. Dense eigensolver up to
/// 256 x 256, power iteration above. Throws std::invalid_argument for
/// inputs that are not Hermitian within 1e-8 relative.
double max_eigenvalue(const CMat& gamma);

/// Tangent upper bound of g at `anchor` (lambda = largest eigenvalue of Gamma).
double mm_majorizer(const RisQuadRegion& quad, const CVec& theta, const CVec& anchor,
                    double lambda_max);

/// One closed-form MM step on the phases; amplitudes are left untouched.
StarProfile mm_phase_step(const RisQuadratics& quads, const StarProfile& profile);

struct AmplitudeSolveInfo {
  int iterations = 0;
  bool converged = true;
  double objective = 0.0;
};

/// Real-valued amplitude subproblem for fixed phases:
/// min sum_k a_k^T Q_k a_k - 2 c_k^T a_k - d_k over a_{l,r}^2 + a_{l,t}^2 <= 1,
/// a >= 0, with a_k the square-root amplitudes.
struct AmplitudeProblem {
  PerRegion<RMat> q;
  PerRegion<RVec> c;
  double d = 0.0;

  double objective(const RVec& stacked) const;
  RVec gradient(const RVec& stacked) const;
};

AmplitudeProblem amplitude_problem(const RisQuadratics& quads, const StarProfile& profile);

/// Projects each (a_{l,r}, a_{l,t}) pair onto the nonnegative quarter disk.
RVec project_amplitudes(const RVec& stacked);

/// Solves the amplitude subproblem warm-started from the profile's current
/// amplitudes. The objective never increases relative to the warm start.
StarProfile solve_amplitudes(const RisQuadratics& quads, const StarProfile& profile,
                             AmplitudeSolveInfo* info = nullptr, const PgOptions& opts = {});

}  // namespace starsec
