#pragma once

#include "starsec/mmse_surrogate.hpp"
#include "starsec/rates.hpp"
#include "starsec/types.hpp"

namespace starsec {

/// Result of min_w w^H M w - 2 Re(b^H w) s.t. ||w||^2 <= P.
struct BallQpSolution {
  CVec w;
  double multiplier = 0.0;  // mu in (M + mu I) w = b
  bool on_boundary = false;
  int bisection_iters = 0;
  double kkt_residual = 0.0;  // ||(M + mu I) w - b||
};

/// Exact solver for a convex quadratic over a Euclidean ball. Uses the
/// eigen-thresholded pseudo-inverse when the unconstrained minimizer exists
/// and is feasible, otherwise bisects the dual variable until the power
/// constraint is met with equality.
BallQpSolution solve_ball_qp(const CMat& m, const CVec& b, double power);

double ball_qp_objective(const CMat& m, const CVec& b, const CVec& w);

/// Stacked (w_r; w_t) form of the weighted beamforming subproblem.
struct StackedBeamProblem {
  CMat m;  // 2N x 2N block diagonal
  CVec b;  // 2N
};

StackedBeamProblem stack_beam_problem(const BeamQuadratics& quads,
                                      const PerRegion<double>& weights);

/// Minimizes sum_k weight_k * f(w_k, w_k') subject to the total power budget.
BeamPair solve_beams(const BeamQuadratics& quads, double p_watts,
                     const PerRegion<double>& weights = {{1.0, 1.0}},
                     BallQpSolution* info = nullptr);

}  // namespace starsec
