#include "starsec/active_beamforming.hpp"

#include <cmath>
#include <stdexcept>

namespace starsec {

double ball_qp_objective(const CMat& m, const CVec& b, const CVec& w) {
  return w.dot(m * w).real() - 2.0 * b.dot(w).real();
}

BallQpSolution solve_ball_qp(const CMat& m, const CVec& b, double power) {
  if (!(power > 0.0)) throw std::invalid_argument("solve_ball_qp: power must be > 0");
  const auto n = b.size();
  BallQpSolution sol;
  if (b.squaredNorm() == 0.0) {
    sol.w = CVec::Zero(n);
    return sol;
  }

  Eigen::SelfAdjointEigenSolver<CMat> eig(0.5 * (m + m.adjoint()));
  if (eig.info() != Eigen::Success) throw NumericDegeneracyError("solve_ball_qp: eigensolver failed");
  const RVec lambda = eig.eigenvalues().cwiseMax(0.0);
  const CMat& v = eig.eigenvectors();
  const CVec c = v.adjoint() * b;
  const double lambda_max = lambda.maxCoeff();
  const double threshold = 1e-12 * lambda_max;

  auto weights_at = [&](double mu) {
    CVec y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = c(i) / (lambda(i) + mu);
    return y;
  };
  auto power_at = [&](double mu) {
    double p = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) p += std::norm(c(i)) / std::pow(lambda(i) + mu, 2);
    return p;
  };

  double null_energy = 0.0;
  CVec y0 = CVec::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda(i) > threshold) {
      y0(i) = c(i) / lambda(i);
    } else {
      null_energy += std::norm(c(i));
    }
  }
  // b outside range(M) means the unconstrained problem is unbounded below.
  const bool bounded = null_energy <= 1e-24 * b.squaredNorm();
  if (bounded && y0.squaredNorm() <= power) {
    sol.w = v * y0;
    sol.kkt_residual = (m * sol.w - b).norm();
    return sol;
  }

  double hi = 1.0;
  int doublings = 0;
  while (power_at(hi) > power) {
    hi *= 2.0;
    if (++doublings > 200) throw ConvergenceError("solve_ball_qp: failed to bracket multiplier");
  }
  double lo = 0.0;
  double mu = hi;
  int it = 0;
  for (; it < 200; ++it) {
    mu = 0.5 * (lo + hi);
    const double p = power_at(mu);
    if (std::abs(p - power) <= 1e-12 * power) break;
    if (p > power) lo = mu; else hi = mu;
    if (hi - lo <= 1e-300) break;
  }
  if (it == 200 && std::abs(power_at(mu) - power) > 1e-8 * power) {
    throw ConvergenceError("solve_ball_qp: bisection did not converge");
  }
  CVec w = v * weights_at(mu);
  const double wp = w.squaredNorm();
  if (wp > power) w *= std::sqrt(power / wp);
  sol.w = w;
  sol.multiplier = mu;
  sol.on_boundary = true;
  sol.bisection_iters = it;
  sol.kkt_residual = (m * w + mu * w - b).norm();
  return sol;
}

StackedBeamProblem stack_beam_problem(const BeamQuadratics& quads,
                                      const PerRegion<double>& weights) {
  const auto& qr = quads[Region::kReflect];
  const auto& qt = quads[Region::kTransmit];
  const double wr = weights[Region::kReflect];
  const double wt = weights[Region::kTransmit];
  const auto n = qr.a.rows();
  StackedBeamProblem p;
  p.m = CMat::Zero(2 * n, 2 * n);
  p.m.topLeftCorner(n, n) = wr * qr.a + wt * qt.b;
  p.m.bottomRightCorner(n, n) = wt * qt.a + wr * qr.b;
  p.b.resize(2 * n);
  p.b.head(n) = wr * qr.own_linear + wt * qt.other_linear;
  p.b.tail(n) = wt * qt.own_linear + wr * qr.other_linear;
  return p;
}

BeamPair solve_beams(const BeamQuadratics& quads, double p_watts,
                     const PerRegion<double>& weights, BallQpSolution* info) {
  const StackedBeamProblem prob = stack_beam_problem(quads, weights);
  BallQpSolution sol = solve_ball_qp(prob.m, prob.b, p_watts);
  const auto n = quads[Region::kReflect].a.rows();
  BeamPair beams;
  beams[Region::kReflect] = sol.w.head(n);
  beams[Region::kTransmit] = sol.w.tail(n);
  if (info) *info = std::move(sol);
  return beams;
}

}  // namespace starsec
