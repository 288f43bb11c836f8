#include "starsec/passive_beamforming.hpp"

#include <cmath>
#include <stdexcept>

namespace starsec {

namespace {

constexpr Eigen::Index kDenseEigenLimit = 256;

bool is_dark(const RisQuadRegion& q) {
  return q.gamma.cwiseAbs().maxCoeff() == 0.0 && q.z().cwiseAbs().maxCoeff() == 0.0;
}

double power_iteration(const CMat& gamma) {
  const auto n = gamma.rows();
  CVec x = CVec::Constant(n, cdouble(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    const CVec y = gamma * x;
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    const double next = x.dot(y).real();
    x = y / ny;
    if (std::abs(next - lambda) <= 1e-10 * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace

double max_eigenvalue(const CMat& gamma) {
  if (gamma.rows() != gamma.cols()) throw std::invalid_argument("max_eigenvalue: matrix not square");
  if (gamma.size() == 0) return 0.0;
  const double norm = gamma.norm();
  if (norm > 0.0 && (gamma - gamma.adjoint()).norm() > 1e-8 * norm) {
    throw std::invalid_argument("max_eigenvalue: matrix is not Hermitian");
  }
  if (norm == 0.0) return 0.0;
  const CMat h = 0.5 * (gamma + gamma.adjoint());
  if (h.rows() > kDenseEigenLimit) return std::max(0.0, power_iteration(h));
  Eigen::SelfAdjointEigenSolver<CMat> eig(h, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues().maxCoeff());
}

double mm_majorizer(const RisQuadRegion& quad, const CVec& theta, const CVec& anchor,
                    double lambda_max) {
  const CVec shifted = lambda_max * anchor - quad.gamma * anchor;  // (lambda I - Gamma) anchor
  return lambda_max * theta.squaredNorm() - 2.0 * theta.dot(shifted).real() +
         anchor.dot(shifted).real() - 2.0 * quad.z().dot(theta).real() - quad.d;
}

StarProfile mm_phase_step(const RisQuadratics& quads, const StarProfile& profile) {
  StarProfile out = profile;
  for (Region k : kRegions) {
    const RisQuadRegion& q = quads[k];
    if (is_dark(q)) continue;
    const CVec anchor = profile.coefficients(k);
    const double lambda = max_eigenvalue(q.gamma);
    const CVec dir = q.gamma * anchor - lambda * anchor - q.z();
    for (Eigen::Index l = 0; l < dir.size(); ++l) {
      if (dir(l) == cdouble(0.0, 0.0)) continue;
      out.phase(l, index(k)) = wrap_phase(std::arg(-dir(l)));
    }
  }
  return out;
}

double AmplitudeProblem::objective(const RVec& x) const {
  const auto n = q[Region::kReflect].rows();
  double total = -d;
  for (Region k : kRegions) {
    const auto a = x.segment(index(k) * n, n);
    total += a.dot(q[k] * a) - 2.0 * c[k].dot(a);
  }
  return total;
}

RVec AmplitudeProblem::gradient(const RVec& x) const {
  const auto n = q[Region::kReflect].rows();
  RVec g(2 * n);
  for (Region k : kRegions) {
    const auto a = x.segment(index(k) * n, n);
    g.segment(index(k) * n, n) = 2.0 * (q[k] * a - c[k]);
  }
  return g;
}

AmplitudeProblem amplitude_problem(const RisQuadratics& quads, const StarProfile& profile) {
  AmplitudeProblem p;
  for (Region k : kRegions) {
    const int col = index(k);
    CVec phi(profile.n_elements());
    for (int l = 0; l < profile.n_elements(); ++l) phi(l) = std::polar(1.0, profile.phase(l, col));
    const CMat rotated = phi.conjugate().asDiagonal() * quads[k].gamma * phi.asDiagonal();
    const RMat re = rotated.real();
    p.q[k] = 0.5 * (re + re.transpose());
    p.c[k] = phi.conjugate().cwiseProduct(quads[k].z()).real();
    p.d += quads[k].d;
  }
  return p;
}

RVec project_amplitudes(const RVec& x) {
  const auto n = x.size() / 2;
  RVec out(x.size());
  for (Eigen::Index l = 0; l < n; ++l) {
    double r = std::max(0.0, x(l));
    double t = std::max(0.0, x(n + l));
    const double norm = std::hypot(r, t);
    if (norm > 1.0) {
      r /= norm;
      t /= norm;
    }
    out(l) = r;
    out(n + l) = t;
  }
  return out;
}

StarProfile solve_amplitudes(const RisQuadratics& quads, const StarProfile& profile,
                             AmplitudeSolveInfo* info, const PgOptions& opts) {
  AmplitudeSolveInfo local;
  if (is_dark(quads[Region::kReflect]) && is_dark(quads[Region::kTransmit])) {
    if (info) *info = local;
    return profile;
  }
  const AmplitudeProblem prob = amplitude_problem(quads, profile);
  const int n = profile.n_elements();
  RVec x(2 * n);
  x << profile.sqrt_amplitudes(Region::kReflect), profile.sqrt_amplitudes(Region::kTransmit);

  double lip = 0.0;
  for (Region k : kRegions) {
    Eigen::SelfAdjointEigenSolver<RMat> eig(prob.q[k], Eigen::EigenvaluesOnly);
    lip = std::max(lip, 2.0 * eig.eigenvalues().maxCoeff());
  }
  const PgResult res = projected_gradient(
      x, [&](const RVec& v) { return prob.objective(v); },
      [&](const RVec& v) { return prob.gradient(v); }, project_amplitudes, lip, opts);

  StarProfile out = profile;
  for (int l = 0; l < n; ++l) {
    out.amp(l, 0) = x(l) * x(l);
    out.amp(l, 1) = x(n + l) * x(n + l);
    // x lies on the unit disk up to rounding; keep the sum exactly feasible.
    const double s = out.amp(l, 0) + out.amp(l, 1);
    if (s > 1.0) {
      out.amp(l, 0) /= s;
      out.amp(l, 1) /= s;
    }
  }
  local.iterations = res.iterations;
  local.converged = res.converged;
  local.objective = res.objective;
  if (info) *info = local;
  return out;
}

}  // namespace starsec
