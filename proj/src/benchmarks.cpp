#include "starsec/benchmarks.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace starsec {

namespace {

CMat hermitize(const CMat& x) { return 0.5 * (x + x.adjoint()); }

CMat project_psd(const CMat& x) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(hermitize(x));
  const RVec lambda = eig.eigenvalues().cwiseMax(0.0);
  const CMat& v = eig.eigenvectors();
  return hermitize(v * lambda.cast<cdouble>().asDiagonal() * v.adjoint());
}

// Affine set: diag(X_r)_l + diag(X_t)_l = 1 for l < L, X_k(L, L) = 1.
void project_affine(PerRegion<CMat>& x) {
  CMat& r = x[Region::kReflect];
  CMat& t = x[Region::kTransmit];
  const auto last = r.rows() - 1;
  for (Eigen::Index l = 0; l < last; ++l) {
    const double excess = 0.5 * (r(l, l).real() + t(l, l).real() - 1.0);
    r(l, l) = r(l, l).real() - excess;
    t(l, l) = t(l, l).real() - excess;
  }
  r(last, last) = 1.0;
  t(last, last) = 1.0;
}

}  // namespace

PerRegion<CMat> lifted_objective(const RisQuadratics& quads) {
  PerRegion<CMat> pi;
  for (Region k : kRegions) {
    const auto n = quads[k].gamma.rows();
    CMat m = CMat::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = quads[k].gamma;
    m.topRightCorner(n, 1) = -quads[k].z();
    m.bottomLeftCorner(1, n) = -quads[k].z().adjoint();
    pi[k] = m;
  }
  return pi;
}

SdpSolution solve_star_sdp(const PerRegion<CMat>& pi, const SdpOptions& opts) {
  const auto dim = pi[Region::kReflect].rows();
  SdpSolution sol;
  PerRegion<CMat> z;
  for (Region k : kRegions) {
    z[k] = CMat::Identity(dim, dim) * 0.5;
    z[k](dim - 1, dim - 1) = 1.0;
  }
  const double scale = std::max(pi[Region::kReflect].norm(), pi[Region::kTransmit].norm());
  if (scale == 0.0) {
    sol.phi = z;
    return sol;
  }
  PerRegion<CMat> c;
  PerRegion<CMat> u;
  PerRegion<CMat> x;
  for (Region k : kRegions) {
    c[k] = hermitize(pi[k]) / scale;
    u[k] = CMat::Zero(dim, dim);
  }
  double rho = 1.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    for (Region k : kRegions) x[k] = hermitize(z[k] - u[k] - c[k] / rho);
    project_affine(x);
    double primal = 0.0;
    double dual = 0.0;
    for (Region k : kRegions) {
      const CMat z_prev = z[k];
      z[k] = project_psd(x[k] + u[k]);
      u[k] += x[k] - z[k];
      primal += (x[k] - z[k]).squaredNorm();
      dual += (z[k] - z_prev).squaredNorm();
    }
    sol.primal_residual = std::sqrt(primal);
    sol.dual_residual = rho * std::sqrt(dual);
    sol.iterations = it;
    if (sol.primal_residual <= opts.tolerance && sol.dual_residual <= opts.tolerance) {
      sol.phi = z;
      return sol;
    }
    if (it % 10 == 0) {
      if (sol.primal_residual > 10.0 * sol.dual_residual) {
        rho *= 2.0;
        for (Region k : kRegions) u[k] *= 0.5;
      } else if (sol.dual_residual > 10.0 * sol.primal_residual) {
        rho *= 0.5;
        for (Region k : kRegions) u[k] *= 2.0;
      }
    }
  }
  std::ostringstream msg;
  msg << "solve_star_sdp: no convergence after " << opts.max_iters
      << " iterations (primal residual " << sol.primal_residual << ", dual residual "
      << sol.dual_residual << ")";
  throw ConvergenceError(msg.str());
}

StarProfile sdr_phase_step(const RisQuadratics& quads, const StarProfile& profile,
                           int n_randomizations, Rng& rng, const SdpOptions& opts,
                           SdpSolution* info) {
  if (n_randomizations < 1) throw std::invalid_argument("sdr_phase_step: n_randomizations >= 1");
  const SdpSolution sdp = solve_star_sdp(lifted_objective(quads), opts);
  const auto dim = sdp.phi[Region::kReflect].rows();
  const auto n = dim - 1;

  PerRegion<CMat> factor;  // U Sigma^{1/2}
  for (Region k : kRegions) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(hermitize(sdp.phi[k]));
    const RVec root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    factor[k] = eig.eigenvectors() * root.cast<cdouble>().asDiagonal();
  }

  // Candidates carry the relaxed amplitudes diag(Phi_k), made feasible.
  StarProfile candidate = profile;
  for (Eigen::Index l = 0; l < n; ++l) {
    const double ar = std::max(0.0, sdp.phi[Region::kReflect](l, l).real());
    const double at = std::max(0.0, sdp.phi[Region::kTransmit](l, l).real());
    const double s = ar + at;
    candidate.amp(l, 0) = s > 1.0 ? ar / s : ar;
    candidate.amp(l, 1) = s > 1.0 ? at / s : at;
  }
  StarProfile best = candidate;
  double best_obj = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_randomizations; ++i) {
    bool usable = true;
    for (Region k : kRegions) {
      CVec r(dim);
      for (Eigen::Index j = 0; j < dim; ++j) r(j) = rng.complex_normal();
      const CVec v = factor[k] * r;
      if (v(n) == cdouble(0.0, 0.0)) {
        usable = false;
        continue;
      }
      for (Eigen::Index l = 0; l < n; ++l) {
        candidate.phase(l, index(k)) = wrap_phase(std::arg(v(l) / v(n)));
      }
    }
    if (!usable) continue;
    const double obj = ris_objective(quads, candidate);
    if (obj < best_obj) {
      best_obj = obj;
      best = candidate;
    }
  }
  if (info) {
    *info = sdp;
    info->randomized_objective = best_obj;
  }
  return solve_amplitudes(quads, best);
}

CVec project_coefficient_pairs(const CVec& x) {
  const auto n = x.size() / 2;
  CVec out = x;
  for (Eigen::Index l = 0; l < n; ++l) {
    const double norm = std::sqrt(std::norm(x(l)) + std::norm(x(n + l)));
    if (norm > 1.0) {
      out(l) /= norm;
      out(n + l) /= norm;
    }
  }
  return out;
}

StarProfile relaxed_phase_step(const RisQuadratics& quads, const StarProfile& profile,
                               PgResult* info, const PgOptions& opts) {
  const int n = profile.n_elements();
  const auto& qr = quads[Region::kReflect];
  const auto& qt = quads[Region::kTransmit];
  CVec x(2 * n);
  x << profile.coefficients(Region::kReflect), profile.coefficients(Region::kTransmit);

  auto objective = [&](const CVec& v) {
    return qr.objective(v.head(n)) + qt.objective(v.tail(n));
  };
  auto gradient = [&](const CVec& v) {
    CVec g(2 * n);
    g.head(n) = 2.0 * (qr.gamma * v.head(n) - qr.z());
    g.tail(n) = 2.0 * (qt.gamma * v.tail(n) - qt.z());
    return g;
  };
  const double lip = 2.0 * std::max(max_eigenvalue(qr.gamma), max_eigenvalue(qt.gamma));
  const PgResult res = projected_gradient(x, objective, gradient, project_coefficient_pairs, lip, opts);
  if (info) *info = res;

  StarProfile out = StarProfile::from_coefficients(x.head(n), x.tail(n), profile.phase);
  for (int l = 0; l < n; ++l) {
    const double s = out.amp(l, 0) + out.amp(l, 1);
    if (s > 1.0) {
      out.amp(l, 0) /= s;
      out.amp(l, 1) /= s;
    }
  }
  return out;
}

StarProfile restore_unit_energy(const StarProfile& profile) {
  StarProfile out = profile;
  for (int l = 0; l < profile.n_elements(); ++l) {
    const double s = profile.amp(l, 0) + profile.amp(l, 1);
    if (s > 0.0) {
      out.amp(l, 0) = profile.amp(l, 0) / s;
      out.amp(l, 1) = 1.0 - out.amp(l, 0);
    } else {
      out.amp(l, 0) = 0.5;
      out.amp(l, 1) = 0.5;
    }
  }
  return out;
}

std::string to_string(QcqpRecovery mode) {
  switch (mode) {
    case QcqpRecovery::kRelaxedModuli:
      return "relaxed-moduli";
    case QcqpRecovery::kUnitEnergy:
      return "unit-energy";
    case QcqpRecovery::kPhasesOnly:
      return "phases-only";
  }
  return "relaxed-moduli";
}

QcqpRecovery parse_qcqp_recovery(const std::string& name) {
  for (QcqpRecovery m :
       {QcqpRecovery::kRelaxedModuli, QcqpRecovery::kUnitEnergy, QcqpRecovery::kPhasesOnly}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown qcqp recovery: " + name);
}

StarProfile recover_relaxed(const StarProfile& relaxed, const StarProfile& previous,
                            QcqpRecovery mode) {
  switch (mode) {
    case QcqpRecovery::kRelaxedModuli:
      return relaxed;
    case QcqpRecovery::kUnitEnergy:
      return restore_unit_energy(relaxed);
    case QcqpRecovery::kPhasesOnly: {
      StarProfile out = previous;
      out.phase = relaxed.phase;
      return out;
    }
  }
  return relaxed;
}

BeamPair mrt_beams(const ChannelSet& channels, const StarProfile& profile, double p_watts) {
  const EffectiveChannels eff = effective_channels(channels, profile);
  const auto n = channels.h_bs_ris.cols();
  BeamPair beams = BeamPair::zeros(static_cast<int>(n));
  for (Region k : kRegions) {
    const CMat& h = eff.h[k];
    if (h.norm() == 0.0) continue;
    Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeThinV);
    beams[k] = std::sqrt(p_watts / 2.0) * svd.matrixV().col(0).normalized();
  }
  return beams;
}

}  // namespace starsec
