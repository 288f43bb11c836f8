#include "starsec/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace starsec {

namespace {

CMat hermitian_part(const CMat& x, const char* what) {
  const double norm = x.norm();
  if (norm > 0.0 && (x - x.adjoint()).norm() > 1e-8 * norm) {
    throw NumericDegeneracyError(std::string(what) + ": matrix is not Hermitian");
  }
  return 0.5 * (x + x.adjoint());
}

// Rate of stream k through `link` (rows = receive antennas).
double link_rate(const CMat& link, const StarProfile& profile, const CMat& h,
                 const BeamPair& beams, Region k, double noise_w) {
  const CVec theta = profile.coefficients(k);
  const CMat eff = link * theta.asDiagonal() * h;
  const CVec desired = eff * beams[k];
  const CVec interference = eff * beams[other(k)];
  const auto rx = eff.rows();
  const CMat s = interference * interference.adjoint() + noise_w * CMat::Identity(rx, rx);
  return log_det_ratio(desired * desired.adjoint(), s);
}

}  // namespace

BeamPair BeamPair::zeros(int n) {
  BeamPair b;
  b.w[Region::kReflect] = CVec::Zero(n);
  b.w[Region::kTransmit] = CVec::Zero(n);
  return b;
}

CVec StarProfile::coefficients(Region k) const {
  const int c = index(k);
  CVec theta(amp.rows());
  for (Eigen::Index l = 0; l < amp.rows(); ++l) {
    theta(l) = std::polar(std::sqrt(std::max(0.0, amp(l, c))), phase(l, c));
  }
  return theta;
}

RVec StarProfile::sqrt_amplitudes(Region k) const {
  return amp.col(index(k)).cwiseMax(0.0).cwiseSqrt();
}

StarProfile StarProfile::from_coefficients(const CVec& theta_r, const CVec& theta_t,
                                           const RMat& fallback_phase) {
  StarProfile p;
  const auto n = theta_r.size();
  p.amp.resize(n, 2);
  p.phase.resize(n, 2);
  const CVec* cols[2] = {&theta_r, &theta_t};
  for (int c = 0; c < 2; ++c) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const cdouble v = (*cols[c])(l);
      p.amp(l, c) = std::norm(v);
      p.phase(l, c) = std::abs(v) > 0.0 ? wrap_phase(std::arg(v)) : fallback_phase(l, c);
    }
  }
  return p;
}

StarProfile StarProfile::uniform(int n_elements, double amp_each, double phase) {
  StarProfile p;
  p.amp = RMat::Constant(n_elements, 2, amp_each);
  p.phase = RMat::Constant(n_elements, 2, wrap_phase(phase));
  return p;
}

double StarProfile::element_slack() const {
  double slack = std::numeric_limits<double>::infinity();
  for (Eigen::Index l = 0; l < amp.rows(); ++l) {
    slack = std::min({slack, 1.0 - amp(l, 0) - amp(l, 1), amp(l, 0), amp(l, 1)});
  }
  return slack;
}

CMat coefficient_matrix(const StarProfile& profile, Region k) {
  return profile.coefficients(k).asDiagonal();
}

double log_det_hpd(const CMat& x) {
  const CMat h = hermitian_part(x, "log_det_hpd");
  Eigen::LLT<CMat> llt(h);
  if (llt.info() != Eigen::Success) {
    throw NumericDegeneracyError("log_det_hpd: matrix is not positive definite");
  }
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

double log_det_ratio(const CMat& desired, const CMat& interference_plus_noise) {
  const CMat s = hermitian_part(interference_plus_noise, "log_det_ratio");
  const CMat d = hermitian_part(desired, "log_det_ratio");
  Eigen::LLT<CMat> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NumericDegeneracyError("log_det_ratio: interference-plus-noise is not positive definite");
  }
  // Whitened desired term: L^{-1} D L^{-H}.
  const CMat half = llt.matrixL().solve(d);
  const CMat whitened = llt.matrixL().solve(half.adjoint()).adjoint();
  const auto n = s.rows();
  return log_det_hpd(CMat::Identity(n, n) + 0.5 * (whitened + whitened.adjoint()));
}

double user_rate(const ChannelSet& channels, const BeamPair& beams, const StarProfile& profile,
                 Region k, double noise_w) {
  return link_rate(channels.t_ris_user[k], profile, channels.h_bs_ris, beams, k, noise_w);
}

double eve_rate(const ChannelSet& channels, const BeamPair& beams, const StarProfile& profile,
                Region k, double noise_w) {
  return link_rate(channels.g_ris_eve[k], profile, channels.h_bs_ris, beams, k, noise_w);
}

RateReport secrecy_report(const ChannelSet& channels, const BeamPair& beams,
                          const StarProfile& profile, const SystemConfig& config) {
  RateReport r;
  for (Region k : kRegions) {
    r.r_user[k] = user_rate(channels, beams, profile, k, config.noise_user_w());
    r.r_eve[k] = eve_rate(channels, beams, profile, k, config.noise_eve_w());
    r.r_secrecy[k] = std::max(0.0, r.r_user[k] - r.r_eve[k]);
    r.sum_secrecy += r.r_secrecy[k];
  }
  return r;
}

}  // namespace starsec
