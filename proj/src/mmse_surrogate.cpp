#include "starsec/mmse_surrogate.hpp"

#include <cmath>

namespace starsec {

namespace {

CMat hermitize(const CMat& x) { return 0.5 * (x + x.adjoint()); }

CVec hpd_solve(const CMat& a, const CVec& b, const char* what) {
  Eigen::LLT<CMat> llt(hermitize(a));
  if (llt.info() != Eigen::Success) {
    throw NumericDegeneracyError(std::string(what) + ": inversion target is not positive definite");
  }
  return llt.solve(b);
}

CMat hpd_inverse(const CMat& a, const char* what) {
  Eigen::LLT<CMat> llt(hermitize(a));
  if (llt.info() != Eigen::Success) {
    throw NumericDegeneracyError(std::string(what) + ": inversion target is not positive definite");
  }
  const auto n = a.rows();
  return hermitize(llt.solve(CMat::Identity(n, n)));
}

CMat identity(Eigen::Index n) { return CMat::Identity(n, n); }

// Mean-square errors of the three MMSE reformulations at arbitrary aux.
struct Mse {
  double e1;
  double e2;
  CMat e3;
};

Mse mse_at(const AuxRegion& aux, const CMat& h_eff, const CMat& g_eff, const CVec& w_own,
           const CVec& w_other, double noise_user, double noise_eve) {
  const CVec hw = h_eff * w_own;
  const CVec hwo = h_eff * w_other;
  const CVec gw = g_eff * w_own;
  const CVec gwo = g_eff * w_other;
  Mse m;
  m.e1 = std::norm(aux.u1.dot(hw) - 1.0) + std::norm(aux.u1.dot(hwo)) +
         noise_user * aux.u1.squaredNorm();
  m.e2 = std::norm(aux.u2.dot(gwo) - 1.0) + noise_eve * aux.u2.squaredNorm();
  m.e3 = identity(g_eff.rows()) + (gw * gw.adjoint() + gwo * gwo.adjoint()) / noise_eve;
  return m;
}

}  // namespace

EffectiveChannels effective_channels(const ChannelSet& channels, const StarProfile& profile) {
  EffectiveChannels eff;
  for (Region k : kRegions) {
    const CMat theta_h = profile.coefficients(k).asDiagonal() * channels.h_bs_ris;
    eff.h[k] = channels.t_ris_user[k] * theta_h;
    eff.g[k] = channels.g_ris_eve[k] * theta_h;
  }
  return eff;
}

AuxState update_aux(const ChannelSet& channels, const BeamPair& beams, const StarProfile& profile,
                    const SystemConfig& config) {
  const double noise_user = config.noise_user_w();
  const double noise_eve = config.noise_eve_w();
  const EffectiveChannels eff = effective_channels(channels, profile);
  AuxState aux;
  for (Region k : kRegions) {
    const CMat& h = eff.h[k];
    const CMat& g = eff.g[k];
    const CVec hw = h * beams[k];
    const CVec hwo = h * beams[other(k)];
    const CVec gw = g * beams[k];
    const CVec gwo = g * beams[other(k)];
    AuxRegion& a = aux[k];

    const CMat c1 = noise_user * identity(h.rows()) + hw * hw.adjoint() + hwo * hwo.adjoint();
    a.u1 = hpd_solve(c1, hw, "update_aux(u1)");
    const double e1 = std::norm(a.u1.dot(hw) - 1.0) + std::norm(a.u1.dot(hwo)) +
                      noise_user * a.u1.squaredNorm();
    a.w1 = 1.0 / e1;

    const CMat c2 = noise_eve * identity(g.rows()) + gwo * gwo.adjoint();
    a.u2 = hpd_solve(c2, gwo, "update_aux(u2)");
    const double e2 = std::norm(a.u2.dot(gwo) - 1.0) + noise_eve * a.u2.squaredNorm();
    a.w2 = 1.0 / e2;

    const CMat e3 = identity(g.rows()) + (gw * gw.adjoint() + gwo * gwo.adjoint()) / noise_eve;
    a.w3 = hpd_inverse(e3, "update_aux(W3)");
  }
  return aux;
}

double surrogate_constant(const AuxRegion& a, const SystemConfig& config) {
  const double m = static_cast<double>(a.w3.rows());
  return std::log(a.w1) + 1.0 + std::log(a.w2) + 1.0 + log_det_hpd(a.w3) + m -
         a.w1 * (1.0 + config.noise_user_w() * a.u1.squaredNorm()) -
         a.w2 * (1.0 + config.noise_eve_w() * a.u2.squaredNorm()) - a.w3.trace().real();
}

PerRegion<double> surrogate_terms(const AuxState& aux, const ChannelSet& channels,
                                  const BeamPair& beams, const StarProfile& profile,
                                  const SystemConfig& config) {
  const EffectiveChannels eff = effective_channels(channels, profile);
  PerRegion<double> out;
  for (Region k : kRegions) {
    const AuxRegion& a = aux[k];
    const Mse m = mse_at(a, eff.h[k], eff.g[k], beams[k], beams[other(k)], config.noise_user_w(),
                         config.noise_eve_w());
    const double mdim = static_cast<double>(a.w3.rows());
    out[k] = std::log(a.w1) - a.w1 * m.e1 + 1.0 + std::log(a.w2) - a.w2 * m.e2 + 1.0 +
             log_det_hpd(a.w3) - (a.w3 * m.e3).trace().real() + mdim;
  }
  return out;
}

double surrogate_value(const AuxState& aux, const ChannelSet& channels, const BeamPair& beams,
                       const StarProfile& profile, const SystemConfig& config) {
  const auto t = surrogate_terms(aux, channels, beams, profile, config);
  return t[Region::kReflect] + t[Region::kTransmit];
}

PerRegion<double> logdet_decomposition(const ChannelSet& channels, const BeamPair& beams,
                                       const StarProfile& profile, const SystemConfig& config) {
  const double noise_user = config.noise_user_w();
  const double noise_eve = config.noise_eve_w();
  const EffectiveChannels eff = effective_channels(channels, profile);
  PerRegion<double> out;
  for (Region k : kRegions) {
    const CVec hw = eff.h[k] * beams[k];
    const CVec hwo = eff.h[k] * beams[other(k)];
    const CVec gw = eff.g[k] * beams[k];
    const CVec gwo = eff.g[k] * beams[other(k)];
    const auto z = hw.size();
    const auto m = gw.size();
    const double g1 =
        log_det_ratio(hw * hw.adjoint(), noise_user * identity(z) + hwo * hwo.adjoint());
    const double g2 = log_det_hpd(identity(m) + gwo * gwo.adjoint() / noise_eve);
    const double g3 =
        log_det_hpd(identity(m) + (gw * gw.adjoint() + gwo * gwo.adjoint()) / noise_eve);
    out[k] = g1 + g2 - g3;
  }
  return out;
}

BeamQuadratics beam_quadratics(const AuxState& aux, const ChannelSet& channels,
                               const StarProfile& profile, const SystemConfig& config) {
  const double inv_noise_eve = 1.0 / config.noise_eve_w();
  const EffectiveChannels eff = effective_channels(channels, profile);
  BeamQuadratics q;
  for (Region k : kRegions) {
    const AuxRegion& a = aux[k];
    const CMat& h = eff.h[k];
    const CMat& g = eff.g[k];
    const CVec hu = h.adjoint() * a.u1;
    const CVec gu = g.adjoint() * a.u2;
    const CMat user_term = a.w1 * hu * hu.adjoint();
    const CMat eve_cov = inv_noise_eve * g.adjoint() * a.w3 * g;
    q[k].a = hermitize(user_term + eve_cov);
    q[k].b = hermitize(user_term + a.w2 * gu * gu.adjoint() + eve_cov);
    q[k].own_linear = a.w1 * hu;
    q[k].other_linear = a.w2 * gu;
    q[k].d = surrogate_constant(a, config);
  }
  return q;
}

double beam_quadratic_value(const BeamQuadratics& quads, const BeamPair& beams) {
  double total = 0.0;
  for (Region k : kRegions) {
    const auto& q = quads[k];
    const CVec& w = beams[k];
    const CVec& wo = beams[other(k)];
    total += -w.dot(q.a * w).real() - wo.dot(q.b * wo).real() +
             2.0 * q.own_linear.dot(w).real() + 2.0 * q.other_linear.dot(wo).real() + q.d;
  }
  return total;
}

double RisQuadRegion::objective(const CVec& theta) const {
  return theta.dot(gamma * theta).real() - 2.0 * z().dot(theta).real() - d;
}

RisQuadRegion RisQuadRegion::scaled(double weight) const {
  RisQuadRegion s = *this;
  s.gamma1 *= weight;
  s.gamma2 *= weight;
  s.gamma3 *= weight;
  s.gamma *= weight;
  s.z1 *= weight;
  s.z2 *= weight;
  s.d *= weight;
  return s;
}

RisQuadratics weighted(const RisQuadratics& quads, const PerRegion<double>& weights) {
  RisQuadratics out;
  for (Region k : kRegions) out[k] = quads[k].scaled(weights[k]);
  return out;
}

RisQuadratics ris_quadratics(const AuxState& aux, const ChannelSet& channels,
                             const BeamPair& beams, const SystemConfig& config) {
  const double inv_noise_eve = 1.0 / config.noise_eve_w();
  const CMat& h = channels.h_bs_ris;
  RisQuadratics q;
  for (Region k : kRegions) {
    const AuxRegion& a = aux[k];
    const CMat& t = channels.t_ris_user[k];
    const CMat& g = channels.g_ris_eve[k];
    const CVec hw = h * beams[k];
    const CVec hwo = h * beams[other(k)];
    const CVec tu = t.adjoint() * a.u1;
    const CVec gu = g.adjoint() * a.u2;

    const CMat x1 = a.w1 * tu * tu.adjoint();
    const CMat y1 = hw * hw.adjoint() + hwo * hwo.adjoint();
    const CMat x2 = a.w2 * gu * gu.adjoint();
    const CMat y2 = hwo * hwo.adjoint();
    const CMat x3 = inv_noise_eve * g.adjoint() * a.w3 * g;
    const CMat& y3 = y1;

    RisQuadRegion& r = q[k];
    r.gamma1 = hermitize(x1.cwiseProduct(y1.transpose()));
    r.gamma2 = hermitize(x2.cwiseProduct(y2.transpose()));
    r.gamma3 = hermitize(x3.cwiseProduct(y3.transpose()));
    r.gamma = hermitize(r.gamma1 + r.gamma2 + r.gamma3);
    // conj(diag(Z)) with Z1 = H w_k W1 u1^H T_k and Z2 = H w_k' W2 u2^H G_k.
    r.z1 = a.w1 * tu.cwiseProduct(hw.conjugate());
    r.z2 = a.w2 * gu.cwiseProduct(hwo.conjugate());
    r.d = surrogate_constant(a, config);
  }
  return q;
}

double ris_objective(const RisQuadratics& quads, const StarProfile& profile) {
  double total = 0.0;
  for (Region k : kRegions) total += quads[k].objective(profile.coefficients(k));
  return total;
}

double ris_trace_form(const AuxRegion& a, const ChannelSet& channels, const BeamPair& beams,
                      const SystemConfig& config, Region k, const CVec& theta) {
  const CMat& h = channels.h_bs_ris;
  const CMat& t = channels.t_ris_user[k];
  const CMat& g = channels.g_ris_eve[k];
  const CMat w_own = beams[k] * beams[k].adjoint();
  const CMat w_other = beams[other(k)] * beams[other(k)].adjoint();
  const CMat big_theta = theta.asDiagonal();

  const CMat x1 = t.adjoint() * a.u1 * a.w1 * a.u1.adjoint() * t;
  const CMat y1 = h * (w_own + w_other) * h.adjoint();
  const CMat x2 = g.adjoint() * a.u2 * a.w2 * a.u2.adjoint() * g;
  const CMat y2 = h * w_other * h.adjoint();
  const CMat x3 = g.adjoint() * a.w3 * g / config.noise_eve_w();
  const CMat z1 = h * beams[k] * a.w1 * a.u1.adjoint() * t;
  const CMat z2 = h * beams[other(k)] * a.w2 * a.u2.adjoint() * g;

  auto quad = [&](const CMat& x, const CMat& y) {
    return (big_theta.adjoint() * x * big_theta * y).trace().real();
  };
  const double lin = (big_theta * z1).trace().real() + (big_theta * z2).trace().real();
  return quad(x1, y1) + quad(x2, y2) + quad(x3, y1) - 2.0 * lin - surrogate_constant(a, config);
}

}  // namespace starsec
