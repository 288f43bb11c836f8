#include "starsec/ao_driver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "starsec/active_beamforming.hpp"
#include "starsec/mmse_surrogate.hpp"
#include "starsec/passive_beamforming.hpp"

namespace starsec {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

PerRegion<double> active_weights(const RateReport& rates) {
  PerRegion<double> w{{0.0, 0.0}};
  bool any = false;
  for (Region k : kRegions) {
    if (rates.unclamped(k) > 0.0) {
      w[k] = 1.0;
      any = true;
    }
  }
  if (!any) w = PerRegion<double>{{1.0, 1.0}};
  return w;
}

double weighted_surrogate(const AuxState& aux, const ChannelSet& channels, const BeamPair& beams,
                          const StarProfile& profile, const SystemConfig& config,
                          const PerRegion<double>& weights) {
  const auto terms = surrogate_terms(aux, channels, beams, profile, config);
  double s = 0.0;
  for (Region k : kRegions) s += weights[k] * terms[k];
  return s;
}

IterationRecord make_record(int iter, const RateReport& rates, double surrogate_nats,
                            const BeamPair& beams, const StarProfile& profile, double p_watts) {
  IterationRecord r;
  r.iter = iter;
  r.sum_secrecy_bits = rates.sum_secrecy_bits();
  r.surrogate_bits = nats_to_bits(surrogate_nats);
  r.beam_power = beams.power();
  r.slack_c1 = p_watts - r.beam_power;
  r.slack_c2 = profile.element_slack();
  return r;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kProposed: return "proposed";
    case Scheme::kMmseSdr: return "mmse-sdr";
    case Scheme::kMmseQcqp: return "mmse-qcqp";
    case Scheme::kMrt: return "mrt";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "proposed") return Scheme::kProposed;
  if (name == "mmse-sdr") return Scheme::kMmseSdr;
  if (name == "mmse-qcqp") return Scheme::kMmseQcqp;
  if (name == "mrt") return Scheme::kMrt;
  throw std::invalid_argument("unknown scheme: " + name);
}

void IterationTrace::write_csv(std::ostream& out) const {
  out << "iter,sum_secrecy_bits,surrogate,power,slack_c1,slack_c2\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.iter << ',' << r.sum_secrecy_bits << ',' << r.surrogate_bits << ',' << r.beam_power
        << ',' << r.slack_c1 << ',' << r.slack_c2 << '\n';
  }
}

InitialPoint default_initial_point(const ChannelSet& channels, const SystemConfig& config,
                                   std::uint64_t seed) {
  const CMat& h = channels.h_bs_ris;
  const auto n = h.cols();
  CVec dir = CVec::Zero(n);
  if (h.norm() > 0.0) {
    Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeThinV);
    dir = svd.matrixV().col(0).normalized();
  } else {
    dir(0) = 1.0;
  }
  InitialPoint init;
  const double scale = std::sqrt(config.tx_power_w() / 2.0);
  init.beams[Region::kReflect] = scale * dir;
  init.beams[Region::kTransmit] = scale * dir;

  const int l = static_cast<int>(h.rows());
  init.profile = StarProfile::uniform(l, 0.5);
  Rng rng = Rng(seed).split(1);
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < l; ++i) init.profile.phase(i, c) = wrap_phase(kTwoPi * rng.uniform());
  }
  return init;
}

AoResult run_ao(const ChannelSet& channels, const SystemConfig& config, const AoOptions& options,
                const std::optional<InitialPoint>& init) {
  config.validate();
  const double p_watts = config.tx_power_w();
  InitialPoint x = init ? *init : default_initial_point(channels, config, config.rng_seed);
  Rng sdr_rng = Rng(config.rng_seed).split(2);

  AoResult result;
  RateReport rates = secrecy_report(channels, x.beams, x.profile, config);
  {
    const auto weights = active_weights(rates);
    const AuxState aux = update_aux(channels, x.beams, x.profile, config);
    result.trace.rows.push_back(make_record(
        0, rates, weighted_surrogate(aux, channels, x.beams, x.profile, config, weights), x.beams,
        x.profile, p_watts));
  }

  for (int it = 1; it <= config.ao_max_iters; ++it) {
    const auto weights = active_weights(rates);
    InitialPoint next = x;
    double surrogate = 0.0;
    std::array<double, 4> ms{};
    try {
      auto t0 = Clock::now();
      AuxState aux = update_aux(channels, next.beams, next.profile, config);
      ms[0] += ms_since(t0);

      t0 = Clock::now();
      if (options.scheme == Scheme::kMrt) {
        next.beams = mrt_beams(channels, next.profile, p_watts);
      } else {
        next.beams = solve_beams(beam_quadratics(aux, channels, next.profile, config), p_watts,
                                 weights);
      }
      ms[1] += ms_since(t0);

      t0 = Clock::now();
      aux = update_aux(channels, next.beams, next.profile, config);
      RisQuadratics rq = weighted(ris_quadratics(aux, channels, next.beams, config), weights);
      ms[0] += ms_since(t0);

      t0 = Clock::now();
      switch (options.scheme) {
        case Scheme::kProposed:
        case Scheme::kMrt:
          next.profile = mm_phase_step(rq, next.profile);
          break;
        case Scheme::kMmseSdr:
          next.profile =
              sdr_phase_step(rq, next.profile, options.n_randomizations, sdr_rng, options.sdp);
          break;
        case Scheme::kMmseQcqp:
          next.profile = recover_relaxed(relaxed_phase_step(rq, next.profile, nullptr, options.pg),
                                         next.profile, options.qcqp_recovery);
          break;
      }
      ms[2] += ms_since(t0);

      if (options.scheme == Scheme::kProposed || options.scheme == Scheme::kMrt) {
        t0 = Clock::now();
        aux = update_aux(channels, next.beams, next.profile, config);
        rq = weighted(ris_quadratics(aux, channels, next.beams, config), weights);
        ms[0] += ms_since(t0);

        t0 = Clock::now();
        next.profile = solve_amplitudes(rq, next.profile, nullptr, options.pg);
        ms[3] += ms_since(t0);
      }
      surrogate = weighted_surrogate(aux, channels, next.beams, next.profile, config, weights);
    } catch (const std::exception& e) {
      result.aborted = true;
      result.diagnostic = "iteration " + std::to_string(it) + ": " + e.what();
      break;
    }

    const double prev_bits = rates.sum_secrecy_bits();
    RateReport next_rates;
    try {
      next_rates = secrecy_report(channels, next.beams, next.profile, config);
    } catch (const std::exception& e) {
      result.aborted = true;
      result.diagnostic = "iteration " + std::to_string(it) + ": " + e.what();
      break;
    }
    x = std::move(next);
    rates = next_rates;
    IterationRecord rec = make_record(it, rates, surrogate, x.beams, x.profile, p_watts);
    rec.step_ms = ms;
    result.trace.rows.push_back(rec);
    result.iterations = it;

    const double obj = rates.sum_secrecy_bits();
    if (std::abs(obj - prev_bits) <= config.ao_tolerance * std::max(1.0, std::abs(prev_bits))) {
      result.converged = true;
      break;
    }
  }

  result.beams = x.beams;
  result.profile = x.profile;
  result.rates = rates;
  return result;
}

}  // namespace starsec
