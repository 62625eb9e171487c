#include "hss/rate_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hss {

RadioParams RadioParams::reference(double bs_power_dbm) {
  RadioParams r;
  r.bs_power_w = dbm_to_watts(bs_power_dbm);
  r.validate();
  return r;
}

void RadioParams::validate() const {
  if (!(bs_power_w > 0.0)) throw std::invalid_argument("RadioParams: P_bs must be positive");
  if (!(su_qos_power_w > 0.0 && su_qos_power_w <= su_max_power_w))
    throw std::invalid_argument("RadioParams: need 0 < P_min_su <= P_su");
  if (!(noise_cu_w > 0.0 && noise_sat_w > 0.0)) throw std::invalid_argument("RadioParams: noise must be positive");
  if (!(interference_threshold_w > 0.0 && interference_threshold_w < noise_cu_w))
    throw std::invalid_argument("RadioParams: need 0 < gamma_th < noise_cu");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("RadioParams: bandwidth must be positive");
}

double ergodic_rate(std::span<const double> snr_per_unit, double x, double bandwidth_hz) {
  if (x <= 0.0) return 0.0;
  double acc = 0.0;
  for (double a : snr_per_unit) acc += std::log1p(a * x);
  return bandwidth_hz * std::numbers::log2e * acc / static_cast<double>(snr_per_unit.size());
}

double ergodic_rate_interfered(std::span<const double> snr, double interference_over_noise, double bandwidth_hz) {
  const double scale = 1.0 / (1.0 + std::max(0.0, interference_over_noise));
  double acc = 0.0;
  for (double s : snr) acc += std::log1p(s * scale);
  return bandwidth_hz * std::numbers::log2e * acc / static_cast<double>(snr.size());
}

RateEngine::RateEngine(const Scenario& scenario, const StatisticalCsi& csi, const SampleBank& bank,
                       const RadioParams& radio, const AntennaSet& antennas)
    : scenario_(&scenario),
      csi_(&csi),
      radio_(radio),
      antennas_(antennas),
      q_(bank.q()),
      sus_(static_cast<std::size_t>(csi.sus)),
      satellites_(static_cast<std::size_t>(csi.satellites)) {
  radio_.validate();
  const auto q = static_cast<std::size_t>(q_);

  const double cu_scale = db_to_linear(antennas.bs_tx_gain_dbi) * radio.bs_power_w / radio.noise_cu_w;
  cu_snr_.resize(static_cast<std::size_t>(csi.cus) * q);
  for (int c = 0; c < csi.cus; ++c) {
    const auto draws = bank.serving(c);
    std::transform(draws.begin(), draws.end(), cu_snr_.begin() + static_cast<std::ptrdiff_t>(c * q),
                   [&](double h) { return h * cu_scale; });
  }

  const double su_scale =
      db_to_linear(antennas.sat_rx_gain_dbi) * db_to_linear(antennas.su_mainlobe_gain_dbi) / radio.noise_sat_w;
  su_snr_.resize(sus_ * satellites_ * q);
  for (int u = 0; u < csi.sus; ++u) {
    for (int j = 0; j < csi.satellites; ++j) {
      const auto draws = bank.uplink(u, j);
      std::transform(draws.begin(), draws.end(),
                     su_snr_.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(u) * satellites_ +
                                                                   static_cast<std::size_t>(j)) * q),
                     [&](double h) { return h * su_scale; });
    }
  }

  // Off-axis angle from the SU boresight (towards satellite j) to each CU.
  interference_gain_.resize(static_cast<std::size_t>(csi.cus) * sus_ * satellites_);
  offaxis_dbi_.resize(interference_gain_.size());
  for (int c = 0; c < csi.cus; ++c) {
    const Vec3 cu_pos = on_ground(scenario.cus[static_cast<std::size_t>(c)].center);
    for (int u = 0; u < csi.sus; ++u) {
      const Vec3 su_pos = on_ground(scenario.sus[static_cast<std::size_t>(u)].center);
      const double mean_gain = mean_power_gain(csi.interference(c, u));
      for (int j = 0; j < csi.satellites; ++j) {
        const double theta =
            off_axis_angle_deg(su_pos, scenario.satellites[static_cast<std::size_t>(j)].position, cu_pos);
        const double g_dbi = su_offaxis_gain_dbi(theta, antennas);
        const std::size_t idx = (static_cast<std::size_t>(c) * sus_ + static_cast<std::size_t>(u)) * satellites_ +
                                static_cast<std::size_t>(j);
        offaxis_dbi_[idx] = g_dbi;
        interference_gain_[idx] = mean_gain * db_to_linear(g_dbi);
      }
    }
  }

  qos_rate_.resize(sus_);
  qos_power_.resize(sus_ * satellites_);
  su_rate_qos_.resize(sus_ * satellites_);
  for (int u = 0; u < csi.sus; ++u) {
    double target = std::numeric_limits<double>::infinity();
    for (int j = 0; j < csi.satellites; ++j) target = std::min(target, su_rate(u, j, radio.su_qos_power_w));
    qos_rate_[static_cast<std::size_t>(u)] = target;
    for (int j = 0; j < csi.satellites; ++j) {
      const std::size_t idx = static_cast<std::size_t>(u) * satellites_ + static_cast<std::size_t>(j);
      qos_power_[idx] = qos_min_power(u, j, target);
      su_rate_qos_[idx] = su_rate(u, j, qos_power_[idx]);
    }
  }

  cu_rate_threshold_.resize(static_cast<std::size_t>(csi.cus));
  for (int c = 0; c < csi.cus; ++c)
    cu_rate_threshold_[static_cast<std::size_t>(c)] = cu_rate(c, radio.interference_threshold_w);
}

double RateEngine::su_rate(int u, int j, double power_w) const {
  return ergodic_rate(su_snr_per_watt(u, j), power_w, radio_.bandwidth_hz);
}

double RateEngine::cu_rate(int cu, double interference_w) const {
  return ergodic_rate_interfered(cu_snr(cu), interference_w / radio_.noise_cu_w, radio_.bandwidth_hz);
}

double RateEngine::offaxis_gain_dbi(int cu, int u, int j) const {
  return offaxis_dbi_[(static_cast<std::size_t>(cu) * sus_ + static_cast<std::size_t>(u)) * satellites_ +
                      static_cast<std::size_t>(j)];
}

double RateEngine::max_power_bound(int cu, int u, int j) const {
  const double g = interference_gain(cu, u, j);
  if (!(g > 0.0)) return radio_.su_max_power_w;
  const double p = radio_.interference_threshold_w / g;
  return std::isfinite(p) ? p : radio_.su_max_power_w;
}

double RateEngine::qos_min_power(int u, int j, double target_bps) const {
  if (target_bps <= 0.0) return 0.0;
  double hi = 10.0 * radio_.su_max_power_w;
  if (su_rate(u, j, hi) < target_bps) throw UnreachableQos("SU rate target unreachable below 10 P_su");
  double lo = 0.0;
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (su_rate(u, j, mid) >= target_bps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double RateEngine::delta_su(int u, int j, double power_w) const {
  return su_rate(u, j, power_w) - su_rate_at_qos(u, j);
}

double RateEngine::delta_cu(int cu, double interference_w) const {
  return cu_rate(cu, interference_w) - cu_rate_at_threshold(cu);
}

int RateEngine::nearest_satellite(int u) const {
  const Vec2 pos = scenario_->sus[static_cast<std::size_t>(u)].center;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < scenario_->satellites.size(); ++j) {
    const double d = slant_distance(pos, scenario_->satellites[j]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

SumRateBreakdown sum_rate_lower_bound(const RateEngine& engine, const ScheduleSolution& schedule,
                                      std::span<const double> su_power_w) {
  const NetworkConfig& cfg = engine.scenario().config;
  SumRateBreakdown out;
  out.cu_rates.resize(static_cast<std::size_t>(cfg.total_cus()));
  out.cu_interference.assign(static_cast<std::size_t>(cfg.total_cus()), 0.0);
  out.su_rates.resize(static_cast<std::size_t>(cfg.sus));

  std::vector<std::vector<int>> sus_on(static_cast<std::size_t>(cfg.subcarriers));
  for (int u = 0; u < cfg.sus; ++u) sus_on[static_cast<std::size_t>(schedule.su_subcarrier[static_cast<std::size_t>(u)])].push_back(u);

  for (int c = 0; c < cfg.total_cus(); ++c) {
    double worst = 0.0;
    for (int u : sus_on[static_cast<std::size_t>(schedule.cu_subcarrier[static_cast<std::size_t>(c)])]) {
      worst = std::max(worst, engine.interference_mean(c, u, schedule.su_satellite[static_cast<std::size_t>(u)],
                                                       su_power_w[static_cast<std::size_t>(u)]));
    }
    out.cu_interference[static_cast<std::size_t>(c)] = worst;
    out.cu_rates[static_cast<std::size_t>(c)] = engine.cu_rate(c, worst);
    out.cu_bps += out.cu_rates[static_cast<std::size_t>(c)];
  }
  out.cu_bps /= cfg.cus_per_subcarrier();

  for (int u = 0; u < cfg.sus; ++u) {
    out.su_rates[static_cast<std::size_t>(u)] =
        engine.su_rate(u, schedule.su_satellite[static_cast<std::size_t>(u)], su_power_w[static_cast<std::size_t>(u)]);
    out.su_bps += out.su_rates[static_cast<std::size_t>(u)];
  }
  out.su_bps /= cfg.sus_per_subcarrier();
  out.total_bps = out.cu_bps + out.su_bps;
  return out;
}

}  // namespace hss
