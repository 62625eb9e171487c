#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "hss/antenna.hpp"
#include "hss/channel.hpp"
#include "hss/geometry.hpp"
#include "hss/schedule.hpp"
#include "hss/units.hpp"

namespace hss {

struct RadioParams {
  double bs_power_w = dbm_to_watts(0.0);        // P_bs per CU
  double su_max_power_w = dbw_to_watts(3.0);     // P_su
  double su_qos_power_w = dbm_to_watts(10.0);    // defines the SU rate target
  double noise_cu_w = dbm_to_watts(-114.0);
  double noise_sat_w = dbm_to_watts(-114.0);
  double interference_threshold_w = dbm_to_watts(-114.0 - 12.2);  // noise - 12.2 dB
  double bandwidth_hz = 1.0e6;

  /// Reference radio parameters with P_bs given in dBm.
  static RadioParams reference(double bs_power_dbm);
  void validate() const;
};

/// Raised when a rate target cannot be met below the bisection bracket.
class UnreachableQos : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// B * mean_q log2(1 + snr_q * x): SU rate for snr per watt and power x.
double ergodic_rate(std::span<const double> snr_per_unit, double x, double bandwidth_hz);

/// B * mean_q log2(1 + snr_q / (1 + interference / noise)): CU rate under interference.
double ergodic_rate_interfered(std::span<const double> snr, double interference_over_noise, double bandwidth_hz);

/// Rates, interference levels and bounds evaluated over the shared sample bank.
///
/// Holds per-draw SNR arrays so that every expectation is a Monte Carlo
/// average over the same Q draws. Immutable after construction.
class RateEngine {
 public:
  RateEngine(const Scenario& scenario, const StatisticalCsi& csi, const SampleBank& bank,
             const RadioParams& radio, const AntennaSet& antennas = {});

  const Scenario& scenario() const { return *scenario_; }
  const StatisticalCsi& csi() const { return *csi_; }
  const RadioParams& radio() const { return radio_; }
  int q() const { return q_; }

  /// |h_q|^2 |T_bs|^2 P_bs / sigma_cu^2 per draw.
  std::span<const double> cu_snr(int cu) const {
    return {cu_snr_.data() + static_cast<std::size_t>(cu) * q_, static_cast<std::size_t>(q_)};
  }
  /// |R|^2 |h_q|^2 |T_su|^2 / sigma_sat^2 per draw (per watt of SU power).
  std::span<const double> su_snr_per_watt(int u, int j) const {
    return {su_snr_.data() + static_cast<std::size_t>(u * satellites_ + j) * q_, static_cast<std::size_t>(q_)};
  }

  double su_rate(int u, int j, double power_w) const;
  double cu_rate(int cu, double interference_w) const;

  /// Mean SU-CU power gain times the SU off-axis gain towards the CU (W/W).
  double interference_gain(int cu, int u, int j) const {
    return interference_gain_[(static_cast<std::size_t>(cu) * sus_ + static_cast<std::size_t>(u)) * satellites_ +
                              static_cast<std::size_t>(j)];
  }
  double offaxis_gain_dbi(int cu, int u, int j) const;
  double interference_mean(int cu, int u, int j, double power_w) const {
    return interference_gain(cu, u, j) * power_w;
  }
  /// Power at which interference_mean reaches the threshold; P_su when the gain underflows.
  double max_power_bound(int cu, int u, int j) const;

  /// Smallest power with su_rate >= target, by bisection on [0, 10 P_su]
  /// to relative tolerance 1e-6. Throws UnreachableQos.
  double qos_min_power(int u, int j, double target_bps) const;

  double qos_rate(int u) const { return qos_rate_[static_cast<std::size_t>(u)]; }
  double qos_power(int u, int j) const { return qos_power_[static_cast<std::size_t>(u * satellites_ + j)]; }

  double delta_su(int u, int j, double power_w) const;
  double delta_cu(int cu, double interference_w) const;

  double cu_rate_at_threshold(int cu) const { return cu_rate_threshold_[static_cast<std::size_t>(cu)]; }
  double su_rate_at_qos(int u, int j) const { return su_rate_qos_[static_cast<std::size_t>(u * satellites_ + j)]; }

  int nearest_satellite(int u) const;

 private:
  const Scenario* scenario_;
  const StatisticalCsi* csi_;
  RadioParams radio_;
  AntennaSet antennas_;
  int q_ = 0;
  std::size_t sus_ = 0;
  std::size_t satellites_ = 0;
  std::vector<double> cu_snr_;
  std::vector<double> su_snr_;
  std::vector<double> interference_gain_;
  std::vector<double> offaxis_dbi_;
  std::vector<double> qos_rate_;
  std::vector<double> qos_power_;
  std::vector<double> su_rate_qos_;
  std::vector<double> cu_rate_threshold_;
};

struct SumRateBreakdown {
  double cu_bps = 0.0;
  double su_bps = 0.0;
  double total_bps = 0.0;
  std::vector<double> cu_rates;         // per CU, before the 1/N'_c weight
  std::vector<double> su_rates;         // per SU, before the 1/N'_s weight
  std::vector<double> cu_interference;  // worst-case mean interference per CU
};

/// Worst-case lower bound of the average sum rate: each CU is charged the
/// largest mean interference over the SUs sharing its subcarrier.
SumRateBreakdown sum_rate_lower_bound(const RateEngine& engine, const ScheduleSolution& schedule,
                                      std::span<const double> su_power_w);

}  // namespace hss
