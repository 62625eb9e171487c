#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hss/geometry.hpp"
#include "hss/rng.hpp"

namespace hss {

/// Close-in free-space reference distance model, 1 m reference.
struct PathLossModel {
  double exponent = 2.0;
  double intercept_db = 32.4;
};

/// b + 10 a log10(d / 1 m) + 20 log10(f_c [GHz]). Throws for d < 1 m.
double path_loss_db(double distance_m, double exponent, double intercept_db, double carrier_ghz);

struct ChannelParams {
  PathLossModel cu_bs{2.5, 32.4};
  PathLossModel sat_su{2.0, 32.4};
  PathLossModel cu_su{3.0, 32.4};
  double known_shadow_var_db2 = 3.0;  // variance of s1 [dB]
  double cu_resid_var_max_db2 = 2.0;  // rho_max, BS-CU
  double su_resid_var_max_db2 = 2.0;  // rho_max, SU-satellite
  double cu_speed_ref_mps = 2.0;      // D_ref = speed_ref * interval
  double su_speed_ref_mps = 10.0;
  double rician_k = 10.0;             // linear K-factor of SU-satellite links
  double min_distance_m = 1.0;        // distances are clamped to the reference distance
};

/// Statistical CSI of one link. Interference links carry no residual variance.
struct LinkCsi {
  double path_loss_db = 0.0;
  double known_shadow_db = 0.0;        // s1
  double resid_shadow_var_db2 = 0.0;   // rho, variance of s2 [dB]
  std::optional<double> rician_k;      // SU-satellite links only

  /// l * s1 as a linear power gain.
  double known_gain() const;
};

/// E[|h|^2] = l * s1 * E[s2] * E[|w|^2], with unit-mean small-scale fading.
double mean_power_gain(const LinkCsi& link);

/// Residual shadowing variance for a user moving at `speed` during the interval.
double residual_shadow_variance(double speed_mps, double speed_ref_mps, double rho_max_db2);

struct StatisticalCsi {
  int cus = 0;
  int sus = 0;
  int satellites = 0;
  std::vector<LinkCsi> cu_bs;   // [cu]
  std::vector<LinkCsi> sat_su;  // [u * satellites + j]
  std::vector<LinkCsi> cu_su;   // [cu * sus + u]

  const LinkCsi& serving(int cu) const { return cu_bs[static_cast<std::size_t>(cu)]; }
  const LinkCsi& uplink(int u, int j) const { return sat_su[static_cast<std::size_t>(u * satellites + j)]; }
  const LinkCsi& interference(int cu, int u) const { return cu_su[static_cast<std::size_t>(cu * sus + u)]; }
};

/// Path loss from path centres, known shadowing drawn per link with variance
/// `known_shadow_var_db2`, residual variance from the linear mobility model.
/// Deterministic per (scenario, seed); draws are keyed by F-independent link ids.
StatisticalCsi build_csi(const Scenario& scenario, const ChannelParams& params, std::uint64_t seed);

/// Q joint draws of |h|^2 (linear) per link whose expectation is evaluated by
/// Monte Carlo: the BS-CU and SU-satellite links. Interference links enter
/// only through their mean and are not sampled.
class SampleBank {
 public:
  SampleBank() = default;
  SampleBank(int q, int cus, int sus, int satellites);

  int q() const { return q_; }
  int satellites() const { return satellites_; }

  std::span<const double> serving(int cu) const {
    return {cu_bs_.data() + static_cast<std::size_t>(cu) * q_, static_cast<std::size_t>(q_)};
  }
  std::span<const double> uplink(int u, int j) const {
    return {sat_su_.data() + static_cast<std::size_t>(u * satellites_ + j) * q_, static_cast<std::size_t>(q_)};
  }
  std::span<double> serving_mut(int cu) {
    return {cu_bs_.data() + static_cast<std::size_t>(cu) * q_, static_cast<std::size_t>(q_)};
  }
  std::span<double> uplink_mut(int u, int j) {
    return {sat_su_.data() + static_cast<std::size_t>(u * satellites_ + j) * q_, static_cast<std::size_t>(q_)};
  }

 private:
  int q_ = 0;
  int satellites_ = 0;
  std::vector<double> cu_bs_;
  std::vector<double> sat_su_;
};

/// Fills `out` with draws of l * s1 * s2 * |w|^2 for one link.
///
/// s2 is log-normal with dB-variance rho; |w|^2 is unit-mean exponential
/// (Rayleigh) or |sqrt(k/(k+1)) + sqrt(1/(k+1)) z|^2 (Rician, z ~ CN(0,1)).
/// Each underlying uniform variate is Latin-hypercube stratified over the
/// draws, so every draw has the exact marginal law while the sample mean
/// carries far less Monte Carlo error than independent sampling.
void draw_link_samples(const LinkCsi& link, std::span<double> out, Rng& rng);

/// Independent (unstratified) small-scale power draws, used by the fading tests.
void draw_fading_power_iid(std::optional<double> rician_k, std::span<double> out, Rng& rng);

SampleBank draw_sample_bank(const StatisticalCsi& csi, int q, std::uint64_t seed);

}  // namespace hss
