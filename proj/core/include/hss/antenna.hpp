#pragma once

namespace hss {

struct AntennaSet {
  double sat_rx_gain_dbi = 25.0;
  double bs_tx_gain_dbi = 15.0;
  double su_mainlobe_gain_dbi = 18.5;
  double su_mainlobe_width_deg = 61.2;
  double su_dish_diameter_m = 0.5;
  double su_sidelobe_end_deg = 48.0;
  double su_far_sidelobe_dbi = -10.0;
};

/// SU transmit gain (dBi) at off-axis angle `theta_deg` from boresight:
/// main-lobe gain up to half the main-lobe width, 32 - 25 log10(theta)
/// in the near side-lobe region, then the far side-lobe floor.
/// Non-increasing in theta.
double su_offaxis_gain_dbi(double theta_deg, const AntennaSet& antennas = {});

}  // namespace hss
