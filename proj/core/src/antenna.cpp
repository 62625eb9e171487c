#include "hss/antenna.hpp"

#include <algorithm>
#include <cmath>

namespace hss {

double su_offaxis_gain_dbi(double theta_deg, const AntennaSet& a) {
  const double theta = std::abs(theta_deg);
  if (theta <= 0.5 * a.su_mainlobe_width_deg) return a.su_mainlobe_gain_dbi;
  if (theta < a.su_sidelobe_end_deg) {
    const double g = 32.0 - 25.0 * std::log10(theta);
    return std::clamp(g, a.su_far_sidelobe_dbi, a.su_mainlobe_gain_dbi);
  }
  return a.su_far_sidelobe_dbi;
}

}  // namespace hss
