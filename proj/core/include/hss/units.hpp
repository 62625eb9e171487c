#pragma once

#include <cmath>
#include <numbers>

namespace hss {

// Internal arithmetic is in watts and linear gains; dB appears only at I/O.

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Mean of 10^(X/10) for X ~ N(0, var_db2), X in dB.
inline double lognormal_mean_factor(double var_db2) {
  const double k = std::numbers::ln10 / 10.0;
  return std::exp(k * k * var_db2 / 2.0);
}

}  // namespace hss
