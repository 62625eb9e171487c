#pragma once

#include <cstdint>

namespace hss {

/// Counts and spectrum parameters of the hybrid network.
///
/// Identities that must hold exactly:
///   base_stations = clusters * reuse_factor
///   subcarriers   = subcarriers_per_bs * reuse_factor
///   cus_per_bs    = cus_per_subcarrier * subcarriers_per_bs
///   sus           = sus_per_subcarrier * subcarriers
/// with cus_per_subcarrier > 1 and sus_per_subcarrier > 1.
struct NetworkConfig {
  int satellites = 3;
  int base_stations = 28;
  int reuse_factor = 4;
  int subcarriers = 12;
  int cus_per_bs = 24;
  int sus = 96;
  double bandwidth_hz = 1.0e6;
  double carrier_ghz = 2.0;
  double interval_s = 10.0;

  // Derived cardinalities; valid only after validate().
  int clusters() const { return base_stations / reuse_factor; }
  int subcarriers_per_bs() const { return subcarriers / reuse_factor; }
  int cus_per_subcarrier() const { return cus_per_bs / subcarriers_per_bs(); }
  int sus_per_subcarrier() const { return sus / subcarriers; }
  int total_cus() const { return base_stations * cus_per_bs; }

  /// Throws std::invalid_argument when an identity is violated.
  void validate() const;

  /// Configuration used for the reference simulations (F = 1 or 4).
  static NetworkConfig reference(int reuse_factor);

  bool operator==(const NetworkConfig&) const = default;
};

}  // namespace hss
