#include "hss/network_config.hpp"

#include <stdexcept>
#include <string>

namespace hss {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("NetworkConfig: " + what);
}

}  // namespace

void NetworkConfig::validate() const {
  require(satellites >= 1, "at least one satellite is required");
  require(base_stations >= 1, "at least one base station is required");
  require(reuse_factor >= 1, "reuse factor must be >= 1");
  require(subcarriers >= reuse_factor, "reuse factor must not exceed the subcarrier count");
  require(base_stations % reuse_factor == 0, "base stations must be a multiple of the reuse factor");
  require(subcarriers % reuse_factor == 0, "subcarriers must be a multiple of the reuse factor");
  require(cus_per_bs % subcarriers_per_bs() == 0,
          "CUs per BS must be a multiple of the subcarriers per BS");
  require(sus % subcarriers == 0, "SU count must be a multiple of the subcarrier count");
  require(cus_per_subcarrier() > 1, "each subcarrier must carry more than one CU per BS");
  require(sus_per_subcarrier() > 1, "each subcarrier must carry more than one SU");
  require(bandwidth_hz > 0.0, "bandwidth must be positive");
  require(carrier_ghz > 0.0, "carrier frequency must be positive");
  require(interval_s > 0.0, "coordination interval must be positive");
}

NetworkConfig NetworkConfig::reference(int reuse_factor) {
  NetworkConfig cfg;
  cfg.reuse_factor = reuse_factor;
  cfg.validate();
  return cfg;
}

}  // namespace hss
