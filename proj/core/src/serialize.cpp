#include "hss/serialize.hpp"

#include <nlohmann/json.hpp>

namespace hss {

std::string scenario_to_json(const Scenario& sc) {
  nlohmann::json j;
  j["seed"] = sc.seed;
  j["reuse_factor"] = sc.config.reuse_factor;
  j["area_center_m"] = {sc.area_center.x, sc.area_center.y};
  j["area_radius_m"] = sc.area_radius_m;
  for (const auto& s : sc.satellites)
    j["satellites"].push_back({{"lon_deg", s.subpoint.lon_deg},
                               {"lat_deg", s.subpoint.lat_deg},
                               {"position_m", {s.position.x, s.position.y, s.position.z}}});
  for (const auto& b : sc.base_stations)
    j["base_stations"].push_back({{"position_m", {b.position.x, b.position.y}}, {"frc", b.frc}, {"color", b.color}});
  for (const auto& c : sc.cus)
    j["cus"].push_back({{"position_m", {c.center.x, c.center.y}}, {"bs", c.serving_bs}, {"speed_mps", c.speed_mps}});
  for (const auto& s : sc.sus)
    j["sus"].push_back({{"position_m", {s.center.x, s.center.y}}, {"speed_mps", s.speed_mps}});
  return j.dump();
}

std::string scheme_output_to_json(const Scenario& sc, const SchemeOutput& out) {
  nlohmann::json j;
  j["scheme"] = scheme_name(out.scheme);
  j["reuse_factor"] = sc.config.reuse_factor;
  j["su_subcarrier"] = out.schedule.su_subcarrier;
  j["su_satellite"] = out.schedule.su_satellite;
  if (!out.su_slice.empty()) j["su_slice"] = out.su_slice;
  j["cu_subcarrier"] = out.schedule.cu_subcarrier;
  j["su_power_w"] = out.su_power_w;
  j["qos_violated"] = out.qos_violated;
  j["interference_infeasible_cus"] = out.schedule.infeasible_cus;
  j["sum_rate_bps"] = out.sum_bps;
  j["cu_sum_rate_bps"] = out.cu_sum_bps;
  j["su_sum_rate_bps"] = out.su_sum_bps;
  return j.dump();
}

void write_feature_csv(std::ostream& os, const FeatureTable& table, std::span<const int> satellite_of_su) {
  const Scenario& sc = table.scenario();
  const NetworkConfig& cfg = sc.config;
  os << "su,satellite,cu,bs,frc,color,v,su_gain_term_bps,cu_gain_term_bps,interference_infeasible\n";
  const auto old_precision = os.precision(17);
  for (int u = 0; u < cfg.sus; ++u) {
    for (int j = 0; j < cfg.satellites; ++j) {
      if (!satellite_of_su.empty() && satellite_of_su[static_cast<std::size_t>(u)] != j) continue;
      for (int cu = 0; cu < cfg.total_cus(); ++cu) {
        const int bs = sc.bs_of_cu(cu);
        const auto& b = sc.base_stations[static_cast<std::size_t>(bs)];
        const FeatureBlock f = table.block(u, j, cu);
        os << u << ',' << j << ',' << cu << ',' << bs << ',' << b.frc << ',' << b.color << ','
           << cu - bs * cfg.cus_per_bs << ',' << f.su_gain_term << ',' << f.cu_gain_term << ','
           << (f.interference_infeasible ? 1 : 0) << '\n';
      }
    }
  }
  os.precision(old_precision);
}

}  // namespace hss
