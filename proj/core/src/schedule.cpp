#include "hss/schedule.hpp"

#include <sstream>

namespace hss {

void ScheduleSolution::rebuild_clusters(int subcarriers) {
  su_clusters.assign(static_cast<std::size_t>(subcarriers), {});
  cu_clusters.assign(static_cast<std::size_t>(subcarriers), {});
  for (std::size_t u = 0; u < su_subcarrier.size(); ++u)
    if (su_subcarrier[u] >= 0) su_clusters[static_cast<std::size_t>(su_subcarrier[u])].push_back(static_cast<int>(u));
  for (std::size_t c = 0; c < cu_subcarrier.size(); ++c)
    if (cu_subcarrier[c] >= 0) cu_clusters[static_cast<std::size_t>(cu_subcarrier[c])].push_back(static_cast<int>(c));
}

std::string audit_schedule(const Scenario& sc, const ScheduleSolution& s) {
  const NetworkConfig& cfg = sc.config;
  std::ostringstream err;
  if (static_cast<int>(s.su_subcarrier.size()) != cfg.sus) return "su_subcarrier has the wrong size";
  if (static_cast<int>(s.su_satellite.size()) != cfg.sus) return "su_satellite has the wrong size";
  if (static_cast<int>(s.cu_subcarrier.size()) != cfg.total_cus()) return "cu_subcarrier has the wrong size";

  std::vector<int> su_count(static_cast<std::size_t>(cfg.subcarriers), 0);
  for (int u = 0; u < cfg.sus; ++u) {
    const int k = s.su_subcarrier[static_cast<std::size_t>(u)];
    const int j = s.su_satellite[static_cast<std::size_t>(u)];
    if (k < 0 || k >= cfg.subcarriers) {
      err << "SU " << u << " has no valid subcarrier";
      return err.str();
    }
    if (j < 0 || j >= cfg.satellites) {
      err << "SU " << u << " has no valid satellite";
      return err.str();
    }
    ++su_count[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < cfg.subcarriers; ++k) {
    if (su_count[static_cast<std::size_t>(k)] != cfg.sus_per_subcarrier()) {
      err << "subcarrier " << k << " holds " << su_count[static_cast<std::size_t>(k)] << " SUs, expected "
          << cfg.sus_per_subcarrier();
      return err.str();
    }
  }

  const int kp = cfg.subcarriers_per_bs();
  for (int m = 0; m < cfg.base_stations; ++m) {
    const int first = first_subcarrier(cfg, sc.base_stations[static_cast<std::size_t>(m)].color);
    std::vector<int> count(static_cast<std::size_t>(kp), 0);
    for (int v = 0; v < cfg.cus_per_bs; ++v) {
      const int k = s.cu_subcarrier[static_cast<std::size_t>(sc.cu_index(m, v))];
      if (k < first || k >= first + kp) {
        err << "CU " << sc.cu_index(m, v) << " is outside the subcarrier group of its BS";
        return err.str();
      }
      ++count[static_cast<std::size_t>(k - first)];
    }
    for (int kk = 0; kk < kp; ++kk) {
      if (count[static_cast<std::size_t>(kk)] != cfg.cus_per_subcarrier()) {
        err << "BS " << m << " subcarrier " << first + kk << " holds " << count[static_cast<std::size_t>(kk)]
            << " CUs, expected " << cfg.cus_per_subcarrier();
        return err.str();
      }
    }
  }

  if (!s.su_clusters.empty()) {
    for (int k = 0; k < cfg.subcarriers && k < static_cast<int>(s.su_clusters.size()); ++k)
      for (int u : s.su_clusters[static_cast<std::size_t>(k)])
        if (s.su_subcarrier[static_cast<std::size_t>(u)] != k) return "su_clusters disagree with su_subcarrier";
  }
  if (!s.cu_clusters.empty()) {
    for (int k = 0; k < cfg.subcarriers && k < static_cast<int>(s.cu_clusters.size()); ++k)
      for (int c : s.cu_clusters[static_cast<std::size_t>(k)])
        if (s.cu_subcarrier[static_cast<std::size_t>(c)] != k) return "cu_clusters disagree with cu_subcarrier";
  }
  return {};
}

}  // namespace hss
