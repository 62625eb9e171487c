#pragma once

#include <string>
#include <vector>

#include "hss/geometry.hpp"

namespace hss {

/// Link scheduling result: subcarrier and satellite per SU, subcarrier per CU,
/// and the per-subcarrier clusters U_k (SUs) and V_k (CUs).
struct ScheduleSolution {
  std::vector<int> su_subcarrier;  // [u] -> k
  std::vector<int> su_satellite;   // [u] -> j
  std::vector<int> cu_subcarrier;  // [cu] -> k (within the group of its BS colour)
  std::vector<std::vector<int>> su_clusters;  // [k] -> SUs
  std::vector<std::vector<int>> cu_clusters;  // [k] -> CUs

  // Diagnostics.
  int fine_iterations = 0;  // max over coarse groups of the refinement rounds
  std::vector<int> infeasible_cus;  // CUs assigned through a big-M column

  /// Rebuilds su_clusters / cu_clusters from the per-link maps; negative entries are skipped.
  void rebuild_clusters(int subcarriers);
};

/// First subcarrier of the group allocated to BS colour r.
inline int first_subcarrier(const NetworkConfig& cfg, int color) { return color * cfg.subcarriers_per_bs(); }

/// Checks every cardinality constraint: one subcarrier per SU with
/// exactly N'_s SUs per subcarrier, one subcarrier per CU from its BS group
/// with exactly N'_c CUs per (BS, subcarrier), one satellite per SU.
/// Returns an empty string when valid, otherwise a description of the first violation.
std::string audit_schedule(const Scenario& scenario, const ScheduleSolution& schedule);

}  // namespace hss
