#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hss/clustering.hpp"
#include "hss/features.hpp"
#include "hss/schedule.hpp"

namespace hss {

/// How a CU's rate gain in a slot is derived from the SUs of the slot.
enum class SlotInterference {
  worst_case,  // one rate at the largest QoS-power interference over the slot
  per_member,  // each member occupies its own time share; gains add up
};

/// CU-to-slot assignment problem for one base station.
struct CuSlotProblem {
  std::vector<int> cus;                       // CU ids of the BS
  std::vector<std::vector<int>> slot_sus;     // SUs sharing each slot
  int slot_capacity = 1;                      // CUs per slot; cus.size() = slots * capacity
  double su_weight = 0.0;                     // multiplies the SU rate gains of the slot
  double cu_weight = 0.0;                     // multiplies the CU rate gain
  SlotInterference mode = SlotInterference::worst_case;
};

struct CuSlotResult {
  std::vector<int> slot_of;      // per entry of `cus`
  std::vector<int> infeasible;   // CU ids placed through a big-M entry
};

/// Builds the value matrix (big-M for slots whose QoS-power interference
/// reaches the threshold) and solves it as a square assignment.
CuSlotResult assign_cus_to_slots(const RateEngine& engine, const PairwiseDeltas& deltas,
                                 std::span<const int> su_satellite, const CuSlotProblem& problem);

/// Value of the big-M penalty used for interference-infeasible pairings.
double big_m(const RateEngine& engine);

/// Per-BS CU scheduling given fixed SU clusters (schedule.su_clusters and
/// su_satellite must be filled). Writes cu_subcarrier, infeasible_cus and cu_clusters.
void schedule_cus(const RateEngine& engine, const PairwiseDeltas& deltas, ScheduleSolution& schedule, int threads = 1);

struct ScheduleOptions {
  int threads = 1;
  FineClusterOptions fine;
};

/// Fine stage for every coarse group: splits group r into K' clusters of
/// N'_s SUs using `sub_vector(u, r)` and maps cluster c to subcarrier r K' + c.
/// Returns the largest iteration count over groups.
int fine_stage(const NetworkConfig& cfg, const std::vector<std::vector<int>>& groups,
               const std::function<std::vector<double>(int u, int r)>& sub_vector, ScheduleSolution& schedule,
               const ScheduleOptions& options = {});

/// Coarse clustering with satellite selection, fine clustering per
/// subcarrier group and per-BS CU scheduling.
ScheduleSolution hierarchical_schedule(const RateEngine& engine, const PairwiseDeltas& deltas,
                                       const ScheduleOptions& options = {});

}  // namespace hss
