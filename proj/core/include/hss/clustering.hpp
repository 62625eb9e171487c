#pragma once

#include <span>
#include <vector>

#include "hss/features.hpp"

namespace hss {

struct CoarseClustering {
  std::vector<std::vector<int>> groups;  // [r] -> SUs in ascending order
  std::vector<int> satellite;            // [u] -> selected satellite
  double objective = 0.0;                // total group value of the chosen partition
};

/// Balanced assignment of rows to groups maximizing sum value[u][group(u)],
/// each group receiving exactly `group_size` rows. Solved exactly by
/// duplicating every group into `group_size` columns. Returns group per row.
std::vector<int> balanced_group_assignment(const std::vector<std::vector<double>>& value, int group_size);

/// Coarse stage: splits the SUs into F equal groups (one per subcarrier
/// group) and selects each SU's satellite, maximizing the weighted feature
/// sum. Satellite ties go to the lowest index.
CoarseClustering coarse_cluster(const FeatureTable& table);

struct FineClustering {
  std::vector<std::vector<int>> clusters;  // K' clusters of member ids, ascending
  int iterations = 0;
  double total_distance = 0.0;  // sum of member-to-center L1 distances in the last round
};

struct FineClusterOptions {
  double tolerance = 1e-2;
  int max_iterations = 100;
};

/// Capacity-constrained K-means over L1 distance.
///
/// `vectors[m]` is the feature sub-vector of member `ids[m]`. Seeds are the
/// farthest pair followed by greedy compound-distance picks; each round
/// assigns smallest distances first and closes a cluster at `capacity`
/// members, then moves centers to member means. Stops when the relative
/// change of the total distance is at most `tolerance`.
FineClustering fine_cluster(const std::vector<int>& ids, const std::vector<std::span<const double>>& vectors,
                            int clusters, int capacity, const FineClusterOptions& options = {});

}  // namespace hss
