#include "hss/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "hss/assignment.hpp"

namespace hss {

std::vector<int> balanced_group_assignment(const std::vector<std::vector<double>>& value, int group_size) {
  const int n = static_cast<int>(value.size());
  if (n == 0) return {};
  const int groups = static_cast<int>(value.front().size());
  if (group_size <= 0 || groups * group_size != n)
    throw std::invalid_argument("balanced_group_assignment: rows must equal groups * group_size");
  DenseMatrix m(n, n);
  for (int u = 0; u < n; ++u) {
    if (static_cast<int>(value[static_cast<std::size_t>(u)].size()) != groups)
      throw std::invalid_argument("balanced_group_assignment: ragged value matrix");
    for (int col = 0; col < n; ++col) m(u, col) = value[static_cast<std::size_t>(u)][static_cast<std::size_t>(col / group_size)];
  }
  const Assignment a = solve_assignment(m, true);
  std::vector<int> group(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) group[static_cast<std::size_t>(u)] = a.col_of_row[static_cast<std::size_t>(u)] / group_size;
  return group;
}

CoarseClustering coarse_cluster(const FeatureTable& table) {
  const NetworkConfig& cfg = table.scenario().config;
  const int F = cfg.reuse_factor;
  const int J = cfg.satellites;
  const double w1 = (static_cast<double>(cfg.sus) / F) / (cfg.clusters() * cfg.cus_per_bs);

  std::vector<std::vector<double>> best(static_cast<std::size_t>(cfg.sus), std::vector<double>(static_cast<std::size_t>(F)));
  std::vector<std::vector<int>> best_sat(static_cast<std::size_t>(cfg.sus), std::vector<int>(static_cast<std::size_t>(F)));
  for (int u = 0; u < cfg.sus; ++u) {
    for (int r = 0; r < F; ++r) {
      double v_best = -1.0;
      int j_best = 0;
      for (int j = 0; j < J; ++j) {
        const double v = table.group_value(u, j, r, w1);
        if (v > v_best) {
          v_best = v;
          j_best = j;
        }
      }
      best[static_cast<std::size_t>(u)][static_cast<std::size_t>(r)] = v_best;
      best_sat[static_cast<std::size_t>(u)][static_cast<std::size_t>(r)] = j_best;
    }
  }

  const auto group = balanced_group_assignment(best, cfg.sus / F);
  CoarseClustering out;
  out.groups.resize(static_cast<std::size_t>(F));
  out.satellite.resize(static_cast<std::size_t>(cfg.sus));
  for (int u = 0; u < cfg.sus; ++u) {
    const auto r = static_cast<std::size_t>(group[static_cast<std::size_t>(u)]);
    out.groups[r].push_back(u);
    out.satellite[static_cast<std::size_t>(u)] = best_sat[static_cast<std::size_t>(u)][r];
    out.objective += best[static_cast<std::size_t>(u)][r];
  }
  return out;
}

namespace {

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += std::abs(x);
  return s;
}

}  // namespace

FineClustering fine_cluster(const std::vector<int>& ids, const std::vector<std::span<const double>>& vectors,
                            int clusters, int capacity, const FineClusterOptions& options) {
  const int n = static_cast<int>(ids.size());
  if (static_cast<int>(vectors.size()) != n) throw std::invalid_argument("fine_cluster: ids/vectors size mismatch");
  if (clusters <= 0 || capacity <= 0 || clusters * capacity != n)
    throw std::invalid_argument("fine_cluster: member count must equal clusters * capacity");

  FineClustering out;
  out.clusters.resize(static_cast<std::size_t>(clusters));
  if (clusters == 1) {
    out.clusters[0] = ids;
    std::sort(out.clusters[0].begin(), out.clusters[0].end());
    return out;
  }
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != dim) throw std::invalid_argument("fine_cluster: vectors differ in length");

  // Seeds: farthest pair, then greedy compound distance.
  std::vector<int> seeds;
  {
    double best = -1.0;
    int a = 0, b = 1;
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        const double d = l1_distance(vectors[static_cast<std::size_t>(x)], vectors[static_cast<std::size_t>(y)]);
        if (d > best) {
          best = d;
          a = x;
          b = y;
        }
      }
    seeds = {a, b};
  }
  // The compound distance is a product of up to K'-1 large factors; ranking
  // by the sum of logs gives the same order without overflow.
  while (static_cast<int>(seeds.size()) < clusters) {
    double best = -std::numeric_limits<double>::infinity();
    int pick = -1;
    for (int x = 0; x < n; ++x) {
      if (std::find(seeds.begin(), seeds.end(), x) != seeds.end()) continue;
      double score = 0.0;
      for (int s : seeds)
        score += std::log(l1_distance(vectors[static_cast<std::size_t>(x)], vectors[static_cast<std::size_t>(s)]));
      if (pick < 0 || score > best) {
        best = score;
        pick = x;
      }
    }
    seeds.push_back(pick);
  }

  std::vector<std::vector<double>> centers;
  for (int s : seeds) {
    const auto v = vectors[static_cast<std::size_t>(s)];
    centers.emplace_back(v.begin(), v.end());
  }

  double d_prev = 0.0;
  double d_cur = 0.0;
  for (const auto& v : vectors) d_cur += norm1(v);

  std::vector<int> cluster_of(static_cast<std::size_t>(n));
  std::vector<std::tuple<double, int, int>> order(static_cast<std::size_t>(n) * static_cast<std::size_t>(clusters));
  while (out.iterations == 0 || (d_cur > 0.0 && std::abs(d_prev - d_cur) / d_cur > options.tolerance)) {
    if (out.iterations >= options.max_iterations) break;
    d_prev = d_cur;
    d_cur = 0.0;

    // Members are ranked by their position in `ids`, which callers keep ascending.
    std::size_t idx = 0;
    for (int x = 0; x < n; ++x)
      for (int c = 0; c < clusters; ++c)
        order[idx++] = {l1_distance(vectors[static_cast<std::size_t>(x)], centers[static_cast<std::size_t>(c)]), x, c};
    std::sort(order.begin(), order.end());

    std::vector<int> size(static_cast<std::size_t>(clusters), 0);
    std::fill(cluster_of.begin(), cluster_of.end(), -1);
    int placed = 0;
    for (const auto& [d, x, c] : order) {
      if (cluster_of[static_cast<std::size_t>(x)] >= 0 || size[static_cast<std::size_t>(c)] >= capacity) continue;
      cluster_of[static_cast<std::size_t>(x)] = c;
      ++size[static_cast<std::size_t>(c)];
      d_cur += d;
      if (++placed == n) break;
    }

    for (auto& center : centers) std::fill(center.begin(), center.end(), 0.0);
    for (int x = 0; x < n; ++x) {
      auto& center = centers[static_cast<std::size_t>(cluster_of[static_cast<std::size_t>(x)])];
      const auto v = vectors[static_cast<std::size_t>(x)];
      for (std::size_t e = 0; e < dim; ++e) center[e] += v[e];
    }
    for (auto& center : centers)
      for (double& e : center) e /= capacity;
    ++out.iterations;
  }

  for (int x = 0; x < n; ++x)
    out.clusters[static_cast<std::size_t>(cluster_of[static_cast<std::size_t>(x)])].push_back(ids[static_cast<std::size_t>(x)]);
  for (auto& c : out.clusters) std::sort(c.begin(), c.end());
  out.total_distance = d_cur;
  return out;
}

}  // namespace hss
