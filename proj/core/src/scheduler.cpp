#include "hss/scheduler.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "hss/assignment.hpp"
#include "hss/parallel.hpp"

namespace hss {

double big_m(const RateEngine& engine) { return 1.0e6 * engine.radio().bandwidth_hz; }

CuSlotResult assign_cus_to_slots(const RateEngine& engine, const PairwiseDeltas& deltas,
                                 std::span<const int> su_satellite, const CuSlotProblem& problem) {
  const int n = static_cast<int>(problem.cus.size());
  const int slots = static_cast<int>(problem.slot_sus.size());
  if (slots * problem.slot_capacity != n)
    throw std::invalid_argument("assign_cus_to_slots: CU count must equal slots * capacity");
  const double gamma_th = engine.radio().interference_threshold_w;
  const double penalty = -big_m(engine);

  DenseMatrix value(n, slots);
  for (int s = 0; s < slots; ++s) {
    const auto& members = problem.slot_sus[static_cast<std::size_t>(s)];
    for (int row = 0; row < n; ++row) {
      const int cu = problem.cus[static_cast<std::size_t>(row)];
      double su_gain = 0.0;
      double worst = 0.0;
      double cu_gain = 0.0;
      bool blocked = false;
      for (int u : members) {
        const int j = su_satellite[static_cast<std::size_t>(u)];
        su_gain += deltas.su_delta(u, j, cu);
        const double g = engine.interference_mean(cu, u, j, engine.qos_power(u, j));
        if (g >= gamma_th) blocked = true;
        worst = std::max(worst, g);
        if (problem.mode == SlotInterference::per_member && !blocked) cu_gain += engine.delta_cu(cu, g);
      }
      if (blocked) {
        value(row, s) = penalty;
        continue;
      }
      if (problem.mode == SlotInterference::worst_case) cu_gain = engine.delta_cu(cu, worst);
      value(row, s) = problem.su_weight * su_gain + problem.cu_weight * cu_gain;
    }
  }

  DenseMatrix expanded(n, n);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col) expanded(row, col) = value(row, col / problem.slot_capacity);
  const Assignment a = solve_assignment(expanded, true);

  CuSlotResult out;
  out.slot_of.resize(static_cast<std::size_t>(n));
  for (int row = 0; row < n; ++row) {
    const int s = a.col_of_row[static_cast<std::size_t>(row)] / problem.slot_capacity;
    out.slot_of[static_cast<std::size_t>(row)] = s;
    if (value(row, s) == penalty) out.infeasible.push_back(problem.cus[static_cast<std::size_t>(row)]);
  }
  return out;
}

void schedule_cus(const RateEngine& engine, const PairwiseDeltas& deltas, ScheduleSolution& schedule, int threads) {
  const Scenario& sc = engine.scenario();
  const NetworkConfig& cfg = sc.config;
  const int k_per_bs = cfg.subcarriers_per_bs();
  const int n_cu = cfg.cus_per_subcarrier();
  const double w2 = 1.0 / (cfg.clusters() * n_cu);

  schedule.cu_subcarrier.assign(static_cast<std::size_t>(cfg.total_cus()), -1);
  std::vector<std::vector<int>> infeasible(static_cast<std::size_t>(cfg.base_stations));

  parallel_for(static_cast<std::size_t>(cfg.base_stations), threads, [&](std::size_t m) {
    const int bs = static_cast<int>(m);
    const int first = first_subcarrier(cfg, sc.base_stations[m].color);
    CuSlotProblem p;
    p.slot_capacity = n_cu;
    p.su_weight = w2 / cfg.sus_per_subcarrier();
    p.cu_weight = 1.0 / n_cu;
    for (int v = 0; v < cfg.cus_per_bs; ++v) p.cus.push_back(sc.cu_index(bs, v));
    for (int k = first; k < first + k_per_bs; ++k) p.slot_sus.push_back(schedule.su_clusters[static_cast<std::size_t>(k)]);
    const CuSlotResult res = assign_cus_to_slots(engine, deltas, schedule.su_satellite, p);
    for (std::size_t row = 0; row < p.cus.size(); ++row)
      schedule.cu_subcarrier[static_cast<std::size_t>(p.cus[row])] = first + res.slot_of[row];
    infeasible[m] = res.infeasible;
  });

  schedule.infeasible_cus.clear();
  for (const auto& list : infeasible) schedule.infeasible_cus.insert(schedule.infeasible_cus.end(), list.begin(), list.end());
  schedule.rebuild_clusters(cfg.subcarriers);
}

int fine_stage(const NetworkConfig& cfg, const std::vector<std::vector<int>>& groups,
               const std::function<std::vector<double>(int u, int r)>& sub_vector, ScheduleSolution& schedule,
               const ScheduleOptions& options) {
  const int k_per_bs = cfg.subcarriers_per_bs();
  schedule.su_subcarrier.assign(static_cast<std::size_t>(cfg.sus), -1);
  std::vector<int> iterations(groups.size(), 0);

  parallel_for(groups.size(), options.threads, [&](std::size_t r) {
    const auto& members = groups[r];
    std::vector<std::vector<double>> storage;
    storage.reserve(members.size());
    for (int u : members) storage.push_back(sub_vector(u, static_cast<int>(r)));
    std::vector<std::span<const double>> views(storage.begin(), storage.end());
    const FineClustering fc = fine_cluster(members, views, k_per_bs, cfg.sus_per_subcarrier(), options.fine);
    iterations[r] = fc.iterations;
    const int first = static_cast<int>(r) * k_per_bs;
    for (std::size_t c = 0; c < fc.clusters.size(); ++c)
      for (int u : fc.clusters[c]) schedule.su_subcarrier[static_cast<std::size_t>(u)] = first + static_cast<int>(c);
  });

  schedule.rebuild_clusters(cfg.subcarriers);
  return iterations.empty() ? 0 : *std::max_element(iterations.begin(), iterations.end());
}

ScheduleSolution hierarchical_schedule(const RateEngine& engine, const PairwiseDeltas& deltas,
                                       const ScheduleOptions& options) {
  const Scenario& sc = engine.scenario();
  const NetworkConfig& cfg = sc.config;
  const FeatureTable table(sc, deltas);

  const CoarseClustering coarse = coarse_cluster(table);
  ScheduleSolution s;
  s.su_satellite = coarse.satellite;
  s.cu_subcarrier.assign(static_cast<std::size_t>(cfg.total_cus()), -1);
  s.fine_iterations = fine_stage(
      cfg, coarse.groups,
      [&](int u, int r) { return table.sub_vector(u, coarse.satellite[static_cast<std::size_t>(u)], r); }, s, options);
  schedule_cus(engine, deltas, s, options.threads);
  return s;
}

}  // namespace hss
