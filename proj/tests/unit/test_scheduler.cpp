#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hss/clustering.hpp"
#include "hss/scheduler.hpp"
#include "test_world.hpp"

using namespace hss;
using hss::testing::shared_world;
using hss::testing::World;

namespace {

// Value of placing `cu` in a slot shared by `sus`, recomputed from the rate engine.
double slot_value(const RateEngine& e, const PairwiseDeltas& d, std::span<const int> sat, int cu,
                  const std::vector<int>& sus, double su_w, double cu_w, bool& blocked) {
  double su = 0.0, worst = 0.0;
  blocked = false;
  for (int u : sus) {
    const int j = sat[static_cast<std::size_t>(u)];
    su += d.su_delta(u, j, cu);
    const double g = e.interference_gain(cu, u, j) * e.qos_power(u, j);
    blocked = blocked || g >= e.radio().interference_threshold_w;
    worst = std::max(worst, g);
  }
  return su_w * su + cu_w * (e.cu_rate(cu, worst) - e.cu_rate(cu, e.radio().interference_threshold_w));
}

}  // namespace

TEST(CuSlots, MatchesBruteForceOnSmallInstances) {
  const World& w = shared_world(4);
  std::vector<int> sat(96);
  for (int u = 0; u < 96; ++u) sat[static_cast<std::size_t>(u)] = (u * 7) % 3;
  for (int trial = 0; trial < 20; ++trial) {
    CuSlotProblem p;
    p.slot_capacity = 2;
    p.su_weight = 0.3;
    p.cu_weight = 1.0 / 8.0;
    for (int v = 0; v < 4; ++v) p.cus.push_back(24 * trial + 5 * v);
    p.slot_sus = {{trial, trial + 20, trial + 40}, {trial + 3, trial + 33, trial + 70}};
    const CuSlotResult r = assign_cus_to_slots(*w.engine, *w.deltas, sat, p);

    double best = -1e300, got = 0.0;
    bool blocked = false;
    for (int row = 0; row < 4; ++row)
      got += slot_value(*w.engine, *w.deltas, sat, p.cus[static_cast<std::size_t>(row)],
                        p.slot_sus[static_cast<std::size_t>(r.slot_of[static_cast<std::size_t>(row)])], p.su_weight,
                        p.cu_weight, blocked);
    for (int mask = 0; mask < 16; ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != 2) continue;
      double v = 0.0;
      bool any_blocked = false;
      for (int row = 0; row < 4; ++row) {
        v += slot_value(*w.engine, *w.deltas, sat, p.cus[static_cast<std::size_t>(row)],
                        p.slot_sus[static_cast<std::size_t>((mask >> row) & 1)], p.su_weight, p.cu_weight, blocked);
        any_blocked = any_blocked || blocked;
      }
      if (!any_blocked) best = std::max(best, v);
    }
    EXPECT_EQ(std::count(r.slot_of.begin(), r.slot_of.end(), 0), 2);
    if (r.infeasible.empty()) EXPECT_NEAR(got, best, 1e-6 * std::max(1.0, std::abs(best)));
  }
}

TEST(CuSlots, AvoidsBlockingSlotsWhenPossible) {
  const World& w = shared_world(4);
  const RateEngine& e = *w.engine;
  std::vector<int> sat(96, 0);
  // Find an SU whose QoS power alone breaks the threshold at some CU.
  int blocker = -1, victim = -1;
  for (int u = 0; u < 96 && blocker < 0; ++u)
    for (int c = 0; c < 672; ++c)
      if (e.interference_gain(c, u, 0) * e.qos_power(u, 0) >= e.radio().interference_threshold_w) {
        blocker = u;
        victim = c;
        break;
      }
  if (blocker < 0) GTEST_SKIP() << "no blocking pair in this topology";
  int harmless = -1;
  for (int u = 0; u < 96 && harmless < 0; ++u) {
    bool ok = true;
    for (int c : {victim, (victim + 1) % 672})
      ok = ok && e.interference_gain(c, u, 0) * e.qos_power(u, 0) < e.radio().interference_threshold_w;
    if (ok) harmless = u;
  }
  ASSERT_GE(harmless, 0);
  CuSlotProblem p;
  p.cus = {victim, (victim + 1) % 672};
  p.slot_sus = {{blocker}, {harmless}};
  p.su_weight = 1.0;
  p.cu_weight = 1.0;
  const CuSlotResult r = assign_cus_to_slots(e, *w.deltas, sat, p);
  EXPECT_EQ(r.slot_of[0], 1);
  EXPECT_TRUE(r.infeasible.empty() || r.infeasible.front() != victim);
  EXPECT_GT(big_m(e), 1e11);
}

TEST(Hierarchical, ProducesAValidScheduleRespectingTheCoarseStage) {
  for (int F : {4, 1}) {
    const World& w = shared_world(F);
    const ScheduleSolution s = hierarchical_schedule(*w.engine, *w.deltas);
    ASSERT_EQ(audit_schedule(w.scenario, s), "");
    const CoarseClustering cc = coarse_cluster(FeatureTable(w.scenario, *w.deltas));
    const int kp = 12 / F;
    for (int r = 0; r < F; ++r)
      for (int u : cc.groups[static_cast<std::size_t>(r)]) {
        EXPECT_EQ(s.su_subcarrier[static_cast<std::size_t>(u)] / kp, r);
        EXPECT_EQ(s.su_satellite[static_cast<std::size_t>(u)], cc.satellite[static_cast<std::size_t>(u)]);
      }
    EXPECT_GE(s.fine_iterations, 1);
    EXPECT_LT(s.fine_iterations, 15);
    for (int k = 0; k < 12; ++k) {
      EXPECT_EQ(s.su_clusters[static_cast<std::size_t>(k)].size(), 8u);
      EXPECT_EQ(s.cu_clusters[static_cast<std::size_t>(k)].size(), static_cast<std::size_t>(28 / F) * (24 / kp));
    }
  }
}

TEST(Hierarchical, ThreadCountDoesNotChangeTheResult) {
  const World& w = shared_world(4);
  ScheduleOptions one, many;
  many.threads = 4;
  const ScheduleSolution a = hierarchical_schedule(*w.engine, *w.deltas, one);
  const ScheduleSolution b = hierarchical_schedule(*w.engine, *w.deltas, many);
  EXPECT_EQ(a.su_subcarrier, b.su_subcarrier);
  EXPECT_EQ(a.su_satellite, b.su_satellite);
  EXPECT_EQ(a.cu_subcarrier, b.cu_subcarrier);
  EXPECT_EQ(a.fine_iterations, b.fine_iterations);
}
