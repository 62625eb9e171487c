#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hss/features.hpp"
#include "test_world.hpp"

using namespace hss;
using hss::testing::shared_world;
using hss::testing::World;

namespace {

// Direct evaluation from rate-engine primitives.
FeatureBlock oracle_block(const RateEngine& e, int u, int j, int cu, int ns, int nc) {
  const RadioParams& r = e.radio();
  const double g = e.interference_gain(cu, u, j);
  const double p_bar = r.interference_threshold_w / g;
  const double p_qos = e.qos_power(u, j);
  FeatureBlock b;
  if (p_bar < p_qos) {
    b.interference_infeasible = true;
  } else {
    const double p = std::min(p_bar, r.su_max_power_w);
    b.su_gain_term = (e.su_rate(u, j, p) - e.su_rate(u, j, p_qos)) / ns;
  }
  const double gamma_u = g * p_qos;
  if (gamma_u < r.interference_threshold_w) b.cu_gain_term = (e.cu_rate(cu, gamma_u) - e.cu_rate(cu, r.interference_threshold_w)) / nc;
  return b;
}

}  // namespace

TEST(Features, BlocksMatchDirectEvaluation) {
  for (int F : {4, 1}) {
    const World& w = shared_world(F);
    const FeatureTable table(w.scenario, *w.deltas);
    const int ns = w.scenario.config.sus_per_subcarrier();
    const int nc = w.scenario.config.cus_per_subcarrier();
    for (int u = 0; u < 96; u += 7)
      for (int j = 0; j < 3; ++j)
        for (int c = 0; c < 672; c += 13) {
          const FeatureBlock got = table.block(u, j, c);
          const FeatureBlock want = oracle_block(*w.engine, u, j, c, ns, nc);
          const FeatureBlock direct = feature_block(*w.engine, u, j, c);
          EXPECT_EQ(got.interference_infeasible, want.interference_infeasible);
          EXPECT_NEAR(got.su_gain_term, want.su_gain_term, 1e-6 + 1e-9 * want.su_gain_term);
          EXPECT_NEAR(got.cu_gain_term, want.cu_gain_term, 1e-6 + 1e-9 * want.cu_gain_term);
          EXPECT_DOUBLE_EQ(direct.su_gain_term, got.su_gain_term);
          EXPECT_DOUBLE_EQ(direct.cu_gain_term, got.cu_gain_term);
        }
  }
}

TEST(Features, TermsAreFiniteAndNonNegative) {
  const World& w = shared_world(4);
  for (int u = 0; u < 96; ++u)
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < 672; ++c) {
        const double s = w.deltas->su_delta(u, j, c), k = w.deltas->cu_delta(u, j, c);
        ASSERT_TRUE(std::isfinite(s) && std::isfinite(k));
        ASSERT_GE(s, 0.0);
        ASSERT_GE(k, 0.0);
        if (w.deltas->infeasible(u, j, c)) ASSERT_EQ(s, 0.0);
      }
}

TEST(Features, SuTermShrinksWithCoupling) {
  const World& w = shared_world(4);
  for (int u = 0; u < 96; u += 9)
    for (int j = 0; j < 3; ++j) {
      std::vector<int> cus(672);
      std::iota(cus.begin(), cus.end(), 0);
      std::sort(cus.begin(), cus.end(), [&](int a, int b) {
        return w.engine->interference_gain(a, u, j) < w.engine->interference_gain(b, u, j);
      });
      for (std::size_t i = 1; i < cus.size(); ++i)
        EXPECT_LE(w.deltas->su_delta(u, j, cus[i]), w.deltas->su_delta(u, j, cus[i - 1]) + 1e-9);
    }
}

TEST(Features, CuTermShrinksWithInterference) {
  const World& w = shared_world(4);
  for (int c = 0; c < 672; c += 31)
    for (int j = 0; j < 3; ++j) {
      std::vector<int> sus(96);
      std::iota(sus.begin(), sus.end(), 0);
      auto gamma = [&](int u) { return w.engine->interference_mean(c, u, j, w.engine->qos_power(u, j)); };
      std::sort(sus.begin(), sus.end(), [&](int a, int b) { return gamma(a) < gamma(b); });
      for (std::size_t i = 1; i < sus.size(); ++i)
        EXPECT_LE(w.deltas->cu_delta(sus[i], j, c), w.deltas->cu_delta(sus[i - 1], j, c) + 1e-9);
    }
}

TEST(Features, VectorLayout) {
  for (int F : {4, 1}) {
    const World& w = shared_world(F);
    const FeatureTable table(w.scenario, *w.deltas);
    const FeatureVector fv = table.vector(5, 1);
    EXPECT_EQ(fv.size(), 2u * 28u * 24u);
    EXPECT_EQ(fv.scalars_per_sub * F, static_cast<int>(fv.size()));
    const int clusters = 28 / F;
    for (int r = 0; r < F; ++r) {
      const auto sub = fv.sub(r);
      const auto alone = table.sub_vector(5, 1, r);
      ASSERT_TRUE(std::equal(sub.begin(), sub.end(), alone.begin(), alone.end()));
      // Entry (i, v) of colour r is the block of CU v at BS (i, r).
      const int i = clusters - 1, v = 7;
      const FeatureBlock b = table.block(5, 1, w.scenario.cu_index(w.scenario.bs_index(i, r), v));
      EXPECT_EQ(sub[static_cast<std::size_t>(2 * (i * 24 + v))], b.su_gain_term);
      EXPECT_EQ(sub[static_cast<std::size_t>(2 * (i * 24 + v) + 1)], b.cu_gain_term);
    }
    const FeatureVector partial = partial_feature_vector(table, 5, 1);
    EXPECT_EQ(partial.size(), fv.size() / 2);
    for (std::size_t n = 0; n < partial.size(); ++n) EXPECT_EQ(partial.values[n], fv.values[2 * n + 1]);
  }
}

TEST(Features, GroupValueWeightsSuTerms) {
  const World& w = shared_world(4);
  const FeatureTable table(w.scenario, *w.deltas);
  const double w1 = 24.0 / (7.0 * 24.0);
  for (int r = 0; r < 4; ++r) {
    const auto sub = table.sub_vector(9, 2, r);
    double su = 0.0, cu = 0.0;
    for (std::size_t n = 0; n < sub.size(); n += 2) {
      su += sub[n];
      cu += sub[n + 1];
    }
    EXPECT_NEAR(table.group_value(9, 2, r, w1), w1 * su + cu, 1e-6);
    EXPECT_NEAR(table.group_value(9, 2, r, 0.0), cu, 1e-6);
  }
}

TEST(Features, ThreadedAndReusedDeltasAgree) {
  const World& w = shared_world(4);
  const PairwiseDeltas threaded = PairwiseDeltas::compute(*w.engine, 3);
  const RateEngine hot(w.scenario, w.csi, w.bank, RadioParams::reference(10.0));
  const PairwiseDeltas fresh = PairwiseDeltas::compute(hot);
  const PairwiseDeltas reused = PairwiseDeltas::compute(hot, 2, w.deltas.get());
  for (int u = 0; u < 96; u += 3)
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < 672; c += 5) {
        ASSERT_EQ(threaded.su_delta(u, j, c), w.deltas->su_delta(u, j, c));
        ASSERT_EQ(threaded.cu_delta(u, j, c), w.deltas->cu_delta(u, j, c));
        ASSERT_EQ(reused.su_delta(u, j, c), fresh.su_delta(u, j, c));
        ASSERT_EQ(reused.cu_delta(u, j, c), fresh.cu_delta(u, j, c));
        ASSERT_EQ(reused.infeasible(u, j, c), fresh.infeasible(u, j, c));
      }
}

TEST(Features, Distances) {
  const std::vector<double> a{1.0, -2.0, 3.0}, b{0.0, 0.0, 0.0}, c{1.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(l1_distance(a, b), 6.0);
  EXPECT_DOUBLE_EQ(l1_distance(a, c), 5.0);
  EXPECT_DOUBLE_EQ(compound_distance(a, {std::span<const double>(b), std::span<const double>(c)}), 30.0);
  EXPECT_DOUBLE_EQ(compound_distance(a, {}), 1.0);
  const std::vector<double> shorter{1.0};
  EXPECT_THROW(l1_distance(a, shorter), std::invalid_argument);
}
