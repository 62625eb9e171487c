#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "hss/interior_point.hpp"
#include "hss/power_control.hpp"
#include "hss/scheduler.hpp"
#include "test_world.hpp"

using namespace hss;
using hss::testing::shared_world;
using hss::testing::World;

namespace {

// sum_i w_i log(x_i + a_i)
class LogSum : public SeparableConcave {
 public:
  LogSum(std::vector<double> w, std::vector<double> a) : w_(std::move(w)), a_(std::move(a)) {}
  int size() const override { return static_cast<int>(w_.size()); }
  double value(std::span<const double> x) const override {
    double v = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) v += w_[i] * std::log(x[i] + a_[i]);
    return v;
  }
  double evaluate(std::span<const double> x, std::span<double> g, std::span<double> h) const override {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      g[i] = w_[i] / (x[i] + a_[i]);
      h[i] = -w_[i] / ((x[i] + a_[i]) * (x[i] + a_[i]));
    }
    return value(x);
  }

 private:
  std::vector<double> w_, a_;
};

// -(x - c)^2 per coordinate
class Quadratic : public SeparableConcave {
 public:
  explicit Quadratic(std::vector<double> c) : c_(std::move(c)) {}
  int size() const override { return static_cast<int>(c_.size()); }
  double value(std::span<const double> x) const override {
    double v = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) v -= (x[i] - c_[i]) * (x[i] - c_[i]);
    return v;
  }
  double evaluate(std::span<const double> x, std::span<double> g, std::span<double> h) const override {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      g[i] = -2.0 * (x[i] - c_[i]);
      h[i] = -2.0;
    }
    return value(x);
  }

 private:
  std::vector<double> c_;
};

// One SU and one CU drawn next to each other, so the protection bound matters.
std::vector<PowerSubproblem> paired_instances(const World& w, int count, std::uint64_t seed) {
  const RateEngine& e = *w.engine;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<int> sat(96);
  for (int u = 0; u < 96; ++u) sat[static_cast<std::size_t>(u)] = e.nearest_satellite(u);
  std::vector<PowerSubproblem> out;
  int u = 0;
  while (static_cast<int>(out.size()) < count) {
    u = (u + 37) % 96;
    std::vector<int> cus(672);
    std::iota(cus.begin(), cus.end(), 0);
    const int j = sat[static_cast<std::size_t>(u)];
    std::partial_sort(cus.begin(), cus.begin() + 20, cus.end(), [&](int a, int b) {
      return e.interference_gain(a, u, j) > e.interference_gain(b, u, j);
    });
    const int c = cus[static_cast<std::size_t>(rng() % 20)];
    PowerSubproblem sub = build_subproblem_for(e, 0, {u}, sat, {c}, weight(rng), weight(rng));
    if (sub.frozen[0] || sub.p_hi[0] - sub.p_lo[0] < 1e-9) continue;
    out.push_back(std::move(sub));
  }
  return out;
}

double grid_optimum(const PowerSubproblem& sub, int n) {
  double best = -1e300;
  const double c = sub.coupling[0];
  for (int a = 0; a < n; ++a) {
    const double p = sub.p_lo[0] + (sub.p_hi[0] - sub.p_lo[0]) * a / (n - 1);
    for (int b = 0; b < n; ++b) {
      const double t = sub.gamma_th_w * b / (n - 1);
      if (t < c * p * (1.0 - 1e-12)) continue;
      const double pv[1]{p}, tv[1]{t};
      best = std::max(best, power_objective(sub, pv, tv));
    }
  }
  return best;
}

}  // namespace

TEST(InteriorPoint, ProportionalSplitUnderSimplex) {
  const LogSum f({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0});
  BoxLinearProblem pb;
  pb.lower = {0.0, 0.0, 0.0};
  pb.upper = {1.0, 1.0, 1.0};
  pb.rows.push_back({{{0, 1.0}, {1, 1.0}, {2, 1.0}}, 1.0});
  const std::vector<double> start{0.2, 0.2, 0.2};
  const InteriorPointResult r = maximize_concave(f, pb, start);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0 / 6.0, 1e-7);
  EXPECT_NEAR(r.x[1], 2.0 / 6.0, 1e-7);
  EXPECT_NEAR(r.x[2], 3.0 / 6.0, 1e-7);
}

TEST(InteriorPoint, ActiveBoundsAndFixedVariables) {
  const Quadratic f({2.0, 0.25, -1.0});
  BoxLinearProblem pb;
  pb.lower = {0.0, 0.0, 0.5};
  pb.upper = {1.0, 1.0, 0.5};
  const std::vector<double> start{0.5, 0.5, 0.5};
  const InteriorPointResult r = maximize_concave(f, pb, start);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-7);
  EXPECT_NEAR(r.x[1], 0.25, 1e-7);
  EXPECT_DOUBLE_EQ(r.x[2], 0.5);
}

TEST(InteriorPoint, CouplingRow) {
  // max -(x-1)^2 - (y-1)^2 with x + y <= 1: x = y = 1/2.
  const Quadratic f({1.0, 1.0});
  BoxLinearProblem pb;
  pb.lower = {0.0, 0.0};
  pb.upper = {2.0, 2.0};
  pb.rows.push_back({{{0, 1.0}, {1, 1.0}}, 1.0});
  const std::vector<double> start{0.1, 0.1};
  const InteriorPointResult r = maximize_concave(f, pb, start);
  EXPECT_NEAR(r.x[0], 0.5, 1e-7);
  EXPECT_NEAR(r.x[1], 0.5, 1e-7);
  EXPECT_NEAR(r.objective, -0.5, 1e-7);
}

TEST(Sca, MatchesGridSearchOnSingleLinkProblems) {
  const World& w = shared_world(4);
  for (const PowerSubproblem& sub : paired_instances(w, 30, 5)) {
    const PowerSolution s = sca_solve(sub);
    const double grid = grid_optimum(sub, 200);
    EXPECT_GE(s.trace.back(), grid * (1.0 - 5e-3)) << "SU " << sub.sus[0] << " CU " << sub.cus[0];
    EXPECT_NEAR(s.trace.back(), power_objective(sub, s.p, s.t), 1e-9 * s.trace.back());
  }
}

TEST(Sca, TraceIsMonotoneAndIteratesAreFeasible) {
  for (int F : {4, 1}) {
    const World& w = shared_world(F);
    const ScheduleSolution sched = hierarchical_schedule(*w.engine, *w.deltas);
    for (int k = 0; k < 12; ++k) {
      const PowerSubproblem sub = build_subproblem(*w.engine, sched, k);
      const PowerSolution s = sca_solve(sub);
      EXPECT_TRUE(s.converged) << s.message;
      EXPECT_LT(s.iterations, 10);
      for (std::size_t i = 1; i < s.trace.size(); ++i) EXPECT_GE(s.trace[i], s.trace[i - 1]);
      for (std::size_t u = 0; u < sub.sus.size(); ++u) {
        EXPECT_GE(s.p[u], sub.p_lo[u] * (1.0 - 1e-12));
        EXPECT_LE(s.p[u], sub.p_hi[u] * (1.0 + 1e-12));
        EXPECT_LE(s.p[u], sub.su_max_power_w * (1.0 + 1e-12));
      }
      for (std::size_t c = 0; c < sub.cus.size(); ++c) {
        double worst = 0.0;
        for (std::size_t u = 0; u < sub.sus.size(); ++u) worst = std::max(worst, sub.coupling_at(c, u) * s.p[u]);
        EXPECT_LE(worst, sub.gamma_th_w * (1.0 + 1e-6));
        EXPECT_NEAR(s.t[c], std::min(worst, sub.gamma_th_w), 1e-12 * sub.gamma_th_w);
      }
    }
  }
}

TEST(Sca, WithoutCusPowerGoesToTheCap) {
  const World& w = shared_world(4);
  std::vector<int> sat(96, 1);
  const PowerSubproblem sub = build_subproblem_for(*w.engine, 0, {4, 9}, sat, {}, 0.125, 0.125);
  const PowerSolution s = sca_solve(sub);
  EXPECT_EQ(s.iterations, 1);
  for (double p : s.p) EXPECT_NEAR(p, sub.su_max_power_w, 1e-6 * sub.su_max_power_w);
}

TEST(Sca, FrozenSusStayAtTheProtectionBound) {
  const World& w = shared_world(4);
  const RateEngine& e = *w.engine;
  std::vector<int> sat(96, 0);
  for (int u = 0; u < 96; ++u)
    for (int c = 0; c < 672; ++c)
      if (e.max_power_bound(c, u, 0) < e.qos_power(u, 0)) {
        const PowerSubproblem sub = build_subproblem_for(e, 0, {u}, sat, {c}, 0.125, 0.125);
        ASSERT_TRUE(sub.frozen[0]);
        const PowerSolution s = sca_solve(sub);
        EXPECT_DOUBLE_EQ(s.p[0], sub.p_hi[0]);
        EXPECT_LE(sub.coupling[0] * s.p[0], sub.gamma_th_w * (1.0 + 1e-9));
        return;
      }
  GTEST_SKIP() << "no frozen pair in this topology";
}

TEST(Sca, ReportIsJson) {
  const World& w = shared_world(4);
  const auto subs = paired_instances(w, 1, 9);
  const std::string line = power_report_json(subs[0], sca_solve(subs[0]), "proposed", 0, 4, 0.0);
  EXPECT_EQ(line.front(), '{');
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_NE(line.find("\"objective_trace_bps\""), std::string::npos);
}
