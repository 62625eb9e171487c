#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hss/experiment.hpp"

using namespace hss;

namespace {

RunRecord rec(const std::string& scheme, double sum, int topology) {
  RunRecord r;
  r.scheme = scheme;
  r.reuse_factor = 4;
  r.p_bs_dbm = 0.0;
  r.topology = topology;
  r.sum_rate_bps = sum;
  r.cu_sum_rate_bps = sum;
  return r;
}

ExperimentConfig tiny(int threads) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(
      R"({"topologies": 2, "monte_carlo_draws": 60, "reuse_factors": [4, 1], "p_bs_dbm": [0],
          "rand_repeats": 2, "seed": 42})");
  cfg.threads = threads;
  return cfg;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const ExperimentConfig d = ExperimentConfig::from_json_text("{}");
  EXPECT_EQ(d.topologies, 10);
  EXPECT_EQ(d.monte_carlo_draws, 1000);
  EXPECT_EQ(d.reuse_factors, (std::vector<int>{4, 1}));
  EXPECT_EQ(d.schemes.size(), 5u);

  const ExperimentConfig c = ExperimentConfig::from_json_text(
      R"({"schemes": ["proposed", "nosharing"], "p_bs_dbm": [10], "su_max_power_dbw": 0, "cell_radius_m": 500})");
  EXPECT_EQ(c.schemes, (std::vector<SchemeId>{SchemeId::proposed, SchemeId::nosharing}));
  EXPECT_EQ(c.p_bs_dbm, (std::vector<double>{10.0}));
  EXPECT_NEAR(c.radio.su_max_power_w, 1.0, 1e-12);
  EXPECT_EQ(c.scenario.cell_radius_m, 500.0);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(ExperimentConfig::from_json_text(R"({"topologes": 3})"), std::exception);
  EXPECT_THROW(ExperimentConfig::from_json_text(R"({"topologies": 0})"), std::exception);
  EXPECT_THROW(ExperimentConfig::from_json_text(R"({"schemes": ["magic"]})"), std::exception);
  EXPECT_THROW(ExperimentConfig::from_json_text("not json"), std::exception);
}

TEST(Summary, GainsAndFractions) {
  std::vector<RunRecord> records{rec("nosharing", 100.0, 0), rec("nosharing", 300.0, 1), rec("proposed", 240.0, 0),
                                 rec("proposed", 240.0, 1), rec("finesync", 250.0, 0), rec("finesync", 270.0, 1)};
  RunRecord broken = rec("proposed", 1e9, 2);
  broken.status = "error: boom";
  records.push_back(broken);
  const auto rows = summarize(records);
  ASSERT_EQ(rows.size(), 3u);
  const SummaryRow* p = nullptr;
  for (const auto& r : rows)
    if (r.scheme == "proposed") p = &r;
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->count, 2);
  EXPECT_DOUBLE_EQ(p->sum_mean, 240.0);
  EXPECT_DOUBLE_EQ(p->sum_std, 0.0);
  EXPECT_NEAR(p->gain_over_nosharing, 0.2, 1e-12);
  EXPECT_NEAR(p->fraction_of_finesync_gain, 0.2 / 0.3, 1e-12);
  for (const auto& r : rows)
    if (r.scheme == "nosharing") EXPECT_NEAR(r.sum_std, std::sqrt(20000.0), 1e-9);
  EXPECT_FALSE(summary_text(rows).empty());
}

TEST(Summary, MissingBaselineGivesNaN) {
  const auto rows = summarize({rec("proposed", 1.0, 0)});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(std::isnan(rows[0].gain_over_nosharing));
  EXPECT_TRUE(std::isnan(rows[0].fraction_of_finesync_gain));
}

TEST(Experiment, ThreadCountDoesNotChangeRecords) {
  const ExperimentResult a = run_experiment(tiny(1));
  const ExperimentResult b = run_experiment(tiny(3));
  ASSERT_EQ(a.failures, 0);
  std::ostringstream ca, cb;
  write_records_csv(ca, a.records);
  write_records_csv(cb, b.records);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(a.topology_json, b.topology_json);

  // Two topologies x (4 schemes at F = 4, 5 at F = 1).
  EXPECT_EQ(a.records.size(), 2u * 9u);
  for (const RunRecord& r : a.records) {
    EXPECT_EQ(r.status, "ok") << r.scheme;
    EXPECT_LE(r.max_interference_ratio, 1.0 + 1e-6) << r.scheme;
    if (r.scheme == "partial_pre") EXPECT_EQ(r.reuse_factor, 1);
  }
}

TEST(Experiment, SeedsAreDistinctPerTopology) {
  EXPECT_NE(topology_seed(1, 0), topology_seed(1, 1));
  EXPECT_NE(topology_seed(1, 0), topology_seed(2, 0));
  EXPECT_EQ(topology_seed(7, 3), topology_seed(7, 3));
}
