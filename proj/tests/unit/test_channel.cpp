#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "hss/channel.hpp"
#include "hss/units.hpp"

using namespace hss;

namespace {

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

// Moment estimate of the Rician K-factor for unit-mean power samples: Var[P] = (1 + 2K) / (1 + K)^2.
double k_from_moments(std::span<const double> p) {
  const double m = mean(p);
  double var = 0.0;
  for (double x : p) var += (x / m - 1.0) * (x / m - 1.0);
  var /= static_cast<double>(p.size() - 1);
  // Solve var K^2 + (2 var - 2) K + (var - 1) = 0 for the positive root.
  const double a = var, b = 2.0 * var - 2.0, c = var - 1.0;
  return (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
}

}  // namespace

TEST(PathLoss, ReferenceValues) {
  EXPECT_NEAR(path_loss_db(1.0, 2.5, 32.4, 2.0), 38.42059991327962, 1e-9);
  EXPECT_NEAR(path_loss_db(10.0, 2.5, 32.4, 2.0), 63.42059991327962, 1e-9);
  EXPECT_NEAR(path_loss_db(1000.0, 2.5, 32.4, 2.0), 113.42059991327962, 1e-9);
  EXPECT_NEAR(path_loss_db(500.0e3, 2.0, 32.4, 2.0), 152.40, 0.01);
  EXPECT_THROW(path_loss_db(0.5, 2.0, 32.4, 2.0), std::invalid_argument);
}

TEST(Channel, MeanPowerGain) {
  LinkCsi l;
  l.path_loss_db = 113.42059991327962;
  EXPECT_NEAR(mean_power_gain(l) / 4.549252146524974e-12, 1.0, 1e-9);
  l.resid_shadow_var_db2 = 2.0;
  EXPECT_NEAR(mean_power_gain(l) / 4.549252146524974e-12, 1.0544496595488846, 1e-9);
  l.known_shadow_db = 3.0;
  EXPECT_NEAR(mean_power_gain(l) / 4.549252146524974e-12, 1.0544496595488846 * db_to_linear(3.0), 1e-9);
}

TEST(Channel, ResidualVarianceScalesWithSpeed) {
  EXPECT_DOUBLE_EQ(residual_shadow_variance(2.0, 2.0, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(residual_shadow_variance(0.0, 2.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(residual_shadow_variance(5.0, 10.0, 2.0), 1.0);
  EXPECT_THROW(residual_shadow_variance(1.0, 0.0, 2.0), std::invalid_argument);
}

TEST(Channel, DegenerateLinkGivesExactDraws) {
  LinkCsi l;
  l.path_loss_db = 150.0;
  l.known_shadow_db = -1.5;
  l.rician_k = std::numeric_limits<double>::infinity();
  std::vector<double> out(64);
  Rng rng(3);
  draw_link_samples(l, out, rng);
  for (double v : out) EXPECT_DOUBLE_EQ(v, l.known_gain());
}

TEST(Channel, RicianKFactorRecovered) {
  std::vector<double> p(200000);
  Rng rng(17);
  draw_fading_power_iid(10.0, p, rng);
  EXPECT_NEAR(mean(p), 1.0, 0.01);
  EXPECT_NEAR(k_from_moments(p), 10.0, 1.0);

  LinkCsi l;
  l.rician_k = 10.0;
  std::vector<double> bank(1000);
  Rng rng2(5);
  draw_link_samples(l, bank, rng2);
  EXPECT_NEAR(k_from_moments(bank), 10.0, 1.0);
}

TEST(Channel, RayleighPowerIsUnitExponential) {
  std::vector<double> p(200000);
  Rng rng(23);
  draw_fading_power_iid(std::nullopt, p, rng);
  EXPECT_NEAR(mean(p), 1.0, 0.01);
  const double frac_above_one = static_cast<double>(std::count_if(p.begin(), p.end(), [](double x) { return x > 1.0; })) / p.size();
  EXPECT_NEAR(frac_above_one, std::exp(-1.0), 0.005);
}

TEST(Channel, BankMeansMatchStatisticalCsi) {
  const Scenario sc = generate_topology(NetworkConfig::reference(4), 21);
  const StatisticalCsi csi = build_csi(sc, ChannelParams{}, 21);
  const int q = 1000;
  const SampleBank bank = draw_sample_bank(csi, q, 21);
  const double tol = 3.0 / std::sqrt(static_cast<double>(q));
  for (int c = 0; c < csi.cus; ++c)
    ASSERT_NEAR(mean(bank.serving(c)) / mean_power_gain(csi.serving(c)), 1.0, tol) << "cu " << c;
  for (int u = 0; u < csi.sus; ++u)
    for (int j = 0; j < csi.satellites; ++j)
      ASSERT_NEAR(mean(bank.uplink(u, j)) / mean_power_gain(csi.uplink(u, j)), 1.0, tol) << u << "," << j;
}

TEST(Channel, CsiIsKeyedBySeed) {
  const Scenario sc = generate_topology(NetworkConfig::reference(4), 2);
  const StatisticalCsi a = build_csi(sc, ChannelParams{}, 2);
  const StatisticalCsi b = build_csi(sc, ChannelParams{}, 2);
  ASSERT_EQ(a.cu_su.size(), static_cast<std::size_t>(28 * 24 * 96));
  EXPECT_EQ(a.interference(100, 7).known_shadow_db, b.interference(100, 7).known_shadow_db);
  EXPECT_TRUE(a.uplink(0, 0).rician_k.has_value());
  EXPECT_FALSE(a.serving(0).rician_k.has_value());

  // Known shadowing has the configured spread.
  double s2 = 0.0;
  for (const LinkCsi& l : a.cu_su) s2 += l.known_shadow_db * l.known_shadow_db;
  EXPECT_NEAR(s2 / static_cast<double>(a.cu_su.size()), 3.0, 0.1);
}
