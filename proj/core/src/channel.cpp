#include "hss/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "hss/units.hpp"

namespace hss {

namespace {

constexpr std::uint64_t kClassCuBs = 1;
constexpr std::uint64_t kClassSatSu = 2;
constexpr std::uint64_t kClassCuSu = 3;

double normal_quantile(double p) {
  static const boost::math::normal_distribution<double> unit{};
  return boost::math::quantile(unit, p);
}

// Counter-based standard normal: a pure function of its key.
double keyed_normal(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
  const std::uint64_t h = mix64(substream_seed(seed, key));
  return normal_quantile((static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53);
}

// Latin-hypercube column: one uniform in each of the n strata, randomly ordered.
void stratified_uniforms(std::span<double> out, Rng& rng) {
  const std::size_t n = out.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
  }
  for (std::size_t q = 0; q < n; ++q)
    out[q] = (static_cast<double>(perm[q]) + uniform_open01(rng)) / static_cast<double>(n);
}

double rician_power(double k, double x, double y) {
  // x, y ~ N(0, 1); z = (x + iy) / sqrt(2).
  const double los = std::sqrt(k / (k + 1.0));
  const double s = std::sqrt(1.0 / (2.0 * (k + 1.0)));
  const double re = los + s * x;
  const double im = s * y;
  return re * re + im * im;
}

}  // namespace

double path_loss_db(double distance_m, double exponent, double intercept_db, double carrier_ghz) {
  if (!(distance_m >= 1.0)) throw std::invalid_argument("path_loss_db: distance below the 1 m reference");
  if (!(carrier_ghz > 0.0)) throw std::invalid_argument("path_loss_db: carrier frequency must be positive");
  return intercept_db + 10.0 * exponent * std::log10(distance_m) + 20.0 * std::log10(carrier_ghz);
}

double LinkCsi::known_gain() const { return db_to_linear(known_shadow_db - path_loss_db); }

double mean_power_gain(const LinkCsi& link) {
  return link.known_gain() * lognormal_mean_factor(link.resid_shadow_var_db2);
}

double residual_shadow_variance(double speed_mps, double speed_ref_mps, double rho_max_db2) {
  if (speed_ref_mps <= 0.0) throw std::invalid_argument("reference speed must be positive");
  return std::max(0.0, speed_mps / speed_ref_mps) * rho_max_db2;
}

StatisticalCsi build_csi(const Scenario& sc, const ChannelParams& p, std::uint64_t seed) {
  const NetworkConfig& cfg = sc.config;
  const double shadow_sd = std::sqrt(p.known_shadow_var_db2);
  StatisticalCsi csi;
  csi.cus = cfg.total_cus();
  csi.sus = cfg.sus;
  csi.satellites = cfg.satellites;
  csi.cu_bs.resize(static_cast<std::size_t>(csi.cus));
  csi.sat_su.resize(static_cast<std::size_t>(csi.sus * csi.satellites));
  csi.cu_su.resize(static_cast<std::size_t>(csi.cus) * static_cast<std::size_t>(csi.sus));

  for (int c = 0; c < csi.cus; ++c) {
    const MobilePath& cu = sc.cus[static_cast<std::size_t>(c)];
    const BaseStation& bs = sc.base_stations[static_cast<std::size_t>(cu.serving_bs)];
    const auto id = static_cast<std::uint64_t>(c);
    LinkCsi& l = csi.cu_bs[static_cast<std::size_t>(c)];
    const double d = std::max(distance(cu.center, bs.position), p.min_distance_m);
    l.path_loss_db = path_loss_db(d, p.cu_bs.exponent, p.cu_bs.intercept_db, cfg.carrier_ghz);
    l.known_shadow_db = shadow_sd * keyed_normal(seed, {stage::known_shadow, kClassCuBs, id});
    l.resid_shadow_var_db2 = residual_shadow_variance(cu.speed_mps, p.cu_speed_ref_mps, p.cu_resid_var_max_db2);

    for (int u = 0; u < csi.sus; ++u) {
      const MobilePath& su = sc.sus[static_cast<std::size_t>(u)];
      LinkCsi& li = csi.cu_su[static_cast<std::size_t>(c) * static_cast<std::size_t>(csi.sus) + static_cast<std::size_t>(u)];
      const double di = std::max(distance(cu.center, su.center), p.min_distance_m);
      li.path_loss_db = path_loss_db(di, p.cu_su.exponent, p.cu_su.intercept_db, cfg.carrier_ghz);
      li.known_shadow_db =
          shadow_sd * keyed_normal(seed, {stage::known_shadow, kClassCuSu, id, static_cast<std::uint64_t>(u)});
    }
  }

  for (int u = 0; u < csi.sus; ++u) {
    const MobilePath& su = sc.sus[static_cast<std::size_t>(u)];
    const double rho = residual_shadow_variance(su.speed_mps, p.su_speed_ref_mps, p.su_resid_var_max_db2);
    for (int j = 0; j < csi.satellites; ++j) {
      LinkCsi& l = csi.sat_su[static_cast<std::size_t>(u * csi.satellites + j)];
      const double d = std::max(slant_distance(su.center, sc.satellites[static_cast<std::size_t>(j)]), p.min_distance_m);
      l.path_loss_db = path_loss_db(d, p.sat_su.exponent, p.sat_su.intercept_db, cfg.carrier_ghz);
      l.known_shadow_db = shadow_sd * keyed_normal(seed, {stage::known_shadow, kClassSatSu,
                                                          static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(j)});
      l.resid_shadow_var_db2 = rho;
      l.rician_k = p.rician_k;
    }
  }
  return csi;
}

SampleBank::SampleBank(int q, int cus, int sus, int satellites)
    : q_(q),
      satellites_(satellites),
      cu_bs_(static_cast<std::size_t>(cus) * static_cast<std::size_t>(q)),
      sat_su_(static_cast<std::size_t>(sus) * static_cast<std::size_t>(satellites) * static_cast<std::size_t>(q)) {
  if (q < 1) throw std::invalid_argument("SampleBank: Q must be >= 1");
}

void draw_link_samples(const LinkCsi& link, std::span<double> out, Rng& rng) {
  const std::size_t n = out.size();
  const double base = link.known_gain();
  const bool rician = link.rician_k.has_value();
  const double k = rician ? *link.rician_k : 0.0;
  const bool deterministic_fading = rician && std::isinf(k);
  const double shadow_sd = std::sqrt(link.resid_shadow_var_db2);

  std::vector<double> ua(n), ub(n), us(n);
  if (!deterministic_fading) {
    stratified_uniforms(ua, rng);
    if (rician) stratified_uniforms(ub, rng);
  }
  if (shadow_sd > 0.0) stratified_uniforms(us, rng);

  for (std::size_t q = 0; q < n; ++q) {
    double fading = 1.0;
    if (!deterministic_fading) {
      fading = rician ? rician_power(k, normal_quantile(ua[q]), normal_quantile(ub[q])) : -std::log(ua[q]);
    }
    const double shadow = shadow_sd > 0.0 ? db_to_linear(shadow_sd * normal_quantile(us[q])) : 1.0;
    out[q] = base * shadow * fading;
  }
}

void draw_fading_power_iid(std::optional<double> rician_k, std::span<double> out, Rng& rng) {
  for (double& v : out) {
    if (rician_k) {
      const double x = standard_normal(rng), y = standard_normal(rng);
      v = rician_power(*rician_k, x, y);
    } else {
      v = -std::log(uniform_open01(rng));
    }
  }
}

SampleBank draw_sample_bank(const StatisticalCsi& csi, int q, std::uint64_t seed) {
  SampleBank bank(q, csi.cus, csi.sus, csi.satellites);
  for (int c = 0; c < csi.cus; ++c) {
    Rng rng = make_rng(seed, {stage::sample_bank, 1, static_cast<std::uint64_t>(c)});
    draw_link_samples(csi.serving(c), bank.serving_mut(c), rng);
  }
  for (int u = 0; u < csi.sus; ++u) {
    for (int j = 0; j < csi.satellites; ++j) {
      Rng rng = make_rng(seed, {stage::sample_bank, 2, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(j)});
      draw_link_samples(csi.uplink(u, j), bank.uplink_mut(u, j), rng);
    }
  }
  return bank;
}

}  // namespace hss
