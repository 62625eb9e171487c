#include "hss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "hss/rng.hpp"
#include "hss/units.hpp"

namespace hss {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance(Vec3 a, Vec3 b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

int pmod(int a, int m) { return ((a % m) + m) % m; }

struct HexCell {
  int q;
  int r;
  long norm;  // q^2 + qr + r^2, proportional to squared centre distance
  double angle;
};

Vec2 hex_center(int q, int r, double radius) {
  return {std::sqrt(3.0) * radius * (q + 0.5 * r), 1.5 * radius * r};
}

// The first m cells of a centred hexagonal packing, ordered by distance and angle.
std::vector<HexCell> nearest_cells(int m) {
  int rings = 1;
  while (3 * rings * (rings + 1) + 1 < 2 * m + 12) ++rings;
  std::vector<HexCell> all;
  for (int q = -rings; q <= rings; ++q) {
    for (int r = -rings; r <= rings; ++r) {
      if (std::max({std::abs(q), std::abs(r), std::abs(q + r)}) > rings) continue;
      const Vec2 c = hex_center(q, r, 1.0);
      double a = std::atan2(c.y, c.x);
      if (a < 0.0) a += 2.0 * std::numbers::pi;
      all.push_back({q, r, static_cast<long>(q) * q + static_cast<long>(q) * r + static_cast<long>(r) * r, a});
    }
  }
  std::sort(all.begin(), all.end(), [](const HexCell& a, const HexCell& b) {
    return std::tie(a.norm, a.angle, a.q, a.r) < std::tie(b.norm, b.angle, b.q, b.r);
  });
  all.resize(static_cast<std::size_t>(m));
  return all;
}

// Assigns reuse colours so that every colour is used exactly m/F times.
// Tries lattice shifts of the reuse pattern before giving up.
std::vector<int> balanced_colors(const std::vector<HexCell>& cells, int reuse_factor) {
  const int per_color = static_cast<int>(cells.size()) / reuse_factor;
  for (int a = 0; a < reuse_factor; ++a) {
    for (int b = 0; b < reuse_factor; ++b) {
      std::vector<int> colors;
      std::vector<int> count(static_cast<std::size_t>(reuse_factor), 0);
      for (const HexCell& c : cells) {
        const int col = reuse_color(c.q + a, c.r + b, reuse_factor);
        colors.push_back(col);
        ++count[static_cast<std::size_t>(col)];
      }
      if (std::all_of(count.begin(), count.end(), [&](int n) { return n == per_color; })) return colors;
    }
  }
  // Fall back to round-robin labels in distance order; adjacency is not guaranteed.
  std::vector<int> colors;
  for (std::size_t i = 0; i < cells.size(); ++i) colors.push_back(static_cast<int>(i) % reuse_factor);
  return colors;
}

Vec2 uniform_in_disk(Rng& rng, Vec2 center, double radius) {
  const double rho = radius * std::sqrt(uniform01(rng));
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  return {center.x + rho * std::cos(phi), center.y + rho * std::sin(phi)};
}

MobilePath random_path(Rng& rng, Vec2 center, double radius, double speed_max) {
  MobilePath p;
  p.center = uniform_in_disk(rng, center, radius);
  p.heading_rad = 2.0 * std::numbers::pi * uniform01(rng);
  p.speed_mps = speed_max * uniform01(rng);
  return p;
}

}  // namespace

int reuse_color(int q, int r, int reuse_factor) {
  switch (reuse_factor) {
    case 1:
      return 0;
    case 3:
      return pmod(q - r, 3);
    case 4:
      return pmod(q, 2) + 2 * pmod(r, 2);
    case 7:
      return pmod(q + 3 * r, 7);
    default:
      return pmod(q + 3 * r, reuse_factor);
  }
}

GroundOffset ground_offset(GeoPoint from, GeoPoint to) {
  const double phi1 = deg_to_rad(from.lat_deg), phi2 = deg_to_rad(to.lat_deg);
  const double dlambda = deg_to_rad(to.lon_deg - from.lon_deg);
  const double central = std::acos(std::clamp(
      std::sin(phi1) * std::sin(phi2) + std::cos(phi1) * std::cos(phi2) * std::cos(dlambda), -1.0, 1.0));
  const double bearing = std::atan2(std::sin(dlambda) * std::cos(phi2),
                                    std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda));
  return {kEarthRadiusM * central, bearing};
}

Vec3 satellite_local_position(GeoPoint anchor, GeoPoint subpoint, double altitude_m) {
  const GroundOffset g = ground_offset(anchor, subpoint);
  return {g.distance_m * std::sin(g.bearing_rad), g.distance_m * std::cos(g.bearing_rad), altitude_m};
}

double slant_distance(Vec2 ground, const SatellitePoint& satellite) {
  return distance(on_ground(ground), satellite.position);
}

double off_axis_angle_deg(Vec3 origin, Vec3 boresight_target, Vec3 target) {
  const Vec3 b{boresight_target.x - origin.x, boresight_target.y - origin.y, boresight_target.z - origin.z};
  const Vec3 d{target.x - origin.x, target.y - origin.y, target.z - origin.z};
  const double nb = std::sqrt(b.x * b.x + b.y * b.y + b.z * b.z);
  const double nd = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
  if (nb == 0.0 || nd == 0.0) return 0.0;
  const double c = std::clamp((b.x * d.x + b.y * d.y + b.z * d.z) / (nb * nd), -1.0, 1.0);
  return rad_to_deg(std::acos(c));
}

Scenario generate_topology(const NetworkConfig& config, std::uint64_t seed, const ScenarioParams& params) {
  config.validate();
  if (params.cell_radius_m <= 0.0) throw std::invalid_argument("cell radius must be positive");
  if (params.satellite_altitude_m <= 0.0) throw std::invalid_argument("satellite altitude must be positive");
  if (static_cast<int>(params.satellite_subpoints.size()) < config.satellites)
    throw std::invalid_argument("fewer satellite sub-points than configured satellites");

  Scenario sc;
  sc.config = config;
  sc.params = params;
  sc.seed = seed;

  for (int j = 0; j < config.satellites; ++j) {
    const GeoPoint sp = params.satellite_subpoints[static_cast<std::size_t>(j)];
    sc.satellites.push_back({sp, params.satellite_altitude_m,
                             satellite_local_position(params.anchor, sp, params.satellite_altitude_m)});
  }

  const std::vector<HexCell> cells = nearest_cells(config.base_stations);
  const std::vector<int> colors = balanced_colors(cells, config.reuse_factor);
  sc.base_stations.resize(cells.size());
  sc.bs_by_slot.assign(cells.size(), -1);
  std::vector<int> next_frc(static_cast<std::size_t>(config.reuse_factor), 0);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const int color = colors[c];
    const int frc = next_frc[static_cast<std::size_t>(color)]++;
    BaseStation& bs = sc.base_stations[c];
    bs.position = hex_center(cells[c].q, cells[c].r, params.cell_radius_m);
    bs.frc = frc;
    bs.color = color;
    bs.cell_q = cells[c].q;
    bs.cell_r = cells[c].r;
    sc.bs_by_slot[static_cast<std::size_t>(frc * config.reuse_factor + color)] = static_cast<int>(c);
  }

  Vec2 centroid;
  for (const BaseStation& bs : sc.base_stations) {
    centroid.x += bs.position.x / config.base_stations;
    centroid.y += bs.position.y / config.base_stations;
  }
  double max_offset = 0.0;
  for (const BaseStation& bs : sc.base_stations) max_offset = std::max(max_offset, distance(bs.position, centroid));
  sc.area_center = centroid;
  sc.area_radius_m = max_offset + params.area_margin_cells * params.cell_radius_m;

  sc.cus.resize(static_cast<std::size_t>(config.total_cus()));
  for (int m = 0; m < config.base_stations; ++m) {
    Rng rng = make_rng(seed, {stage::topology, 1, static_cast<std::uint64_t>(m)});
    for (int v = 0; v < config.cus_per_bs; ++v) {
      MobilePath p = random_path(rng, sc.base_stations[static_cast<std::size_t>(m)].position,
                                 params.cell_radius_m, params.cu_speed_max_mps);
      p.serving_bs = m;
      sc.cus[static_cast<std::size_t>(sc.cu_index(m, v))] = p;
    }
  }

  Rng su_rng = make_rng(seed, {stage::topology, 2});
  for (int u = 0; u < config.sus; ++u)
    sc.sus.push_back(random_path(su_rng, sc.area_center, sc.area_radius_m, params.su_speed_max_mps));

  return sc;
}

}  // namespace hss
