#pragma once

#include <cstdint>
#include <vector>

#include "hss/network_config.hpp"

namespace hss {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(Vec2 a, Vec2 b);
double distance(Vec3 a, Vec3 b);

struct GeoPoint {
  double lon_deg = 0.0;
  double lat_deg = 0.0;
};

/// Sampled satellite location for one coordination interval.
struct SatellitePoint {
  GeoPoint subpoint;
  double altitude_m = 0.0;
  Vec3 position;  // local tangent-plane frame, metres
};

struct BaseStation {
  Vec2 position;
  int frc = 0;    // frequency reuse cluster index i
  int color = 0;  // slot r within the FRC; selects subcarrier group r
  int cell_q = 0;  // axial hex coordinates of the cell
  int cell_r = 0;
};

/// Straight mobility path; large-scale quantities use the centre.
struct MobilePath {
  Vec2 center;
  double heading_rad = 0.0;
  double speed_mps = 0.0;
  int serving_bs = -1;  // CUs only
};

struct ScenarioParams {
  double cell_radius_m = 1000.0;
  double area_margin_cells = 1.5;  // area radius = max BS offset + margin * cell radius
  GeoPoint anchor{116.0, 40.0};
  std::vector<GeoPoint> satellite_subpoints{{107.0, 40.0}, {116.0, 40.0}, {125.0, 40.0}};
  double satellite_altitude_m = 500.0e3;
  double cu_speed_max_mps = 2.0;
  double su_speed_max_mps = 10.0;
};

/// Immutable network topology.
///
/// Base stations are stored in cell order, which does not depend on the
/// reuse factor; BS (i, r) is found through bs_index(). CU v of BS m has
/// global index m * cus_per_bs + v.
struct Scenario {
  NetworkConfig config;
  ScenarioParams params;
  std::uint64_t seed = 0;
  std::vector<SatellitePoint> satellites;
  std::vector<BaseStation> base_stations;
  std::vector<MobilePath> cus;
  std::vector<MobilePath> sus;
  Vec2 area_center;
  double area_radius_m = 0.0;

  std::vector<int> bs_by_slot;  // [frc * F + color] -> BS index

  int bs_index(int frc, int color) const {
    return bs_by_slot[static_cast<std::size_t>(frc * config.reuse_factor + color)];
  }
  int cu_index(int bs, int v) const { return bs * config.cus_per_bs + v; }
  int bs_of_cu(int cu) const { return cu / config.cus_per_bs; }
  int color_of_cu(int cu) const { return base_stations[static_cast<std::size_t>(bs_of_cu(cu))].color; }
};

/// Builds a reproducible topology: hexagonal cell packing with reuse
/// colouring, uniform CUs per cell, uniform SUs in the service area and
/// straight mobility paths. Positions are independent of the reuse
/// factor, so the same seed yields the same users for F = 1 and F = 4.
Scenario generate_topology(const NetworkConfig& config, std::uint64_t seed,
                           const ScenarioParams& params = {});

/// Colour of axial hex cell (q, r) for reuse factor F. Proper (no two
/// neighbours share a colour) for F in {1, 3, 4, 7}.
int reuse_color(int q, int r, int reuse_factor);

/// Great-circle ground distance (m) and initial bearing (rad, clockwise from north).
struct GroundOffset {
  double distance_m = 0.0;
  double bearing_rad = 0.0;
};
GroundOffset ground_offset(GeoPoint from, GeoPoint to);

inline constexpr double kEarthRadiusM = 6371.0e3;

/// Satellite location in the local tangent plane anchored at `anchor`.
Vec3 satellite_local_position(GeoPoint anchor, GeoPoint subpoint, double altitude_m);

/// Distance from a ground point to a satellite.
double slant_distance(Vec2 ground, const SatellitePoint& satellite);

/// Angle (deg) between the boresight from `origin` towards `boresight_target`
/// and the direction from `origin` towards `target`.
double off_axis_angle_deg(Vec3 origin, Vec3 boresight_target, Vec3 target);

inline Vec3 on_ground(Vec2 p) { return {p.x, p.y, 0.0}; }

}  // namespace hss
