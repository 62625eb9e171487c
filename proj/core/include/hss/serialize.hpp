#pragma once

#include <ostream>
#include <span>
#include <string>

#include "hss/features.hpp"
#include "hss/schemes.hpp"

namespace hss {

/// Positions and labels of satellites, base stations and users.
std::string scenario_to_json(const Scenario& scenario);

/// Schedule maps: SU -> (subcarrier, satellite[, slice]), CU -> subcarrier,
/// plus powers, QoS flags and sum rates.
std::string scheme_output_to_json(const Scenario& scenario, const SchemeOutput& output);

/// Long-format feature dump: one row per (SU, satellite, CU) with both terms.
/// Only the satellites listed in `satellite_of_su` are written when it is non-empty.
void write_feature_csv(std::ostream& os, const FeatureTable& table, std::span<const int> satellite_of_su = {});

}  // namespace hss
