#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hss/features.hpp"
#include "hss/power_control.hpp"
#include "hss/schedule.hpp"
#include "hss/scheduler.hpp"

namespace hss {

enum class SchemeId { proposed, nosharing, rand, partial_pre, finesync };

std::string scheme_name(SchemeId id);
/// Accepts the names produced by scheme_name; throws std::invalid_argument otherwise.
SchemeId parse_scheme(const std::string& name);
const std::vector<SchemeId>& all_schemes();

struct SchemeOutput {
  SchemeId scheme = SchemeId::proposed;
  ScheduleSolution schedule;
  std::vector<int> su_slice;  // time slice within the subcarrier (time-slotted scheme only)

  std::vector<double> su_power_w;
  std::vector<double> su_rate_bps;         // per SU, before the 1/N'_s weight
  std::vector<double> cu_rate_bps;         // per CU, before the 1/N'_c weight
  std::vector<double> cu_interference_w;   // largest mean interference charged to each CU
  std::vector<char> qos_violated;

  double cu_sum_bps = 0.0;
  double su_sum_bps = 0.0;
  double sum_bps = 0.0;
  double qos_violation_fraction = 0.0;
  int fine_iterations = 0;
  int power_iterations = 0;  // largest SCA iteration count over subproblems (0 without power control)
  bool power_converged = true;

  std::vector<std::string> power_reports;  // JSON lines, when requested
};

struct SchemeContext {
  const RateEngine* engine = nullptr;
  const PairwiseDeltas* deltas = nullptr;
  ScheduleOptions schedule;
  ScaOptions sca;
  bool collect_reports = false;
  int topology = 0;
  double p_bs_dbm = 0.0;
};

/// Relative tolerance of the QoS-violation test p < p_QoS (1 - tol).
inline constexpr double kQosTolerance = 1e-9;

SchemeOutput run_proposed(const SchemeContext& ctx);
SchemeOutput run_nosharing(const SchemeContext& ctx);
/// Uniformly random balanced schedule, nearest satellites, powers at the interference caps.
SchemeOutput run_rand(const SchemeContext& ctx, std::uint64_t seed);
/// Clustering on CU-only features with nearest satellites. Full reuse only;
/// throws std::invalid_argument for F != 1.
SchemeOutput run_partial_pre(const SchemeContext& ctx);
/// Time-slotted variant: every subcarrier is split into N'_s slices carrying
/// one SU each, and each CU occupies N'_s / N'_c slices of one subcarrier.
/// Throws std::invalid_argument when N'_s is not a multiple of N'_c.
SchemeOutput run_finesync(const SchemeContext& ctx);

SchemeOutput run_scheme(SchemeId id, const SchemeContext& ctx, std::uint64_t seed = 0);

/// Largest emitted interference over the CUs divided by the threshold.
double max_interference_ratio(const SchemeOutput& out, double gamma_th_w);

}  // namespace hss
