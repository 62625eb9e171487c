#pragma once

#include <span>
#include <string>
#include <vector>

#include "hss/rate_engine.hpp"
#include "hss/schedule.hpp"

namespace hss {

/// Power allocation problem of one subcarrier: maximize the weighted sum of
/// ergodic CU rates (under interference levels t) and SU rates (at powers p)
/// subject to coupling[c][u] p_u <= t_c <= gamma_th and p_lo <= p <= p_hi.
struct PowerSubproblem {
  int subcarrier = -1;
  std::vector<int> sus;  // SU ids (for reporting)
  std::vector<int> cus;  // CU ids (for reporting)

  std::vector<std::span<const double>> su_snr_per_watt;  // per SU, Q draws
  std::vector<std::span<const double>> cu_snr;           // per CU, Q draws (interference-free SNR)
  std::vector<double> su_weight;
  std::vector<double> cu_weight;
  std::vector<double> coupling;  // [c * sus.size() + u], mean interference per watt (W/W)
  std::vector<double> p_lo;
  std::vector<double> p_hi;
  std::vector<char> frozen;      // QoS cannot be met under the CU protection bound

  double noise_cu_w = 0.0;
  double gamma_th_w = 0.0;
  double bandwidth_hz = 0.0;
  double su_max_power_w = 0.0;

  double coupling_at(std::size_t c, std::size_t u) const { return coupling[c * sus.size() + u]; }
};

/// Assembles the subproblem of subcarrier k for the worst-case interference
/// model: every SU of U_k couples to every CU of V_k. Bounds are
/// [p_QoS, min(p_bar^(k,max), P_su)]; SUs whose QoS power exceeds the upper
/// bound are frozen at it. Weights default to 1/N'_s and 1/N'_c.
PowerSubproblem build_subproblem(const RateEngine& engine, const ScheduleSolution& schedule, int k);

/// Builds a subproblem for an explicit set of SUs and CUs with given weights.
PowerSubproblem build_subproblem_for(const RateEngine& engine, int subcarrier, std::vector<int> sus,
                                     std::span<const int> su_satellite, std::vector<int> cus, double su_weight,
                                     double cu_weight);

struct PowerSolution {
  std::vector<double> p;  // per SU of the subproblem, W
  std::vector<double> t;  // per CU of the subproblem, W
  std::vector<double> trace;  // true objective (bps) at the start and after each accepted iteration
  int iterations = 0;
  bool converged = false;
  std::vector<char> frozen;
  std::string message;
};

struct ScaOptions {
  double tolerance = 1e-2;
  int max_iterations = 100;
  double inner_gap_tolerance = 1e-11;
};

/// Weighted objective in bps for given powers and interference levels.
double power_objective(const PowerSubproblem& sub, std::span<const double> p, std::span<const double> t);

/// Smallest feasible interference level per CU for powers p.
std::vector<double> tight_interference(const PowerSubproblem& sub, std::span<const double> p);

/// Successive convex approximation. Starts from p = p_lo with tight t;
/// each iteration linearizes the convex part of the CU rates at the
/// current t and solves the concave surrogate exactly. Stops when the
/// largest relative power change is at most `tolerance`. Iterates that
/// lower the true objective are rejected, so the trace never decreases.
PowerSolution sca_solve(const PowerSubproblem& sub, const ScaOptions& options = {});

/// Solves the surrogate linearized at interference levels `t_ref` (W).
/// Exposed for tests; returns (p, t).
std::pair<std::vector<double>, std::vector<double>> inner_solve(const PowerSubproblem& sub, std::span<const double> t_ref,
                                                                double gap_tolerance = 1e-11);

/// One JSON object describing a solve, without a trailing newline.
std::string power_report_json(const PowerSubproblem& sub, const PowerSolution& sol, const std::string& scheme,
                              int topology, int reuse_factor, double p_bs_dbm);

}  // namespace hss
