#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hss/channel.hpp"
#include "hss/geometry.hpp"
#include "hss/rate_engine.hpp"
#include "hss/schemes.hpp"

namespace hss {

/// Sweep definition. Every physical quantity carries its unit in the
/// config key; dB values are converted once by the loader.
struct ExperimentConfig {
  NetworkConfig network;                 // reuse_factor is overridden by reuse_factors
  std::vector<int> reuse_factors{4, 1};
  std::vector<double> p_bs_dbm{0.0, 5.0, 10.0};
  int topologies = 10;
  std::uint64_t seed = 1;
  int monte_carlo_draws = 1000;
  std::vector<SchemeId> schemes = all_schemes();
  int rand_repeats = 20;
  int threads = 0;  // 0 = hardware concurrency

  RadioParams radio;  // bs_power_w is replaced by each sweep point
  ScenarioParams scenario;
  ChannelParams channel;
  AntennaSet antennas;

  bool write_features = false;
  bool write_power_reports = true;

  /// Flat JSON object; unknown keys are rejected with std::invalid_argument.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  void validate() const;
};

/// One (scheme, F, P_bs, topology) cell of the sweep.
struct RunRecord {
  std::string scheme;
  int reuse_factor = 0;
  double p_bs_dbm = 0.0;
  int topology = 0;
  double sum_rate_bps = 0.0;
  double cu_sum_rate_bps = 0.0;
  double su_sum_rate_bps = 0.0;
  double qos_violation_fraction = 0.0;
  int fine_iterations = 0;
  int power_iterations = 0;
  double max_interference_ratio = 0.0;  // largest CU interference / threshold
  int infeasible_cus = 0;
  std::string status = "ok";
  double wall_time_s = 0.0;  // not part of the CSV, which must be reproducible
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // ordered by (topology, p_bs, F, scheme)
  std::vector<std::string> topology_json;  // per topology
  std::vector<std::string> power_reports;  // JSON lines
  std::vector<std::pair<std::string, std::string>> feature_csv;  // (file name, content)
  int failures = 0;
};

struct ExperimentHooks {
  /// Called after every topology finishes (from a worker thread, serialized).
  std::function<void(int topology, int done, int total)> progress;
};

/// Runs every sweep cell. Results do not depend on the thread count.
// Seed shared by the layout, CSI and sample bank of topology t.
std::uint64_t topology_seed(std::uint64_t base_seed, int t);

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentHooks& hooks = {});

struct SummaryRow {
  std::string scheme;
  int reuse_factor = 0;
  double p_bs_dbm = 0.0;
  int count = 0;
  double sum_mean = 0.0, sum_std = 0.0;
  double cu_mean = 0.0, cu_std = 0.0;
  double su_mean = 0.0, su_std = 0.0;
  double violation_mean = 0.0, violation_std = 0.0;
  double gain_over_nosharing = 0.0;            // mean sum rate / NoSharing mean - 1 (NaN without baseline)
  double fraction_of_finesync_gain = 0.0;      // gain / FineSync gain (NaN without FineSync)
  int max_fine_iterations = 0;
  int max_power_iterations = 0;
};

/// Mean and sample standard deviation over topologies per (scheme, F, P_bs).
/// Failed records are ignored.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);

std::string summary_text(const std::vector<SummaryRow>& rows);

/// CSV with header; every floating-point value printed with 17 significant digits.
void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records);

/// Writes records.csv, timings.csv, summary.txt, topology_<t>.json,
/// power_reports.jsonl and optional feature CSVs into `dir`.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace hss
