#include "hss/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "hss/parallel.hpp"
#include "hss/rng.hpp"
#include "hss/serialize.hpp"

namespace hss {
namespace {

using nlohmann::json;

template <class T>
T take(const json& j, const char* key, T fallback, std::vector<std::string>& seen) {
  seen.emplace_back(key);
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

struct TopologyOutput {
  std::vector<RunRecord> records;
  std::string json_text;
  std::vector<std::string> reports;
  std::vector<std::pair<std::string, std::string>> features;
  int failures = 0;
};

RunRecord record_from(const SchemeOutput& out, double gamma_th_w) {
  RunRecord r;
  r.scheme = scheme_name(out.scheme);
  r.sum_rate_bps = out.sum_bps;
  r.cu_sum_rate_bps = out.cu_sum_bps;
  r.su_sum_rate_bps = out.su_sum_bps;
  r.qos_violation_fraction = out.qos_violation_fraction;
  r.fine_iterations = out.fine_iterations;
  r.power_iterations = out.power_iterations;
  r.max_interference_ratio = max_interference_ratio(out, gamma_th_w);
  r.infeasible_cus = static_cast<int>(out.schedule.infeasible_cus.size());
  if (!out.power_converged) r.status = "power control did not converge";
  return r;
}

}  // namespace

std::uint64_t topology_seed(std::uint64_t base_seed, int t) {
  return substream_seed(base_seed, {stage::topology, static_cast<std::uint64_t>(t)});
}

namespace {

TopologyOutput run_topology(const ExperimentConfig& cfg, int t, int threads) {
  TopologyOutput res;
  const std::uint64_t topo_seed = topology_seed(cfg.seed, t);

  std::vector<Scenario> scenarios;
  for (int F : cfg.reuse_factors) {
    NetworkConfig nc = cfg.network;
    nc.reuse_factor = F;
    scenarios.push_back(generate_topology(nc, topo_seed, cfg.scenario));
  }
  const StatisticalCsi csi = build_csi(scenarios.front(), cfg.channel, topo_seed);
  const SampleBank bank = draw_sample_bank(csi, cfg.monte_carlo_draws, topo_seed);

  json doc;
  doc["topology"] = t;
  doc["seed"] = topo_seed;
  doc["scenario"] = json::parse(scenario_to_json(scenarios.front()));

  std::unique_ptr<PairwiseDeltas> deltas;
  for (std::size_t pi = 0; pi < cfg.p_bs_dbm.size(); ++pi) {
    const double p_dbm = cfg.p_bs_dbm[pi];
    RadioParams radio = cfg.radio;
    radio.bs_power_w = dbm_to_watts(p_dbm);

    for (std::size_t fi = 0; fi < scenarios.size(); ++fi) {
      const Scenario& sc = scenarios[fi];
      const int F = sc.config.reuse_factor;
      const RateEngine engine(sc, csi, bank, radio, cfg.antennas);
      if (fi == 0) {
        // Deltas are indexed by reuse-independent ids, so one table serves every F.
        auto next = std::make_unique<PairwiseDeltas>(PairwiseDeltas::compute(engine, threads, deltas.get()));
        deltas = std::move(next);
      }
      SchemeContext ctx;
      ctx.engine = &engine;
      ctx.deltas = deltas.get();
      ctx.schedule.threads = threads;
      ctx.collect_reports = cfg.write_power_reports;
      ctx.topology = t;
      ctx.p_bs_dbm = p_dbm;

      std::vector<int> feature_satellites;
      for (SchemeId id : cfg.schemes) {
        if (id == SchemeId::partial_pre && F != 1) continue;
        const auto start = std::chrono::steady_clock::now();
        RunRecord rec;
        try {
          if (id == SchemeId::rand) {
            const int n = std::max(1, cfg.rand_repeats);
            rec.scheme = scheme_name(id);
            for (int rep = 0; rep < n; ++rep) {
              const std::uint64_t s = substream_seed(
                  topo_seed, {stage::random_schedule, static_cast<std::uint64_t>(F), pi, static_cast<std::uint64_t>(rep)});
              const SchemeOutput out = run_rand(ctx, s);
              const RunRecord one = record_from(out, radio.interference_threshold_w);
              rec.sum_rate_bps += one.sum_rate_bps / n;
              rec.cu_sum_rate_bps += one.cu_sum_rate_bps / n;
              rec.su_sum_rate_bps += one.su_sum_rate_bps / n;
              rec.qos_violation_fraction += one.qos_violation_fraction / n;
              rec.max_interference_ratio = std::max(rec.max_interference_ratio, one.max_interference_ratio);
              if (rep == 0) {
                json run = json::parse(scheme_output_to_json(sc, out));
                run["p_bs_dbm"] = p_dbm;
                doc["runs"].push_back(std::move(run));
              }
            }
            rec.sum_rate_bps = rec.cu_sum_rate_bps + rec.su_sum_rate_bps;
          } else {
            SchemeOutput out = run_scheme(id, ctx);
            rec = record_from(out, radio.interference_threshold_w);
            json run = json::parse(scheme_output_to_json(sc, out));
            run["p_bs_dbm"] = p_dbm;
            doc["runs"].push_back(std::move(run));
            for (auto& line : out.power_reports) res.reports.push_back(std::move(line));
            if (id == SchemeId::proposed) feature_satellites = out.schedule.su_satellite;
          }
        } catch (const std::exception& e) {
          rec = RunRecord{};
          rec.scheme = scheme_name(id);
          rec.status = csv_safe(std::string("error: ") + e.what());
        }
        if (rec.status != "ok") ++res.failures;
        rec.reuse_factor = F;
        rec.p_bs_dbm = p_dbm;
        rec.topology = t;
        rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        res.records.push_back(std::move(rec));
      }

      if (cfg.write_features && pi == 0) {
        std::ostringstream os;
        write_feature_csv(os, FeatureTable(sc, *deltas), feature_satellites);
        res.features.emplace_back("features_t" + std::to_string(t) + "_F" + std::to_string(F) + ".csv", os.str());
      }
    }
  }
  res.json_text = doc.dump();
  return res;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  ExperimentConfig c;
  std::vector<std::string> seen;
  NetworkConfig& n = c.network;
  n.satellites = take(j, "satellites", n.satellites, seen);
  n.base_stations = take(j, "base_stations", n.base_stations, seen);
  n.subcarriers = take(j, "subcarriers", n.subcarriers, seen);
  n.cus_per_bs = take(j, "cus_per_bs", n.cus_per_bs, seen);
  n.sus = take(j, "sus", n.sus, seen);
  n.bandwidth_hz = take(j, "bandwidth_hz", n.bandwidth_hz, seen);
  n.carrier_ghz = take(j, "carrier_ghz", n.carrier_ghz, seen);
  n.interval_s = take(j, "interval_s", n.interval_s, seen);
  c.reuse_factors = take(j, "reuse_factors", c.reuse_factors, seen);
  c.p_bs_dbm = take(j, "p_bs_dbm", c.p_bs_dbm, seen);
  c.topologies = take(j, "topologies", c.topologies, seen);
  c.seed = take(j, "seed", c.seed, seen);
  c.monte_carlo_draws = take(j, "monte_carlo_draws", c.monte_carlo_draws, seen);
  c.rand_repeats = take(j, "rand_repeats", c.rand_repeats, seen);
  c.threads = take(j, "threads", c.threads, seen);
  c.write_features = take(j, "write_features", c.write_features, seen);
  c.write_power_reports = take(j, "write_power_reports", c.write_power_reports, seen);
  const auto names = take(j, "schemes", std::vector<std::string>{}, seen);
  if (!names.empty()) {
    c.schemes.clear();
    for (const auto& s : names) c.schemes.push_back(parse_scheme(s));
  }

  RadioParams& r = c.radio;
  r.su_max_power_w = dbw_to_watts(take(j, "su_max_power_dbw", watts_to_dbm(r.su_max_power_w) - 30.0, seen));
  r.su_qos_power_w = dbm_to_watts(take(j, "su_qos_power_dbm", watts_to_dbm(r.su_qos_power_w), seen));
  r.noise_cu_w = dbm_to_watts(take(j, "noise_cu_dbm", watts_to_dbm(r.noise_cu_w), seen));
  r.noise_sat_w = dbm_to_watts(take(j, "noise_sat_dbm", watts_to_dbm(r.noise_sat_w), seen));
  r.interference_threshold_w =
      dbm_to_watts(take(j, "interference_threshold_dbm", watts_to_dbm(r.interference_threshold_w), seen));
  r.bandwidth_hz = n.bandwidth_hz;

  ScenarioParams& sp = c.scenario;
  sp.cell_radius_m = take(j, "cell_radius_m", sp.cell_radius_m, seen);
  sp.satellite_altitude_m = take(j, "satellite_altitude_m", sp.satellite_altitude_m, seen);
  sp.cu_speed_max_mps = take(j, "cu_speed_max_mps", sp.cu_speed_max_mps, seen);
  sp.su_speed_max_mps = take(j, "su_speed_max_mps", sp.su_speed_max_mps, seen);

  ChannelParams& ch = c.channel;
  ch.known_shadow_var_db2 = take(j, "known_shadow_var_db2", ch.known_shadow_var_db2, seen);
  ch.cu_resid_var_max_db2 = take(j, "cu_resid_var_max_db2", ch.cu_resid_var_max_db2, seen);
  ch.su_resid_var_max_db2 = take(j, "su_resid_var_max_db2", ch.su_resid_var_max_db2, seen);
  ch.rician_k = take(j, "rician_k", ch.rician_k, seen);

  AntennaSet& a = c.antennas;
  a.sat_rx_gain_dbi = take(j, "sat_rx_gain_dbi", a.sat_rx_gain_dbi, seen);
  a.bs_tx_gain_dbi = take(j, "bs_tx_gain_dbi", a.bs_tx_gain_dbi, seen);
  a.su_mainlobe_gain_dbi = take(j, "su_mainlobe_gain_dbi", a.su_mainlobe_gain_dbi, seen);

  for (const auto& item : j.items())
    if (std::find(seen.begin(), seen.end(), item.key()) == seen.end())
      throw std::invalid_argument("unknown config key '" + item.key() + "'");
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void ExperimentConfig::validate() const {
  if (reuse_factors.empty()) throw std::invalid_argument("reuse_factors must not be empty");
  if (p_bs_dbm.empty()) throw std::invalid_argument("p_bs_dbm must not be empty");
  if (schemes.empty()) throw std::invalid_argument("schemes must not be empty");
  if (topologies <= 0) throw std::invalid_argument("topologies must be positive");
  if (monte_carlo_draws <= 0) throw std::invalid_argument("monte_carlo_draws must be positive");
  if (rand_repeats <= 0) throw std::invalid_argument("rand_repeats must be positive");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  for (int F : reuse_factors) {
    NetworkConfig nc = network;
    nc.reuse_factor = F;
    nc.validate();
  }
  RadioParams r = radio;
  r.validate();
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentHooks& hooks) {
  config.validate();
  const int total = resolve_threads(config.threads);
  const int outer = std::max(1, std::min(total, config.topologies));
  const int inner = std::max(1, total / outer);

  std::vector<TopologyOutput> parts(static_cast<std::size_t>(config.topologies));
  std::mutex progress_mutex;
  int done = 0;
  parallel_for(parts.size(), outer, [&](std::size_t t) {
    parts[t] = run_topology(config, static_cast<int>(t), inner);
    if (hooks.progress) {
      std::lock_guard lock(progress_mutex);
      hooks.progress(static_cast<int>(t), ++done, config.topologies);
    }
  });

  ExperimentResult result;
  for (auto& p : parts) {
    result.records.insert(result.records.end(), p.records.begin(), p.records.end());
    result.topology_json.push_back(std::move(p.json_text));
    for (auto& r : p.reports) result.power_reports.push_back(std::move(r));
    for (auto& f : p.features) result.feature_csv.push_back(std::move(f));
    result.failures += p.failures;
  }
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  auto scheme_rank = [](const std::string& name) {
    try {
      return static_cast<int>(parse_scheme(name));
    } catch (const std::invalid_argument&) {
      return 100;
    }
  };
  using Key = std::tuple<int, double, int, std::string>;  // (-F, p, scheme rank, name)
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const auto& r : records)
    if (r.status == "ok") groups[{-r.reuse_factor, r.p_bs_dbm, scheme_rank(r.scheme), r.scheme}].push_back(&r);

  auto stats = [](const std::vector<const RunRecord*>& v, double RunRecord::*field) {
    double mean = 0.0;
    for (const auto* r : v) mean += r->*field;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (const auto* r : v) var += (r->*field - mean) * (r->*field - mean);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };

  std::vector<SummaryRow> rows;
  for (const auto& [key, v] : groups) {
    SummaryRow row;
    row.reuse_factor = -std::get<0>(key);
    row.p_bs_dbm = std::get<1>(key);
    row.scheme = std::get<3>(key);
    row.count = static_cast<int>(v.size());
    std::tie(row.sum_mean, row.sum_std) = stats(v, &RunRecord::sum_rate_bps);
    std::tie(row.cu_mean, row.cu_std) = stats(v, &RunRecord::cu_sum_rate_bps);
    std::tie(row.su_mean, row.su_std) = stats(v, &RunRecord::su_sum_rate_bps);
    std::tie(row.violation_mean, row.violation_std) = stats(v, &RunRecord::qos_violation_fraction);
    for (const auto* r : v) {
      row.max_fine_iterations = std::max(row.max_fine_iterations, r->fine_iterations);
      row.max_power_iterations = std::max(row.max_power_iterations, r->power_iterations);
    }
    rows.push_back(row);
  }

  auto find = [&](const SummaryRow& like, const std::string& scheme) -> const SummaryRow* {
    for (const auto& r : rows)
      if (r.scheme == scheme && r.reuse_factor == like.reuse_factor && r.p_bs_dbm == like.p_bs_dbm) return &r;
    return nullptr;
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& row : rows) {
    const SummaryRow* base = find(row, scheme_name(SchemeId::nosharing));
    row.gain_over_nosharing = base && base->sum_mean > 0.0 ? row.sum_mean / base->sum_mean - 1.0 : nan;
  }
  for (auto& row : rows) {
    const SummaryRow* fs = find(row, scheme_name(SchemeId::finesync));
    row.fraction_of_finesync_gain =
        fs && std::isfinite(fs->gain_over_nosharing) && fs->gain_over_nosharing != 0.0
            ? row.gain_over_nosharing / fs->gain_over_nosharing
            : nan;
  }
  return rows;
}

std::string summary_text(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-12s %3s %8s %4s %14s %12s %14s %14s %10s %9s %9s %6s %6s\n", "scheme", "F",
                "Pbs_dBm", "n", "sum_Mbps", "sum_sd", "cu_Mbps", "su_Mbps", "qos_viol", "gain_%", "of_fine", "L_s",
                "L_p");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-12s %3d %8.2f %4d %14.4f %12.4f %14.4f %14.4f %10.4f %9.2f %9.3f %6d %6d\n",
                  r.scheme.c_str(), r.reuse_factor, r.p_bs_dbm, r.count, r.sum_mean / 1e6, r.sum_std / 1e6,
                  r.cu_mean / 1e6, r.su_mean / 1e6, r.violation_mean, 100.0 * r.gain_over_nosharing,
                  r.fraction_of_finesync_gain, r.max_fine_iterations, r.max_power_iterations);
    os << line;
  }
  return os.str();
}

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << "scheme,reuse_factor,p_bs_dbm,topology,sum_rate_bps,cu_sum_rate_bps,su_sum_rate_bps,"
        "qos_violation_fraction,fine_iterations,power_iterations,max_interference_ratio,infeasible_cus,status\n";
  for (const auto& r : records) {
    os << r.scheme << ',' << r.reuse_factor << ',' << fmt(r.p_bs_dbm) << ',' << r.topology << ','
       << fmt(r.sum_rate_bps) << ',' << fmt(r.cu_sum_rate_bps) << ',' << fmt(r.su_sum_rate_bps) << ','
       << fmt(r.qos_violation_fraction) << ',' << r.fine_iterations << ',' << r.power_iterations << ','
       << fmt(r.max_interference_ratio) << ',' << r.infeasible_cus << ',' << csv_safe(r.status) << '\n';
  }
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("records.csv");
    write_records_csv(f, result.records);
  }
  {
    auto f = open("timings.csv");
    f << "scheme,reuse_factor,p_bs_dbm,topology,wall_time_s\n";
    for (const auto& r : result.records)
      f << r.scheme << ',' << r.reuse_factor << ',' << fmt(r.p_bs_dbm) << ',' << r.topology << ','
        << fmt(r.wall_time_s) << '\n';
  }
  {
    auto f = open("summary.txt");
    f << summary_text(summarize(result.records));
  }
  for (std::size_t t = 0; t < result.topology_json.size(); ++t) {
    auto f = open("topology_" + std::to_string(t) + ".json");
    f << result.topology_json[t] << '\n';
  }
  if (!result.power_reports.empty()) {
    auto f = open("power_reports.jsonl");
    for (const auto& line : result.power_reports) f << line << '\n';
  }
  for (const auto& [name, content] : result.feature_csv) {
    auto f = open(name);
    f << content;
  }
}

}  // namespace hss
