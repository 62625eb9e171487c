#include "hss/schemes.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "hss/parallel.hpp"
#include "hss/rng.hpp"

namespace hss {

std::string scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::proposed: return "proposed";
    case SchemeId::nosharing: return "nosharing";
    case SchemeId::rand: return "rand";
    case SchemeId::partial_pre: return "partial_pre";
    case SchemeId::finesync: return "finesync";
  }
  return "unknown";
}

SchemeId parse_scheme(const std::string& name) {
  for (SchemeId id : all_schemes())
    if (scheme_name(id) == name) return id;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

const std::vector<SchemeId>& all_schemes() {
  static const std::vector<SchemeId> ids{SchemeId::proposed, SchemeId::nosharing, SchemeId::rand,
                                         SchemeId::partial_pre, SchemeId::finesync};
  return ids;
}

namespace {

void require_valid(const Scenario& sc, const ScheduleSolution& s, SchemeId id) {
  const std::string err = audit_schedule(sc, s);
  if (!err.empty()) throw std::logic_error(scheme_name(id) + ": invalid schedule: " + err);
}

// Rates under the worst-case interference model for a subcarrier-level schedule.
void evaluate_worst_case(const RateEngine& engine, SchemeOutput& out) {
  const SumRateBreakdown b = sum_rate_lower_bound(engine, out.schedule, out.su_power_w);
  out.cu_rate_bps = b.cu_rates;
  out.su_rate_bps = b.su_rates;
  out.cu_interference_w = b.cu_interference;
  out.cu_sum_bps = b.cu_bps;
  out.su_sum_bps = b.su_bps;
  out.sum_bps = b.total_bps;
}

void flag_qos(const RateEngine& engine, SchemeOutput& out) {
  const int n = static_cast<int>(out.su_power_w.size());
  out.qos_violated.assign(static_cast<std::size_t>(n), 0);
  int violated = 0;
  for (int u = 0; u < n; ++u) {
    const double p_qos = engine.qos_power(u, out.schedule.su_satellite[static_cast<std::size_t>(u)]);
    if (out.su_power_w[static_cast<std::size_t>(u)] < p_qos * (1.0 - kQosTolerance)) {
      out.qos_violated[static_cast<std::size_t>(u)] = 1;
      ++violated;
    }
  }
  out.qos_violation_fraction = n > 0 ? static_cast<double>(violated) / n : 0.0;
}

// Largest power per SU keeping every co-channel CU at or below the threshold.
std::vector<double> interference_caps(const RateEngine& engine, const ScheduleSolution& s) {
  const int n = static_cast<int>(s.su_subcarrier.size());
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    const int k = s.su_subcarrier[static_cast<std::size_t>(u)];
    const int j = s.su_satellite[static_cast<std::size_t>(u)];
    double cap = engine.radio().su_max_power_w;
    for (int c : s.cu_clusters[static_cast<std::size_t>(k)]) cap = std::min(cap, engine.max_power_bound(c, u, j));
    p[static_cast<std::size_t>(u)] = cap;
  }
  return p;
}

std::vector<int> nearest_satellites(const RateEngine& engine) {
  const int n = engine.scenario().config.sus;
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) out[static_cast<std::size_t>(u)] = engine.nearest_satellite(u);
  return out;
}

}  // namespace

SchemeOutput run_proposed(const SchemeContext& ctx) {
  const RateEngine& engine = *ctx.engine;
  const Scenario& sc = engine.scenario();
  const NetworkConfig& cfg = sc.config;
  SchemeOutput out;
  out.scheme = SchemeId::proposed;
  out.schedule = hierarchical_schedule(engine, *ctx.deltas, ctx.schedule);
  out.fine_iterations = out.schedule.fine_iterations;
  require_valid(sc, out.schedule, out.scheme);

  out.su_power_w.assign(static_cast<std::size_t>(cfg.sus), 0.0);
  std::vector<PowerSolution> sols(static_cast<std::size_t>(cfg.subcarriers));
  std::vector<PowerSubproblem> subs(static_cast<std::size_t>(cfg.subcarriers));
  parallel_for(static_cast<std::size_t>(cfg.subcarriers), ctx.schedule.threads, [&](std::size_t k) {
    subs[k] = build_subproblem(engine, out.schedule, static_cast<int>(k));
    sols[k] = sca_solve(subs[k], ctx.sca);
  });
  for (std::size_t k = 0; k < sols.size(); ++k) {
    for (std::size_t i = 0; i < subs[k].sus.size(); ++i)
      out.su_power_w[static_cast<std::size_t>(subs[k].sus[i])] = sols[k].p[i];
    out.power_iterations = std::max(out.power_iterations, sols[k].iterations);
    out.power_converged = out.power_converged && sols[k].converged;
    if (ctx.collect_reports)
      out.power_reports.push_back(
          power_report_json(subs[k], sols[k], scheme_name(out.scheme), ctx.topology, cfg.reuse_factor, ctx.p_bs_dbm));
  }
  evaluate_worst_case(engine, out);
  flag_qos(engine, out);
  return out;
}

SchemeOutput run_nosharing(const SchemeContext& ctx) {
  const RateEngine& engine = *ctx.engine;
  const Scenario& sc = engine.scenario();
  const NetworkConfig& cfg = sc.config;
  SchemeOutput out;
  out.scheme = SchemeId::nosharing;
  ScheduleSolution& s = out.schedule;
  // SUs get a nominal balanced placement so the schedule stays well formed; they never transmit.
  s.su_subcarrier.resize(static_cast<std::size_t>(cfg.sus));
  s.su_satellite = nearest_satellites(engine);
  for (int u = 0; u < cfg.sus; ++u) s.su_subcarrier[static_cast<std::size_t>(u)] = u % cfg.subcarriers;
  s.cu_subcarrier.resize(static_cast<std::size_t>(cfg.total_cus()));
  for (int m = 0; m < cfg.base_stations; ++m) {
    const int first = first_subcarrier(cfg, sc.base_stations[static_cast<std::size_t>(m)].color);
    for (int v = 0; v < cfg.cus_per_bs; ++v)
      s.cu_subcarrier[static_cast<std::size_t>(sc.cu_index(m, v))] = first + v % cfg.subcarriers_per_bs();
  }
  s.rebuild_clusters(cfg.subcarriers);
  require_valid(sc, s, out.scheme);

  out.su_power_w.assign(static_cast<std::size_t>(cfg.sus), 0.0);
  evaluate_worst_case(engine, out);
  // Unserved SUs are not counted as QoS violations.
  out.qos_violated.assign(static_cast<std::size_t>(cfg.sus), 0);
  out.qos_violation_fraction = 0.0;
  return out;
}

SchemeOutput run_rand(const SchemeContext& ctx, std::uint64_t seed) {
  const RateEngine& engine = *ctx.engine;
  const Scenario& sc = engine.scenario();
  const NetworkConfig& cfg = sc.config;
  SchemeOutput out;
  out.scheme = SchemeId::rand;
  ScheduleSolution& s = out.schedule;

  Rng rng = make_rng(seed, {stage::random_schedule});
  auto shuffle = [&](std::vector<int>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(std::uniform_int_distribution<std::uint64_t>(0, i - 1)(rng));
      std::swap(v[i - 1], v[j]);
    }
  };

  std::vector<int> order(static_cast<std::size_t>(cfg.sus));
  std::iota(order.begin(), order.end(), 0);
  shuffle(order);
  s.su_subcarrier.resize(static_cast<std::size_t>(cfg.sus));
  for (int pos = 0; pos < cfg.sus; ++pos)
    s.su_subcarrier[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos / cfg.sus_per_subcarrier();
  s.su_satellite = nearest_satellites(engine);

  s.cu_subcarrier.resize(static_cast<std::size_t>(cfg.total_cus()));
  for (int m = 0; m < cfg.base_stations; ++m) {
    const int first = first_subcarrier(cfg, sc.base_stations[static_cast<std::size_t>(m)].color);
    std::vector<int> slots(static_cast<std::size_t>(cfg.cus_per_bs));
    std::iota(slots.begin(), slots.end(), 0);
    shuffle(slots);
    for (int v = 0; v < cfg.cus_per_bs; ++v)
      s.cu_subcarrier[static_cast<std::size_t>(sc.cu_index(m, v))] =
          first + slots[static_cast<std::size_t>(v)] / cfg.cus_per_subcarrier();
  }
  s.rebuild_clusters(cfg.subcarriers);
  require_valid(sc, s, out.scheme);

  out.su_power_w = interference_caps(engine, s);
  evaluate_worst_case(engine, out);
  flag_qos(engine, out);
  return out;
}

SchemeOutput run_partial_pre(const SchemeContext& ctx) {
  const RateEngine& engine = *ctx.engine;
  const Scenario& sc = engine.scenario();
  const NetworkConfig& cfg = sc.config;
  if (cfg.reuse_factor != 1) throw std::invalid_argument("partial_pre is only defined for reuse factor 1");
  SchemeOutput out;
  out.scheme = SchemeId::partial_pre;
  ScheduleSolution& s = out.schedule;
  s.su_satellite = nearest_satellites(engine);
  s.cu_subcarrier.assign(static_cast<std::size_t>(cfg.total_cus()), -1);

  const FeatureTable table(sc, *ctx.deltas);
  std::vector<int> everyone(static_cast<std::size_t>(cfg.sus));
  std::iota(everyone.begin(), everyone.end(), 0);
  s.fine_iterations = fine_stage(
      cfg, {everyone},
      [&](int u, int r) { return table.partial_sub_vector(u, s.su_satellite[static_cast<std::size_t>(u)], r); }, s,
      ctx.schedule);
  out.fine_iterations = s.fine_iterations;
  schedule_cus(engine, *ctx.deltas, s, ctx.schedule.threads);
  require_valid(sc, s, out.scheme);

  out.su_power_w = interference_caps(engine, s);
  evaluate_worst_case(engine, out);
  flag_qos(engine, out);
  return out;
}

SchemeOutput run_finesync(const SchemeContext& ctx) {
  const RateEngine& engine = *ctx.engine;
  const PairwiseDeltas& deltas = *ctx.deltas;
  const Scenario& sc = engine.scenario();
  const NetworkConfig& cfg = sc.config;
  const int slices = cfg.sus_per_subcarrier();
  const int n_cu = cfg.cus_per_subcarrier();
  if (slices % n_cu != 0)
    throw std::invalid_argument("finesync: SUs per subcarrier must be a multiple of CUs per (BS, subcarrier)");
  const int share = slices / n_cu;  // slices per CU
  const int k_per_bs = cfg.subcarriers_per_bs();
  const int slots_per_group = k_per_bs * n_cu;

  SchemeOutput out;
  out.scheme = SchemeId::finesync;
  ScheduleSolution& s = out.schedule;
  const FeatureTable table(sc, deltas);
  const CoarseClustering coarse = coarse_cluster(table);
  s.su_satellite = coarse.satellite;
  s.su_subcarrier.assign(static_cast<std::size_t>(cfg.sus), -1);
  out.su_slice.assign(static_cast<std::size_t>(cfg.sus), -1);

  // slot_sus[r][slot]: SUs time-sharing one CU slot; slot -> (subcarrier, slice group).
  std::vector<std::vector<std::vector<int>>> slot_sus(static_cast<std::size_t>(cfg.reuse_factor));
  std::vector<int> iterations(static_cast<std::size_t>(cfg.reuse_factor), 0);
  parallel_for(static_cast<std::size_t>(cfg.reuse_factor), ctx.schedule.threads, [&](std::size_t r) {
    const auto& members = coarse.groups[r];
    std::vector<std::vector<double>> storage;
    for (int u : members) storage.push_back(table.sub_vector(u, coarse.satellite[static_cast<std::size_t>(u)], static_cast<int>(r)));
    std::vector<std::span<const double>> views(storage.begin(), storage.end());
    const FineClustering fc = fine_cluster(members, views, slots_per_group, share, ctx.schedule.fine);
    iterations[r] = fc.iterations;
    slot_sus[r] = fc.clusters;
  });
  out.fine_iterations = *std::max_element(iterations.begin(), iterations.end());
  s.fine_iterations = out.fine_iterations;

  for (int r = 0; r < cfg.reuse_factor; ++r) {
    for (int slot = 0; slot < slots_per_group; ++slot) {
      const int k = r * k_per_bs + slot / n_cu;
      const int group = slot % n_cu;
      const auto& members = slot_sus[static_cast<std::size_t>(r)][static_cast<std::size_t>(slot)];
      for (std::size_t l = 0; l < members.size(); ++l) {
        s.su_subcarrier[static_cast<std::size_t>(members[l])] = k;
        out.su_slice[static_cast<std::size_t>(members[l])] = group * share + static_cast<int>(l);
      }
    }
  }

  // CU of every (BS, slot).
  std::vector<std::vector<int>> cu_in_slot(static_cast<std::size_t>(cfg.base_stations));
  s.cu_subcarrier.assign(static_cast<std::size_t>(cfg.total_cus()), -1);
  std::vector<std::vector<int>> infeasible(static_cast<std::size_t>(cfg.base_stations));
  parallel_for(static_cast<std::size_t>(cfg.base_stations), ctx.schedule.threads, [&](std::size_t m) {
    const int bs = static_cast<int>(m);
    const int r = sc.base_stations[m].color;
    CuSlotProblem p;
    p.slot_capacity = 1;
    p.su_weight = (1.0 / cfg.clusters()) / slices;
    p.cu_weight = 1.0 / slices;
    p.mode = SlotInterference::per_member;
    for (int v = 0; v < cfg.cus_per_bs; ++v) p.cus.push_back(sc.cu_index(bs, v));
    p.slot_sus = slot_sus[static_cast<std::size_t>(r)];
    const CuSlotResult res = assign_cus_to_slots(engine, deltas, s.su_satellite, p);
    cu_in_slot[m].assign(static_cast<std::size_t>(slots_per_group), -1);
    for (std::size_t row = 0; row < p.cus.size(); ++row) {
      const int slot = res.slot_of[row];
      cu_in_slot[m][static_cast<std::size_t>(slot)] = p.cus[row];
      s.cu_subcarrier[static_cast<std::size_t>(p.cus[row])] = r * k_per_bs + slot / n_cu;
    }
    infeasible[m] = res.infeasible;
  });
  for (const auto& list : infeasible) s.infeasible_cus.insert(s.infeasible_cus.end(), list.begin(), list.end());
  s.rebuild_clusters(cfg.subcarriers);
  require_valid(sc, s, out.scheme);

  // One power problem per RB: the SU of the slice against the CU of each BS holding that slice.
  out.su_power_w.assign(static_cast<std::size_t>(cfg.sus), 0.0);
  std::vector<PowerSubproblem> subs(static_cast<std::size_t>(cfg.sus));
  std::vector<PowerSolution> sols(static_cast<std::size_t>(cfg.sus));
  parallel_for(static_cast<std::size_t>(cfg.sus), ctx.schedule.threads, [&](std::size_t u) {
    const int k = s.su_subcarrier[u];
    const int r = k / k_per_bs;
    const int slot = (k - r * k_per_bs) * n_cu + out.su_slice[u] / share;
    std::vector<int> cus;
    for (int i = 0; i < cfg.clusters(); ++i)
      cus.push_back(cu_in_slot[static_cast<std::size_t>(sc.bs_index(i, r))][static_cast<std::size_t>(slot)]);
    subs[u] = build_subproblem_for(engine, k, {static_cast<int>(u)}, s.su_satellite, std::move(cus), 1.0 / slices,
                                   1.0 / slices);
    sols[u] = sca_solve(subs[u], ctx.sca);
  });

  out.su_rate_bps.assign(static_cast<std::size_t>(cfg.sus), 0.0);
  out.cu_rate_bps.assign(static_cast<std::size_t>(cfg.total_cus()), 0.0);
  out.cu_interference_w.assign(static_cast<std::size_t>(cfg.total_cus()), 0.0);
  for (int u = 0; u < cfg.sus; ++u) {
    const auto& sub = subs[static_cast<std::size_t>(u)];
    const auto& sol = sols[static_cast<std::size_t>(u)];
    const double p = sol.p[0];
    out.su_power_w[static_cast<std::size_t>(u)] = p;
    out.su_rate_bps[static_cast<std::size_t>(u)] = engine.su_rate(u, s.su_satellite[static_cast<std::size_t>(u)], p);
    for (std::size_t c = 0; c < sub.cus.size(); ++c) {
      const auto cu = static_cast<std::size_t>(sub.cus[c]);
      const double t = sub.coupling_at(c, 0) * p;
      out.cu_interference_w[cu] = std::max(out.cu_interference_w[cu], t);
      out.cu_rate_bps[cu] += engine.cu_rate(sub.cus[c], t) / share;
    }
    out.power_iterations = std::max(out.power_iterations, sol.iterations);
    out.power_converged = out.power_converged && sol.converged;
    if (ctx.collect_reports)
      out.power_reports.push_back(
          power_report_json(sub, sol, scheme_name(out.scheme), ctx.topology, cfg.reuse_factor, ctx.p_bs_dbm));
  }
  for (double r : out.cu_rate_bps) out.cu_sum_bps += r;
  out.cu_sum_bps /= n_cu;
  for (double r : out.su_rate_bps) out.su_sum_bps += r;
  out.su_sum_bps /= slices;
  out.sum_bps = out.cu_sum_bps + out.su_sum_bps;
  flag_qos(engine, out);
  return out;
}

SchemeOutput run_scheme(SchemeId id, const SchemeContext& ctx, std::uint64_t seed) {
  switch (id) {
    case SchemeId::proposed: return run_proposed(ctx);
    case SchemeId::nosharing: return run_nosharing(ctx);
    case SchemeId::rand: return run_rand(ctx, seed);
    case SchemeId::partial_pre: return run_partial_pre(ctx);
    case SchemeId::finesync: return run_finesync(ctx);
  }
  throw std::invalid_argument("run_scheme: unknown scheme");
}

double max_interference_ratio(const SchemeOutput& out, double gamma_th_w) {
  double worst = 0.0;
  for (double t : out.cu_interference_w) worst = std::max(worst, t / gamma_th_w);
  return worst;
}

}  // namespace hss
