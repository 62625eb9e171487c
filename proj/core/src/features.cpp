#include "hss/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hss/parallel.hpp"

namespace hss {
namespace {

double cu_raw_delta(const RateEngine& engine, int u, int j, int cu) {
  const double gamma_u = engine.interference_mean(cu, u, j, engine.qos_power(u, j));
  if (gamma_u >= engine.radio().interference_threshold_w) return 0.0;
  return std::max(0.0, engine.delta_cu(cu, gamma_u));
}

struct RawDelta {
  double su = 0.0;
  double cu = 0.0;
  bool infeasible = false;
};

// su_rate_cap is su_rate(u, j, P_su), hoisted by callers that loop over many CUs.
RawDelta raw_delta(const RateEngine& engine, int u, int j, int cu, double su_rate_cap) {
  const RadioParams& radio = engine.radio();
  RawDelta d;
  const double p_bar = engine.max_power_bound(cu, u, j);
  const double p_qos = engine.qos_power(u, j);
  if (p_bar < p_qos) {
    d.infeasible = true;
  } else if (p_bar >= radio.su_max_power_w) {
    d.su = std::max(0.0, su_rate_cap - engine.su_rate_at_qos(u, j));
  } else {
    d.su = std::max(0.0, engine.delta_su(u, j, p_bar));
  }
  d.cu = cu_raw_delta(engine, u, j, cu);
  return d;
}

}  // namespace

FeatureBlock feature_block(const RateEngine& engine, int u, int j, int cu) {
  const NetworkConfig& cfg = engine.scenario().config;
  const RawDelta d = raw_delta(engine, u, j, cu, engine.su_rate(u, j, engine.radio().su_max_power_w));
  return {d.su / cfg.sus_per_subcarrier(), d.cu / cfg.cus_per_subcarrier(), d.infeasible};
}

PairwiseDeltas PairwiseDeltas::compute(const RateEngine& engine, int threads, const PairwiseDeltas* reuse_su_terms) {
  const StatisticalCsi& csi = engine.csi();
  PairwiseDeltas out;
  out.sus_ = csi.sus;
  out.satellites_ = csi.satellites;
  out.cus_ = csi.cus;
  const std::size_t n = static_cast<std::size_t>(csi.sus) * static_cast<std::size_t>(csi.satellites) *
                        static_cast<std::size_t>(csi.cus);
  out.cu_.resize(n);
  if (reuse_su_terms != nullptr) {
    if (reuse_su_terms->sus_ != out.sus_ || reuse_su_terms->satellites_ != out.satellites_ ||
        reuse_su_terms->cus_ != out.cus_)
      throw std::invalid_argument("PairwiseDeltas: reused SU terms have different dimensions");
    out.su_ = reuse_su_terms->su_;
    out.infeasible_ = reuse_su_terms->infeasible_;
    parallel_for(static_cast<std::size_t>(csi.sus) * static_cast<std::size_t>(csi.satellites), threads,
                 [&](std::size_t uj) {
                   const int u = static_cast<int>(uj / static_cast<std::size_t>(csi.satellites));
                   const int j = static_cast<int>(uj % static_cast<std::size_t>(csi.satellites));
                   for (int c = 0; c < csi.cus; ++c) out.cu_[out.index(u, j, c)] = cu_raw_delta(engine, u, j, c);
                 });
    return out;
  }
  out.su_.resize(n);
  out.infeasible_.resize(n);

  parallel_for(static_cast<std::size_t>(csi.sus) * static_cast<std::size_t>(csi.satellites), threads,
               [&](std::size_t uj) {
                 const int u = static_cast<int>(uj / static_cast<std::size_t>(csi.satellites));
                 const int j = static_cast<int>(uj % static_cast<std::size_t>(csi.satellites));
                 const double cap = engine.su_rate(u, j, engine.radio().su_max_power_w);
                 for (int c = 0; c < csi.cus; ++c) {
                   const RawDelta d = raw_delta(engine, u, j, c, cap);
                   const std::size_t idx = out.index(u, j, c);
                   out.su_[idx] = d.su;
                   out.cu_[idx] = d.cu;
                   out.infeasible_[idx] = d.infeasible ? 1 : 0;
                 }
               });
  return out;
}

FeatureTable::FeatureTable(const Scenario& scenario, const PairwiseDeltas& deltas)
    : scenario_(&scenario), deltas_(&deltas) {
  if (deltas.cus() != scenario.config.total_cus() || deltas.sus() != scenario.config.sus ||
      deltas.satellites() != scenario.config.satellites)
    throw std::invalid_argument("FeatureTable: deltas do not match the scenario dimensions");
}

FeatureBlock FeatureTable::block(int u, int j, int cu) const {
  const NetworkConfig& cfg = scenario_->config;
  return {deltas_->su_delta(u, j, cu) / cfg.sus_per_subcarrier(),
          deltas_->cu_delta(u, j, cu) / cfg.cus_per_subcarrier(), deltas_->infeasible(u, j, cu)};
}

std::vector<double> FeatureTable::sub_vector(int u, int j, int r) const {
  const NetworkConfig& cfg = scenario_->config;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * cfg.clusters() * cfg.cus_per_bs));
  for (int i = 0; i < cfg.clusters(); ++i) {
    const int bs = scenario_->bs_index(i, r);
    for (int v = 0; v < cfg.cus_per_bs; ++v) {
      const FeatureBlock b = block(u, j, scenario_->cu_index(bs, v));
      out.push_back(b.su_gain_term);
      out.push_back(b.cu_gain_term);
    }
  }
  return out;
}

std::vector<double> FeatureTable::partial_sub_vector(int u, int j, int r) const {
  const NetworkConfig& cfg = scenario_->config;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cfg.clusters() * cfg.cus_per_bs));
  for (int i = 0; i < cfg.clusters(); ++i) {
    const int bs = scenario_->bs_index(i, r);
    for (int v = 0; v < cfg.cus_per_bs; ++v) out.push_back(block(u, j, scenario_->cu_index(bs, v)).cu_gain_term);
  }
  return out;
}

FeatureVector FeatureTable::vector(int u, int j) const {
  const NetworkConfig& cfg = scenario_->config;
  FeatureVector fv;
  fv.reuse_factor = cfg.reuse_factor;
  fv.scalars_per_sub = 2 * cfg.clusters() * cfg.cus_per_bs;
  fv.values.reserve(static_cast<std::size_t>(fv.reuse_factor * fv.scalars_per_sub));
  for (int r = 0; r < cfg.reuse_factor; ++r) {
    const auto sub = sub_vector(u, j, r);
    fv.values.insert(fv.values.end(), sub.begin(), sub.end());
  }
  return fv;
}

double FeatureTable::group_value(int u, int j, int r, double w1) const {
  const NetworkConfig& cfg = scenario_->config;
  const double su_w = w1 / cfg.sus_per_subcarrier();
  const double cu_w = 1.0 / cfg.cus_per_subcarrier();
  double acc = 0.0;
  for (int i = 0; i < cfg.clusters(); ++i) {
    const int bs = scenario_->bs_index(i, r);
    for (int v = 0; v < cfg.cus_per_bs; ++v) {
      const int cu = scenario_->cu_index(bs, v);
      acc += su_w * deltas_->su_delta(u, j, cu) + cu_w * deltas_->cu_delta(u, j, cu);
    }
  }
  return acc;
}

FeatureVector partial_feature_vector(const FeatureTable& table, int u, int j) {
  const NetworkConfig& cfg = table.scenario().config;
  FeatureVector fv;
  fv.reuse_factor = cfg.reuse_factor;
  fv.scalars_per_sub = cfg.clusters() * cfg.cus_per_bs;
  for (int r = 0; r < cfg.reuse_factor; ++r) {
    const auto sub = table.partial_sub_vector(u, j, r);
    fv.values.insert(fv.values.end(), sub.begin(), sub.end());
  }
  return fv;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

double compound_distance(std::span<const double> candidate, const std::vector<std::span<const double>>& chosen) {
  double prod = 1.0;
  for (const auto& c : chosen) prod *= l1_distance(candidate, c);
  return prod;
}

}  // namespace hss
