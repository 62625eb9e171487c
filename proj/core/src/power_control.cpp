#include "hss/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "hss/interior_point.hpp"

namespace hss {
namespace {

// Variables: pi_u = p_u / P_su for every SU, then tau_c = t_c / gamma_th for every CU.
// Values are in bit/s/Hz; the bandwidth factor is applied by callers.
class SurrogateObjective final : public SeparableConcave {
 public:
  SurrogateObjective(const PowerSubproblem& sub, std::span<const double> t_ref) : sub_(sub) {
    x_ref_.resize(sub.cus.size());
    for (std::size_t c = 0; c < sub.cus.size(); ++c) x_ref_[c] = t_ref[c] / sub.noise_cu_w;
    g_ = sub.gamma_th_w / sub.noise_cu_w;
  }

  int size() const override { return static_cast<int>(sub_.sus.size() + sub_.cus.size()); }

  double value(std::span<const double> x) const override { return evaluate_impl(x, {}, {}, false); }

  double evaluate(std::span<const double> x, std::span<double> grad, std::span<double> hess) const override {
    return evaluate_impl(x, grad, hess, true);
  }

 private:
  double evaluate_impl(std::span<const double> x, std::span<double> grad, std::span<double> hess,
                       bool derivatives) const {
    constexpr double inv_ln2 = std::numbers::log2e;
    const std::size_t nu = sub_.sus.size();
    double total = 0.0;
    for (std::size_t u = 0; u < nu; ++u) {
      const auto snr = sub_.su_snr_per_watt[u];
      const double scale = sub_.su_max_power_w;
      double v = 0.0, d1 = 0.0, d2 = 0.0;
      for (double a : snr) {
        const double aa = a * scale;
        const double den = 1.0 + aa * x[u];
        v += std::log1p(aa * x[u]);
        if (derivatives) {
          d1 += aa / den;
          d2 -= (aa / den) * (aa / den);
        }
      }
      const double w = sub_.su_weight[u] * inv_ln2 / static_cast<double>(snr.size());
      total += w * v;
      if (derivatives) {
        grad[u] = w * d1;
        hess[u] = w * d2;
      }
    }
    for (std::size_t c = 0; c < sub_.cus.size(); ++c) {
      const auto snr = sub_.cu_snr[c];
      const double xc = g_ * x[nu + c];
      double v = 0.0, d1 = 0.0, d2 = 0.0;
      for (double s : snr) {
        v += std::log1p(xc + s);
        if (derivatives) {
          const double inv = 1.0 / (1.0 + xc + s);
          d1 += inv;
          d2 -= inv * inv;
        }
      }
      const double w = sub_.cu_weight[c] * inv_ln2;
      const double q = static_cast<double>(snr.size());
      // Concave part minus the tangent of log(1 + x) at the reference point.
      const double tangent_slope = 1.0 / (1.0 + x_ref_[c]);
      total += w * (v / q - (std::log1p(x_ref_[c]) + (xc - x_ref_[c]) * tangent_slope));
      if (derivatives) {
        grad[nu + c] = w * g_ * (d1 / q - tangent_slope);
        hess[nu + c] = w * g_ * g_ * d2 / q;
      }
    }
    return total;
  }

  const PowerSubproblem& sub_;
  std::vector<double> x_ref_;
  double g_ = 0.0;
};

}  // namespace

PowerSubproblem build_subproblem_for(const RateEngine& engine, int subcarrier, std::vector<int> sus,
                                     std::span<const int> su_satellite, std::vector<int> cus, double su_weight,
                                     double cu_weight) {
  const RadioParams& radio = engine.radio();
  PowerSubproblem sub;
  sub.subcarrier = subcarrier;
  sub.sus = std::move(sus);
  sub.cus = std::move(cus);
  sub.noise_cu_w = radio.noise_cu_w;
  sub.gamma_th_w = radio.interference_threshold_w;
  sub.bandwidth_hz = radio.bandwidth_hz;
  sub.su_max_power_w = radio.su_max_power_w;

  const std::size_t nu = sub.sus.size();
  const std::size_t nc = sub.cus.size();
  sub.su_weight.assign(nu, su_weight);
  sub.cu_weight.assign(nc, cu_weight);
  sub.coupling.resize(nc * nu);
  sub.p_lo.resize(nu);
  sub.p_hi.resize(nu);
  sub.frozen.assign(nu, 0);

  for (std::size_t u = 0; u < nu; ++u) {
    const int id = sub.sus[u];
    const int j = su_satellite[static_cast<std::size_t>(id)];
    sub.su_snr_per_watt.push_back(engine.su_snr_per_watt(id, j));
    double p_bar = radio.su_max_power_w;
    for (std::size_t c = 0; c < nc; ++c) {
      sub.coupling[c * nu + u] = engine.interference_gain(sub.cus[c], id, j);
      p_bar = std::min(p_bar, engine.max_power_bound(sub.cus[c], id, j));
    }
    sub.p_hi[u] = p_bar;
    sub.p_lo[u] = engine.qos_power(id, j);
    if (sub.p_lo[u] > sub.p_hi[u]) {
      sub.frozen[u] = 1;
      sub.p_lo[u] = sub.p_hi[u];
    }
  }
  for (std::size_t c = 0; c < nc; ++c) sub.cu_snr.push_back(engine.cu_snr(sub.cus[c]));
  return sub;
}

PowerSubproblem build_subproblem(const RateEngine& engine, const ScheduleSolution& schedule, int k) {
  const NetworkConfig& cfg = engine.scenario().config;
  return build_subproblem_for(engine, k, schedule.su_clusters[static_cast<std::size_t>(k)], schedule.su_satellite,
                              schedule.cu_clusters[static_cast<std::size_t>(k)], 1.0 / cfg.sus_per_subcarrier(),
                              1.0 / cfg.cus_per_subcarrier());
}

double power_objective(const PowerSubproblem& sub, std::span<const double> p, std::span<const double> t) {
  double total = 0.0;
  for (std::size_t u = 0; u < sub.sus.size(); ++u)
    total += sub.su_weight[u] * ergodic_rate(sub.su_snr_per_watt[u], p[u], sub.bandwidth_hz);
  for (std::size_t c = 0; c < sub.cus.size(); ++c)
    total += sub.cu_weight[c] * ergodic_rate_interfered(sub.cu_snr[c], t[c] / sub.noise_cu_w, sub.bandwidth_hz);
  return total;
}

std::vector<double> tight_interference(const PowerSubproblem& sub, std::span<const double> p) {
  std::vector<double> t(sub.cus.size(), 0.0);
  for (std::size_t c = 0; c < sub.cus.size(); ++c) {
    for (std::size_t u = 0; u < sub.sus.size(); ++u) t[c] = std::max(t[c], sub.coupling_at(c, u) * p[u]);
    t[c] = std::min(t[c], sub.gamma_th_w);
  }
  return t;
}

std::pair<std::vector<double>, std::vector<double>> inner_solve(const PowerSubproblem& sub, std::span<const double> t_ref,
                                                                double gap_tolerance) {
  const std::size_t nu = sub.sus.size();
  const std::size_t nc = sub.cus.size();
  const double P = sub.su_max_power_w;
  const double G = sub.gamma_th_w;

  BoxLinearProblem pb;
  pb.lower.resize(nu + nc);
  pb.upper.resize(nu + nc);
  std::vector<double> start(nu + nc);
  for (std::size_t u = 0; u < nu; ++u) {
    double lo = sub.p_lo[u] / P;
    const double hi = sub.p_hi[u] / P;
    if (sub.frozen[u] || hi - lo <= 1e-12 * hi) lo = hi;
    pb.lower[u] = lo;
    pb.upper[u] = hi;
    start[u] = 0.5 * (lo + hi);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    // SUs with a fixed power (frozen or degenerate range) set a floor on the CU interference.
    double floor = 0.0;
    for (std::size_t u = 0; u < nu; ++u)
      if (pb.lower[u] == pb.upper[u]) floor = std::max(floor, sub.coupling_at(c, u) * pb.upper[u] * P);
    const double lo = std::min(1.0, floor / G);
    pb.lower[nu + c] = lo >= 1.0 - 1e-12 ? 1.0 : lo;
    pb.upper[nu + c] = 1.0;
    double need = pb.lower[nu + c];
    for (std::size_t u = 0; u < nu; ++u) {
      if (pb.lower[u] == pb.upper[u]) continue;
      const double coef = sub.coupling_at(c, u) * P / G;
      if (!(coef > 0.0)) continue;
      pb.rows.push_back({{{static_cast<int>(u), coef}, {static_cast<int>(nu + c), -1.0}}, 0.0});
      need = std::max(need, coef * start[u]);
    }
    start[nu + c] = pb.lower[nu + c] == 1.0 ? 1.0 : 0.5 * (need + 1.0);
  }

  const SurrogateObjective objective(sub, t_ref);
  InteriorPointOptions opts;
  opts.gap_tolerance = gap_tolerance;
  const InteriorPointResult res = maximize_concave(objective, pb, start, opts);

  std::vector<double> p(nu);
  for (std::size_t u = 0; u < nu; ++u) p[u] = std::clamp(res.x[u] * P, sub.p_lo[u], sub.p_hi[u]);
  for (std::size_t u = 0; u < nu; ++u)
    if (sub.frozen[u]) p[u] = sub.p_hi[u];
  std::vector<double> t(nc);
  for (std::size_t c = 0; c < nc; ++c) t[c] = std::clamp(res.x[nu + c] * G, 0.0, G);
  return {std::move(p), std::move(t)};
}

PowerSolution sca_solve(const PowerSubproblem& sub, const ScaOptions& options) {
  const std::size_t nu = sub.sus.size();
  PowerSolution sol;
  sol.frozen = sub.frozen;
  sol.p.resize(nu);
  for (std::size_t u = 0; u < nu; ++u) sol.p[u] = sub.frozen[u] ? sub.p_hi[u] : sub.p_lo[u];
  sol.t = tight_interference(sub, sol.p);
  double obj = power_objective(sub, sol.p, sol.t);
  sol.trace.push_back(obj);
  if (nu == 0) {
    sol.converged = true;
    return sol;
  }

  for (int it = 1; it <= options.max_iterations; ++it) {
    auto [p_new, t_unused] = inner_solve(sub, sol.t, options.inner_gap_tolerance);
    (void)t_unused;
    auto t_new = tight_interference(sub, p_new);
    const double obj_new = power_objective(sub, p_new, t_new);
    sol.iterations = it;
    if (!(obj_new >= obj)) {
      // A drop at rounding level means the previous iterate is already optimal.
      sol.converged = true;
      if (!(obj_new >= obj - 1e-9 * std::abs(obj))) sol.message = "stopped: surrogate step lowered the objective";
      return sol;
    }
    double change = 0.0;
    for (std::size_t u = 0; u < nu; ++u)
      change = std::max(change, std::abs(p_new[u] - sol.p[u]) / std::max(p_new[u], std::numeric_limits<double>::min()));
    sol.p = std::move(p_new);
    sol.t = std::move(t_new);
    obj = obj_new;
    sol.trace.push_back(obj);
    // Without CUs the surrogate is exact and one solve is optimal.
    if (change <= options.tolerance || sub.cus.empty()) {
      sol.converged = true;
      return sol;
    }
  }
  sol.message = "iteration limit reached";
  return sol;
}

std::string power_report_json(const PowerSubproblem& sub, const PowerSolution& sol, const std::string& scheme,
                              int topology, int reuse_factor, double p_bs_dbm) {
  nlohmann::json j;
  j["scheme"] = scheme;
  j["topology"] = topology;
  j["reuse_factor"] = reuse_factor;
  j["p_bs_dbm"] = p_bs_dbm;
  j["subcarrier"] = sub.subcarrier;
  j["sus"] = sub.sus.size();
  j["cus"] = sub.cus.size();
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  j["objective_trace_bps"] = sol.trace;
  std::vector<int> frozen;
  for (std::size_t u = 0; u < sub.sus.size(); ++u)
    if (sub.frozen[u]) frozen.push_back(sub.sus[u]);
  j["qos_violated_sus"] = frozen;
  if (!sol.message.empty()) j["message"] = sol.message;
  return j.dump();
}

}  // namespace hss
