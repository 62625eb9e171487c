#include "hss/interior_point.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hss {
namespace {

// Reduced problem over the free variables: min F(z) s.t. A z <= b.
struct Reduced {
  std::vector<int> free_index;  // reduced -> full
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

Reduced reduce(const BoxLinearProblem& pb, std::span<const double> fixed_values) {
  const int n = static_cast<int>(pb.lower.size());
  Reduced r;
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (pb.upper[static_cast<std::size_t>(i)] > pb.lower[static_cast<std::size_t>(i)]) {
      map[static_cast<std::size_t>(i)] = static_cast<int>(r.free_index.size());
      r.free_index.push_back(i);
    }
  }
  const int nf = static_cast<int>(r.free_index.size());

  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> rhs;
  for (int f = 0; f < nf; ++f) {
    const int i = r.free_index[static_cast<std::size_t>(f)];
    rows.push_back({{f, -1.0}});
    rhs.push_back(-pb.lower[static_cast<std::size_t>(i)]);
    rows.push_back({{f, 1.0}});
    rhs.push_back(pb.upper[static_cast<std::size_t>(i)]);
  }
  for (const auto& row : pb.rows) {
    std::vector<std::pair<int, double>> terms;
    double b = row.rhs;
    for (const auto& [i, coef] : row.terms) {
      if (coef == 0.0) continue;
      const int f = map[static_cast<std::size_t>(i)];
      if (f < 0) {
        b -= coef * fixed_values[static_cast<std::size_t>(i)];
      } else {
        terms.emplace_back(f, coef);
      }
    }
    if (terms.empty()) {
      if (b < -1e-12 * std::max(1.0, std::abs(row.rhs)))
        throw std::invalid_argument("maximize_concave: a row over fixed variables is violated");
      continue;
    }
    rows.push_back(std::move(terms));
    rhs.push_back(b);
  }

  r.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), nf);
  r.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (const auto& [f, coef] : rows[k]) r.a(static_cast<Eigen::Index>(k), f) += coef;
    r.b(static_cast<Eigen::Index>(k)) = rhs[k];
  }
  return r;
}

}  // namespace

InteriorPointResult maximize_concave(const SeparableConcave& objective, const BoxLinearProblem& problem,
                                     std::span<const double> start, const InteriorPointOptions& options) {
  const int n = objective.size();
  if (static_cast<int>(problem.lower.size()) != n || static_cast<int>(problem.upper.size()) != n ||
      static_cast<int>(start.size()) != n)
    throw std::invalid_argument("maximize_concave: dimension mismatch");
  for (int i = 0; i < n; ++i)
    if (problem.lower[static_cast<std::size_t>(i)] > problem.upper[static_cast<std::size_t>(i)])
      throw std::invalid_argument("maximize_concave: empty box");

  std::vector<double> x(start.begin(), start.end());
  for (int i = 0; i < n; ++i)
    if (problem.upper[static_cast<std::size_t>(i)] == problem.lower[static_cast<std::size_t>(i)])
      x[static_cast<std::size_t>(i)] = problem.lower[static_cast<std::size_t>(i)];

  const Reduced red = reduce(problem, x);
  const auto nf = static_cast<Eigen::Index>(red.free_index.size());
  const Eigen::Index m = red.a.rows();

  std::vector<double> grad(static_cast<std::size_t>(n)), hess(static_cast<std::size_t>(n));
  InteriorPointResult out;

  Eigen::VectorXd z(nf);
  for (Eigen::Index f = 0; f < nf; ++f) z(f) = x[static_cast<std::size_t>(red.free_index[static_cast<std::size_t>(f)])];
  auto scatter = [&](const Eigen::VectorXd& zz) {
    for (Eigen::Index f = 0; f < nf; ++f) x[static_cast<std::size_t>(red.free_index[static_cast<std::size_t>(f)])] = zz(f);
  };

  if (nf == 0) {
    out.x = x;
    out.objective = objective.value(x);
    out.converged = true;
    return out;
  }

  Eigen::VectorXd s = red.b - red.a * z;
  if ((s.array() <= 0.0).any()) throw std::invalid_argument("maximize_concave: start is not strictly feasible");

  // Minimize F = -objective.
  auto eval = [&](const Eigen::VectorXd& zz, Eigen::VectorXd& g, Eigen::VectorXd& h) {
    scatter(zz);
    const double v = objective.evaluate(x, grad, hess);
    g.resize(nf);
    h.resize(nf);
    for (Eigen::Index f = 0; f < nf; ++f) {
      const auto i = static_cast<std::size_t>(red.free_index[static_cast<std::size_t>(f)]);
      g(f) = -grad[i];
      h(f) = -hess[i];
    }
    return -v;
  };

  Eigen::VectorXd lambda = (1.0 / s.array()).matrix();
  // Scale the initial multipliers so that the initial gap matches the objective scale.
  Eigen::VectorXd g, h;
  double fval = eval(z, g, h);
  {
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff()) / std::max(1.0, lambda.cwiseAbs().maxCoeff());
    lambda *= scale;
  }

  auto dual_residual = [&](const Eigen::VectorXd& gg, const Eigen::VectorXd& lam) {
    return Eigen::VectorXd(gg + red.a.transpose() * lam);
  };

  for (int it = 0; it < options.max_iterations; ++it) {
    const double eta = s.dot(lambda);
    const double scale = std::max(1.0, std::abs(fval));
    const Eigen::VectorXd rd = dual_residual(g, lambda);
    out.gap = eta;
    out.iterations = it;
    if (eta <= options.gap_tolerance * scale && rd.norm() <= options.feasibility_tolerance * std::max(1.0, g.norm())) {
      out.converged = true;
      break;
    }
    const double t = options.barrier_growth * static_cast<double>(m) / eta;

    const Eigen::VectorXd d = (lambda.array() / s.array()).matrix();
    Eigen::MatrixXd kkt = red.a.transpose() * d.asDiagonal() * red.a;
    kkt.diagonal() += h;
    const Eigen::VectorXd inv_ts = (1.0 / (t * s.array())).matrix();
    const Eigen::VectorXd rhs = -(g + red.a.transpose() * inv_ts);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(kkt);
    Eigen::VectorXd dz = ldlt.solve(rhs);
    if (!dz.allFinite()) dz = kkt.completeOrthogonalDecomposition().solve(rhs);
    const Eigen::VectorXd ds = -red.a * dz;
    const Eigen::VectorXd dl = (inv_ts.array() - lambda.array() + d.array() * (red.a * dz).array()).matrix();

    double alpha = 1.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (dl(k) < 0.0) alpha = std::min(alpha, -lambda(k) / dl(k));
      if (ds(k) < 0.0) alpha = std::min(alpha, -s(k) / ds(k));
    }
    alpha = std::min(1.0, 0.99 * alpha);

    auto residual_norm = [&](const Eigen::VectorXd& gg, const Eigen::VectorXd& lam, const Eigen::VectorXd& ss) {
      const Eigen::VectorXd r1 = dual_residual(gg, lam);
      const Eigen::VectorXd r2 = (lam.array() * ss.array() - 1.0 / t).matrix();
      return std::sqrt(r1.squaredNorm() + r2.squaredNorm());
    };
    const double r0 = residual_norm(g, lambda, s);

    Eigen::VectorXd z_new, s_new, l_new, g_new, h_new;
    double f_new = fval;
    bool stepped = false;
    for (int ls = 0; ls < 60; ++ls) {
      z_new = z + alpha * dz;
      s_new = s + alpha * ds;
      l_new = lambda + alpha * dl;
      if ((s_new.array() > 0.0).all() && (l_new.array() > 0.0).all()) {
        f_new = eval(z_new, g_new, h_new);
        if (std::isfinite(f_new) && residual_norm(g_new, l_new, s_new) <= (1.0 - 0.01 * alpha) * r0) {
          stepped = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!stepped) break;
    z = z_new;
    // Recompute slacks from the primal point to avoid drift.
    s = red.b - red.a * z;
    for (Eigen::Index k = 0; k < m; ++k) s(k) = std::max(s(k), 1e-300);
    lambda = l_new;
    g = g_new;
    h = h_new;
    fval = f_new;
    out.iterations = it + 1;
  }

  scatter(z);
  out.x = x;
  out.objective = objective.value(x);
  return out;
}

}  // namespace hss
