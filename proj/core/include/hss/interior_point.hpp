#pragma once

#include <span>
#include <utility>
#include <vector>

namespace hss {

/// Separable concave objective sum_i phi_i(x_i).
class SeparableConcave {
 public:
  virtual ~SeparableConcave() = default;
  virtual int size() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  /// Value, gradient and the (non-positive) diagonal of the Hessian.
  virtual double evaluate(std::span<const double> x, std::span<double> grad, std::span<double> hess_diag) const = 0;
};

/// sum_k coef_k x_{index_k} <= rhs
struct LinearRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
};

/// Box bounds plus sparse linear inequalities. Variables with lower == upper are fixed.
struct BoxLinearProblem {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LinearRow> rows;
};

struct InteriorPointOptions {
  double gap_tolerance = 1e-11;       // duality gap relative to max(1, |objective|)
  double feasibility_tolerance = 1e-10;
  int max_iterations = 200;
  double barrier_growth = 10.0;
};

struct InteriorPointResult {
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  double gap = 0.0;
  bool converged = false;
};

/// Maximizes a separable concave function over a box-plus-polytope set with
/// a primal-dual path-following Newton method. `start` must satisfy every
/// bound and row strictly for the non-fixed variables; std::invalid_argument
/// is thrown otherwise.
InteriorPointResult maximize_concave(const SeparableConcave& objective, const BoxLinearProblem& problem,
                                     std::span<const double> start, const InteriorPointOptions& options = {});

}  // namespace hss
