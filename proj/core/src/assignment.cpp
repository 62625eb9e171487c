#include "hss/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hss {

Assignment solve_assignment(const DenseMatrix& values, bool maximize) {
  if (values.rows() != values.cols()) throw std::invalid_argument("solve_assignment: matrix must be square");
  const int n = values.rows();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (!std::isfinite(values(r, c))) throw std::invalid_argument("solve_assignment: non-finite entry");

  Assignment out;
  out.col_of_row.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return out;

  const double sign = maximize ? -1.0 : 1.0;
  auto cost = [&](int r, int c) { return sign * values(r, c); };
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based potentials; row_of[c] = row matched to column c, 0 = free.
  const auto N = static_cast<std::size_t>(n) + 1;
  std::vector<double> u(N, 0.0), v(N, 0.0), minv(N);
  std::vector<int> row_of(N, 0), way(N, 0);
  std::vector<char> used(N);

  for (int i = 1; i <= n; ++i) {
    row_of[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = row_of[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        const auto js = static_cast<std::size_t>(j);
        if (used[js]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[js];
        if (cur < minv[js]) {
          minv[js] = cur;
          way[js] = j0;
        }
        if (minv[js] < delta) {
          delta = minv[js];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        const auto js = static_cast<std::size_t>(j);
        if (used[js]) {
          u[static_cast<std::size_t>(row_of[js])] += delta;
          v[js] -= delta;
        } else {
          minv[js] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      row_of[static_cast<std::size_t>(j0)] = row_of[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  for (int j = 1; j <= n; ++j) out.col_of_row[static_cast<std::size_t>(row_of[static_cast<std::size_t>(j)] - 1)] = j - 1;
  for (int r = 0; r < n; ++r) out.value += values(r, out.col_of_row[static_cast<std::size_t>(r)]);
  return out;
}

}  // namespace hss
