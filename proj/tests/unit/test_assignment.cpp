#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "hss/assignment.hpp"

using namespace hss;

namespace {

double brute_force(const DenseMatrix& m, bool maximize) {
  std::vector<int> perm(static_cast<std::size_t>(m.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  do {
    double v = 0.0;
    for (int r = 0; r < m.rows(); ++r) v += m(r, perm[static_cast<std::size_t>(r)]);
    best = maximize ? std::max(best, v) : std::min(best, v);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool is_permutation_of_columns(const Assignment& a, int n) {
  std::set<int> cols(a.col_of_row.begin(), a.col_of_row.end());
  return static_cast<int>(a.col_of_row.size()) == n && static_cast<int>(cols.size()) == n && *cols.begin() == 0 &&
         *cols.rbegin() == n - 1;
}

}  // namespace

TEST(Assignment, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> value(-50.0, 100.0);
  std::uniform_int_distribution<int> small(0, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    const bool ties = trial % 4 == 0;
    DenseMatrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = ties ? small(rng) : value(rng);
    for (bool maximize : {true, false}) {
      const Assignment a = solve_assignment(m, maximize);
      ASSERT_TRUE(is_permutation_of_columns(a, n));
      double v = 0.0;
      for (int r = 0; r < n; ++r) v += m(r, a.col_of_row[static_cast<std::size_t>(r)]);
      ASSERT_NEAR(v, a.value, 1e-9);
      ASSERT_NEAR(a.value, brute_force(m, maximize), 1e-9) << "trial " << trial;
    }
  }
}

TEST(Assignment, IdentityIsOptimalForDiagonalDominance) {
  const int n = 150;
  DenseMatrix m(n, n, 1.0);
  for (int i = 0; i < n; ++i) m(i, (i * 7) % n) = 100.0;
  const Assignment a = solve_assignment(m, true);
  for (int i = 0; i < n; ++i) EXPECT_EQ(a.col_of_row[static_cast<std::size_t>(i)], (i * 7) % n);
  EXPECT_DOUBLE_EQ(a.value, 100.0 * n);
}

TEST(Assignment, HandlesLargeMagnitudes) {
  DenseMatrix m(3, 3);
  const double big = -1.0e12;
  m(0, 0) = big; m(0, 1) = 5.0; m(0, 2) = big;
  m(1, 0) = 3.0; m(1, 1) = big; m(1, 2) = 1.0;
  m(2, 0) = big; m(2, 1) = 2.0; m(2, 2) = 4.0;
  const Assignment a = solve_assignment(m, true);
  EXPECT_EQ(a.col_of_row, (std::vector<int>{1, 0, 2}));
  EXPECT_DOUBLE_EQ(a.value, 12.0);
}

TEST(Assignment, RejectsBadInput) {
  EXPECT_THROW(solve_assignment(DenseMatrix(2, 3), true), std::invalid_argument);
  DenseMatrix m(2, 2);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solve_assignment(m, false), std::invalid_argument);
  EXPECT_TRUE(solve_assignment(DenseMatrix(0, 0), true).col_of_row.empty());
}
