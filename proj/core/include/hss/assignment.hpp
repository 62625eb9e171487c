#pragma once

#include <cstddef>
#include <vector>

namespace hss {

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c)]; }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c)];
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<int> col_of_row;
  double value = 0.0;  // sum of the selected entries
};

/// Optimal square assignment (Hungarian method with potentials, O(n^3)).
/// Throws std::invalid_argument for non-square or non-finite input.
/// Rectangular instances are expanded by the caller through column duplication.
Assignment solve_assignment(const DenseMatrix& values, bool maximize);

}  // namespace hss
