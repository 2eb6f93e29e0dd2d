#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fixread {

// Dense row-major matrix of doubles; the workhorse container for feature
// tables and square connectivity matrices.
struct RowMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RowMatrix() = default;
  RowMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

struct SquareMatrix {
  int n = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(int size)
      : n(size), data(static_cast<std::size_t>(size) * size, 0.0) {}

  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
};

}  // namespace fixread
