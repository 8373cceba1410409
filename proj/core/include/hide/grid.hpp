#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hide/error.hpp"

namespace hide {

struct GridShape {
  int rows = 0;
  int cols = 0;

  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// Dense row-major 2D grid of values.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T value = T{}) : shape_{rows, cols} {
    if (rows < 0 || cols < 0) throw ValidationError("grid dimensions must be non-negative");
    values_.assign(shape_.size(), value);
  }
  explicit Grid(GridShape shape, T value = T{}) : Grid(shape.rows, shape.cols, value) {}
  Grid(int rows, int cols, std::vector<T> values) : shape_{rows, cols}, values_(std::move(values)) {
    if (rows < 0 || cols < 0 || values_.size() != shape_.size()) {
      throw ValidationError("grid value count does not match its dimensions");
    }
  }

  [[nodiscard]] int rows() const { return shape_.rows; }
  [[nodiscard]] int cols() const { return shape_.cols; }
  [[nodiscard]] GridShape shape() const { return shape_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool empty() const { return values_.empty(); }

  T& operator()(int row, int col) { return values_[index(row, col)]; }
  const T& operator()(int row, int col) const { return values_[index(row, col)]; }

  [[nodiscard]] std::span<T> values() { return values_; }
  [[nodiscard]] std::span<const T> values() const { return values_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  [[nodiscard]] std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(shape_.cols) +
           static_cast<std::size_t>(col);
  }

  GridShape shape_{};
  std::vector<T> values_;
};

}  // namespace hide
