#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qats {

// Dense row-major matrix with 0-based raw indexing. Higher-level code that
// mirrors the 1-based position/state conventions wraps this with accessors.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::int64_t rows, std::int64_t cols, T init = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), init) {}

  // Reallocates and fills.
  void resize(std::int64_t rows, std::int64_t cols, T init = T{}) {
    rows_ = rows;
    cols_ = cols;
    data_.assign(static_cast<std::size_t>(rows * cols), init);
  }

  // Reallocates only when the shape changes; contents are unspecified after a
  // shape change and preserved otherwise.
  void ensure(std::int64_t rows, std::int64_t cols) {
    if (rows == rows_ && cols == cols_) return;
    rows_ = rows;
    cols_ = cols;
    data_.resize(static_cast<std::size_t>(rows * cols));
  }

  T& operator()(std::int64_t i, std::int64_t j) { return data_[idx(i, j)]; }
  const T& operator()(std::int64_t i, std::int64_t j) const { return data_[idx(i, j)]; }

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T* row(std::int64_t i) { return data_.data() + static_cast<std::size_t>(i * cols_); }
  const T* row(std::int64_t i) const { return data_.data() + static_cast<std::size_t>(i * cols_); }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t idx(std::int64_t i, std::int64_t j) const {
    return static_cast<std::size_t>(i * cols_ + j);
  }

  std::int64_t rows_ = 0;
  std::int64_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace qats
