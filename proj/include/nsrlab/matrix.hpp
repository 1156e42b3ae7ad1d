#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nsrlab {

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  bool operator==(const Shape&) const = default;
};

std::string to_string(Shape shape);

// Dense row-major matrix of doubles. A length-n vector is an n x 1 matrix
// unless stated otherwise.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix column(std::vector<double> values);

  std::size_t rows() const { return shape_.rows; }
  std::size_t cols() const { return shape_.cols; }
  std::size_t size() const { return data_.size(); }
  Shape shape() const { return shape_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * shape_.cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * shape_.cols + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * shape_.cols, shape_.cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * shape_.cols, shape_.cols};
  }

  std::vector<double> column_values(std::size_t c) const;

  const std::vector<double>& values() const { return data_; }
  std::vector<double>& values() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  Shape shape_{};
  std::vector<double> data_;
};

}  // namespace nsrlab
