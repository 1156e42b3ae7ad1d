#include "nsrlab/matrix.hpp"

#include <stdexcept>

namespace nsrlab {

std::string to_string(Shape shape) {
  return std::to_string(shape.rows) + "x" + std::to_string(shape.cols);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : shape_{rows, cols}, data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : shape_{rows, cols}, data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("Matrix: " + std::to_string(data_.size()) +
                                " values do not fill shape " + to_string(shape_));
  }
}

Matrix Matrix::column(std::vector<double> values) {
  const std::size_t n = values.size();
  return Matrix(n, 1, std::move(values));
}

std::vector<double> Matrix::column_values(std::size_t c) const {
  std::vector<double> out(shape_.rows);
  for (std::size_t r = 0; r < shape_.rows; ++r) out[r] = (*this)(r, c);
  return out;
}

}  // namespace nsrlab
