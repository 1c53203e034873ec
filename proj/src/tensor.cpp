// SPDX-License-Identifier: Apache-2.0
#include "dco/tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace dco {

Index shape_numel(const Shape& shape) {
  Index n = 1;
  for (Index d : shape) n *= d;
  return n;
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << ',';
    out << shape[i];
  }
  out << '}';
  return out.str();
}

Tensor::Tensor(Shape shape, Eigen::ArrayXd values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_numel(shape_) != values_.size()) {
    throw std::invalid_argument("tensor: shape " + shape_to_string(shape_) +
                                " does not match " + std::to_string(values_.size()) +
                                " values");
  }
}

Tensor Tensor::scalar(double v) {
  Eigen::ArrayXd a(1);
  a[0] = v;
  return Tensor(Shape{}, std::move(a));
}

Tensor Tensor::zeros(Shape shape) {
  Index n = shape_numel(shape);
  return Tensor(std::move(shape), Eigen::ArrayXd::Zero(n));
}

Tensor Tensor::ones(Shape shape) { return full(std::move(shape), 1.0); }

Tensor Tensor::full(Shape shape, double v) {
  Index n = shape_numel(shape);
  return Tensor(std::move(shape), Eigen::ArrayXd::Constant(n, v));
}

Tensor Tensor::from_vector(const Eigen::VectorXd& v) {
  return Tensor(Shape{v.size()}, v.array());
}

Tensor Tensor::from_matrix(const Eigen::MatrixXd& m) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  return Tensor(Shape{m.rows(), m.cols()},
                Eigen::Map<const Eigen::ArrayXd>(rm.data(), rm.size()));
}

double Tensor::value() const {
  if (numel() != 1) {
    throw std::invalid_argument("tensor: value() on non-scalar of shape " +
                                shape_to_string(shape_));
  }
  return values_[0];
}

Eigen::MatrixXd Tensor::matrix() const {
  if (rank() != 2) {
    throw std::invalid_argument("tensor: matrix() on rank-" + std::to_string(rank()) +
                                " tensor " + shape_to_string(shape_));
  }
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(values_.data(), shape_[0],
                                                          shape_[1]);
}

}  // namespace dco
