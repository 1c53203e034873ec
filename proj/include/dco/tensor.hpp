// SPDX-License-Identifier: Apache-2.0
#ifndef DCO_TENSOR_HPP_
#define DCO_TENSOR_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace dco {

class Graph;

using Index = Eigen::Index;
using NodeId = std::int64_t;
using Shape = std::vector<Index>;

inline constexpr NodeId kNoNode = -1;

Index shape_numel(const Shape& shape);
std::string shape_to_string(const Shape& shape);

/// Dense multi-dimensional array of doubles, optionally bound to a graph
/// node.  Rank 0 is a scalar, rank 1 a vector, rank 2 a row-major matrix.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, Eigen::ArrayXd values);

  static Tensor scalar(double v);
  static Tensor zeros(Shape shape);
  static Tensor ones(Shape shape);
  static Tensor full(Shape shape, double v);
  static Tensor from_vector(const Eigen::VectorXd& v);
  /// Row-major flattening of m into a rank-2 tensor.
  static Tensor from_matrix(const Eigen::MatrixXd& m);

  const Shape& shape() const { return shape_; }
  Index rank() const { return static_cast<Index>(shape_.size()); }
  Index numel() const { return values_.size(); }
  bool is_scalar() const { return numel() == 1 && shape_.size() <= 1; }

  const Eigen::ArrayXd& array() const { return values_; }
  Eigen::ArrayXd& array() { return values_; }

  /// Value of a one-element tensor.
  double value() const;
  double operator[](Index i) const { return values_[i]; }

  Eigen::VectorXd vector() const { return values_.matrix(); }
  /// Rank-2 view as an Eigen matrix (copies; storage is row-major).
  Eigen::MatrixXd matrix() const;

  bool all_finite() const { return values_.isFinite().all(); }

  bool on_graph() const { return graph_ != nullptr; }
  Graph* graph() const { return graph_; }
  NodeId node() const { return node_; }

  /// Same values, no graph binding.
  Tensor detached() const { return Tensor(shape_, values_); }

 private:
  friend class Graph;

  Shape shape_;
  Eigen::ArrayXd values_;
  Graph* graph_ = nullptr;
  NodeId node_ = kNoNode;
};

}  // namespace dco

#endif  // DCO_TENSOR_HPP_
