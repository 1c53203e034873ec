// SPDX-License-Identifier: Apache-2.0
#ifndef DCO_AUTODIFF_HPP_
#define DCO_AUTODIFF_HPP_

#include <functional>
#include <vector>

#include "dco/graph.hpp"
#include "dco/ops.hpp"
#include "dco/tensor.hpp"

namespace dco {

/// Reverse-mode gradients of a scalar `output` with respect to `wrt`.
///
/// Adjoints are assembled from recorded primitives, so with
/// `create_graph = true` the returned tensors are graph nodes and a further
/// backward over them yields exact higher-order derivatives.  Tensors in
/// `wrt` that `output` does not depend on get zero gradients.
std::vector<Tensor> backward(const Tensor& output, const std::vector<Tensor>& wrt,
                             bool create_graph = false);

/// Max relative error between backward(f(x)) and central finite differences
/// with step h, over all coordinates of x.  Errors are measured against
/// max(1, |gradient|), so near-zero entries are compared absolutely.
double finite_difference_check(const std::function<Tensor(const Tensor&)>& f,
                               const Tensor& x, double h);

struct ValueGrad {
  double value = 0.0;
  Eigen::VectorXd grad;
};

/// Evaluates a scalar loss and its gradient at a detached point on a fresh
/// graph; nothing leaks to the caller's tapes.
ValueGrad value_and_grad(const std::function<Tensor(const Tensor&)>& f,
                         const Eigen::VectorXd& theta);

}  // namespace dco

#endif  // DCO_AUTODIFF_HPP_
