// SPDX-License-Identifier: Apache-2.0
#ifndef DCO_OPS_HPP_
#define DCO_OPS_HPP_

#include <vector>

#include "dco/graph.hpp"
#include "dco/tensor.hpp"

namespace dco {

// Recorded elementwise and linear-algebra operations.  When any input is
// bound to a graph the result is recorded there (detached inputs are promoted
// to constants); when all inputs are detached the result is detached.  Binary
// elementwise ops accept one one-element operand and broadcast it.

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);
Tensor neg(const Tensor& x);

/// {m,k}x{k,n} -> {m,n} or {m,k}x{k} -> {m}.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& x);

Tensor tanh(const Tensor& x);
Tensor relu(const Tensor& x);
Tensor square(const Tensor& x);

Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor l2_norm(const Tensor& x);

/// Rank-1 concatenation in argument order.
Tensor concat(const std::vector<Tensor>& parts);
/// Rank-1 window [start, start+len).
Tensor slice(const Tensor& x, Index start, Index len);
/// Embeds a rank-1 tensor into zeros of length `total` at offset `start`.
Tensor pad(const Tensor& x, Index start, Index total);
Tensor reshape(const Tensor& x, Shape shape);

Tensor scale(const Tensor& x, double c);
Tensor add_const(const Tensor& x, double c);
/// One-element tensor replicated to `shape`.
Tensor broadcast(const Tensor& x, Shape shape);
/// Rank-1 {n} -> {rows,n}, each row a copy.
Tensor row_rep(const Tensor& x, Index rows);
/// Rank-2 {r,n} -> {n}, summing over rows.
Tensor col_sum(const Tensor& x);
/// sign(x)*max(|x|, eps); keeps magnitudes away from zero.
Tensor abs_floor(const Tensor& x, double eps);

namespace detail {

/// Forward kernel shared by the ops above and by Graph::replay_matches.
Eigen::ArrayXd eval_op(OpTag tag, const std::vector<const Tensor*>& inputs,
                       const std::vector<Index>& iattr, double dattr);

Shape infer_shape(OpTag tag, const std::vector<const Tensor*>& inputs,
                  const std::vector<Index>& iattr);

}  // namespace detail

}  // namespace dco

#endif  // DCO_OPS_HPP_
