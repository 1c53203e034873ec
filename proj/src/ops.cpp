// SPDX-License-Identifier: Apache-2.0
#include "dco/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dco {
namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const RowMajorMatrix>;

[[noreturn]] void shape_error(OpTag tag, const std::vector<const Tensor*>& inputs,
                              const std::string& detail = {}) {
  std::string msg = std::string("op ") + op_name(tag) + ": incompatible shapes";
  for (const Tensor* t : inputs) msg += " " + shape_to_string(t->shape());
  if (!detail.empty()) msg += " (" + detail + ")";
  throw std::invalid_argument(msg);
}

ConstMatMap as_matrix(const Tensor& t) {
  return ConstMatMap(t.array().data(), t.shape()[0], t.shape()[1]);
}

bool same_shape(const Tensor& a, const Tensor& b) { return a.shape() == b.shape(); }

// Matching shapes, or one side a one-element scalar.
void check_elementwise(OpTag tag, const Tensor& a, const Tensor& b) {
  if (same_shape(a, b) || a.is_scalar() || b.is_scalar()) return;
  shape_error(tag, {&a, &b});
}

Eigen::ArrayXd apply_binary(OpTag tag, const Tensor& a, const Tensor& b) {
  auto combine = [tag](const auto& x, const auto& y) -> Eigen::ArrayXd {
    switch (tag) {
      case OpTag::kAdd: return x + y;
      case OpTag::kSub: return x - y;
      case OpTag::kMul: return x * y;
      case OpTag::kDiv: return x / y;
      default: throw std::logic_error("apply_binary: bad tag");
    }
  };
  if (a.is_scalar() && !b.is_scalar()) {
    return combine(Eigen::ArrayXd::Constant(b.numel(), a.array()[0]), b.array());
  }
  if (b.is_scalar() && !a.is_scalar()) {
    return combine(a.array(), Eigen::ArrayXd::Constant(a.numel(), b.array()[0]));
  }
  return combine(a.array(), b.array());
}

// Resolves the graph shared by the inputs; mixed graphs are an error.
Graph* common_graph(OpTag tag, const std::vector<const Tensor*>& inputs) {
  Graph* g = nullptr;
  for (const Tensor* t : inputs) {
    if (!t->on_graph()) continue;
    if (g != nullptr && g != t->graph()) {
      throw std::invalid_argument(std::string("op ") + op_name(tag) +
                                  ": inputs belong to different graphs");
    }
    g = t->graph();
  }
  return g;
}

Tensor run_op(OpTag tag, const std::vector<const Tensor*>& inputs,
             std::vector<Index> iattr = {}, double dattr = 0.0) {
  Shape out_shape = detail::infer_shape(tag, inputs, iattr);
  Tensor out(std::move(out_shape), detail::eval_op(tag, inputs, iattr, dattr));

  Graph* g = common_graph(tag, inputs);
  if (g == nullptr) return out;

  std::vector<NodeId> ids;
  ids.reserve(inputs.size());
  for (const Tensor* t : inputs) {
    ids.push_back(t->on_graph() ? t->node() : g->constant(*t).node());
  }
  return g->record(tag, ids, std::move(out), std::move(iattr), dattr);
}

}  // namespace

namespace detail {

Shape infer_shape(OpTag tag, const std::vector<const Tensor*>& inputs,
                  const std::vector<Index>& iattr) {
  switch (tag) {
    case OpTag::kAdd:
    case OpTag::kSub:
    case OpTag::kMul:
    case OpTag::kDiv: {
      const Tensor& a = *inputs[0];
      const Tensor& b = *inputs[1];
      check_elementwise(tag, a, b);
      return (a.is_scalar() && !b.is_scalar()) ? b.shape() : a.shape();
    }
    case OpTag::kNeg:
    case OpTag::kTanh:
    case OpTag::kRelu:
    case OpTag::kSquare:
    case OpTag::kScale:
    case OpTag::kAddConst:
    case OpTag::kAbsFloor:
      return inputs[0]->shape();
    case OpTag::kMatmul: {
      const Tensor& a = *inputs[0];
      const Tensor& b = *inputs[1];
      if (a.rank() != 2) shape_error(tag, inputs, "lhs must be rank 2");
      if (b.rank() == 2) {
        if (a.shape()[1] != b.shape()[0]) shape_error(tag, inputs);
        return Shape{a.shape()[0], b.shape()[1]};
      }
      if (b.rank() == 1) {
        if (a.shape()[1] != b.shape()[0]) shape_error(tag, inputs);
        return Shape{a.shape()[0]};
      }
      shape_error(tag, inputs, "rhs must be rank 1 or 2");
    }
    case OpTag::kTranspose: {
      const Tensor& x = *inputs[0];
      if (x.rank() != 2) shape_error(tag, inputs, "rank 2 required");
      return Shape{x.shape()[1], x.shape()[0]};
    }
    case OpTag::kSum:
    case OpTag::kMean:
    case OpTag::kL2Norm:
      if (inputs[0]->numel() == 0) shape_error(tag, inputs, "empty input");
      return Shape{};
    case OpTag::kConcat: {
      Index total = 0;
      for (const Tensor* t : inputs) {
        if (t->rank() != 1) shape_error(tag, inputs, "rank 1 parts required");
        total += t->numel();
      }
      return Shape{total};
    }
    case OpTag::kSlice: {
      const Tensor& x = *inputs[0];
      Index start = iattr[0], len = iattr[1];
      if (x.rank() != 1 || start < 0 || len < 0 || start + len > x.numel()) {
        shape_error(tag, inputs,
                    "window [" + std::to_string(start) + "," +
                        std::to_string(start + len) + ")");
      }
      return Shape{len};
    }
    case OpTag::kPad: {
      const Tensor& x = *inputs[0];
      Index start = iattr[0], total = iattr[1];
      if (x.rank() != 1 || start < 0 || start + x.numel() > total) {
        shape_error(tag, inputs, "target length " + std::to_string(total));
      }
      return Shape{total};
    }
    case OpTag::kReshape:
    case OpTag::kBroadcast: {
      Shape target(iattr.begin(), iattr.end());
      if (tag == OpTag::kBroadcast && inputs[0]->numel() != 1) {
        shape_error(tag, inputs, "source must be one element");
      }
      if (tag == OpTag::kReshape && shape_numel(target) != inputs[0]->numel()) {
        shape_error(tag, inputs, "target " + shape_to_string(target));
      }
      return target;
    }
    case OpTag::kRowRep: {
      const Tensor& x = *inputs[0];
      if (x.rank() != 1) shape_error(tag, inputs, "rank 1 required");
      return Shape{iattr[0], x.numel()};
    }
    case OpTag::kColSum: {
      const Tensor& x = *inputs[0];
      if (x.rank() != 2) shape_error(tag, inputs, "rank 2 required");
      return Shape{x.shape()[1]};
    }
    case OpTag::kLeaf:
      return inputs[0]->shape();
  }
  throw std::logic_error("infer_shape: unhandled tag");
}

Eigen::ArrayXd eval_op(OpTag tag, const std::vector<const Tensor*>& inputs,
                       const std::vector<Index>& iattr, double dattr) {
  switch (tag) {
    case OpTag::kAdd:
    case OpTag::kSub:
    case OpTag::kMul:
    case OpTag::kDiv:
      return apply_binary(tag, *inputs[0], *inputs[1]);
    case OpTag::kNeg:
      return -inputs[0]->array();
    case OpTag::kMatmul: {
      const Tensor& a = *inputs[0];
      const Tensor& b = *inputs[1];
      if (b.rank() == 1) {
        Eigen::VectorXd out = as_matrix(a) * b.array().matrix();
        return out.array();
      }
      RowMajorMatrix out = as_matrix(a) * as_matrix(b);
      return Eigen::Map<const Eigen::ArrayXd>(out.data(), out.size());
    }
    case OpTag::kTranspose: {
      RowMajorMatrix out = as_matrix(*inputs[0]).transpose();
      return Eigen::Map<const Eigen::ArrayXd>(out.data(), out.size());
    }
    case OpTag::kTanh:
      return inputs[0]->array().tanh();
    case OpTag::kRelu:
      return inputs[0]->array().max(0.0);
    case OpTag::kSquare:
      return inputs[0]->array().square();
    case OpTag::kSum:
      return Eigen::ArrayXd::Constant(1, inputs[0]->array().sum());
    case OpTag::kMean:
      return Eigen::ArrayXd::Constant(1, inputs[0]->array().mean());
    case OpTag::kL2Norm:
      return Eigen::ArrayXd::Constant(1, inputs[0]->array().matrix().norm());
    case OpTag::kConcat: {
      Index total = 0;
      for (const Tensor* t : inputs) total += t->numel();
      Eigen::ArrayXd out(total);
      Index at = 0;
      for (const Tensor* t : inputs) {
        out.segment(at, t->numel()) = t->array();
        at += t->numel();
      }
      return out;
    }
    case OpTag::kSlice:
      return inputs[0]->array().segment(iattr[0], iattr[1]);
    case OpTag::kPad: {
      Eigen::ArrayXd out = Eigen::ArrayXd::Zero(iattr[1]);
      out.segment(iattr[0], inputs[0]->numel()) = inputs[0]->array();
      return out;
    }
    case OpTag::kReshape:
      return inputs[0]->array();
    case OpTag::kScale:
      return inputs[0]->array() * dattr;
    case OpTag::kAddConst:
      return inputs[0]->array() + dattr;
    case OpTag::kBroadcast: {
      Index n = 1;
      for (Index d : iattr) n *= d;
      return Eigen::ArrayXd::Constant(n, inputs[0]->array()[0]);
    }
    case OpTag::kRowRep: {
      const Eigen::ArrayXd& x = inputs[0]->array();
      Eigen::ArrayXd out(iattr[0] * x.size());
      for (Index r = 0; r < iattr[0]; ++r) out.segment(r * x.size(), x.size()) = x;
      return out;
    }
    case OpTag::kColSum: {
      Eigen::VectorXd out = as_matrix(*inputs[0]).colwise().sum();
      return out.array();
    }
    case OpTag::kAbsFloor:
      return inputs[0]->array().unaryExpr([eps = dattr](double v) {
        double mag = std::abs(v) < eps ? eps : std::abs(v);
        return v < 0.0 ? -mag : mag;
      });
    case OpTag::kLeaf:
      return inputs[0]->array();
  }
  throw std::logic_error("eval_op: unhandled tag");
}

}  // namespace detail

Tensor add(const Tensor& a, const Tensor& b) { return run_op(OpTag::kAdd, {&a, &b}); }
Tensor sub(const Tensor& a, const Tensor& b) { return run_op(OpTag::kSub, {&a, &b}); }
Tensor mul(const Tensor& a, const Tensor& b) { return run_op(OpTag::kMul, {&a, &b}); }
Tensor div(const Tensor& a, const Tensor& b) { return run_op(OpTag::kDiv, {&a, &b}); }
Tensor neg(const Tensor& x) { return run_op(OpTag::kNeg, {&x}); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  return run_op(OpTag::kMatmul, {&a, &b});
}

Tensor transpose(const Tensor& x) { return run_op(OpTag::kTranspose, {&x}); }
Tensor tanh(const Tensor& x) { return run_op(OpTag::kTanh, {&x}); }
Tensor relu(const Tensor& x) { return run_op(OpTag::kRelu, {&x}); }
Tensor square(const Tensor& x) { return run_op(OpTag::kSquare, {&x}); }
Tensor sum(const Tensor& x) { return run_op(OpTag::kSum, {&x}); }
Tensor mean(const Tensor& x) { return run_op(OpTag::kMean, {&x}); }
Tensor l2_norm(const Tensor& x) { return run_op(OpTag::kL2Norm, {&x}); }

Tensor concat(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw std::invalid_argument("op concat: no parts");
  std::vector<const Tensor*> ins;
  ins.reserve(parts.size());
  for (const Tensor& t : parts) ins.push_back(&t);
  return run_op(OpTag::kConcat, ins);
}

Tensor slice(const Tensor& x, Index start, Index len) {
  return run_op(OpTag::kSlice, {&x}, {start, len});
}

Tensor pad(const Tensor& x, Index start, Index total) {
  return run_op(OpTag::kPad, {&x}, {start, total});
}

Tensor reshape(const Tensor& x, Shape shape) {
  return run_op(OpTag::kReshape, {&x}, std::vector<Index>(shape.begin(), shape.end()));
}

Tensor scale(const Tensor& x, double c) { return run_op(OpTag::kScale, {&x}, {}, c); }

Tensor add_const(const Tensor& x, double c) {
  return run_op(OpTag::kAddConst, {&x}, {}, c);
}

Tensor broadcast(const Tensor& x, Shape shape) {
  return run_op(OpTag::kBroadcast, {&x},
               std::vector<Index>(shape.begin(), shape.end()));
}

Tensor row_rep(const Tensor& x, Index rows) {
  return run_op(OpTag::kRowRep, {&x}, {rows});
}

Tensor col_sum(const Tensor& x) { return run_op(OpTag::kColSum, {&x}); }

Tensor abs_floor(const Tensor& x, double eps) {
  return run_op(OpTag::kAbsFloor, {&x}, {}, eps);
}

}  // namespace dco
