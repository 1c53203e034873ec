// SPDX-License-Identifier: Apache-2.0
#include "dco/autodiff.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace dco {
namespace {

// Reshapes a one-element adjoint to the operand's exact shape; broadcast
// lets {} and {1} mix inside VJP expressions but callers get shape-true
// gradients.
Tensor fit_shape(const Tensor& t, const Shape& shape) {
  if (t.shape() == shape) return t;
  return reshape(t, shape);
}

// Adjoint contribution of `out_adj` to operand `which` of a broadcasting
// binary op: full elementwise adjoint for tensor operands, summed for a
// broadcast scalar operand.
Tensor reduce_for(const Tensor& contribution, const Tensor& operand,
                  const Tensor& other) {
  if (operand.is_scalar() && !other.is_scalar()) {
    return fit_shape(sum(contribution), operand.shape());
  }
  return fit_shape(contribution, operand.shape());
}

// Owns copies of the node's fields: recording VJP ops appends to the tape
// and invalidates references into it.
struct VjpContext {
  Graph* graph;
  OpTag tag;
  std::vector<Index> iattr;
  double dattr;
  Tensor out;              // recorded forward value, bound
  Tensor adj;              // adjoint of the output
  std::vector<Tensor> in;  // recorded input values, bound
};

std::vector<Tensor> op_vjp(const VjpContext& c) {
  const Tensor& g = c.adj;
  switch (c.tag) {
    case OpTag::kAdd:
      return {reduce_for(g, c.in[0], c.in[1]), reduce_for(g, c.in[1], c.in[0])};
    case OpTag::kSub:
      return {reduce_for(g, c.in[0], c.in[1]),
              reduce_for(neg(g), c.in[1], c.in[0])};
    case OpTag::kMul:
      return {reduce_for(mul(g, c.in[1]), c.in[0], c.in[1]),
              reduce_for(mul(g, c.in[0]), c.in[1], c.in[0])};
    case OpTag::kDiv:
      // d(a/b)/da = 1/b, d(a/b)/db = -(a/b)/b.
      return {reduce_for(div(g, c.in[1]), c.in[0], c.in[1]),
              reduce_for(neg(div(mul(g, c.out), c.in[1])), c.in[1], c.in[0])};
    case OpTag::kNeg:
      return {neg(g)};
    case OpTag::kMatmul: {
      const Tensor& a = c.in[0];
      const Tensor& b = c.in[1];
      if (b.rank() == 2) {
        return {matmul(g, transpose(b)), matmul(transpose(a), g)};
      }
      Tensor g_col = reshape(g, {g.numel(), 1});
      Tensor b_row = reshape(b, {1, b.numel()});
      return {matmul(g_col, b_row), matmul(transpose(a), g)};
    }
    case OpTag::kTranspose:
      return {transpose(g)};
    case OpTag::kTanh:
      return {mul(g, add_const(neg(square(c.out)), 1.0))};
    case OpTag::kRelu: {
      Tensor mask = c.graph->constant(
          Tensor(c.in[0].shape(), (c.in[0].array() > 0.0).cast<double>()));
      return {mul(g, mask)};
    }
    case OpTag::kSquare:
      return {mul(g, scale(c.in[0], 2.0))};
    case OpTag::kSum:
      return {broadcast(g, c.in[0].shape())};
    case OpTag::kMean:
      return {scale(broadcast(g, c.in[0].shape()),
                    1.0 / static_cast<double>(c.in[0].numel()))};
    case OpTag::kL2Norm:
      // d||x||/dx = x/||x||; undefined at zero, guarded by callers.
      return {mul(div(g, c.out), c.in[0])};
    case OpTag::kConcat: {
      std::vector<Tensor> parts;
      Index at = 0;
      for (const Tensor& t : c.in) {
        parts.push_back(slice(g, at, t.numel()));
        at += t.numel();
      }
      return parts;
    }
    case OpTag::kSlice:
      return {pad(g, c.iattr[0], c.in[0].numel())};
    case OpTag::kPad:
      return {slice(g, c.iattr[0], c.in[0].numel())};
    case OpTag::kReshape:
      return {reshape(g, c.in[0].shape())};
    case OpTag::kScale:
      return {scale(g, c.dattr)};
    case OpTag::kAddConst:
      return {g};
    case OpTag::kBroadcast:
      return {fit_shape(sum(g), c.in[0].shape())};
    case OpTag::kRowRep:
      return {col_sum(g)};
    case OpTag::kColSum:
      return {row_rep(g, c.in[0].shape()[0])};
    case OpTag::kAbsFloor: {
      Tensor mask = c.graph->constant(Tensor(
          c.in[0].shape(),
          (c.in[0].array().abs() > c.dattr).cast<double>()));
      return {mul(g, mask)};
    }
    case OpTag::kLeaf:
      return {};
  }
  throw std::logic_error("op_vjp: unhandled tag");
}

}  // namespace

std::vector<Tensor> backward(const Tensor& output, const std::vector<Tensor>& wrt,
                             bool create_graph) {
  if (output.numel() != 1) {
    throw std::invalid_argument("backward: output must be scalar, got shape " +
                                shape_to_string(output.shape()));
  }
  if (!output.on_graph()) {
    throw std::invalid_argument("backward: output is not bound to a graph");
  }
  Graph* graph = output.graph();
  for (const Tensor& t : wrt) {
    if (!t.on_graph() || t.graph() != graph) {
      throw std::invalid_argument(
          "backward: wrt tensor is not bound to the output's graph");
    }
  }

  std::unordered_map<NodeId, Tensor> adjoint;
  adjoint.emplace(output.node(), graph->constant(Tensor::ones(output.shape())));

  for (NodeId id = output.node(); id >= 0; --id) {
    auto it = adjoint.find(id);
    if (it == adjoint.end()) continue;
    const Node& n = graph->node(id);
    if (n.tag == OpTag::kLeaf) continue;
    const std::vector<NodeId> input_ids = n.inputs;

    VjpContext ctx{graph, n.tag, n.iattr, n.dattr, graph->bound_value(id),
                   it->second, {}};
    ctx.in.reserve(input_ids.size());
    for (NodeId in_id : input_ids) ctx.in.push_back(graph->bound_value(in_id));

    std::vector<Tensor> contributions = op_vjp(ctx);
    for (std::size_t k = 0; k < input_ids.size(); ++k) {
      NodeId in_id = input_ids[k];
      auto found = adjoint.find(in_id);
      if (found == adjoint.end()) {
        adjoint.emplace(in_id, contributions[k]);
      } else {
        found->second = add(found->second, contributions[k]);
      }
    }
  }

  std::vector<Tensor> grads;
  grads.reserve(wrt.size());
  for (const Tensor& t : wrt) {
    auto it = adjoint.find(t.node());
    Tensor g = (it != adjoint.end())
                   ? fit_shape(it->second, t.shape())
                   : graph->constant(Tensor::zeros(t.shape()));
    grads.push_back(create_graph ? g : g.detached());
  }
  return grads;
}

ValueGrad value_and_grad(const std::function<Tensor(const Tensor&)>& f,
                         const Eigen::VectorXd& theta) {
  Graph graph;
  Tensor t = graph.leaf(Tensor::from_vector(theta));
  Tensor loss = f(t);
  ValueGrad out;
  out.value = loss.value();
  out.grad = backward(loss, {t})[0].vector();
  return out;
}

double finite_difference_check(const std::function<Tensor(const Tensor&)>& f,
                               const Tensor& x, double h) {
  if (h <= 0.0) throw std::invalid_argument("finite_difference_check: h must be > 0");

  Graph graph;
  Tensor xg = graph.leaf(x.detached());
  Tensor y = f(xg);

  Eigen::ArrayXd analytic;
  if (y.on_graph() && y.graph() == &graph) {
    analytic = backward(y, {xg})[0].array();
  } else {
    analytic = Eigen::ArrayXd::Zero(x.numel());  // f ignored its input
  }

  double worst = 0.0;
  for (Index i = 0; i < x.numel(); ++i) {
    Tensor xp = x.detached();
    Tensor xm = x.detached();
    xp.array()[i] += h;
    xm.array()[i] -= h;
    double fd = (f(xp).value() - f(xm).value()) / (2.0 * h);
    double denom = std::max({1.0, std::abs(fd), std::abs(analytic[i])});
    worst = std::max(worst, std::abs(analytic[i] - fd) / denom);
  }
  return worst;
}

}  // namespace dco
