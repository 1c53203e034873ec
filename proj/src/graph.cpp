// SPDX-License-Identifier: Apache-2.0
#include "dco/graph.hpp"

#include <stdexcept>

#include "dco/ops.hpp"

namespace dco {

const char* op_name(OpTag tag) {
  switch (tag) {
    case OpTag::kLeaf: return "leaf";
    case OpTag::kAdd: return "add";
    case OpTag::kSub: return "sub";
    case OpTag::kMul: return "mul";
    case OpTag::kDiv: return "div";
    case OpTag::kNeg: return "neg";
    case OpTag::kMatmul: return "matmul";
    case OpTag::kTranspose: return "transpose";
    case OpTag::kTanh: return "tanh";
    case OpTag::kRelu: return "relu";
    case OpTag::kSquare: return "square";
    case OpTag::kSum: return "sum";
    case OpTag::kMean: return "mean";
    case OpTag::kL2Norm: return "l2-norm";
    case OpTag::kConcat: return "concat";
    case OpTag::kSlice: return "slice";
    case OpTag::kPad: return "pad";
    case OpTag::kReshape: return "reshape";
    case OpTag::kScale: return "scale";
    case OpTag::kAddConst: return "add-const";
    case OpTag::kBroadcast: return "broadcast";
    case OpTag::kRowRep: return "row-rep";
    case OpTag::kColSum: return "col-sum";
    case OpTag::kAbsFloor: return "abs-floor";
  }
  return "?";
}

Tensor Graph::leaf(const Tensor& value) {
  Tensor bound = value.detached();
  bound.graph_ = this;
  bound.node_ = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{OpTag::kLeaf, {}, bound.detached(), {}, 0.0, true});
  return bound;
}

Tensor Graph::constant(const Tensor& value) {
  Tensor bound = value.detached();
  bound.graph_ = this;
  bound.node_ = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{OpTag::kLeaf, {}, bound.detached(), {}, 0.0, false});
  return bound;
}

Tensor Graph::record(OpTag tag, const std::vector<NodeId>& inputs, Tensor value,
                     std::vector<Index> iattr, double dattr) {
  for (NodeId id : inputs) {
    if (id < 0 || id >= static_cast<NodeId>(nodes_.size())) {
      throw std::invalid_argument(std::string("graph: ") + op_name(tag) +
                                  " input node out of range");
    }
  }
  value.graph_ = this;
  value.node_ = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{tag, inputs, value.detached(), std::move(iattr), dattr, false});
  return value;
}

Tensor Graph::bound_value(NodeId id) {
  Tensor t = nodes_[static_cast<std::size_t>(id)].value.detached();
  t.graph_ = this;
  t.node_ = id;
  return t;
}

bool Graph::replay_matches() const {
  for (const Node& n : nodes_) {
    if (n.tag == OpTag::kLeaf) continue;
    std::vector<const Tensor*> ins;
    ins.reserve(n.inputs.size());
    for (NodeId id : n.inputs) ins.push_back(&node(id).value);
    Eigen::ArrayXd replayed = detail::eval_op(n.tag, ins, n.iattr, n.dattr);
    if (replayed.size() != n.value.numel()) return false;
    for (Index i = 0; i < replayed.size(); ++i) {
      if (replayed[i] != n.value.array()[i]) return false;
    }
  }
  return true;
}

}  // namespace dco
