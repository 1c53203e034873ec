// SPDX-License-Identifier: Apache-2.0
#ifndef DCO_GRAPH_HPP_
#define DCO_GRAPH_HPP_

#include <cstddef>
#include <vector>

#include "dco/tensor.hpp"

namespace dco {

enum class OpTag {
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kMatmul,
  kTranspose,
  kTanh,
  kRelu,
  kSquare,
  kSum,
  kMean,
  kL2Norm,
  kConcat,
  kSlice,
  kPad,
  kReshape,
  kScale,
  kAddConst,
  kBroadcast,
  kRowRep,
  kColSum,
  kAbsFloor,
};

const char* op_name(OpTag tag);

/// One recorded operation.  `value` is the forward result; `iattr`/`dattr`
/// carry op-specific attributes (slice bounds, target shapes, constants).
struct Node {
  OpTag tag = OpTag::kLeaf;
  std::vector<NodeId> inputs;
  Tensor value;
  std::vector<Index> iattr;
  double dattr = 0.0;
  bool differentiable = false;  // leaves only
};

/// Append-only tape of operations.  Node inputs always precede the node, so
/// ascending id order is a topological order.  A graph and the tensors bound
/// to it belong to a single thread; distinct graphs are independent.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  /// Registers `value` as a differentiable leaf and returns the bound tensor.
  Tensor leaf(const Tensor& value);
  /// Registers `value` as a non-differentiable leaf (data, masks, seeds).
  Tensor constant(const Tensor& value);

  Tensor record(OpTag tag, const std::vector<NodeId>& inputs, Tensor value,
                std::vector<Index> iattr = {}, double dattr = 0.0);

  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }

  /// The node's recorded value, bound to this graph.
  Tensor bound_value(NodeId id);

  /// Recomputes every non-leaf node from its inputs and checks the result is
  /// bit-identical to the recorded value.
  bool replay_matches() const;

 private:
  std::vector<Node> nodes_;
};

}  // namespace dco

#endif  // DCO_GRAPH_HPP_
