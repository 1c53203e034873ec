// SPDX-License-Identifier: Apache-2.0
#ifndef DCO_MODELS_HPP_
#define DCO_MODELS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dco/tensor.hpp"

namespace dco {

enum class Activation { kTanh, kRelu, kLinear };

Activation activation_from_string(const std::string& name);
const char* activation_to_string(Activation act);

/// Fully connected stack.  `activation` applies to hidden layers; the output
/// layer is linear.
struct FeedForwardNet {
  std::vector<Index> layer_dims;
  Activation activation = Activation::kTanh;
  std::vector<Tensor> weights;  // layer k: {dims[k+1], dims[k]}
  std::vector<Tensor> biases;   // layer k: {dims[k+1]}
};

struct LinearModel {
  Tensor theta;
};

/// Weights uniform in [-sqrt(1/fan_in), +sqrt(1/fan_in)], biases zero;
/// deterministic given seed.
FeedForwardNet init_net(const std::vector<Index>& layer_dims, Activation activation,
                        std::uint64_t seed);

/// Total parameter count sum_k (dims[k]*dims[k+1] + dims[k+1]).
Index param_count(const std::vector<Index>& layer_dims);

/// {batch, dims.front()} -> {batch, dims.back()}; recorded when inputs are.
Tensor forward(const FeedForwardNet& net, const Tensor& x);

/// X theta for X {n,p}.
Tensor forward(const LinearModel& model, const Tensor& X);

/// Canonical parameter vector: layer-major, weights row-major, then bias.
Tensor flatten_params(const FeedForwardNet& net);

/// Inverse of flatten_params for a vector of length param_count(dims);
/// parameter tensors stay bound to v's graph.
FeedForwardNet unflatten_params(const FeedForwardNet& like, const Tensor& v);

/// unflatten + forward, for losses expressed over the flat parameter vector.
Tensor forward_flat(const std::vector<Index>& layer_dims, Activation activation,
                    const Tensor& theta, const Tensor& x);

}  // namespace dco

#endif  // DCO_MODELS_HPP_
