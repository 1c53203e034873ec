// SPDX-License-Identifier: Apache-2.0
#include "dco/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "dco/ops.hpp"

namespace dco {

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  if (name == "linear") return Activation::kLinear;
  throw std::invalid_argument("unknown activation: " + name);
}

const char* activation_to_string(Activation act) {
  switch (act) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kLinear: return "linear";
  }
  return "?";
}

Index param_count(const std::vector<Index>& layer_dims) {
  Index p = 0;
  for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
    p += layer_dims[k] * layer_dims[k + 1] + layer_dims[k + 1];
  }
  return p;
}

FeedForwardNet init_net(const std::vector<Index>& layer_dims, Activation activation,
                        std::uint64_t seed) {
  if (layer_dims.size() < 2) {
    throw std::invalid_argument("init_net: need at least input and output dims");
  }
  for (Index d : layer_dims) {
    if (d <= 0) throw std::invalid_argument("init_net: layer dims must be positive");
  }

  std::mt19937_64 rng(seed);
  FeedForwardNet net;
  net.layer_dims = layer_dims;
  net.activation = activation;
  for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
    Index fan_in = layer_dims[k];
    Index fan_out = layer_dims[k + 1];
    double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Eigen::ArrayXd w(fan_out * fan_in);
    for (Index i = 0; i < w.size(); ++i) w[i] = dist(rng);
    net.weights.push_back(Tensor(Shape{fan_out, fan_in}, std::move(w)));
    net.biases.push_back(Tensor::zeros({fan_out}));
  }
  return net;
}

Tensor forward(const FeedForwardNet& net, const Tensor& x) {
  if (x.rank() != 2 || x.shape()[1] != net.layer_dims.front()) {
    throw std::invalid_argument("forward: input shape " + shape_to_string(x.shape()) +
                                " does not match input dim " +
                                std::to_string(net.layer_dims.front()));
  }
  Index batch = x.shape()[0];
  Tensor h = x;
  for (std::size_t k = 0; k < net.weights.size(); ++k) {
    Tensor z = add(matmul(h, transpose(net.weights[k])), row_rep(net.biases[k], batch));
    bool hidden = k + 1 < net.weights.size();
    if (!hidden) {
      h = z;
    } else if (net.activation == Activation::kTanh) {
      h = tanh(z);
    } else if (net.activation == Activation::kRelu) {
      h = relu(z);
    } else {
      h = z;
    }
  }
  return h;
}

Tensor forward(const LinearModel& model, const Tensor& X) {
  return matmul(X, model.theta);
}

Tensor flatten_params(const FeedForwardNet& net) {
  std::vector<Tensor> parts;
  for (std::size_t k = 0; k < net.weights.size(); ++k) {
    parts.push_back(reshape(net.weights[k], {net.weights[k].numel()}));
    parts.push_back(net.biases[k]);
  }
  return concat(parts);
}

FeedForwardNet unflatten_params(const FeedForwardNet& like, const Tensor& v) {
  Index p = param_count(like.layer_dims);
  if (v.rank() != 1 || v.numel() != p) {
    throw std::invalid_argument("unflatten_params: expected length " +
                                std::to_string(p) + ", got shape " +
                                shape_to_string(v.shape()));
  }
  FeedForwardNet net;
  net.layer_dims = like.layer_dims;
  net.activation = like.activation;
  Index at = 0;
  for (std::size_t k = 0; k + 1 < like.layer_dims.size(); ++k) {
    Index rows = like.layer_dims[k + 1];
    Index cols = like.layer_dims[k];
    net.weights.push_back(reshape(slice(v, at, rows * cols), {rows, cols}));
    at += rows * cols;
    net.biases.push_back(slice(v, at, rows));
    at += rows;
  }
  return net;
}

Tensor forward_flat(const std::vector<Index>& layer_dims, Activation activation,
                    const Tensor& theta, const Tensor& x) {
  FeedForwardNet like;
  like.layer_dims = layer_dims;
  like.activation = activation;
  return forward(unflatten_params(like, theta), x);
}

}  // namespace dco
