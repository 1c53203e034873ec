// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "dco/autodiff.hpp"
#include "dco/graph.hpp"
#include "dco/models.hpp"
#include "dco/ops.hpp"

using dco::Activation;
using dco::FeedForwardNet;
using dco::Graph;
using dco::Index;
using dco::Shape;
using dco::Tensor;

TEST_CASE("param_count matches layer arithmetic") {
  CHECK(dco::param_count({1, 5, 5, 1}) == 46);    // 1*5+5 + 5*5+5 + 5*1+1
  CHECK(dco::param_count({1, 10, 10, 1}) == 141);  // 20 + 110 + 11
  CHECK(dco::param_count({2, 2}) == 6);
}

TEST_CASE("init_net: determinism, bounds, and validation") {
  FeedForwardNet a = dco::init_net({2, 2}, Activation::kTanh, 123);
  FeedForwardNet b = dco::init_net({2, 2}, Activation::kTanh, 123);
  for (Index i = 0; i < 4; ++i) CHECK(a.weights[0][i] == b.weights[0][i]);

  FeedForwardNet net = dco::init_net({1, 5, 5, 1}, Activation::kTanh, 0);
  CHECK(dco::flatten_params(net).numel() == 46);
  // fan_in bound on each layer's weights; biases zero
  for (std::size_t k = 0; k < net.weights.size(); ++k) {
    double bound = std::sqrt(1.0 / static_cast<double>(net.layer_dims[k]));
    CHECK(net.weights[k].array().abs().maxCoeff() <= bound);
    CHECK(net.biases[k].array().abs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS(dco::init_net({3}, Activation::kTanh, 0), std::invalid_argument);
  CHECK_THROWS_AS(dco::init_net({3, 0, 1}, Activation::kTanh, 0),
                  std::invalid_argument);
}

TEST_CASE("forward: trivial nets") {
  SUBCASE("zero weights give zero output") {
    FeedForwardNet net = dco::init_net({2, 3, 1}, Activation::kTanh, 5);
    net = dco::unflatten_params(net, Tensor::zeros({dco::param_count({2, 3, 1})}));
    Tensor x(Shape{4, 2}, Eigen::ArrayXd::Random(8));
    Tensor out = dco::forward(net, x);
    CHECK(out.shape() == Shape{4, 1});
    CHECK(out.array().abs().maxCoeff() == 0.0);
  }

  SUBCASE("direct 1-1 net with w=1, b=0 is the identity") {
    FeedForwardNet net = dco::init_net({1, 1}, Activation::kTanh, 0);
    net = dco::unflatten_params(net, Tensor(Shape{2}, Eigen::Array2d{1.0, 0.0}));
    Tensor x(Shape{3, 1}, Eigen::Array3d{-1.0, 0.25, 2.0});
    Tensor out = dco::forward(net, x);
    for (Index i = 0; i < 3; ++i) CHECK(out[i] == x[i]);
  }

  SUBCASE("input shape mismatch is an error") {
    FeedForwardNet net = dco::init_net({2, 1}, Activation::kTanh, 0);
    CHECK_THROWS_AS(dco::forward(net, Tensor::zeros({4, 3})), std::invalid_argument);
    CHECK_THROWS_AS(dco::forward(net, Tensor::zeros({2})), std::invalid_argument);
  }
}

TEST_CASE("forward matches an explicit matrix-arithmetic recomputation") {
  FeedForwardNet net = dco::init_net({1, 5, 5, 1}, Activation::kTanh, 17);
  Tensor x(Shape{1, 1}, Eigen::ArrayXd::Constant(1, 0.5));
  Tensor out = dco::forward(net, x);

  Eigen::VectorXd h = Eigen::VectorXd::Constant(1, 0.5);
  for (std::size_t k = 0; k < net.weights.size(); ++k) {
    Eigen::VectorXd z = net.weights[k].matrix() * h + net.biases[k].vector();
    h = (k + 1 < net.weights.size()) ? z.array().tanh().matrix() : z;
  }
  CHECK(out.value() == doctest::Approx(h[0]).epsilon(1e-12));
}

TEST_CASE("flatten/unflatten round-trips") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  FeedForwardNet net = dco::init_net({1, 5, 5, 1}, Activation::kTanh, 3);
  Tensor flat = dco::flatten_params(net);
  REQUIRE(flat.numel() == 46);

  SUBCASE("unflatten . flatten = identity on models") {
    FeedForwardNet back = dco::unflatten_params(net, flat);
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
      for (Index i = 0; i < net.weights[k].numel(); ++i) {
        CHECK(back.weights[k][i] == net.weights[k][i]);
      }
      for (Index i = 0; i < net.biases[k].numel(); ++i) {
        CHECK(back.biases[k][i] == net.biases[k][i]);
      }
    }
  }

  SUBCASE("flatten . unflatten = identity on vectors") {
    Eigen::ArrayXd v(46);
    for (Index i = 0; i < 46; ++i) v[i] = dist(rng);
    Tensor vt(Shape{46}, v);
    Tensor round = dco::flatten_params(dco::unflatten_params(net, vt));
    for (Index i = 0; i < 46; ++i) CHECK(round[i] == v[i]);
  }

  SUBCASE("unflatten of zeros gives an all-zero model") {
    FeedForwardNet z = dco::unflatten_params(net, Tensor::zeros({46}));
    for (const Tensor& w : z.weights) CHECK(w.array().abs().maxCoeff() == 0.0);
  }

  SUBCASE("wrong length is an error") {
    CHECK_THROWS_AS(dco::unflatten_params(net, Tensor::zeros({45})),
                    std::invalid_argument);
  }
}

TEST_CASE("gradients flow through forward (finite differences)") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n01;

  std::vector<Index> dims{2, 4, 1};
  Index p = dco::param_count(dims);
  Eigen::ArrayXd theta0(p);
  for (Index i = 0; i < p; ++i) theta0[i] = 0.4 * n01(rng);

  Eigen::ArrayXd xdata(6);
  for (Index i = 0; i < 6; ++i) xdata[i] = n01(rng);
  Tensor x(Shape{3, 2}, xdata);

  auto loss = [&](const Tensor& theta) {
    Tensor pred = dco::forward_flat(dims, Activation::kTanh, theta, x);
    return dco::mean(dco::square(pred));
  };
  CHECK(dco::finite_difference_check(loss, Tensor(Shape{p}, theta0), 1e-4) < 1e-5);
}
