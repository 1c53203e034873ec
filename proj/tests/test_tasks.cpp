// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <random>

#include "dco/autodiff.hpp"
#include "dco/graph.hpp"
#include "dco/ops.hpp"
#include "dco/tasks.hpp"

using dco::Graph;
using dco::Index;
using dco::Shape;
using dco::Task;
using dco::Tensor;

TEST_CASE("sample_ls_task") {
  Task task = dco::sample_ls_task(4, 7);
  const Eigen::MatrixXd& X = task.data->X;
  const Eigen::VectorXd& y = task.data->y;

  SUBCASE("loss vanishes at the exact solution of the square system") {
    Eigen::VectorXd solution = X.fullPivLu().solve(y);
    double loss = task.train_loss(Tensor::from_vector(solution)).value();
    CHECK(std::abs(loss) < 1e-8);
  }

  SUBCASE("loss at zero equals |y|^2") {
    double loss = task.train_loss(Tensor::zeros({4})).value();
    CHECK(loss == doctest::Approx(y.squaredNorm()).epsilon(1e-12));
  }

  SUBCASE("loss matches an explicit sum of squared residuals") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> n01;
    Eigen::VectorXd theta(4);
    for (int i = 0; i < 4; ++i) theta[i] = n01(rng);

    double expected = 0.0;
    for (int r = 0; r < 4; ++r) {
      double residual = X.row(r).dot(theta) - y[r];
      expected += residual * residual;
    }
    double loss = task.train_loss(Tensor::from_vector(theta)).value();
    CHECK(loss == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("train and validation losses coincide") {
    Tensor theta = Tensor::from_vector(task.theta_init);
    CHECK(task.train_loss(theta).value() == task.val_loss(theta).value());
  }

  SUBCASE("same seed gives bit-identical data") {
    Task again = dco::sample_ls_task(4, 7);
    CHECK((again.data->X - X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((again.data->y - y).cwiseAbs().maxCoeff() == 0.0);
    CHECK((again.theta_init - task.theta_init).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("shifted least-squares family") {
  auto family = dco::make_shifted_family(5, 8, 42);

  SUBCASE("square X interpolates exactly: l* ~ 0") {
    CHECK(std::abs(family.l_star) < 1e-8);
  }

  SUBCASE("loss floor is invariant across tasks") {
    double reference = 0.0;
    for (int i = 0; i < 8; ++i) {
      Task task = dco::family_task(family, i);
      Eigen::VectorXd opt = family.theta_prime + family.deltas[i];
      double loss = task.train_loss(Tensor::from_vector(opt)).value();
      if (i == 0) reference = loss;
      CHECK(std::abs(loss - reference) < 1e-10);
      CHECK(std::abs(loss - family.l_star) < 1e-8);
    }
  }

  SUBCASE("gradient is stationary at each optimum") {
    for (int i = 0; i < 8; ++i) {
      Task task = dco::family_task(family, i);
      Graph g;
      Tensor theta = g.leaf(Tensor::from_vector(
          Eigen::VectorXd(family.theta_prime + family.deltas[i])));
      Tensor grad = dco::backward(task.train_loss(theta), {theta})[0];
      CHECK(grad.vector().norm() < 1e-8);
    }
  }

  SUBCASE("rectangular X leaves a positive floor") {
    auto rect = dco::make_shifted_family(3, 5, 11, 9);
    CHECK(rect.l_star > 1e-6);
    Task task = dco::family_task(rect, 0);
    Eigen::VectorXd opt = rect.theta_prime + rect.deltas[0];
    CHECK(task.train_loss(Tensor::from_vector(opt)).value() ==
          doctest::Approx(rect.l_star).epsilon(1e-10));
  }

  SUBCASE("n_tasks below p is rejected") {
    CHECK_THROWS_AS(dco::make_shifted_family(5, 4, 1), std::invalid_argument);
  }

  SUBCASE("fresh targets share X and y") {
    Task target = dco::sample_family_target(family, 1234);
    CHECK((target.data->X - family.X).cwiseAbs().maxCoeff() == 0.0);
    Eigen::VectorXd opt = family.theta_prime + target.data->delta;
    CHECK(std::abs(target.train_loss(Tensor::from_vector(opt)).value() -
                   family.l_star) < 1e-8);
  }
}

TEST_CASE("beverton_holt") {
  CHECK(dco::beverton_holt(2.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(dco::beverton_holt(1.5, 1.0, 0.0) == 0.0);
  CHECK(dco::beverton_holt(1.5, 1.2, 3.4) ==
        doctest::Approx(1.5 * 3.4 / 4.6).epsilon(1e-15));
  CHECK_THROWS_AS(dco::beverton_holt(1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("sample_sysid_task") {
  Task task = dco::sample_sysid_task(3);
  const dco::TaskData& d = *task.data;

  SUBCASE("dataset sizes are 500 train / 100 validation") {
    CHECK(d.train_x.size() == 500);
    CHECK(d.val_x.size() == 100);
  }

  SUBCASE("system parameters are in U(1,2)") {
    CHECK(d.r0 >= 1.0);
    CHECK(d.r0 <= 2.0);
    CHECK(d.carrying_capacity >= 1.0);
    CHECK(d.carrying_capacity <= 2.0);
  }

  SUBCASE("validation targets are noiseless dynamics by default") {
    for (Index i = 0; i < d.val_x.size(); ++i) {
      CHECK(d.val_y[i] ==
            doctest::Approx(dco::beverton_holt(d.r0, d.carrying_capacity, d.val_x[i]))
                .epsilon(1e-15));
    }
  }

  SUBCASE("training targets are f(n) + d") {
    dco::SysidOptions quiet;
    quiet.noise_std = 0.0;
    Task clean = dco::sample_sysid_task(3, quiet);
    const dco::TaskData& cd = *clean.data;
    for (Index i = 0; i < cd.train_x.size(); ++i) {
      CHECK(cd.train_y[i] ==
            doctest::Approx(
                dco::beverton_holt(cd.r0, cd.carrying_capacity, cd.train_x[i]))
                .epsilon(1e-15));
    }
  }

  SUBCASE("parameter dimension matches the 1-5-5-1 net") {
    CHECK(task.param_dim == 46);
    CHECK(task.theta_init.size() == 46);
  }

  SUBCASE("same seed reproduces the task bit-exactly") {
    Task again = dco::sample_sysid_task(3);
    CHECK(again.data->r0 == d.r0);
    CHECK((again.data->train_y - d.train_y).cwiseAbs().maxCoeff() == 0.0);
    CHECK((again.theta_init - task.theta_init).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("sample_interp_task") {
  CHECK(dco::interp_target(0.7, 0.3, 0.9, 0.0) == doctest::Approx(0.7));
  CHECK(dco::interp_target(1.0, 0.0, 1.0, 2.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(dco::interp_target(0.0, 0.5, 0.5, 1.3) == 0.0);

  Task task = dco::sample_interp_task(8);
  const dco::TaskData& d = *task.data;
  CHECK(d.train_x.size() == 500);
  CHECK(d.val_x.size() == 100);
  CHECK(task.param_dim == 141);
  CHECK(d.a >= 0.0);
  CHECK(d.a <= 1.0);
  for (Index i = 0; i < d.train_x.size(); ++i) {
    CHECK(d.train_x[i] >= -5.0);
    CHECK(d.train_x[i] <= 5.0);
    CHECK(d.train_y[i] ==
          doctest::Approx(dco::interp_target(d.a, d.b, d.c, d.train_x[i]))
              .epsilon(1e-15));
  }
}

TEST_CASE("mse") {
  Tensor a(Shape{2}, Eigen::Array2d{1, 2});
  Tensor zero = Tensor::zeros({2});

  CHECK(dco::mse(a, a).value() == 0.0);
  CHECK(dco::mse(a, zero).value() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK_THROWS_AS(dco::mse(a, Tensor::zeros({3})), std::invalid_argument);

  SUBCASE("gradient wrt predictions is 2(pred - target)/N") {
    Graph g;
    Tensor pred = g.leaf(Tensor(Shape{4}, Eigen::Array4d{1, -2, 0.5, 3}));
    Tensor target = g.constant(Tensor(Shape{4}, Eigen::Array4d{0, 1, 0.5, -1}));
    Tensor grad = dco::backward(dco::mse(pred, target), {pred})[0];
    for (Index i = 0; i < 4; ++i) {
      double expected = 2.0 * (pred[i] - target[i]) / 4.0;
      CHECK(grad[i] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("tasks serialize to JSON with data and hyperparameters") {
  std::vector<Task> tasks{dco::sample_ls_task(3, 1), dco::sample_sysid_task(2)};
  std::string path = "test_tasks_dump.json";
  dco::save_tasks_json(tasks, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json parsed = nlohmann::json::parse(in);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0]["kind"] == "ls");
  CHECK(parsed[0]["X"].size() == 3);
  CHECK(parsed[0]["theta_init"].size() == 3);
  CHECK(parsed[1]["kind"] == "sysid");
  CHECK(parsed[1]["train_x"].size() == 500);
  CHECK(parsed[1]["r0"] == tasks[1].data->r0);
  std::remove(path.c_str());
}
