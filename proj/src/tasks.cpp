// SPDX-License-Identifier: Apache-2.0
#include "dco/tasks.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "dco/ops.hpp"
#include "dco/rng.hpp"

namespace dco {
namespace {

Eigen::MatrixXd random_normal_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = n01(rng);
  }
  return m;
}

Eigen::VectorXd random_normal_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = n01(rng);
  return v;
}

/// theta -> |X theta - target|^2 with captured constants.
LossFn make_ls_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& target) {
  Tensor Xt = Tensor::from_matrix(X);
  Tensor yt = Tensor::from_vector(target);
  return [Xt, yt](const Tensor& theta) {
    return sum(square(sub(matmul(Xt, theta), yt)));
  };
}

/// theta -> MSE of the net on (x, y) column samples.
LossFn make_net_mse_loss(std::vector<Index> dims, Activation act,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Tensor xt(Shape{x.size(), 1}, x.array());
  Tensor yt(Shape{y.size(), 1}, y.array());
  return [dims = std::move(dims), act, xt, yt](const Tensor& theta) {
    return mse(forward_flat(dims, act, theta, xt), yt);
  };
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Tensor mse(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape() || pred.numel() == 0) {
    throw std::invalid_argument("mse: shapes " + shape_to_string(pred.shape()) +
                                " and " + shape_to_string(target.shape()) +
                                " must match and be nonempty");
  }
  return mean(square(sub(pred, target)));
}

Task sample_ls_task(Index p, std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("sample_ls_task: p must be >= 1");
  std::mt19937_64 rng(seed);
  auto data = std::make_shared<TaskData>();
  data->kind = "ls";
  data->seed = seed;
  data->X = random_normal_matrix(p, p, rng);
  data->y = random_normal_vector(p, rng);

  Task task;
  task.id = "ls-" + std::to_string(seed);
  task.param_dim = p;
  task.theta_init = random_normal_vector(p, rng);
  task.train_loss = make_ls_loss(data->X, data->y);
  task.val_loss = task.train_loss;
  task.data = std::move(data);
  return task;
}

ShiftedLsFamily make_shifted_family(Index p, int n_tasks, std::uint64_t seed,
                                    Index n_rows) {
  if (p < 1) throw std::invalid_argument("make_shifted_family: p must be >= 1");
  if (n_tasks < p) {
    throw std::invalid_argument(
        "make_shifted_family: need n_tasks >= p for the span condition to be "
        "satisfiable");
  }
  Index rows = n_rows == 0 ? p : n_rows;
  if (rows < p) throw std::invalid_argument("make_shifted_family: n_rows < p");

  std::mt19937_64 rng(seed);
  ShiftedLsFamily family;
  family.seed = seed;

  bool ok = false;
  for (int attempt = 0; attempt < 100; ++attempt) {
    family.X = random_normal_matrix(rows, p, rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(family.X);
    double smin = svd.singularValues()(p - 1);
    double smax = svd.singularValues()(0);
    // cond(X^T X) = (smax/smin)^2
    if (smin > 0.0 && (smax / smin) * (smax / smin) <= 1e12) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    throw std::runtime_error(
        "make_shifted_family: X^T X stayed near-singular after 100 attempts");
  }

  family.y = random_normal_vector(rows, rng);
  for (int i = 0; i < n_tasks; ++i) {
    family.deltas.push_back(random_normal_vector(p, rng));
    family.inits.push_back(random_normal_vector(p, rng));
  }
  family.theta_prime =
      (family.X.transpose() * family.X).ldlt().solve(family.X.transpose() * family.y);
  family.l_star = (family.X * family.theta_prime - family.y).squaredNorm();
  return family;
}

Task family_task(const ShiftedLsFamily& family, int i) {
  if (i < 0 || i >= static_cast<int>(family.deltas.size())) {
    throw std::invalid_argument("family_task: index out of range");
  }
  auto data = std::make_shared<TaskData>();
  data->kind = "shifted_ls";
  data->seed = family.seed;
  data->X = family.X;
  data->delta = family.deltas[static_cast<std::size_t>(i)];
  data->y = family.y + family.X * data->delta;

  Task task;
  task.id = "shifted-ls-" + std::to_string(family.seed) + "-" + std::to_string(i);
  task.param_dim = family.X.cols();
  task.theta_init = family.inits[static_cast<std::size_t>(i)];
  task.train_loss = make_ls_loss(data->X, data->y);
  task.val_loss = task.train_loss;
  task.data = std::move(data);
  return task;
}

Task sample_family_target(const ShiftedLsFamily& family, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Index p = family.X.cols();

  auto data = std::make_shared<TaskData>();
  data->kind = "shifted_ls";
  data->seed = seed;
  data->X = family.X;
  data->delta = random_normal_vector(p, rng);
  data->y = family.y + family.X * data->delta;

  Task task;
  task.id = "shifted-ls-target-" + std::to_string(seed);
  task.param_dim = p;
  task.theta_init = random_normal_vector(p, rng);
  task.train_loss = make_ls_loss(data->X, data->y);
  task.val_loss = task.train_loss;
  task.data = std::move(data);
  return task;
}

double beverton_holt(double r0, double carrying_capacity, double n) {
  if (carrying_capacity + n == 0.0) {
    throw std::invalid_argument("beverton_holt: K + n must be nonzero");
  }
  return r0 * n / (carrying_capacity + n);
}

Task sample_sysid_task(std::uint64_t seed, const SysidOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u12(1.0, 2.0);
  std::uniform_real_distribution<double> u010(0.0, 10.0);
  std::normal_distribution<double> noise(0.0, options.noise_std > 0.0
                                                  ? options.noise_std
                                                  : 1.0);

  auto data = std::make_shared<TaskData>();
  data->kind = "sysid";
  data->seed = seed;
  data->net_dims = options.net_dims;
  data->activation = options.activation;
  data->noise_std = options.noise_std;
  data->r0 = u12(rng);
  data->carrying_capacity = u12(rng);

  auto target = [&](double n) {
    return beverton_holt(data->r0, data->carrying_capacity, n);
  };

  data->train_x.resize(options.train_points);
  data->train_y.resize(options.train_points);
  for (int i = 0; i < options.train_points; ++i) {
    data->train_x[i] = u010(rng);
    double d = options.noise_std > 0.0 ? noise(rng) : 0.0;
    data->train_y[i] = target(data->train_x[i]) + d;
  }
  data->val_x.resize(options.val_points);
  data->val_y.resize(options.val_points);
  for (int i = 0; i < options.val_points; ++i) {
    data->val_x[i] = u010(rng);
    double d = options.noisy_validation && options.noise_std > 0.0 ? noise(rng) : 0.0;
    data->val_y[i] = target(data->val_x[i]) + d;
  }

  Task task;
  task.id = "sysid-" + std::to_string(seed);
  task.param_dim = param_count(options.net_dims);
  task.theta_init =
      flatten_params(init_net(options.net_dims, options.activation, mix_seed(seed, 1)))
          .vector();
  task.train_loss = make_net_mse_loss(options.net_dims, options.activation,
                                      data->train_x, data->train_y);
  task.val_loss = make_net_mse_loss(options.net_dims, options.activation, data->val_x,
                                    data->val_y);
  task.data = std::move(data);
  return task;
}

double interp_target(double a, double b, double c, double x) {
  return a * std::cos(b * x) * std::exp(-c * std::abs(x));
}

Task sample_interp_task(std::uint64_t seed, const InterpOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> ux(options.x_low, options.x_high);

  auto data = std::make_shared<TaskData>();
  data->kind = "interp";
  data->seed = seed;
  data->net_dims = options.net_dims;
  data->activation = options.activation;
  data->a = u01(rng);
  data->b = u01(rng);
  data->c = u01(rng);

  data->train_x.resize(options.train_points);
  data->train_y.resize(options.train_points);
  for (int i = 0; i < options.train_points; ++i) {
    data->train_x[i] = ux(rng);
    data->train_y[i] = interp_target(data->a, data->b, data->c, data->train_x[i]);
  }
  data->val_x.resize(options.val_points);
  data->val_y.resize(options.val_points);
  for (int i = 0; i < options.val_points; ++i) {
    data->val_x[i] = ux(rng);
    data->val_y[i] = interp_target(data->a, data->b, data->c, data->val_x[i]);
  }

  Task task;
  task.id = "interp-" + std::to_string(seed);
  task.param_dim = param_count(options.net_dims);
  task.theta_init =
      flatten_params(init_net(options.net_dims, options.activation, mix_seed(seed, 1)))
          .vector();
  task.train_loss = make_net_mse_loss(options.net_dims, options.activation,
                                      data->train_x, data->train_y);
  task.val_loss = make_net_mse_loss(options.net_dims, options.activation, data->val_x,
                                    data->val_y);
  task.data = std::move(data);
  return task;
}

nlohmann::json task_to_json(const Task& task) {
  const TaskData& d = *task.data;
  nlohmann::json j;
  j["id"] = task.id;
  j["kind"] = d.kind;
  j["seed"] = d.seed;
  j["param_dim"] = task.param_dim;
  j["theta_init"] = vector_to_json(task.theta_init);
  if (d.kind == "ls" || d.kind == "shifted_ls") {
    j["X"] = matrix_to_json(d.X);
    j["y"] = vector_to_json(d.y);
    if (d.kind == "shifted_ls") j["delta"] = vector_to_json(d.delta);
  } else {
    j["net_dims"] = d.net_dims;
    j["activation"] = activation_to_string(d.activation);
    j["train_x"] = vector_to_json(d.train_x);
    j["train_y"] = vector_to_json(d.train_y);
    j["val_x"] = vector_to_json(d.val_x);
    j["val_y"] = vector_to_json(d.val_y);
    if (d.kind == "sysid") {
      j["r0"] = d.r0;
      j["carrying_capacity"] = d.carrying_capacity;
      j["noise_std"] = d.noise_std;
    } else {
      j["a"] = d.a;
      j["b"] = d.b;
      j["c"] = d.c;
    }
  }
  return j;
}

void save_tasks_json(const std::vector<Task>& tasks, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const Task& t : tasks) j.push_back(task_to_json(t));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_tasks_json: cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace dco
