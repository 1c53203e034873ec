// SPDX-License-Identifier: Apache-2.0
#ifndef DCO_TASKS_HPP_
#define DCO_TASKS_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "dco/models.hpp"
#include "dco/tensor.hpp"

namespace dco {

/// Scalar loss over the flat parameter vector; recorded when theta is.
using LossFn = std::function<Tensor(const Tensor& theta)>;

/// Raw samples and hyperparameters behind a task, kept for serialization.
struct TaskData {
  std::string kind;  // ls | shifted_ls | sysid | interp
  std::uint64_t seed = 0;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  Eigen::VectorXd delta;
  Eigen::VectorXd train_x, train_y, val_x, val_y;
  std::vector<Index> net_dims;
  Activation activation = Activation::kTanh;
  double r0 = 0.0, carrying_capacity = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;
  double noise_std = 0.0;
};

/// One training/validation problem over parameters in R^p.
struct Task {
  std::string id;
  Index param_dim = 0;
  Eigen::VectorXd theta_init;
  LossFn train_loss;
  LossFn val_loss;
  std::shared_ptr<const TaskData> data;
};

/// Mean of squared differences; shapes must match exactly.
Tensor mse(const Tensor& pred, const Tensor& target);

/// Random least-squares problem |X theta - y|^2 with X (p x p) and y
/// standard normal; training and validation losses coincide.
Task sample_ls_task(Index p, std::uint64_t seed);

/// Least-squares problems sharing X, y and differing by range-space target
/// shifts X*delta_i; optimum of task i is theta' + delta_i.
struct ShiftedLsFamily {
  Eigen::MatrixXd X;  // n x p, X^T X invertible
  Eigen::VectorXd y;
  std::vector<Eigen::VectorXd> deltas;
  std::vector<Eigen::VectorXd> inits;
  Eigen::VectorXd theta_prime;  // (X^T X)^{-1} X^T y
  double l_star = 0.0;          // common minimal loss |X theta' - y|^2
  std::uint64_t seed = 0;
};

/// Builds a family of n_tasks members.  X is square (n_rows = 0) or
/// rectangular with n_rows >= p; resamples internally while cond(X^T X)
/// exceeds 1e12, failing after 100 attempts.
ShiftedLsFamily make_shifted_family(Index p, int n_tasks, std::uint64_t seed,
                                    Index n_rows = 0);

/// Task view of family member i.
Task family_task(const ShiftedLsFamily& family, int i);

/// A fresh member of the same family (new delta and init), not part of it.
Task sample_family_target(const ShiftedLsFamily& family, std::uint64_t seed);

/// Population update R0*n/(K+n).
double beverton_holt(double r0, double carrying_capacity, double n);

struct SysidOptions {
  std::vector<Index> net_dims{1, 5, 5, 1};
  Activation activation = Activation::kTanh;
  int train_points = 500;
  int val_points = 100;
  double noise_std = 0.1;
  bool noisy_validation = false;
};

/// System-identification task: R0, K ~ U(1,2), inputs n ~ U(0,10), training
/// targets f(n) + noise; validation targets noiseless unless configured.
Task sample_sysid_task(std::uint64_t seed, const SysidOptions& options = {});

struct InterpOptions {
  std::vector<Index> net_dims{1, 10, 10, 1};
  Activation activation = Activation::kTanh;
  int train_points = 500;
  int val_points = 100;
  double x_low = -5.0;
  double x_high = 5.0;
};

/// Smooth-interpolation task for g(x) = a cos(bx) exp(-c|x|) with
/// a, b, c ~ U(0,1) and x ~ U(x_low, x_high).
Task sample_interp_task(std::uint64_t seed, const InterpOptions& options = {});

/// Value of the interpolation target function.
double interp_target(double a, double b, double c, double x);

nlohmann::json task_to_json(const Task& task);
void save_tasks_json(const std::vector<Task>& tasks, const std::string& path);

}  // namespace dco

#endif  // DCO_TASKS_HPP_
