// SPDX-License-Identifier: Apache-2.0
#ifndef DCO_BASELINES_HPP_
#define DCO_BASELINES_HPP_

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "dco/tasks.hpp"

namespace dco {

enum class BaselineRule { kSgd, kMomentum, kAdam, kRmsprop };

BaselineRule baseline_from_string(const std::string& name);
const char* baseline_to_string(BaselineRule rule);

/// Per-run optimizer state.  Accumulators match the parameter dimension;
/// `step` counts applied updates.  These updates never touch a graph.
struct BaselineState {
  BaselineRule rule = BaselineRule::kSgd;
  double lr = 1e-2;
  double beta = 0.9;                             // momentum averaging
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;  // adam
  double alpha = 0.99;                            // rmsprop
  Eigen::VectorXd m, v;
  int step = 0;
};

BaselineState make_baseline_state(BaselineRule rule, Index p, double lr);

/// theta - lr * g.
Eigen::VectorXd sgd_step(const Eigen::VectorXd& theta, const Eigen::VectorXd& g,
                         double lr);

/// s' = beta*s + (1-beta)*g; theta' = theta - lr*s'.  Callers initialize s to
/// the first gradient.
std::pair<Eigen::VectorXd, Eigen::VectorXd> momentum_step(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& s,
    const Eigen::VectorXd& g, double lr, double beta);

/// Bias-corrected Adam update; state accumulators start at zero.
Eigen::VectorXd adam_step(const Eigen::VectorXd& theta, BaselineState& state,
                          const Eigen::VectorXd& g);

/// Running-mean-square RMSProp update; state accumulators start at zero.
Eigen::VectorXd rmsprop_step(const Eigen::VectorXd& theta, BaselineState& state,
                             const Eigen::VectorXd& g);

/// Dispatches on state.rule and maintains the rule's state conventions
/// (momentum starts from the first gradient).
Eigen::VectorXd baseline_apply(BaselineState& state, const Eigen::VectorXd& theta,
                               const Eigen::VectorXd& g);

/// Log-spaced decade grid {1e-4, 3e-4, ..., 3e-1}.
const std::vector<double>& default_lr_grid();

struct TuneRow {
  BaselineRule rule;
  double lr;
  double final_val_loss;
};

struct TuneResult {
  double best_lr = 0.0;
  double best_final_val_loss = 0.0;
  std::vector<TuneRow> rows;
};

/// Runs `budget` inner iterations per grid point on the sampled tasks and
/// returns the learning rate with the lowest final averaged validation loss.
/// Errors if every grid point diverges.
TuneResult tune_learning_rate(BaselineRule rule, const std::vector<Task>& tasks,
                              const std::vector<double>& grid, int budget);

}  // namespace dco

#endif  // DCO_BASELINES_HPP_
