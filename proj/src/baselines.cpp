// SPDX-License-Identifier: Apache-2.0
#include "dco/baselines.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dco/autodiff.hpp"

namespace dco {
namespace {

void require_finite(const Eigen::VectorXd& g, const char* who) {
  if (!g.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": non-finite gradient");
  }
}

}  // namespace

BaselineRule baseline_from_string(const std::string& name) {
  if (name == "sgd") return BaselineRule::kSgd;
  if (name == "momentum") return BaselineRule::kMomentum;
  if (name == "adam") return BaselineRule::kAdam;
  if (name == "rmsprop") return BaselineRule::kRmsprop;
  throw std::invalid_argument("unknown baseline rule: " + name);
}

const char* baseline_to_string(BaselineRule rule) {
  switch (rule) {
    case BaselineRule::kSgd: return "sgd";
    case BaselineRule::kMomentum: return "momentum";
    case BaselineRule::kAdam: return "adam";
    case BaselineRule::kRmsprop: return "rmsprop";
  }
  return "?";
}

BaselineState make_baseline_state(BaselineRule rule, Index p, double lr) {
  if (lr <= 0.0) throw std::invalid_argument("make_baseline_state: lr must be > 0");
  BaselineState state;
  state.rule = rule;
  state.lr = lr;
  state.m = Eigen::VectorXd::Zero(p);
  state.v = Eigen::VectorXd::Zero(p);
  return state;
}

Eigen::VectorXd sgd_step(const Eigen::VectorXd& theta, const Eigen::VectorXd& g,
                         double lr) {
  require_finite(g, "sgd_step");
  if (theta.size() != g.size()) {
    throw std::invalid_argument("sgd_step: shape mismatch");
  }
  return theta - lr * g;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> momentum_step(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& s,
    const Eigen::VectorXd& g, double lr, double beta) {
  require_finite(g, "momentum_step");
  if (beta < 0.0 || beta > 1.0) {
    throw std::invalid_argument("momentum_step: beta must be in [0,1]");
  }
  Eigen::VectorXd s_next = beta * s + (1.0 - beta) * g;
  return {theta - lr * s_next, s_next};
}

Eigen::VectorXd adam_step(const Eigen::VectorXd& theta, BaselineState& state,
                          const Eigen::VectorXd& g) {
  require_finite(g, "adam_step");
  state.step += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * g;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * g.cwiseProduct(g);
  double bc1 = 1.0 - std::pow(state.beta1, state.step);
  double bc2 = 1.0 - std::pow(state.beta2, state.step);
  Eigen::VectorXd m_hat = state.m / bc1;
  Eigen::VectorXd v_hat = state.v / bc2;
  return theta -
         state.lr * m_hat.cwiseQuotient(
                        (v_hat.cwiseSqrt().array() + state.eps).matrix());
}

Eigen::VectorXd rmsprop_step(const Eigen::VectorXd& theta, BaselineState& state,
                             const Eigen::VectorXd& g) {
  require_finite(g, "rmsprop_step");
  state.step += 1;
  state.v = state.alpha * state.v + (1.0 - state.alpha) * g.cwiseProduct(g);
  return theta -
         state.lr *
             g.cwiseQuotient((state.v.cwiseSqrt().array() + state.eps).matrix());
}

Eigen::VectorXd baseline_apply(BaselineState& state, const Eigen::VectorXd& theta,
                               const Eigen::VectorXd& g) {
  switch (state.rule) {
    case BaselineRule::kSgd: {
      state.step += 1;
      return sgd_step(theta, g, state.lr);
    }
    case BaselineRule::kMomentum: {
      if (state.step == 0) state.m = g;  // s^(1) := first gradient
      auto [theta_next, s_next] = momentum_step(theta, state.m, g, state.lr, state.beta);
      state.m = s_next;
      state.step += 1;
      return theta_next;
    }
    case BaselineRule::kAdam:
      return adam_step(theta, state, g);
    case BaselineRule::kRmsprop:
      return rmsprop_step(theta, state, g);
  }
  throw std::logic_error("baseline_apply: unhandled rule");
}

const std::vector<double>& default_lr_grid() {
  static const std::vector<double> grid{1e-4, 3e-4, 1e-3, 3e-3,
                                        1e-2, 3e-2, 1e-1, 3e-1};
  return grid;
}

TuneResult tune_learning_rate(BaselineRule rule, const std::vector<Task>& tasks,
                              const std::vector<double>& grid, int budget) {
  if (grid.empty()) throw std::invalid_argument("tune_learning_rate: empty grid");
  if (tasks.empty()) throw std::invalid_argument("tune_learning_rate: no tasks");
  if (budget < 1) throw std::invalid_argument("tune_learning_rate: budget must be >= 1");

  TuneResult result;
  result.best_final_val_loss = std::numeric_limits<double>::infinity();

  for (double lr : grid) {
    double total = 0.0;
    bool finite = true;
    for (const Task& task : tasks) {
      Eigen::VectorXd theta = task.theta_init;
      BaselineState state = make_baseline_state(rule, task.param_dim, lr);
      for (int it = 0; it < budget && finite; ++it) {
        ValueGrad vg = value_and_grad(task.train_loss, theta);
        if (!std::isfinite(vg.value) || !vg.grad.allFinite()) {
          finite = false;
          break;
        }
        theta = baseline_apply(state, theta, vg.grad);
        if (!theta.allFinite()) finite = false;
      }
      if (!finite) break;
      double val = value_and_grad(task.val_loss, theta).value;
      if (!std::isfinite(val)) {
        finite = false;
        break;
      }
      total += val;
    }
    double mean_final =
        finite ? total / static_cast<double>(tasks.size())
               : std::numeric_limits<double>::quiet_NaN();
    result.rows.push_back(TuneRow{rule, lr, mean_final});
    if (finite && mean_final < result.best_final_val_loss) {
      result.best_final_val_loss = mean_final;
      result.best_lr = lr;
    }
  }

  if (!std::isfinite(result.best_final_val_loss)) {
    std::ostringstream msg;
    msg << "tune_learning_rate: every learning rate diverged; grid =";
    for (double lr : grid) msg << ' ' << lr;
    throw std::runtime_error(msg.str());
  }
  return result;
}

}  // namespace dco
