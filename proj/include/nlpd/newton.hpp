#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace nlpd {

struct LineSearch {
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  /// Curvature condition |phi'(t)| <= curvature |phi'(0)| on the trial step.
  double curvature = 0.1;
  int max_backtracks = 60;
};

/// Smooth convex minimization problem over R^dim.
struct NewtonProblem {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> energy;
  /// Gradient and (possibly regularized) Hessian at x.
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::SparseMatrix<double>&)>
      linearize;
  /// Gradient only. Optional; enables the curvature stage of the line search.
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> gradient;
  /// Dimensionless stopping measure; iteration stops once it is <= tol.
  std::function<double(const Eigen::VectorXd&)> residual;
};

struct NewtonResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> energy_history;
  /// Set when the iteration stopped early in the round-off regime.
  bool stalled = false;
};

/// Damped Newton with Armijo backtracking. If the full step violates the
/// curvature condition, the step length is first moved to a root of the
/// directional derivative (bracketing plus Illinois iteration). This stops the
/// g -> -g oscillation of pure Newton on |g|^p with p < 2. When backtracking cannot certify
/// decrease (energy changes below round-off), a step that lowers the residual
/// is accepted instead, or, with stop_at_roundoff, the iteration returns with
/// `stalled` set. Throws ConvergenceError after max_iter iterations.
NewtonResult newton_minimize(const NewtonProblem& problem, Eigen::VectorXd x0, double tol,
                             int max_iter, const LineSearch& ls, bool stop_at_roundoff = false);

}  // namespace nlpd
