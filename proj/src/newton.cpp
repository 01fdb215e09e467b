#include "nlpd/newton.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "nlpd/errors.hpp"

namespace nlpd {

namespace {

Eigen::VectorXd newton_direction(const Eigen::SparseMatrix<double>& H, const Eigen::VectorXd& g) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
  if (ldlt.info() == Eigen::Success) {
    Eigen::VectorXd d = ldlt.solve(-g);
    if (ldlt.info() == Eigen::Success && d.allFinite() && d.dot(g) < 0.0) return d;
  }
  // Singular or indefinite linearization: shift the diagonal.
  double shift = 1e-12 * std::max(1.0, H.coeffs().cwiseAbs().maxCoeff());
  Eigen::SparseMatrix<double> I(H.rows(), H.cols());
  I.setIdentity();
  for (int attempt = 0; attempt < 40; ++attempt, shift *= 10.0) {
    Eigen::SparseMatrix<double> Hs = H + shift * I;
    ldlt.compute(Hs);
    if (ldlt.info() != Eigen::Success) continue;
    Eigen::VectorXd d = ldlt.solve(-g);
    if (d.allFinite() && d.dot(g) < 0.0) return d;
  }
  return -g;
}

// Step length along d at which the directional derivative changes sign,
// starting from the unit step.
double curvature_step(const NewtonProblem& problem, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& d, double slope, const LineSearch& ls) {
  Eigen::VectorXd g(problem.dim);
  auto dphi = [&](double t) {
    problem.gradient(x + t * d, g);
    return g.dot(d);
  };
  const double target = ls.curvature * std::abs(slope);
  double hi = 1.0, d_hi = dphi(hi);
  if (!std::isfinite(d_hi) || std::abs(d_hi) <= target) return 1.0;
  double lo = 0.0, d_lo = slope;
  while (d_hi < 0.0 && hi < 64.0) {
    lo = hi;
    d_lo = d_hi;
    hi *= 2.0;
    d_hi = dphi(hi);
    if (!std::isfinite(d_hi)) return 1.0;
  }
  if (d_hi < 0.0) return hi;
  double t = hi;
  int side = 0;
  for (int it = 0; it < 60; ++it) {
    t = (lo * d_hi - hi * d_lo) / (d_hi - d_lo);
    const double d_t = dphi(t);
    if (!std::isfinite(d_t)) return 1.0;
    if (std::abs(d_t) <= target || hi - lo <= 1e-14 * hi) break;
    if (d_t < 0.0) {
      lo = t;
      d_lo = d_t;
      if (side == -1) d_hi *= 0.5;
      side = -1;
    } else {
      hi = t;
      d_hi = d_t;
      if (side == 1) d_lo *= 0.5;
      side = 1;
    }
  }
  return t;
}

}  // namespace

NewtonResult newton_minimize(const NewtonProblem& problem, Eigen::VectorXd x0, double tol,
                             int max_iter, const LineSearch& ls, bool stop_at_roundoff) {
  NewtonResult out;
  out.x = std::move(x0);
  double energy = problem.energy(out.x);
  out.energy_history.push_back(energy);
  out.residual = problem.residual(out.x);

  Eigen::VectorXd g(problem.dim);
  Eigen::SparseMatrix<double> H(problem.dim, problem.dim);
  while (out.residual > tol) {
    if (out.iterations >= max_iter)
      throw ConvergenceError("Newton iteration did not reach the tolerance", out.residual,
                             out.iterations);
    problem.linearize(out.x, g, H);
    const Eigen::VectorXd d = newton_direction(H, g);
    const double slope = g.dot(d);

    const double t0 = problem.gradient ? curvature_step(problem, out.x, d, slope, ls) : 1.0;
    double t = t0;
    bool accepted = false;
    Eigen::VectorXd trial;
    double trial_energy = 0.0;
    const double roundoff =
        64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(energy));
    for (int b = 0; b <= ls.max_backtracks; ++b, t *= ls.shrink) {
      // A required decrease below round-off cannot be certified by energies.
      if (ls.sufficient_decrease * t * std::abs(slope) < roundoff) break;
      trial = out.x + t * d;
      trial_energy = problem.energy(trial);
      if (std::isfinite(trial_energy) &&
          trial_energy <= energy + ls.sufficient_decrease * t * slope) {
        accepted = true;
        break;
      }
    }
    double trial_residual = 0.0;
    if (!accepted && stop_at_roundoff) {
      out.stalled = true;
      return out;
    }
    if (!accepted) {
      // Energy differences are at round-off level; fall back on the residual.
      t = t0;
      for (int b = 0; b <= ls.max_backtracks && !accepted; ++b, t *= ls.shrink) {
        trial = out.x + t * d;
        trial_energy = problem.energy(trial);
        trial_residual = problem.residual(trial);
        accepted = trial_residual < out.residual && trial_energy <= energy + roundoff;
      }
      if (!accepted)
        throw ConvergenceError("line search failed to make progress", out.residual,
                               out.iterations);
    } else {
      trial_residual = problem.residual(trial);
    }
    const bool flat = std::abs(trial_energy - energy) <= roundoff;
    out.x = std::move(trial);
    energy = trial_energy;
    const double previous = out.residual;
    out.energy_history.push_back(energy);
    out.residual = trial_residual;
    ++out.iterations;
    if (stop_at_roundoff && flat && out.residual > 0.5 * previous && out.residual > tol) {
      out.stalled = true;
      return out;
    }
  }
  return out;
}

}  // namespace nlpd
