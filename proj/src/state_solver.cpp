#include "nlpd/state_solver.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>

#include "nlpd/errors.hpp"
#include "nlpd/kernel.hpp"
#include "nlpd/operators.hpp"

namespace nlpd {

namespace {

// Interior unknowns <-> cell values.
struct Unknowns {
  std::vector<int> index;  // cell -> unknown, -1 on halo

  explicit Unknowns(const Grid& grid) : index(grid.size(), -1) {
    for (int k = 0; k < grid.interior_count(); ++k) index[grid.interior_cells[k]] = k;
  }
};

ScalarField to_cells(const Grid& grid, const Eigen::VectorXd& x) {
  ScalarField u = zero_scalar(grid, Support::omega_only);
  for (int k = 0; k < grid.interior_count(); ++k) u.values(grid.interior_cells[k]) = x(k);
  return u;
}

Eigen::VectorXd from_cells(const Grid& grid, const ScalarField& u) {
  Eigen::VectorXd x(grid.interior_count());
  for (int k = 0; k < grid.interior_count(); ++k) x(k) = u.values(grid.interior_cells[k]);
  return x;
}

// Sparse Hessian with per-pair weights c_k on the stencil [1 -1; -1 1].
Eigen::SparseMatrix<double> assemble(const Grid& grid, const PairTable& pairs,
                                     const Unknowns& map, const Eigen::VectorXd& c) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * pairs.size());
  for (int k = 0; k < pairs.size(); ++k) {
    const int a = map.index[pairs.i[k]];
    const int b = map.index[pairs.j[k]];
    if (a >= 0) trip.emplace_back(a, a, c(k));
    if (b >= 0) trip.emplace_back(b, b, c(k));
    if (a >= 0 && b >= 0) {
      trip.emplace_back(a, b, -c(k));
      trip.emplace_back(b, a, -c(k));
    }
  }
  Eigen::SparseMatrix<double> H(grid.interior_count(), grid.interior_count());
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

ScalarField solve_linear(const TwoPointField& kappa2pt, const ScalarField& f, const Grid& grid,
                         const PairTable& pairs) {
  const Unknowns map(grid);
  Eigen::VectorXd c(pairs.size());
  for (int k = 0; k < pairs.size(); ++k)
    c(k) = 2.0 * pairs.w_quad * kappa2pt.values(k) * pairs.w[k] * pairs.w[k];
  const Eigen::SparseMatrix<double> H = assemble(grid, pairs, map, c);
  const Eigen::VectorXd rhs = grid.cell_measure() * from_cells(grid, f);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
  if (ldlt.info() != Eigen::Success) throw ConvergenceError("linear system is singular", 0.0, 0);
  return to_cells(grid, ldlt.solve(rhs));
}

TwoPointField flux_from_state(const TwoPointField& kappa2pt, const ScalarField& u,
                              const PairTable& pairs) {
  TwoPointField g = nl_gradient(u, pairs);
  const double p = pairs.p;
  for (int k = 0; k < pairs.size(); ++k) {
    const double gk = g.values(k);
    g.values(k) = -kappa2pt.values(k) * (p == 2.0 ? gk : std::pow(std::abs(gk), p - 2.0) * gk);
    if (gk == 0.0) g.values(k) = 0.0;
  }
  return g;
}

TwoPointField invert_flux_law(const TwoPointField& kappa2pt, const TwoPointField& sigma2pt,
                              double q) {
  TwoPointField out{Eigen::VectorXd(sigma2pt.values.size()), Parity::antisymmetric};
  for (int k = 0; k < sigma2pt.values.size(); ++k) {
    const double s = sigma2pt.values(k);
    out.values(k) =
        s == 0.0 ? 0.0
                 : -std::pow(kappa2pt.values(k), 1.0 - q) * std::pow(std::abs(s), q - 2.0) * s;
  }
  return out;
}

KktResidual kkt_residual(const TwoPointField& kappa2pt, const TwoPointField& sigma2pt,
                         const ScalarField& u, const ScalarField& f, const Grid& grid,
                         const PairTable& pairs) {
  const double p = pairs.p;
  const double q = conjugate_exponent(p);
  TwoPointField diff = invert_flux_law(kappa2pt, sigma2pt, q);
  diff.values -= nl_gradient(restrict_to_omega(grid, u), pairs).values;
  const ScalarField div = nl_divergence(sigma2pt, grid, pairs);
  KktResidual r;
  r.stationarity = pair_norm_q(pairs, diff, p);
  r.feasibility = cell_norm_q(grid, div.values - f.values, q);
  return r;
}

namespace {

// Newton on the optimality system in (sigma, u), used for p < 2. Near a pair
// whose gradient vanishes the flux law |g|^{p-2} g is not Lipschitz, so the
// primal residual stalls near sqrt(machine epsilon). The inverse law
// -kappa^{1-q} |s|^{q-2} s is smooth there and this iteration converges.
// The u-update coincides with the primal Newton step whenever sigma = flux(u).
void polish_optimality_system(const TwoPointField& kappa2pt, const ScalarField& f, const Grid& grid,
                              const PairTable& pairs, const SolverConfig& config, double f_norm,
                              ScalarField& u, TwoPointField& sigma, StateReport& rep) {
  const double p = pairs.p;
  const double q = conjugate_exponent(p);
  const double hn = grid.cell_measure();
  const Unknowns map(grid);
  const int max_steps = 50;
  // Once inside the tolerance one more step is taken and kept only if it helps.
  // Quadratic convergence makes that step nearly free and pushes the state to
  // round-off, which keeps downstream quantities (designs) symmetric.
  bool refining = false;
  double kept_worst = 0.0;
  ScalarField kept_u = u;
  TwoPointField kept_sigma = sigma;
  for (int step = 0;; ++step) {
    const TwoPointField g = nl_gradient(u, pairs);
    const Eigen::VectorXd r1 = invert_flux_law(kappa2pt, sigma, q).values - g.values;
    const Eigen::VectorXd r2 = nl_divergence(sigma, grid, pairs).values - f.values;
    const double feasibility = cell_norm_q(grid, r2, q) / f_norm;
    const double g_norm = pair_norm_q(pairs, g, p);
    const double stationarity =
        pair_norm_q(pairs, TwoPointField{r1, Parity::antisymmetric}, p) / std::max(g_norm, 1e-300);
    const double worst = std::max(feasibility, stationarity);
    if (refining) {
      if (!(worst < kept_worst)) {
        u = kept_u;
        sigma = kept_sigma;
        rep.energy_history.pop_back();
        --rep.iterations;
      } else {
        rep.relative_residual = feasibility;
      }
      return;
    }
    rep.relative_residual = feasibility;
    if (feasibility <= config.tol && stationarity <= config.tol) {
      if (rep.iterations >= config.max_iter) return;
      refining = true;
      kept_worst = worst;
      kept_u = u;
      kept_sigma = sigma;
    } else if (step >= max_steps || rep.iterations >= config.max_iter)
      throw ConvergenceError("optimality-system Newton did not reach the tolerance", feasibility,
                             rep.iterations);

    // Slope of the inverse law, floored so that a pair with zero flux stays solvable.
    Eigen::VectorXd m(pairs.size());
    for (int k = 0; k < pairs.size(); ++k)
      m(k) = (q - 1.0) * std::pow(kappa2pt.values(k), 1.0 - q) *
             std::pow(std::abs(sigma.values(k)), q - 2.0);
    const double floor = 1e-14 * std::max(max_abs(m), 1e-300);
    Eigen::VectorXd c(pairs.size());
    for (int k = 0; k < pairs.size(); ++k) {
      m(k) = std::max(m(k), floor);
      c(k) = 2.0 * pairs.w_quad * pairs.w[k] * pairs.w[k] / m(k);
    }
    const Eigen::SparseMatrix<double> A = assemble(grid, pairs, map, c);
    const TwoPointField scaled{r1.cwiseQuotient(m), Parity::antisymmetric};
    const Eigen::VectorXd rhs =
        -hn * from_cells(grid, ScalarField{nl_divergence(scaled, grid, pairs).values + r2,
                                           Support::omega_only});
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success)
      throw ConvergenceError("optimality-system matrix is singular", feasibility, rep.iterations);
    const ScalarField du = to_cells(grid, ldlt.solve(rhs));
    const Eigen::VectorXd dg = nl_gradient(du, pairs).values;
    u.values += du.values;
    sigma.values += (r1 - dg).cwiseQuotient(m);
    rep.energy_history.push_back(energy_primal(kappa2pt, u, f, p, grid, pairs));
    ++rep.iterations;
  }
}

}  // namespace

StateReport solve_primal(const TwoPointField& kappa2pt, const ScalarField& f, const Grid& grid,
                         const PairTable& pairs, const SolverConfig& config,
                         const std::optional<ScalarField>& u0) {
  if (kappa2pt.values.size() != pairs.size() || kappa2pt.parity != Parity::symmetric)
    throw ConfigError("solve_primal: kappa2pt must be a symmetric field on the pair table");
  if (kappa2pt.values.size() && !(kappa2pt.values.minCoeff() > 0.0))
    throw ConfigError("solve_primal: kappa2pt must be positive");
  if (f.values.size() != grid.size() || !f.values.allFinite())
    throw ConfigError("solve_primal: f must be finite on the grid");
  if (!(config.tol > 0.0) || config.max_iter < 1 || !(config.eta >= 0.0))
    throw ConfigError("solve_primal: invalid solver configuration");

  const double p = pairs.p;
  const double q = conjugate_exponent(p);
  const double hn = grid.cell_measure();
  StateReport rep;
  const Unknowns map(grid);
  const double f_norm = cell_norm_q(grid, f.values, q);

  ScalarField u = zero_scalar(grid, Support::omega_only);
  if (f_norm > 0.0) {
    if (u0) {
      u = restrict_to_omega(grid, *u0);
    } else if (p != 2.0) {
      u = solve_linear(kappa2pt, f, grid, pairs);
    }

    double eta = config.eta;
    if (p < 2.0 && eta == 0.0) {
      eta = 1e-8;
      rep.warnings.push_back("eta = 0 with p < 2: regularization forced to 1e-8");
    }
    const double g_scale = std::max(1.0, max_abs(nl_gradient(u, pairs).values));
    const double eta_eff = eta * g_scale;

    NewtonProblem prob;
    prob.dim = grid.interior_count();
    prob.energy = [&](const Eigen::VectorXd& x) {
      return energy_primal(kappa2pt, to_cells(grid, x), f, p, grid, pairs);
    };
    prob.residual = [&](const Eigen::VectorXd& x) {
      const ScalarField ux = to_cells(grid, x);
      const ScalarField div = nl_divergence(flux_from_state(kappa2pt, ux, pairs), grid, pairs);
      return cell_norm_q(grid, div.values - f.values, q) / f_norm;
    };
    prob.gradient = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
      const ScalarField ux = to_cells(grid, x);
      const ScalarField div = nl_divergence(flux_from_state(kappa2pt, ux, pairs), grid, pairs);
      grad = hn * from_cells(grid, ScalarField{div.values - f.values, Support::omega_only});
    };
    prob.linearize = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad,
                         Eigen::SparseMatrix<double>& H) {
      prob.gradient(x, grad);
      const ScalarField ux = to_cells(grid, x);
      const TwoPointField g = nl_gradient(ux, pairs);
      Eigen::VectorXd c(pairs.size());
      for (int k = 0; k < pairs.size(); ++k) {
        const double gk = g.values(k);
        const double weight =
            p == 2.0 ? 1.0 : (p - 1.0) * std::pow(gk * gk + eta_eff * eta_eff, 0.5 * (p - 2.0));
        c(k) = 2.0 * pairs.w_quad * kappa2pt.values(k) * weight * pairs.w[k] * pairs.w[k];
      }
      H = assemble(grid, pairs, map, c);
    };

    const NewtonResult res = newton_minimize(prob, from_cells(grid, u), config.tol, config.max_iter,
                                             config.line_search, p < 2.0);
    u = to_cells(grid, res.x);
    rep.iterations = res.iterations;
    rep.relative_residual = res.residual;
    rep.energy_history = res.energy_history;
    rep.sigma2pt = flux_from_state(kappa2pt, u, pairs);
    if (p < 2.0) polish_optimality_system(kappa2pt, f, grid, pairs, config, f_norm, u, rep.sigma2pt, rep);
  } else {
    rep.energy_history.push_back(0.0);
    rep.sigma2pt = flux_from_state(kappa2pt, u, pairs);
  }

  rep.u = u;
  rep.primal_energy = energy_primal(kappa2pt, u, f, p, grid, pairs);
  rep.dual_energy = energy_dual_2pt(kappa2pt, rep.sigma2pt, q, pairs);
  rep.duality_gap = std::abs(rep.primal_energy + rep.dual_energy);
  const KktResidual kkt = kkt_residual(kappa2pt, rep.sigma2pt, u, f, grid, pairs);
  rep.kkt_stationarity = kkt.stationarity;
  rep.kkt_feasibility = kkt.feasibility;
  return rep;
}

}  // namespace nlpd
