#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlpd/discretization.hpp"
#include "nlpd/newton.hpp"

namespace nlpd {

struct SolverConfig {
  /// Bound on ||D sigma - f||_q / ||f||_q, the relative Euler-Lagrange residual.
  double tol = 1e-10;
  int max_iter = 200;
  /// Hessian weights use (|Gu|^2 + eta_eff^2)^{(p-2)/2}, eta_eff = eta * max|Gu| at
  /// the initial iterate. Must be positive for p < 2.
  double eta = 1e-8;
  LineSearch line_search;
};

struct StateReport {
  ScalarField u;
  TwoPointField sigma2pt;
  double primal_energy = 0.0;
  double dual_energy = 0.0;
  double duality_gap = 0.0;
  double kkt_stationarity = 0.0;
  double kkt_feasibility = 0.0;
  double relative_residual = 0.0;
  int iterations = 0;
  std::vector<double> energy_history;
  std::vector<std::string> warnings;
};

/// Minimizes the discrete primal energy over interior values of u. For p != 2
/// without an initial guess the p = 2 solution is used as the starting point.
StateReport solve_primal(const TwoPointField& kappa2pt, const ScalarField& f, const Grid& grid,
                         const PairTable& pairs, const SolverConfig& config,
                         const std::optional<ScalarField>& u0 = std::nullopt);

/// Direct sparse solve of the p = 2 Euler-Lagrange system (pairs.p ignored).
ScalarField solve_linear(const TwoPointField& kappa2pt, const ScalarField& f, const Grid& grid,
                         const PairTable& pairs);

/// sigma = -kappa2pt |Gu|^{p-2} Gu.
TwoPointField flux_from_state(const TwoPointField& kappa2pt, const ScalarField& u,
                              const PairTable& pairs);

/// -kappa2pt^{1-q} |sigma|^{q-2} sigma, which equals Gu when sigma solves the flux law.
TwoPointField invert_flux_law(const TwoPointField& kappa2pt, const TwoPointField& sigma2pt,
                              double q);

struct KktResidual {
  double stationarity = 0.0;  // ||invert_flux_law(sigma) - Gu||_{pair,p}
  double feasibility = 0.0;   // ||D sigma - f||_q over Omega
};

KktResidual kkt_residual(const TwoPointField& kappa2pt, const TwoPointField& sigma2pt,
                         const ScalarField& u, const ScalarField& f, const Grid& grid,
                         const PairTable& pairs);

}  // namespace nlpd
