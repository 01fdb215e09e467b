#pragma once

#include <string>
#include <vector>

#include "nlpd/discretization.hpp"
#include "nlpd/local_solver.hpp"
#include "nlpd/state_solver.hpp"

namespace nlpd {

struct AdmissibleSet {
  double kappa_lo = 0.5;
  double kappa_hi = 2.0;
  double V = 1.0;
  double halo_value = 2.0;

  /// Throws ConfigError on bad bounds and InfeasibleError if kappa_lo |Omega| > V.
  void validate(double omega_measure) const;
};

struct OuterConfig {
  double tol = 1e-6;  // relative objective decrease
  int max_outer = 100;
  double lambda_tol = 1e-10;
};

struct DesignReport {
  ScalarField kappa;  // interior: design, halo: halo_value
  double objective = 0.0;
  std::vector<double> objective_history;
  double volume_used = 0.0;
  std::vector<double> gaps;           // per inner solve
  std::vector<int> inner_iterations;  // per inner solve
  int outer_iterations = 0;
  std::vector<std::string> warnings;
};

/// kappa2pt = [(kappa_i^{1-q} + kappa_j^{1-q})/2]^{1/(1-q)}, symmetric.
TwoPointField make_kappa2pt(const ScalarField& kappa, double q, const PairTable& pairs);

/// A_i = h^n sum_j |sigma_ij|^q over both orientations.
ScalarField row_density(const TwoPointField& sigma2pt, double q, const Grid& grid,
                        const PairTable& pairs);

struct OcStep {
  Eigen::VectorXd kappa;
  double lambda = 0.0;
  double volume = 0.0;
};

/// Minimizes sum_i kappa_i^{1-q} A_i subject to kappa_lo <= kappa <= kappa_hi and
/// cell_measure * sum kappa <= V. Bisection on log(lambda); the returned
/// design is on the feasible side of the budget.
OcStep oc_update_values(const Eigen::VectorXd& A, double cell_measure, const AdmissibleSet& adm,
                        double q, double lambda_tol);

/// Grid version: updates interior cells and fills the halo with halo_value.
ScalarField oc_update(const ScalarField& A, const AdmissibleSet& adm, double q, double lambda_tol,
                      const Grid& grid);

/// Initial design: V/|Omega| clipped to the bounds, halo_value outside.
ScalarField initial_design(const AdmissibleSet& adm, const Grid& grid);

DesignReport design_alternate(const ScalarField& f, const AdmissibleSet& adm, const Grid& grid,
                              const PairTable& pairs, const SolverConfig& solver,
                              const OuterConfig& outer);

DesignReport design_local_1d(const ScalarField& f, const AdmissibleSet& adm, double p,
                             const Grid& grid, const SolverConfig& solver,
                             const OuterConfig& outer);

}  // namespace nlpd
