#pragma once

#include "nlpd/discretization.hpp"
#include "nlpd/state_solver.hpp"

namespace nlpd {

/// Finite-volume reference for -(kappa |u'|^{p-2} u')' = f on an interval with
/// u = 0 at both ends. Uses the interior cells of a 1D grid; face distances
/// are h inside and h/2 at the two boundary faces.
struct LocalSolution {
  ScalarField u;
  /// N+1 face fluxes sigma = -kappa_f |u'|^{p-2} u', left to right.
  Eigen::VectorXd face_flux;
  /// Cell-centered flux, average of the two adjacent faces.
  VectorField sigma;
  /// Complementary energy (1/q) sum_f len_f kappa_f^{1-q} |sigma_f|^q.
  double i_hat_loc = 0.0;
  double primal_energy = 0.0;
  double relative_residual = 0.0;
  int iterations = 0;
  std::vector<double> energy_history;
};

/// Face conductivities: power mean of resistivities inside, the boundary cell
/// value on the two end faces.
Eigen::VectorXd local_face_kappa(const Grid& grid, const ScalarField& kappa, double q);

/// Face-form complementary energy for given face fluxes.
double local_dual_energy(const Grid& grid, const ScalarField& kappa,
                         const Eigen::VectorXd& face_flux, double q);

/// Cell density A_i = (|sigma_{i-1/2}|^q + |sigma_{i+1/2}|^q)/2, so that the
/// face energy equals (1/q) h sum_i kappa_i^{1-q} A_i.
ScalarField local_row_density(const Grid& grid, const Eigen::VectorXd& face_flux, double q);

LocalSolution solve_local_1d(const ScalarField& kappa, const ScalarField& f, double p,
                             const Grid& grid, const SolverConfig& config,
                             const std::optional<ScalarField>& u0 = std::nullopt);

}  // namespace nlpd
