#pragma once

#include <functional>

#include "nlpd/discretization.hpp"

namespace nlpd {

/// A closed-form vector field evaluable at arbitrary points (first n entries used).
using FieldFn = std::function<Eigen::Vector2d(const Point&)>;

/// [u_i - u_j] w_ij, antisymmetric.
TwoPointField nl_gradient(const ScalarField& u, const PairTable& pairs);

/// h^n sum_j [tp(j,i) - tp(i,j)] w_ij on interior cells, zero on the halo.
ScalarField nl_divergence(const TwoPointField& tp, const Grid& grid, const PairTable& pairs);

struct AdjointCheck {
  double divergence_term = 0.0;  // <D tp, u>
  double gradient_term = 0.0;    // <tp, G u>
  double defect = 0.0;           // |sum of the two|
  double scale = 0.0;            // sum of absolute summands
};

AdjointCheck adjoint_check(const TwoPointField& tp, const ScalarField& u, const Grid& grid,
                           const PairTable& pairs);
double adjoint_defect(const TwoPointField& tp, const ScalarField& u, const Grid& grid,
                      const PairTable& pairs);

/// First moment h^n sum_j (x_i - x_j) tp(i,j) w_ij on every cell.
VectorField recover_flux(const TwoPointField& tp, const Grid& grid, const PairTable& pairs);

/// g(v, z) = |v|^{2-p} |v.z|^{p-2} (v.z), with g(0, z) = 0.
double lift_density(const Eigen::Vector2d& v, const Eigen::Vector2d& z, double p);

/// Entry (i,j) = [g(sigma_i, x_i-x_j) + g(sigma_j, x_i-x_j)]/2 * w^{p-1}.
TwoPointField lift_flux(const VectorField& sigma, double p, const PairTable& pairs);

/// Cell samples of a closed-form field.
VectorField sample_field(const FieldFn& sigma, const Grid& grid);

/// j_{p,sigma,s}(x) = g(sigma(x), s).
double j_density(const FieldFn& sigma, const Point& x, const Eigen::Vector2d& s, double p);

/// Shell integral over eps <= |z| < delta of j(x+z, z/|z|) |z|^{p-1} omega^p(z).
/// The radial variable uses a tanh-sinh rule, the angle the sphere rule;
/// antipodal directions are paired so the 1/r singularity cancels.
double J_integral(const FieldFn& sigma, const Point& x, const KernelSpec& spec, double eps,
                  int radial_order = 80, int sphere_order = 48);

/// Midpoint rule for int_Omega f u.
double load(const ScalarField& u, const ScalarField& f, const Grid& grid);

/// (1/p) sum_{ordered pairs} kappa2pt |G u|^p h^{2n} - load(u, f).
double energy_primal(const TwoPointField& kappa2pt, const ScalarField& u, const ScalarField& f,
                     double p, const Grid& grid, const PairTable& pairs);

/// Pair form: (1/q) sum_{ordered} [(kappa_i^{1-q} + kappa_j^{1-q})/2] |sigma|^q h^{2n}.
double energy_dual(const ScalarField& kappa, const TwoPointField& sigma2pt, double q,
                   const PairTable& pairs);

/// Row form: (1/q) sum_i kappa_i^{1-q} A_i h^n, A_i = h^n sum_j |sigma_ij|^q.
double energy_dual_rows(const ScalarField& kappa, const TwoPointField& sigma2pt, double q,
                        const Grid& grid, const PairTable& pairs);

/// (1/q) sum_{ordered} kappa2pt^{1-q} |sigma|^q h^{2n}.
double energy_dual_2pt(const TwoPointField& kappa2pt, const TwoPointField& sigma2pt, double q,
                       const PairTable& pairs);

/// (1/q) h^n sum_interior kappa^{1-q} |sigma|^q.
double energy_dual_local(const ScalarField& kappa, const VectorField& sigma, double q,
                         const Grid& grid);

}  // namespace nlpd
