#include "nlpd/operators.hpp"

#include <cmath>

#include "nlpd/errors.hpp"
#include "nlpd/quadrature.hpp"

namespace nlpd {

namespace {

void require_pairs(const TwoPointField& tp, const PairTable& pairs) {
  if (tp.values.size() != pairs.size()) throw ConfigError("two-point field does not match pairs");
}

void require_cells(const Eigen::VectorXd& v, const Grid& grid) {
  if (v.size() != grid.size()) throw ConfigError("cell field does not match grid");
}

void require_positive(const ScalarField& kappa) {
  if (!(kappa.values.minCoeff() > 0.0)) throw ConfigError("conductivity must be positive");
}

Eigen::Vector2d row2(const Eigen::MatrixXd& m, int i) {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int k = 0; k < m.cols(); ++k) v(k) = m(i, k);
  return v;
}

}  // namespace

TwoPointField nl_gradient(const ScalarField& u, const PairTable& pairs) {
  TwoPointField g = zero_two_point(pairs, Parity::antisymmetric);
  for (int k = 0; k < pairs.size(); ++k)
    g.values(k) = (u.values(pairs.i[k]) - u.values(pairs.j[k])) * pairs.w[k];
  return g;
}

ScalarField nl_divergence(const TwoPointField& tp, const Grid& grid, const PairTable& pairs) {
  require_pairs(tp, pairs);
  ScalarField d = zero_scalar(grid, Support::omega_only);
  const double hn = grid.cell_measure();
  const double s = tp.parity_sign();
  for (int k = 0; k < pairs.size(); ++k) {
    const double vw = hn * tp.values(k) * pairs.w[k];
    d.values(pairs.i[k]) += (s - 1.0) * vw;
    d.values(pairs.j[k]) += (1.0 - s) * vw;
  }
  return restrict_to_omega(grid, std::move(d));
}

AdjointCheck adjoint_check(const TwoPointField& tp, const ScalarField& u, const Grid& grid,
                           const PairTable& pairs) {
  require_pairs(tp, pairs);
  require_cells(u.values, grid);
  const ScalarField uo = restrict_to_omega(grid, u);
  const ScalarField div = nl_divergence(tp, grid, pairs);
  const TwoPointField grad = nl_gradient(uo, pairs);
  AdjointCheck c;
  const double hn = grid.cell_measure();
  for (int i : grid.interior_cells) {
    const double term = hn * div.values(i) * uo.values(i);
    c.divergence_term += term;
    c.scale += std::abs(term);
  }
  const double s = tp.parity_sign();
  for (int k = 0; k < pairs.size(); ++k) {
    // orientation (i,j) plus orientation (j,i)
    const double term = pairs.w_quad * (1.0 - s) * tp.values(k) * grad.values(k);
    c.gradient_term += term;
    c.scale += std::abs(term);
  }
  c.defect = std::abs(c.divergence_term + c.gradient_term);
  return c;
}

double adjoint_defect(const TwoPointField& tp, const ScalarField& u, const Grid& grid,
                      const PairTable& pairs) {
  return adjoint_check(tp, u, grid, pairs).defect;
}

VectorField recover_flux(const TwoPointField& tp, const Grid& grid, const PairTable& pairs) {
  require_pairs(tp, pairs);
  VectorField out = zero_vector(grid);
  const double hn = grid.cell_measure();
  const double s = tp.parity_sign();
  for (int k = 0; k < pairs.size(); ++k) {
    const double vw = hn * tp.values(k) * pairs.w[k];
    for (int d = 0; d < grid.n; ++d) {
      out.values(pairs.i[k], d) += pairs.offset[k](d) * vw;
      out.values(pairs.j[k], d) += -pairs.offset[k](d) * s * vw;
    }
  }
  return out;
}

double lift_density(const Eigen::Vector2d& v, const Eigen::Vector2d& z, double p) {
  const double vn = v.norm();
  const double vz = v.dot(z);
  if (vn == 0.0 || vz == 0.0) return 0.0;
  if (p == 2.0) return vz;
  return std::pow(vn, 2.0 - p) * std::pow(std::abs(vz), p - 2.0) * vz;
}

TwoPointField lift_flux(const VectorField& sigma, double p, const PairTable& pairs) {
  TwoPointField out = zero_two_point(pairs, Parity::antisymmetric);
  for (int k = 0; k < pairs.size(); ++k) {
    const Eigen::Vector2d& z = pairs.offset[k];
    const double g = lift_density(row2(sigma.values, pairs.i[k]), z, p) +
                     lift_density(row2(sigma.values, pairs.j[k]), z, p);
    out.values(k) = 0.5 * g * std::pow(pairs.w[k], p - 1.0);
  }
  return out;
}

VectorField sample_field(const FieldFn& sigma, const Grid& grid) {
  VectorField out = zero_vector(grid);
  for (int c = 0; c < grid.size(); ++c) {
    const Eigen::Vector2d v = sigma(grid.centers[c]);
    for (int d = 0; d < grid.n; ++d) out.values(c, d) = v(d);
  }
  return out;
}

double j_density(const FieldFn& sigma, const Point& x, const Eigen::Vector2d& s, double p) {
  if (std::abs(s.norm() - 1.0) > 1e-12) throw ConfigError("j_density: s must be a unit vector");
  return lift_density(sigma(x), s, p);
}

double J_integral(const FieldFn& sigma, const Point& x, const KernelSpec& spec, double eps,
                  int radial_order, int sphere_order) {
  const int n = spec.n;
  if (n != 1 && n != 2) throw ConfigError("J_integral: n must be 1 or 2");
  if (!(eps >= 0.0) || !(eps < spec.delta)) throw ConfigError("J_integral: need 0 <= eps < delta");
  const double p = spec.p;

  Eigen::Vector2d pole_dir = sigma(x);
  if (n == 1) pole_dir(1) = 0.0;
  if (pole_dir.norm() == 0.0) pole_dir = Eigen::Vector2d::UnitX();
  Eigen::VectorXd pole = pole_dir.head(n);

  const auto rule = TanhSinhRule::on_interval(spec.delta - eps, radial_order);
  double total = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double r = eps + rule.nodes[k];
    if (r <= 0.0 || r >= spec.delta) continue;
    const double radial = std::pow(r, n - 1) * std::pow(r, p - 1.0) * std::pow(omega(r, spec), p);
    const double avg = sphere_average(n, pole, sphere_order, [&](const Eigen::VectorXd& sv) {
      Eigen::Vector2d s = Eigen::Vector2d::Zero();
      s.head(n) = sv;
      return lift_density(sigma(x + r * s), s, p);
    });
    total += rule.weights[k] * radial * avg;
  }
  return sphere_measure(n) * total;
}

double load(const ScalarField& u, const ScalarField& f, const Grid& grid) {
  require_cells(u.values, grid);
  require_cells(f.values, grid);
  double sum = 0.0;
  for (int c : grid.interior_cells) sum += f.values(c) * u.values(c);
  return grid.cell_measure() * sum;
}

double energy_primal(const TwoPointField& kappa2pt, const ScalarField& u, const ScalarField& f,
                     double p, const Grid& grid, const PairTable& pairs) {
  require_pairs(kappa2pt, pairs);
  const TwoPointField g = nl_gradient(restrict_to_omega(grid, u), pairs);
  double sum = 0.0;
  for (int k = 0; k < pairs.size(); ++k)
    sum += kappa2pt.values(k) * std::pow(std::abs(g.values(k)), p);
  return 2.0 * pairs.w_quad * sum / p - load(u, f, grid);
}

double energy_dual(const ScalarField& kappa, const TwoPointField& sigma2pt, double q,
                   const PairTable& pairs) {
  require_pairs(sigma2pt, pairs);
  require_positive(kappa);
  double sum = 0.0;
  for (int k = 0; k < pairs.size(); ++k) {
    const double res =
        std::pow(kappa.values(pairs.i[k]), 1.0 - q) + std::pow(kappa.values(pairs.j[k]), 1.0 - q);
    sum += res * std::pow(std::abs(sigma2pt.values(k)), q);
  }
  return pairs.w_quad * sum / q;
}

double energy_dual_rows(const ScalarField& kappa, const TwoPointField& sigma2pt, double q,
                        const Grid& grid, const PairTable& pairs) {
  require_pairs(sigma2pt, pairs);
  require_positive(kappa);
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(grid.size());
  for (int k = 0; k < pairs.size(); ++k) {
    const double a = std::pow(std::abs(sigma2pt.values(k)), q);
    rows(pairs.i[k]) += a;
    rows(pairs.j[k]) += a;
  }
  const double hn = grid.cell_measure();
  double sum = 0.0;
  for (int c = 0; c < grid.size(); ++c) sum += std::pow(kappa.values(c), 1.0 - q) * hn * rows(c);
  return hn * sum / q;
}

double energy_dual_2pt(const TwoPointField& kappa2pt, const TwoPointField& sigma2pt, double q,
                       const PairTable& pairs) {
  require_pairs(kappa2pt, pairs);
  require_pairs(sigma2pt, pairs);
  double sum = 0.0;
  for (int k = 0; k < pairs.size(); ++k) {
    if (!(kappa2pt.values(k) > 0.0)) throw ConfigError("conductivity must be positive");
    sum += std::pow(kappa2pt.values(k), 1.0 - q) * std::pow(std::abs(sigma2pt.values(k)), q);
  }
  return 2.0 * pairs.w_quad * sum / q;
}

double energy_dual_local(const ScalarField& kappa, const VectorField& sigma, double q,
                         const Grid& grid) {
  require_cells(kappa.values, grid);
  double sum = 0.0;
  for (int c : grid.interior_cells) {
    if (!(kappa.values(c) > 0.0)) throw ConfigError("conductivity must be positive");
    sum += std::pow(kappa.values(c), 1.0 - q) * std::pow(sigma.values.row(c).norm(), q);
  }
  return grid.cell_measure() * sum / q;
}

}  // namespace nlpd
