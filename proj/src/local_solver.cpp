#include "nlpd/local_solver.hpp"

#include <cmath>

#include "nlpd/errors.hpp"
#include "nlpd/kernel.hpp"

namespace nlpd {

namespace {

void check_grid(const Grid& grid) {
  if (grid.n != 1) throw ConfigError("local solver: grid must be one-dimensional");
  if (grid.interior_count() < 1) throw ConfigError("local solver: no interior cells");
}

Eigen::VectorXd interior_values(const Grid& grid, const ScalarField& s) {
  if (s.values.size() != grid.size()) throw ConfigError("local solver: field does not match grid");
  Eigen::VectorXd v(grid.interior_count());
  for (int k = 0; k < grid.interior_count(); ++k) v(k) = s.values(grid.interior_cells[k]);
  return v;
}

// Face lengths (distance between the points a face gradient connects).
Eigen::VectorXd face_lengths(int N, double h) {
  Eigen::VectorXd len = Eigen::VectorXd::Constant(N + 1, h);
  len(0) = len(N) = 0.5 * h;
  return len;
}

// Face gradients u'_f, with u = 0 beyond both ends.
Eigen::VectorXd face_gradients(const Eigen::VectorXd& x, const Eigen::VectorXd& len) {
  const int N = static_cast<int>(x.size());
  Eigen::VectorXd d(N + 1);
  for (int f = 0; f <= N; ++f) {
    const double left = f > 0 ? x(f - 1) : 0.0;
    const double right = f < N ? x(f) : 0.0;
    d(f) = (right - left) / len(f);
  }
  return d;
}

double power_flux(double kf, double d, double p) {
  if (d == 0.0) return 0.0;
  return -kf * std::pow(std::abs(d), p - 2.0) * d;
}

}  // namespace

Eigen::VectorXd local_face_kappa(const Grid& grid, const ScalarField& kappa, double q) {
  check_grid(grid);
  const Eigen::VectorXd k = interior_values(grid, kappa);
  if (!(k.minCoeff() > 0.0)) throw ConfigError("local solver: conductivity must be positive");
  const int N = static_cast<int>(k.size());
  Eigen::VectorXd kf(N + 1);
  kf(0) = k(0);
  kf(N) = k(N - 1);
  for (int f = 1; f < N; ++f)
    kf(f) = std::pow(0.5 * (std::pow(k(f - 1), 1.0 - q) + std::pow(k(f), 1.0 - q)), 1.0 / (1.0 - q));
  return kf;
}

double local_dual_energy(const Grid& grid, const ScalarField& kappa,
                         const Eigen::VectorXd& face_flux, double q) {
  const Eigen::VectorXd kf = local_face_kappa(grid, kappa, q);
  const Eigen::VectorXd len = face_lengths(grid.interior_count(), grid.h);
  double sum = 0.0;
  for (int f = 0; f < kf.size(); ++f)
    sum += len(f) * std::pow(kf(f), 1.0 - q) * std::pow(std::abs(face_flux(f)), q);
  return sum / q;
}

ScalarField local_row_density(const Grid& grid, const Eigen::VectorXd& face_flux, double q) {
  check_grid(grid);
  ScalarField a = zero_scalar(grid, Support::omega_only);
  for (int k = 0; k < grid.interior_count(); ++k)
    a.values(grid.interior_cells[k]) =
        0.5 * (std::pow(std::abs(face_flux(k)), q) + std::pow(std::abs(face_flux(k + 1)), q));
  return a;
}

LocalSolution solve_local_1d(const ScalarField& kappa, const ScalarField& f, double p,
                             const Grid& grid, const SolverConfig& config,
                             const std::optional<ScalarField>& u0) {
  check_grid(grid);
  const double q = conjugate_exponent(p);
  const int N = grid.interior_count();
  const double h = grid.h;
  const Eigen::VectorXd kf = local_face_kappa(grid, kappa, q);
  const Eigen::VectorXd fv = interior_values(grid, f);
  const Eigen::VectorXd len = face_lengths(N, h);
  if (!fv.allFinite()) throw ConfigError("local solver: f must be finite");

  auto fluxes = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd d = face_gradients(x, len);
    Eigen::VectorXd s(N + 1);
    for (int k = 0; k <= N; ++k) s(k) = power_flux(kf(k), d(k), p);
    return s;
  };
  auto residual_vec = [&](const Eigen::VectorXd& s) {
    Eigen::VectorXd r(N);
    for (int k = 0; k < N; ++k) r(k) = (s(k + 1) - s(k)) / h - fv(k);
    return r;
  };
  auto norm_q = [&](const Eigen::VectorXd& v) {
    return std::pow(h * v.cwiseAbs().array().pow(q).sum(), 1.0 / q);
  };
  const double f_norm = norm_q(fv);

  LocalSolution sol;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  if (f_norm > 0.0) {
    if (u0) {
      x = interior_values(grid, *u0);
    } else if (p != 2.0) {
      x = interior_values(grid, solve_local_1d(kappa, f, 2.0, grid, config).u);
    }
    double eta = config.eta;
    if (p < 2.0 && eta == 0.0) eta = 1e-8;
    const double eta_eff = eta * std::max(1.0, face_gradients(x, len).cwiseAbs().maxCoeff());

    NewtonProblem prob;
    prob.dim = N;
    prob.energy = [&](const Eigen::VectorXd& y) {
      const Eigen::VectorXd d = face_gradients(y, len);
      double e = 0.0;
      for (int k = 0; k <= N; ++k) e += len(k) * kf(k) * std::pow(std::abs(d(k)), p);
      return e / p - h * fv.dot(y);
    };
    prob.residual = [&](const Eigen::VectorXd& y) {
      return norm_q(residual_vec(fluxes(y))) / f_norm;
    };
    prob.gradient = [&](const Eigen::VectorXd& y, Eigen::VectorXd& grad) {
      grad = h * residual_vec(fluxes(y));
    };
    prob.linearize = [&](const Eigen::VectorXd& y, Eigen::VectorXd& grad,
                         Eigen::SparseMatrix<double>& H) {
      prob.gradient(y, grad);
      const Eigen::VectorXd d = face_gradients(y, len);
      std::vector<Eigen::Triplet<double>> trip;
      for (int k = 0; k <= N; ++k) {
        const double weight = p == 2.0 ? 1.0
                                       : (p - 1.0) * std::pow(d(k) * d(k) + eta_eff * eta_eff,
                                                              0.5 * (p - 2.0));
        const double c = kf(k) * weight / len(k);
        if (k > 0) trip.emplace_back(k - 1, k - 1, c);
        if (k < N) trip.emplace_back(k, k, c);
        if (k > 0 && k < N) {
          trip.emplace_back(k - 1, k, -c);
          trip.emplace_back(k, k - 1, -c);
        }
      }
      H.resize(N, N);
      H.setFromTriplets(trip.begin(), trip.end());
    };
    const NewtonResult res = newton_minimize(prob, x, config.tol, config.max_iter, config.line_search);
    x = res.x;
    sol.iterations = res.iterations;
    sol.relative_residual = res.residual;
    sol.energy_history = res.energy_history;
    sol.primal_energy = res.energy_history.back();
  }

  sol.u = zero_scalar(grid, Support::omega_only);
  for (int k = 0; k < N; ++k) sol.u.values(grid.interior_cells[k]) = x(k);
  sol.face_flux = fluxes(x);
  sol.sigma = zero_vector(grid);
  for (int k = 0; k < N; ++k)
    sol.sigma.values(grid.interior_cells[k], 0) = 0.5 * (sol.face_flux(k) + sol.face_flux(k + 1));
  sol.i_hat_loc = local_dual_energy(grid, kappa, sol.face_flux, q);
  return sol;
}

}  // namespace nlpd
