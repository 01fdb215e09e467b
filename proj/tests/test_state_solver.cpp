#include <doctest.h>

#include <cmath>
#include <random>

#include "nlpd/design.hpp"
#include "nlpd/errors.hpp"
#include "nlpd/local_solver.hpp"
#include "nlpd/operators.hpp"
#include "nlpd/state_solver.hpp"

using namespace nlpd;

namespace {

struct Problem {
  KernelSpec spec;
  Grid grid;
  PairTable pairs;
  ScalarField kappa;
  TwoPointField k2;
  ScalarField f;
};

Problem problem(double p, int cells, double ratio, std::uint64_t seed, bool random_kappa = true) {
  Problem pr;
  const double h = 1.0 / cells;
  pr.spec = make_kernel(1, p, ratio * h);
  pr.grid = build_grid(Domain::interval(0, 1), h, ratio * h);
  pr.pairs = build_pairs(pr.grid, pr.spec);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(1, 2);
  pr.kappa = constant_scalar(pr.grid, 1.0, Support::omega_delta);
  if (random_kappa)
    for (int c = 0; c < pr.grid.size(); ++c) pr.kappa.values(c) = U(rng);
  pr.k2 = make_kappa2pt(pr.kappa, pr.spec.q, pr.pairs);
  pr.f = constant_scalar(pr.grid, 1.0, Support::omega_only);
  return pr;
}

}  // namespace

TEST_CASE("zero load gives the zero state") {
  const Problem pr = problem(3.0, 32, 4, 1);
  const StateReport r = solve_primal(pr.k2, zero_scalar(pr.grid, Support::omega_only), pr.grid, pr.pairs, {});
  CHECK(r.u.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.primal_energy == 0.0);
  CHECK(r.dual_energy == 0.0);
  CHECK(r.duality_gap == 0.0);
}

TEST_CASE("p = 2 Newton path agrees with the direct linear solve") {
  const Problem pr = problem(2.0, 64, 4, 2);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1, 1);
  ScalarField u0 = zero_scalar(pr.grid, Support::omega_only);
  for (int c : pr.grid.interior_cells) u0.values(c) = U(rng);
  const StateReport r = solve_primal(pr.k2, pr.f, pr.grid, pr.pairs, {}, u0);
  const ScalarField direct = solve_linear(pr.k2, pr.f, pr.grid, pr.pairs);
  CHECK((r.u.values - direct.values).norm() / direct.values.norm() < 1e-10);
}

TEST_CASE("property: strong duality and KKT certificates across p") {
  for (double p : {1.5, 2.0, 3.0})
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const Problem pr = problem(p, 128, 4, seed);
      SolverConfig cfg;
      const StateReport r = solve_primal(pr.k2, pr.f, pr.grid, pr.pairs, cfg);
      CHECK(r.sigma2pt.parity == Parity::antisymmetric);
      CHECK(r.duality_gap / std::max(1.0, std::abs(r.primal_energy)) < 10 * cfg.tol);
      CHECK(r.kkt_feasibility / cell_norm_q(pr.grid, pr.f.values, pr.spec.q) <= cfg.tol);
      CHECK(std::abs(energy_dual(pr.kappa, r.sigma2pt, pr.spec.q, pr.pairs) + r.primal_energy) <
            10 * cfg.tol * std::abs(r.primal_energy));
      for (std::size_t k = 1; k < r.energy_history.size(); ++k)
        CHECK(r.energy_history[k] <= r.energy_history[k - 1] + 1e-14 * std::abs(r.energy_history[k - 1]));
      // Recovery bound on the solved state.
      const double loc = energy_dual_local(pr.kappa, recover_flux(r.sigma2pt, pr.grid, pr.pairs), pr.spec.q, pr.grid);
      CHECK(loc <= energy_dual(pr.kappa, r.sigma2pt, pr.spec.q, pr.pairs) * (1 + 1e-10));
    }
}

TEST_CASE("property: power-law inversion recovers the gradient") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1, 1);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const Problem pr = problem(p, 32, 4, 5);
    ScalarField u = zero_scalar(pr.grid, Support::omega_only);
    for (int c : pr.grid.interior_cells) u.values(c) = U(rng);
    const TwoPointField back = invert_flux_law(pr.k2, flux_from_state(pr.k2, u, pr.pairs), pr.spec.q);
    const TwoPointField g = nl_gradient(u, pr.pairs);
    for (int k = 0; k < pr.pairs.size(); ++k)
      CHECK(std::abs(back.values(k) - g.values(k)) <= 1e-12 * std::max(1e-300, std::abs(g.values(k))));
  }
}

TEST_CASE("flux from state basics") {
  const Problem pr = problem(2.0, 16, 4, 3);
  CHECK(flux_from_state(pr.k2, zero_scalar(pr.grid, Support::omega_only), pr.pairs).values.cwiseAbs().maxCoeff() == 0.0);
  const ScalarField u = solve_linear(pr.k2, pr.f, pr.grid, pr.pairs);
  const TwoPointField s = flux_from_state(pr.k2, u, pr.pairs);
  const TwoPointField g = nl_gradient(u, pr.pairs);
  for (int k = 0; k < pr.pairs.size(); ++k) CHECK(s.values(k) == doctest::Approx(-pr.k2.values(k) * g.values(k)));
}

TEST_CASE("random fluxes leave strictly positive KKT residuals") {
  const Problem pr = problem(3.0, 32, 4, 6);
  const StateReport r = solve_primal(pr.k2, pr.f, pr.grid, pr.pairs, {});
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> U(-1, 1);
  TwoPointField s = zero_two_point(pr.pairs, Parity::antisymmetric);
  for (int k = 0; k < pr.pairs.size(); ++k) s.values(k) = U(rng);
  const KktResidual res = kkt_residual(pr.k2, s, r.u, pr.f, pr.grid, pr.pairs);
  CHECK(res.stationarity > 0.0);
  CHECK(res.feasibility > 0.0);
  CHECK(r.kkt_stationarity < 1e-10 * pair_norm_q(pr.pairs, nl_gradient(r.u, pr.pairs), 3.0));
}

TEST_CASE("uniqueness probe: random initializations agree") {
  for (double p : {1.5, 3.0}) {
    const Problem pr = problem(p, 64, 4, 7);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(-0.2, 0.2);
    ScalarField a = zero_scalar(pr.grid, Support::omega_only), b = a;
    for (int c : pr.grid.interior_cells) {
      a.values(c) = U(rng);
      b.values(c) = U(rng);
    }
    SolverConfig cfg;
    const StateReport ra = solve_primal(pr.k2, pr.f, pr.grid, pr.pairs, cfg, a);
    const StateReport rb = solve_primal(pr.k2, pr.f, pr.grid, pr.pairs, cfg, b);
    CHECK((ra.u.values - rb.u.values).norm() / ra.u.values.norm() < 10 * cfg.tol);
  }
}

TEST_CASE("a priori boundedness of the optimal flux across a delta sweep") {
  for (double p : {1.5, 2.0, 3.0}) {
    std::vector<double> norms;
    for (double delta : {0.2, 0.1, 0.05, 0.025}) {
      const KernelSpec k = make_kernel(1, p, delta);
      const Grid g = build_grid(Domain::interval(0, 1), delta / 4, delta);
      const PairTable t = build_pairs(g, k);
      const TwoPointField k2{Eigen::VectorXd::Ones(t.size()), Parity::symmetric};
      const StateReport r = solve_primal(k2, constant_scalar(g, 1.0, Support::omega_only), g, t, {});
      norms.push_back(pair_norm_q(t, r.sigma2pt, k.q));
    }
    const auto [lo, hi] = std::minmax_element(norms.begin() + 1, norms.end());
    CHECK(*hi <= 2.0 * *lo);
  }
}

TEST_CASE("solver failures and configuration errors") {
  const Problem pr = problem(3.0, 64, 4, 9);
  SolverConfig tight;
  tight.max_iter = 1;
  tight.tol = 1e-14;
  CHECK_THROWS_AS(solve_primal(pr.k2, pr.f, pr.grid, pr.pairs, tight), ConvergenceError);
  const Problem pl = problem(1.5, 32, 4, 9);
  SolverConfig no_eta;
  no_eta.eta = 0.0;
  const StateReport r = solve_primal(pl.k2, pl.f, pl.grid, pl.pairs, no_eta);
  CHECK(r.warnings.size() == 1);
  TwoPointField asym = pr.k2;
  asym.parity = Parity::antisymmetric;
  CHECK_THROWS_AS(solve_primal(asym, pr.f, pr.grid, pr.pairs, {}), ConfigError);
}

TEST_CASE("local reference solver") {
  const int N = 512;
  const Grid g = build_grid(Domain::interval(0, 1), 1.0 / N, 2.0 / N);
  const ScalarField one = constant_scalar(g, 1.0, Support::omega_delta);
  const ScalarField f = constant_scalar(g, 1.0, Support::omega_only);

  const LocalSolution zero = solve_local_1d(one, zero_scalar(g, Support::omega_only), 2.0, g, {});
  CHECK(zero.u.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero.i_hat_loc == 0.0);

  const LocalSolution s2 = solve_local_1d(one, f, 2.0, g, {});
  for (int k = 0; k <= N; ++k) CHECK(std::abs(s2.face_flux(k) - (k * 1.0 / N - 0.5)) < 1e-9);
  CHECK(s2.i_hat_loc == doctest::Approx(1.0 / 24).epsilon(1e-5));
  CHECK(s2.primal_energy == doctest::Approx(-s2.i_hat_loc).epsilon(1e-10));

  const LocalSolution s3 = solve_local_1d(one, f, 3.0, g, {});
  const double q = 1.5;
  const double exact = (2.0 / q) * std::pow(0.5, q + 1) / (q + 1);
  CHECK(exact == doctest::Approx(0.0942809).epsilon(1e-6));
  CHECK(s3.i_hat_loc == doctest::Approx(exact).epsilon(1e-5));
  CHECK(s3.primal_energy == doctest::Approx(-s3.i_hat_loc).epsilon(1e-9));
  for (int k = 0; k <= N; ++k) CHECK(std::abs(s3.face_flux(k) - (k * 1.0 / N - 0.5)) < 1e-8);
}
