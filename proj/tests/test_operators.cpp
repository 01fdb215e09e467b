#include <doctest.h>

#include <cmath>
#include <random>

#include "nlpd/design.hpp"
#include "nlpd/errors.hpp"
#include "nlpd/operators.hpp"
#include "oracles.hpp"

using namespace nlpd;

namespace {

Eigen::VectorXd rand_vec(int n, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> U(lo, hi);
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v(k) = U(rng);
  return v;
}

struct Fixture {
  KernelSpec spec;
  Grid grid;
  PairTable pairs;
};

Fixture fixture(int n, double h, double delta, double p) {
  const Domain d = n == 1 ? Domain::interval(0, 1) : Domain::box(0, 1, 0, 1);
  Fixture f{make_kernel(n, p, delta), build_grid(d, h, delta), {}};
  f.pairs = build_pairs(f.grid, f.spec);
  return f;
}

}  // namespace

TEST_CASE("gradient basics") {
  const Fixture f = fixture(1, 0.1, 0.3, 2.0);
  CHECK(nl_gradient(zero_scalar(f.grid, Support::omega_only), f.pairs).values.cwiseAbs().maxCoeff() == 0.0);
  ScalarField x = zero_scalar(f.grid, Support::omega_delta);
  for (int c = 0; c < f.grid.size(); ++c) x.values(c) = f.grid.centers[c](0);
  const TwoPointField g = nl_gradient(x, f.pairs);
  CHECK(g.parity == Parity::antisymmetric);
  for (int k = 0; k < f.pairs.size(); ++k)
    CHECK(g.values(k) == doctest::Approx(f.pairs.offset[k](0) * f.pairs.w[k]).epsilon(1e-14));
}

TEST_CASE("divergence of symmetric and odd fields") {
  const Fixture f = fixture(1, 1.0 / 32, 0.125, 2.0);
  std::mt19937_64 rng(3);
  const TwoPointField sym{rand_vec(f.pairs.size(), rng), Parity::symmetric};
  CHECK(nl_divergence(sym, f.grid, f.pairs).values.cwiseAbs().maxCoeff() == 0.0);
  TwoPointField odd = zero_two_point(f.pairs, Parity::antisymmetric);
  for (int k = 0; k < f.pairs.size(); ++k) odd.values(k) = f.pairs.offset[k](0);
  const ScalarField d = nl_divergence(odd, f.grid, f.pairs);
  for (int c : f.grid.interior_cells) CHECK(std::abs(d.values(c)) < 1e-13);
}

TEST_CASE("property: discrete adjointness, 50 draws in 1D and 2D") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 2; ++n) {
    const Fixture f = n == 1 ? fixture(1, 1.0 / 64, 4.0 / 64, 2.0) : fixture(2, 1.0 / 16, 0.25, 2.0);
    const TwoPointField any{rand_vec(f.pairs.size(), rng), Parity::antisymmetric};
    CHECK(adjoint_defect(any, zero_scalar(f.grid, Support::omega_only), f.grid, f.pairs) == 0.0);
    for (int d = 0; d < 50; ++d) {
      const ScalarField u = restrict_to_omega(f.grid, {rand_vec(f.grid.size(), rng), Support::omega_delta});
      const Parity par = d % 2 ? Parity::symmetric : Parity::antisymmetric;
      const AdjointCheck c = adjoint_check({rand_vec(f.pairs.size(), rng), par}, u, f.grid, f.pairs);
      CHECK(c.defect <= 1e-12 * c.scale);
    }
  }
}

TEST_CASE("brute-force full-orientation oracle agrees with parity storage") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 2; ++n)
    for (double p : {1.5, 2.0, 3.0}) {
      // 10 interior cells in 1D, 3x3 in 2D.
      const Domain dom = n == 1 ? Domain::interval(0, 1) : Domain::box(0, 0.75, 0, 0.75);
      const double h = n == 1 ? 0.1 : 0.25;
      const double delta = n == 1 ? 0.35 : 0.55;
      const KernelSpec k = make_kernel(n, p, delta);
      const Grid g = build_grid(dom, h, delta);
      const PairTable t = build_pairs(g, k);
      const oracle::FullPairs fp = oracle::full_pairs(g, k, t.calibration_factor);
      REQUIRE(fp.ab.size() == 2 * static_cast<std::size_t>(t.size()));

      const ScalarField u = restrict_to_omega(g, {rand_vec(g.size(), rng), Support::omega_delta});
      const auto bg = oracle::gradient(fp, u.values);
      const auto eg = oracle::expand(fp, t, nl_gradient(u, t));
      for (std::size_t e = 0; e < bg.size(); ++e) CHECK(eg[e] == doctest::Approx(bg[e]).epsilon(1e-14));

      for (Parity par : {Parity::antisymmetric, Parity::symmetric}) {
        const TwoPointField tp{rand_vec(t.size(), rng), par};
        const auto full = oracle::expand(fp, t, tp);
        const Eigen::VectorXd bd = oracle::divergence(g, fp, full);
        const ScalarField d = nl_divergence(tp, g, t);
        CHECK((bd - d.values).cwiseAbs().maxCoeff() <= 1e-13 * (1 + bd.cwiseAbs().maxCoeff()));
        const Eigen::MatrixXd br = oracle::recover(g, fp, full);
        CHECK((br - recover_flux(tp, g, t).values).cwiseAbs().maxCoeff() <= 1e-13 * (1 + br.cwiseAbs().maxCoeff()));
        const Eigen::VectorXd kappa = rand_vec(g.size(), rng, 1, 2);
        const double q = k.q;
        CHECK(energy_dual({kappa, Support::omega_delta}, tp, q, t) ==
              doctest::Approx(oracle::dual_energy(g, fp, kappa, full, q)).epsilon(1e-13));
      }

      Eigen::MatrixXd sigma(g.size(), n);
      for (int c = 0; c < g.size(); ++c)
        for (int d = 0; d < n; ++d) sigma(c, d) = rand_vec(1, rng)(0);
      sigma.row(0).setZero();
      const auto bl = oracle::lift(g, fp, sigma, p);
      const auto el = oracle::expand(fp, t, lift_flux({sigma}, p, t));
      for (std::size_t e = 0; e < bl.size(); ++e) CHECK(el[e] == doctest::Approx(bl[e]).epsilon(1e-13));
    }
}

TEST_CASE("lift flux: p = 2 reduces to the midpoint form, zero and swap") {
  const Fixture f = fixture(2, 0.125, 0.3, 2.0);
  std::mt19937_64 rng(9);
  Eigen::MatrixXd s(f.grid.size(), 2);
  for (int c = 0; c < f.grid.size(); ++c) s.row(c) = rand_vec(2, rng).transpose();
  const TwoPointField l = lift_flux({s}, 2.0, f.pairs);
  for (int k = 0; k < f.pairs.size(); ++k) {
    const Eigen::Vector2d mid = 0.5 * (s.row(f.pairs.i[k]) + s.row(f.pairs.j[k])).transpose();
    CHECK(l.values(k) == doctest::Approx(mid.dot(f.pairs.offset[k]) * f.pairs.w[k]).epsilon(1e-13));
  }
  CHECK(lift_flux(zero_vector(f.grid), 3.0, f.pairs).values.cwiseAbs().maxCoeff() == 0.0);
  const Eigen::Vector2d v(0.3, -1.2), z(0.5, 0.1);
  for (double p : {1.5, 3.0}) CHECK(lift_density(v, -z, p) == doctest::Approx(-lift_density(v, z, p)));
  CHECK(lift_density(Eigen::Vector2d::Zero(), z, 1.5) == 0.0);
}

TEST_CASE("recover flux: zero and symmetric constant fields") {
  const Fixture f = fixture(2, 0.125, 0.3, 2.0);
  CHECK(recover_flux(zero_two_point(f.pairs, Parity::antisymmetric), f.grid, f.pairs).values.cwiseAbs().maxCoeff() == 0.0);
  const TwoPointField one{Eigen::VectorXd::Ones(f.pairs.size()), Parity::symmetric};
  const VectorField r = recover_flux(one, f.grid, f.pairs);
  for (int c : f.grid.interior_cells) CHECK(r.values.row(c).norm() < 1e-13);
}

TEST_CASE("property: recovery bound and boundedness for random antisymmetric fluxes") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 2; ++n)
    for (double p : {1.5, 2.0, 3.0}) {
      const Fixture f = n == 1 ? fixture(1, 1.0 / 32, 0.125, p) : fixture(2, 1.0 / 8, 0.25, p);
      const double q = f.spec.q;
      for (int d = 0; d < 10; ++d) {
        const ScalarField kappa{rand_vec(f.grid.size(), rng, 1, 2), Support::omega_delta};
        const TwoPointField tp{rand_vec(f.pairs.size(), rng), Parity::antisymmetric};
        const VectorField r = recover_flux(tp, f.grid, f.pairs);
        CHECK(energy_dual_local(kappa, r, q, f.grid) <= energy_dual(kappa, tp, q, f.pairs) * (1 + 1e-10));
        double norm = 0;
        for (int c : f.grid.interior_cells) norm += std::pow(r.values.row(c).norm(), q);
        norm = std::pow(f.grid.cell_measure() * norm, 1 / q);
        CHECK(norm <= std::pow(closed_form_Kpn(p, n), -1 / p) * pair_norm_q(f.pairs, tp, q) * (1 + 1e-10));
      }
    }
}

TEST_CASE("property: constant-field round trip") {
  for (double p : {1.5, 2.0, 3.0}) {
    // Exact in 1D under the discrete calibration.
    const Fixture f1 = fixture(1, 1.0 / 64, 0.125, p);
    VectorField s = zero_vector(f1.grid);
    s.values.setConstant(0.8);
    const VectorField r = recover_flux(lift_flux(s, p, f1.pairs), f1.grid, f1.pairs);
    for (int c : f1.grid.interior_cells) CHECK(r.values(c, 0) == doctest::Approx(0.8).epsilon(1e-12));

    // In 2D the error shrinks as h/delta -> 0 (round-off for p = 2).
    double prev = 1e9;
    for (int ratio : {4, 8, 16}) {
      const double delta = 0.25;
      const KernelSpec k = make_kernel(2, p, delta);
      const Grid g = build_grid(Domain::box(0, delta / ratio, 0, delta / ratio), delta / ratio, delta);
      const PairTable t = build_pairs(g, k);
      VectorField s2 = zero_vector(g);
      for (int c = 0; c < g.size(); ++c) s2.values.row(c) << 0.7, -0.4;
      const VectorField r2 = recover_flux(lift_flux(s2, p, t), g, t);
      const int c = g.interior_cells[0];
      const double err = (r2.values.row(c) - s2.values.row(c)).norm() / s2.values.row(c).norm();
      CHECK((err < prev || err < 1e-12));
      prev = err;
    }
    CHECK(prev < 2e-2);
  }
}

TEST_CASE("j density special cases") {
  const FieldFn perp = [](const Point&) { return Eigen::Vector2d(0.0, 2.0); };
  CHECK(j_density(perp, Point(0, 0), Eigen::Vector2d(1, 0), 1.5) == 0.0);
  const FieldFn lin = [](const Point& x) { return Eigen::Vector2d(x(0), x(1)); };
  const Eigen::Vector2d s(0.6, 0.8);
  CHECK(j_density(lin, Point(1, 2), s, 2.0) == doctest::Approx(Point(1, 2).dot(s)));
  const FieldFn along = [s](const Point&) { return Eigen::Vector2d(s); };
  CHECK(j_density(along, Point(0, 0), s, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("J integral: constant field, linear field, bump limit") {
  for (int n = 1; n <= 2; ++n) {
    const KernelSpec k = make_kernel(n, 2.0, 0.2);
    const FieldFn c = [](const Point&) { return Eigen::Vector2d(0.4, -0.3); };
    CHECK(std::abs(J_integral(c, Point(0.5, 0.5), k, 0.0)) < 1e-12);
    Eigen::Matrix2d A;
    A << 1.3, 0.2, -0.7, (n == 2 ? 0.9 : 0.0);
    const FieldFn lin = [A](const Point& x) { return Eigen::Vector2d(A * x); };
    const double tr = n == 2 ? A.trace() : A(0, 0);
    CHECK(J_integral(lin, Point(0.5, 0.5), k, 0.0) == doctest::Approx(tr).epsilon(1e-9));
  }
  // Bump: J approaches Div sigma as delta shrinks.
  const auto bump = [](double x) {
    const double t = (x - 0.5) / 0.3;
    return std::abs(t) < 1 ? std::exp(1 - 1 / (1 - t * t)) : 0.0;
  };
  const FieldFn s = [&](const Point& x) { return Eigen::Vector2d(bump(x(0)), 0.0); };
  const double x0 = 0.62, hstep = 1e-6;
  const double div = (bump(x0 + hstep) - bump(x0 - hstep)) / (2 * hstep);
  for (double p : {1.5, 2.0, 3.0}) {
    double prev = 1e9;
    for (double delta : {0.05, 0.025, 0.0125}) {
      const double err = std::abs(J_integral(s, Point(x0, 0), make_kernel(1, p, delta), 0.0) - div);
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("energies") {
  const Fixture f = fixture(1, 0.125, 0.25, 2.0);
  const ScalarField zero = zero_scalar(f.grid, Support::omega_only);
  const ScalarField one = constant_scalar(f.grid, 1.0, Support::omega_only);
  CHECK(load(one, zero, f.grid) == 0.0);
  CHECK(load(zero, one, f.grid) == 0.0);
  CHECK(load(one, one, f.grid) == doctest::Approx(1.0));
  const TwoPointField k2{Eigen::VectorXd::Ones(f.pairs.size()), Parity::symmetric};
  CHECK(energy_primal(k2, zero, one, 2.0, f.grid, f.pairs) == 0.0);
  std::mt19937_64 rng(2);
  const ScalarField u = restrict_to_omega(f.grid, {rand_vec(f.grid.size(), rng), Support::omega_delta});
  TwoPointField k3 = k2;
  k3.values *= 3.0;
  const double base = energy_primal(k2, u, zero, 2.0, f.grid, f.pairs);
  CHECK(energy_primal(k3, u, zero, 2.0, f.grid, f.pairs) == doctest::Approx(3.0 * base));

  const TwoPointField sig{rand_vec(f.pairs.size(), rng), Parity::antisymmetric};
  const ScalarField kappa1 = constant_scalar(f.grid, 1.0, Support::omega_delta);
  CHECK(energy_dual(kappa1, zero_two_point(f.pairs, Parity::antisymmetric), 2.0, f.pairs) == 0.0);
  CHECK(energy_dual(kappa1, sig, 3.0, f.pairs) == doctest::Approx(std::pow(pair_norm_q(f.pairs, sig, 3.0), 3.0) / 3.0));
  for (double q : {1.5, 2.0, 3.0}) {
    const ScalarField kappa{rand_vec(f.grid.size(), rng, 0.5, 2.0), Support::omega_delta};
    const double pair_form = energy_dual(kappa, sig, q, f.pairs);
    CHECK(energy_dual_rows(kappa, sig, q, f.grid, f.pairs) == doctest::Approx(pair_form).epsilon(1e-13));
    CHECK(energy_dual_2pt(make_kappa2pt(kappa, q, f.pairs), sig, q, f.pairs) == doctest::Approx(pair_form).epsilon(1e-13));
  }
  ScalarField bad = kappa1;
  bad.values(0) = 0.0;
  CHECK_THROWS_AS(energy_dual(bad, sig, 2.0, f.pairs), ConfigError);

  VectorField s1 = zero_vector(f.grid);
  s1.values.setOnes();
  CHECK(energy_dual_local(kappa1, s1, 2.0, f.grid) == doctest::Approx(0.5));
  CHECK(energy_dual_local(kappa1, zero_vector(f.grid), 2.0, f.grid) == 0.0);
}

TEST_CASE("property: norm stability of the lifted bump") {
  const auto bump = [](double x) {
    const double t = (x - 0.5) / 0.3;
    return std::abs(t) < 1 ? std::exp(1 - 1 / (1 - t * t)) : 0.0;
  };
  const FieldFn s = [&](const Point& x) { return Eigen::Vector2d(bump(x(0)), 0.0); };
  for (double p : {1.5, 2.0, 3.0}) {
    double prev = -1e9;
    for (double delta : {0.2, 0.1, 0.05}) {
      const Fixture f = fixture(1, delta / 8, delta, p);
      const ScalarField k = constant_scalar(f.grid, 1.0, Support::omega_delta);
      const VectorField sig = sample_field(s, f.grid);
      const double excess = energy_dual(k, lift_flux(sig, p, f.pairs), f.spec.q, f.pairs) -
                            energy_dual_local(k, sig, f.spec.q, f.grid);
      CHECK(excess > prev);
      CHECK(excess <= 1e-3);
      prev = excess;
    }
  }
}
