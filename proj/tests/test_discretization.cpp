#include <doctest.h>

#include <cmath>
#include <set>

#include "nlpd/discretization.hpp"
#include "nlpd/errors.hpp"
#include "oracles.hpp"

using namespace nlpd;

TEST_CASE("1D grid counts") {
  const Grid g = build_grid(Domain::interval(0, 1), 0.25, 0.5);
  CHECK(g.interior_count() == 4);
  CHECK(g.size() == 8);
  const Grid g2 = build_grid(Domain::interval(0, 1), 0.125, 0.3);
  CHECK(g2.halo_width == 3);
  CHECK(g2.size() == 14);
  CHECK(g.centers[0](0) == doctest::Approx(-0.375));
  CHECK_THROWS_AS(build_grid(Domain::interval(0, 1), 0.25, 0.4), ResolutionError);
}

TEST_CASE("2D grid counts and halo coverage") {
  const Grid g = build_grid(Domain::box(0, 1, 0, 1), 1.0 / 8, 0.25);
  CHECK(g.interior_count() == 64);
  CHECK(g.halo_width == 2);
  for (int c = 0; c < g.size(); ++c) {
    CHECK(g.domain.distance(g.centers[c]) <= g.delta + g.h + 1e-14);
    CHECK(g.is_interior(c) == g.domain.contains(g.centers[c]));
  }
  // Every point within delta of Omega is covered by some cell.
  for (double x = -0.24; x < 1.24; x += 0.0173)
    for (double y = -0.24; y < 1.24; y += 0.0191) {
      const Point pt(x, y);
      if (g.domain.distance(pt) >= 0.25) continue;
      bool covered = false;
      for (int c = 0; c < g.size() && !covered; ++c)
        covered = (g.centers[c] - pt).lpNorm<Eigen::Infinity>() <= 0.5 * g.h + 1e-12;
      CHECK(covered);
    }
}

TEST_CASE("grid snaps non-multiple sides with a warning") {
  const Grid g = build_grid(Domain::interval(0, 1.01), 0.25, 0.5);
  CHECK(g.warnings.size() == 1);
  CHECK(g.domain.hi[0] == doctest::Approx(1.0));
}

TEST_CASE("pair table support and ordering") {
  const KernelSpec k = make_kernel(1, 2.0, 0.5);
  const Grid g = build_grid(Domain::interval(0, 1), 0.25, 0.5);
  const PairTable t = build_pairs(g, k);
  for (int e = 0; e < t.size(); ++e) {
    CHECK(t.i[e] < t.j[e]);
    CHECK(t.r[e] == doctest::Approx(0.25));  // r = 0.5 excluded
    if (e > 0) CHECK(std::make_pair(t.i[e - 1], t.j[e - 1]) < std::make_pair(t.i[e], t.j[e]));
  }
  CHECK(t.size() == g.size() - 1);
}

TEST_CASE("empty table when the horizon is below the cell distance") {
  const Grid g = build_grid(Domain::interval(0, 1), 0.25, 0.5);
  const KernelSpec k = make_kernel(1, 2.0, 0.2);
  CHECK(build_pairs(g, k).size() == 0);
}

TEST_CASE("2D neighbor count matches lattice enumeration") {
  const Grid g = build_grid(Domain::box(0, 1, 0, 1), 1.0 / 16, 0.25);
  const PairTable t = build_pairs(g, make_kernel(2, 2.0, 0.25));
  std::vector<int> count(g.size(), 0);
  for (int e = 0; e < t.size(); ++e) {
    ++count[t.i[e]];
    ++count[t.j[e]];
  }
  CHECK(oracle::lattice_count(4.0) == 44);  // hand count of x^2 + y^2 < 16
  for (int c : g.interior_cells) CHECK(count[c] == 44);
}

TEST_CASE("discrete calibration makes the lattice moment exact") {
  for (int n = 1; n <= 2; ++n)
    for (double p : {1.5, 2.0, 3.0}) {
      const double h = 0.25 / 4;
      const KernelSpec k = make_kernel(n, p, 0.25);
      const Domain d = n == 1 ? Domain::interval(0, 1) : Domain::box(0, 1, 0, 1);
      const PairTable t = build_pairs(build_grid(d, h, 0.25), k);
      const double moment = lattice_moment(k, h) * std::pow(t.calibration_factor, p);
      CHECK(moment * closed_form_Kpn(p, n) == doctest::Approx(1.0).epsilon(1e-13));
      const PairTable raw = build_pairs(build_grid(d, h, 0.25), k, Calibration::continuum);
      CHECK(raw.calibration_factor == 1.0);
    }
}

TEST_CASE("deterministic assembly") {
  const Grid g = build_grid(Domain::box(0, 1, 0, 1), 0.125, 0.3);
  const KernelSpec k = make_kernel(2, 1.5, 0.3);
  const PairTable a = build_pairs(g, k), b = build_pairs(g, k);
  CHECK(a.i == b.i);
  CHECK(a.j == b.j);
  CHECK(a.w == b.w);
  CHECK(pair_csv(a, {Eigen::VectorXd::Ones(a.size()), Parity::symmetric}) ==
        pair_csv(b, {Eigen::VectorXd::Ones(b.size()), Parity::symmetric}));
}

TEST_CASE("integration and norms") {
  const Grid g = build_grid(Domain::interval(0, 1), 0.25, 0.5);
  CHECK(integrate_cells(g, constant_scalar(g, 1.0, Support::omega_only), CellSet::interior) == 1.0);
  ScalarField x = zero_scalar(g, Support::omega_delta), x2 = x;
  for (int c = 0; c < g.size(); ++c) {
    x.values(c) = g.centers[c](0);
    x2.values(c) = x.values(c) * x.values(c);
  }
  CHECK(integrate_cells(g, x, CellSet::interior) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(integrate_cells(g, x2, CellSet::interior) == doctest::Approx(0.328125).epsilon(1e-15));

  const PairTable t = build_pairs(g, make_kernel(1, 2.0, 0.5));
  TwoPointField tp = zero_two_point(t, Parity::antisymmetric);
  CHECK(pair_norm_q(t, tp, 3.0) == 0.0);
  tp.values(2) = -1.7;
  CHECK(pair_norm_q(t, tp, 3.0) == doctest::Approx(std::cbrt(2 * std::pow(0.25, 2) * std::pow(1.7, 3))));
  TwoPointField scaled = tp;
  scaled.values *= -2.5;
  CHECK(pair_norm_q(t, scaled, 1.5) == doctest::Approx(2.5 * pair_norm_q(t, tp, 1.5)));
}

TEST_CASE("region partition and omega-only restriction") {
  const Grid g = build_grid(Domain::box(0, 1, 0, 1), 0.25, 0.5);
  std::set<int> interior(g.interior_cells.begin(), g.interior_cells.end());
  int halo = 0;
  for (int c = 0; c < g.size(); ++c) halo += !g.is_interior(c);
  CHECK(static_cast<int>(interior.size()) + halo == g.size());
  const ScalarField u = constant_scalar(g, 3.0, Support::omega_only);
  for (int c = 0; c < g.size(); ++c) CHECK(u.values(c) == (g.is_interior(c) ? 3.0 : 0.0));
}

TEST_CASE("CSV dump headers") {
  const Grid g1 = build_grid(Domain::interval(0, 1), 0.25, 0.5);
  CHECK(field_csv(g1, Eigen::VectorXd::Zero(g1.size())).rfind("x,value\r\n", 0) == 0);
  const Grid g2 = build_grid(Domain::box(0, 1, 0, 1), 0.25, 0.5);
  CHECK(field_csv(g2, Eigen::VectorXd::Zero(g2.size())).rfind("x,y,value\r\n", 0) == 0);
  const PairTable t = build_pairs(g1, make_kernel(1, 2.0, 0.5));
  CHECK(pair_csv(t, zero_two_point(t, Parity::antisymmetric)).rfind("i,j,r,value\r\n", 0) == 0);
}
