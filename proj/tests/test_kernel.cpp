#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlpd/errors.hpp"
#include "nlpd/kernel.hpp"
#include "nlpd/quadrature.hpp"

using namespace nlpd;

TEST_CASE("closed-form sphere constant matches hand values") {
  CHECK(closed_form_Kpn(2.0, 3) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(closed_form_Kpn(1.5, 1) == 1.0);
  CHECK(closed_form_Kpn(3.0, 2) == doctest::Approx(4.0 / (3.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK_THROWS_AS(closed_form_Kpn(2.0, 4), std::domain_error);
}

TEST_CASE("sphere constant by quadrature") {
  CHECK(std::abs(quad_Kpn(2.0, 2, 32) - 0.5) < 1e-12);
  CHECK(quad_Kpn(4.0, 1) == 1.0);
  CHECK(std::abs(quad_Kpn(3.0, 3, 32) - closed_form_Kpn(3.0, 3)) < 1e-8);
}

TEST_CASE("circle oracle: trapezoid mean of |cos|^3") {
  // Uniform rule with many nodes on the periodic integrand, independent of
  // both the closed form and the tanh-sinh sphere rule.
  const int M = 200000;
  double s = 0;
  for (int k = 0; k < M; ++k) s += std::pow(std::abs(std::cos(2 * std::numbers::pi * k / M)), 3);
  CHECK(closed_form_Kpn(3.0, 2) == doctest::Approx(s / M).epsilon(1e-9));
}

TEST_CASE("property: closed form agrees with quadrature on the full matrix") {
  for (double p : {1.5, 2.0, 3.0, 4.0})
    for (int n = 1; n <= 3; ++n) {
      const double ref = closed_form_Kpn(p, n);
      CHECK(std::abs(quad_Kpn(p, n, 96) - ref) / ref < 1e-8);
    }
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(closed_form_Kpn(2.0, n) - 1.0 / n) < 1e-14);
  for (double p : {1.1, 1.5, 2.7, 5.0}) CHECK(closed_form_Kpn(p, 1) == 1.0);
}

TEST_CASE("normalization constant") {
  CHECK(normalize(-1.0, 0.5, 2.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  const double d = 0.3;
  CHECK(normalize(-1.0, d, 2.0, 2) == doctest::Approx(std::sqrt(2.0 / (std::numbers::pi * d * d))).epsilon(1e-14));
  CHECK_THROWS_AS(normalize(-1.0 - 1.0 / 2.0, 0.5, 2.0, 1), ConfigError);
  CHECK_THROWS_AS(normalize(-0.9, 0.5, 2.0, 1), ConfigError);
  CHECK_NOTHROW(normalize(-1.4, 0.5, 2.0, 1));
}

TEST_CASE("property: c_norm scales as delta^{-m/p}") {
  for (double p : {1.5, 2.0, 3.0})
    for (int n = 1; n <= 3; ++n)
      for (double alpha : {-1.0, -1.0 - 0.5 * n / p}) {
        const double m = n + p + alpha * p;
        const double ratio = normalize(alpha, 0.4, p, n) / normalize(alpha, 0.2, p, n);
        CHECK(ratio == doctest::Approx(std::pow(2.0, -m / p)).epsilon(1e-13));
      }
}

TEST_CASE("make_kernel stores conjugate exponent and normalization") {
  const KernelSpec k = make_kernel(2, 3.0, 0.1, -1.2);
  CHECK(k.q == 1.5);
  CHECK(continuum_normalization(k) == doctest::Approx(1.0 / closed_form_Kpn(3.0, 2)).epsilon(1e-13));
  CHECK_THROWS_AS(make_kernel(1, 1.0, 0.1), ConfigError);
}

TEST_CASE("omega support and value") {
  const KernelSpec k = make_kernel(1, 2.0, 0.5);
  CHECK(omega(0.5, k) == 0.0);
  CHECK(omega(1.0, k) == 0.0);
  CHECK(omega(0.25, k) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(omega(0.0, k), std::domain_error);
}

TEST_CASE("trace identity: trivial branches") {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 2.0, -0.5, 3.0;
  Eigen::VectorXd e(2);
  e << 0.6, 0.8;
  const IdentityPair r = verify_trace_identity(e, A, 2.0, 2);
  CHECK(r.lhs == doctest::Approx(A.trace() / 2).epsilon(1e-13));
  CHECK(r.rhs == doctest::Approx(A.trace() / 2).epsilon(1e-15));

  Eigen::MatrixXd a(1, 1);
  a << 1.7;
  Eigen::VectorXd one(1);
  one << -1.0;
  const IdentityPair s = verify_trace_identity(one, a, 3.3, 1);
  CHECK(s.lhs == doctest::Approx(1.7).epsilon(1e-14));
  CHECK(s.rhs == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("property: trace identity and volume form over random draws") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N(0, 1);
  for (double p : {1.5, 2.0, 3.0})
    for (int n = 2; n <= 3; ++n) {
      const KernelSpec k = make_kernel(n, p, 0.2);
      for (int d = 0; d < 20; ++d) {
        Eigen::VectorXd e(n);
        for (int i = 0; i < n; ++i) e(i) = N(rng);
        e.normalize();
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) A(i, j) = N(rng);
        const double tol = 1e-8 * (1 + std::abs(A.trace()));
        const IdentityPair a = verify_trace_identity(e, A, p, n);
        CHECK(std::abs(a.lhs - a.rhs) < tol);
        const IdentityPair b = verify_trace_volume(e, A, k, 0.0);
        CHECK(std::abs(b.lhs - b.rhs) < tol);
      }
    }
}

TEST_CASE("trace volume form: cutoff removes the inner ball exactly") {
  const KernelSpec k = make_kernel(2, 1.5, 0.4);
  Eigen::MatrixXd A(2, 2);
  A << 0.3, -1.1, 0.4, 2.0;
  Eigen::VectorXd e(2);
  e << 1.0, 0.0;
  const IdentityPair full = verify_trace_volume(e, A, k, 0.0);
  const IdentityPair cut = verify_trace_volume(e, A, k, 0.1);
  const double m = k.moment_exponent();
  CHECK(cut.lhs == doctest::Approx(full.lhs * (1 - std::pow(0.25, m))).epsilon(1e-12));
  CHECK(verify_trace_volume(e, Eigen::MatrixXd::Zero(2, 2), k, 0.0).lhs == 0.0);
  CHECK_THROWS_AS(verify_trace_volume(e, A, k, 0.4), ConfigError);
}

TEST_CASE("tanh-sinh rule integrates an endpoint singularity") {
  const auto rule = TanhSinhRule::on_interval(2.0, 80);
  const double v = rule.integrate([](double x) { return std::pow(x, -0.5); });
  CHECK(v == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));
  CHECK_THROWS_AS(TanhSinhRule::on_interval(1.0, 2), ConfigError);
}
