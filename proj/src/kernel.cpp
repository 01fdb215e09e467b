#include "nlpd/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlpd/errors.hpp"
#include "nlpd/quadrature.hpp"

namespace nlpd {

namespace {

void check_dimension(int n) {
  if (n < 1 || n > 3) throw std::domain_error("kernel: dimension must be 1, 2 or 3");
}

void check_direction(const Eigen::VectorXd& e, const Eigen::MatrixXd& A, int n) {
  if (e.size() != n || A.rows() != n || A.cols() != n)
    throw ConfigError("trace identity: e and A must match the dimension");
  if (std::abs(e.norm() - 1.0) > 1e-12) throw ConfigError("trace identity: e must be a unit vector");
}

// Sphere average of |e.s|^{p-2} s^T [(p-1)I + (2-p)ee^T] A s.
//
// A Householder reflection maps e onto the last axis first, so the pole
// coordinate of every node is exact. Otherwise rounding in e.s near the
// equator limits the accuracy of the |e.s|^{p-2} weight for p < 2.
double trace_form_average(const Eigen::VectorXd& e, const Eigen::MatrixXd& A, double p, int n,
                          int order) {
  const Eigen::MatrixXd bracket =
      (p - 1.0) * Eigen::MatrixXd::Identity(n, n) + (2.0 - p) * e * e.transpose();
  Eigen::MatrixXd form = bracket * A;
  Eigen::VectorXd axis = Eigen::VectorXd::Zero(n);
  axis(n - 1) = 1.0;
  const Eigen::VectorXd v = e - axis;
  if (v.squaredNorm() > 0.0) {
    const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose() / v.squaredNorm();
    form = Q * form * Q;
  }
  return sphere_average(n, axis, order, [&](const Eigen::VectorXd& s) {
    const double es = std::abs(s(n - 1));
    if (es == 0.0) return 0.0;
    return std::pow(es, p - 2.0) * s.dot(form * s);
  });
}

}  // namespace

double conjugate_exponent(double p) {
  if (!(p > 1.0)) throw ConfigError("exponent p must exceed 1");
  return p / (p - 1.0);
}

double closed_form_Kpn(double p, int n) {
  check_dimension(n);
  if (!(p > 0.0)) throw std::domain_error("closed_form_Kpn: p must be positive");
  if (n == 1) return 1.0;
  const double log_k = std::lgamma(0.5 * n) + std::lgamma(0.5 * (p + 1.0)) -
                       0.5 * std::log(std::numbers::pi) - std::lgamma(0.5 * (n + p));
  return std::exp(log_k);
}

double quad_Kpn(double p, int n, int order) {
  check_dimension(n);
  if (!(p > 0.0)) throw std::domain_error("quad_Kpn: p must be positive");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(n - 1) = 1.0;
  return sphere_average(n, e, order,
                        [&](const Eigen::VectorXd& s) { return std::pow(std::abs(e.dot(s)), p); });
}

double normalize(double alpha, double delta, double p, int n) {
  check_dimension(n);
  if (!(p > 1.0)) throw ConfigError("normalize: p must exceed 1");
  if (!(delta > 0.0)) throw ConfigError("normalize: delta must be positive");
  const double lower = -1.0 - n / p;
  if (!(alpha > lower) || alpha > -1.0)
    throw ConfigError("normalize: alpha must lie in (-1 - n/p, -1]");
  const double m = n + p + alpha * p;
  // |S^{n-1}| c^p delta^m / m = 1/K
  const double cp = m / (closed_form_Kpn(p, n) * sphere_measure(n) * std::pow(delta, m));
  return std::pow(cp, 1.0 / p);
}

KernelSpec make_kernel(int n, double p, double delta, double alpha) {
  KernelSpec spec;
  spec.n = n;
  spec.p = p;
  spec.q = conjugate_exponent(p);
  spec.delta = delta;
  spec.alpha = alpha;
  spec.c_norm = normalize(alpha, delta, p, n);
  return spec;
}

double continuum_normalization(const KernelSpec& spec) {
  const double m = spec.moment_exponent();
  return sphere_measure(spec.n) * std::pow(spec.c_norm, spec.p) * std::pow(spec.delta, m) / m;
}

double omega(double r, const KernelSpec& spec) {
  if (r < 0.0) throw std::domain_error("omega: negative distance");
  if (r == 0.0) throw std::domain_error("omega: kernel is singular at r = 0");
  if (r >= spec.delta) return 0.0;
  return spec.c_norm * std::pow(r, spec.alpha);
}

IdentityPair verify_trace_identity(const Eigen::VectorXd& e, const Eigen::MatrixXd& A, double p,
                                   int n, int order) {
  check_dimension(n);
  check_direction(e, A, n);
  if (!(p > 1.0)) throw std::domain_error("verify_trace_identity: weight |e.s|^{p-2} not integrable");
  return {trace_form_average(e, A, p, n, order), closed_form_Kpn(p, n) * A.trace()};
}

IdentityPair verify_trace_volume(const Eigen::VectorXd& e, const Eigen::MatrixXd& A,
                                 const KernelSpec& spec, double eps, int order) {
  const int n = spec.n;
  check_dimension(n);
  check_direction(e, A, n);
  if (!(eps >= 0.0) || !(eps < spec.delta))
    throw ConfigError("verify_trace_volume: need 0 <= eps < delta");
  // r^{n-1} r^{p-2} r^2 c^p r^{alpha p} integrates to c^p (delta^m - eps^m)/m.
  const double m = spec.moment_exponent();
  const double radial =
      std::pow(spec.c_norm, spec.p) * (std::pow(spec.delta, m) - std::pow(eps, m)) / m;
  const double angular = trace_form_average(e, A, spec.p, n, order);
  return {sphere_measure(n) * radial * angular, A.trace()};
}

}  // namespace nlpd
