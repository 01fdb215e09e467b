#pragma once

#include <Eigen/Dense>

namespace nlpd {

/// Truncated power kernel omega(x) = c_norm |x|^alpha on |x| < delta.
///
/// Built through make_kernel(), which checks the admissible exponent range
/// and computes c_norm from the continuum normalization
///   int_{B(0,delta)} |x|^p omega^p(x) dx = 1 / K_{p,n}.
struct KernelSpec {
  int n = 1;
  double p = 2.0;
  double q = 2.0;
  double delta = 0.1;
  double alpha = -1.0;
  double c_norm = 1.0;

  /// Exponent n + p + alpha*p of the radial moment r^{n-1} r^p omega^p.
  double moment_exponent() const { return n + p + alpha * p; }
};

/// Conjugate exponent p/(p-1).
double conjugate_exponent(double p);

/// Sphere average of |e.s|^p via the Gamma-function closed form
///   K_{p,n} = Gamma(n/2) Gamma((p+1)/2) / (sqrt(pi) Gamma((n+p)/2)).
double closed_form_Kpn(double p, int n);

/// Same quantity by numerical quadrature on S^{n-1}; independent of the
/// closed form and used to validate it.
double quad_Kpn(double p, int n, int order = 64);

/// c_norm such that the continuum normalization holds; throws ConfigError when
/// alpha lies outside (-1 - n/p, -1].
double normalize(double alpha, double delta, double p, int n);

/// Validated kernel with q and c_norm filled in.
KernelSpec make_kernel(int n, double p, double delta, double alpha = -1.0);

/// Continuum value of int_{B(0,delta)} |x|^p omega^p dx for a given spec,
/// by the exact radial integral. Equals 1/K_{p,n} for a well-formed spec.
double continuum_normalization(const KernelSpec& spec);

/// omega(r); zero for r >= delta, domain error at r = 0.
double omega(double r, const KernelSpec& spec);

struct IdentityPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Sphere-averaged quadratic form of the trace lemma against K_{p,n} tr A.
IdentityPair verify_trace_identity(const Eigen::VectorXd& e, const Eigen::MatrixXd& A, double p,
                                   int n, int order = 96);

/// Shell integral over B(0,delta) \ B(0,eps) of
/// |e.z|^{p-2} z^T [(p-1)I + (2-p)ee^T] A z omega^p(z) against tr A.
/// The radial factor is integrated in closed form.
IdentityPair verify_trace_volume(const Eigen::VectorXd& e, const Eigen::MatrixXd& A,
                                 const KernelSpec& spec, double eps, int order = 96);

}  // namespace nlpd
