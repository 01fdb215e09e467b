#include "nlpd/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "nlpd/errors.hpp"

namespace nlpd {

namespace {

constexpr double kPi = std::numbers::pi;

// Abscissa range in the tanh-sinh variable. At t = 3.5 the node sits about
// 1e-22 (relative) from the end point, which leaves < 1e-11 of the mass of an
// |x|^{-1/2} singularity outside the rule.
constexpr double kTanhSinhExtent = 3.5;

// Two unit vectors completing `e` to an orthonormal basis of R^3.
void complete_basis(const Eigen::Vector3d& e, Eigen::Vector3d& a, Eigen::Vector3d& b) {
  const Eigen::Vector3d trial =
      std::abs(e.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  a = (trial - trial.dot(e) * e).normalized();
  b = e.cross(a);
}

}  // namespace

TanhSinhRule TanhSinhRule::on_interval(double length, int order) {
  if (order < 3) throw ConfigError("tanh-sinh rule needs at least 3 nodes");
  if (!(length > 0.0)) throw ConfigError("tanh-sinh rule needs a positive interval");
  TanhSinhRule rule;
  rule.nodes.reserve(order);
  rule.weights.reserve(order);
  const double step = 2.0 * kTanhSinhExtent / (order - 1);
  for (int k = 0; k < order; ++k) {
    const double t = -kTanhSinhExtent + k * step;
    const double y = 0.5 * kPi * std::sinh(t);
    // (1 + tanh y)/2 = 1/(1 + e^{-2y}), evaluated as a distance from 0.
    const double offset = length / (1.0 + std::exp(-2.0 * y));
    const double sech = 2.0 / (std::exp(y) + std::exp(-y));
    const double weight = 0.5 * length * sech * sech * 0.5 * kPi * std::cosh(t) * step;
    rule.nodes.push_back(offset);
    rule.weights.push_back(weight);
  }
  return rule;
}

double sphere_measure(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw std::domain_error("sphere_measure: dimension must be 1, 2 or 3");
  }
}

double sphere_average(int n, const Eigen::VectorXd& pole, int order,
                      const std::function<double(const Eigen::VectorXd&)>& fn) {
  if (pole.size() != n) throw ConfigError("sphere_average: pole has wrong dimension");
  const double norm = pole.norm();
  if (!(norm > 0.0)) throw ConfigError("sphere_average: pole must be nonzero");

  if (n == 1) {
    Eigen::VectorXd s(1);
    s(0) = 1.0;
    const double plus = fn(s);
    s(0) = -1.0;
    return 0.5 * (plus + fn(s));
  }

  if (n == 2) {
    const Eigen::Vector2d e = pole / norm;
    const Eigen::Vector2d e_perp(-e.y(), e.x());
    const auto rule = TanhSinhRule::on_interval(0.5 * kPi, order);
    double sum = 0.0;
    Eigen::VectorXd s(2);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      // psi = x, pi - x, pi + x, 2pi - x; e.s = sin(psi) vanishes at x = 0.
      const double sx = std::sin(rule.nodes[k]);
      const double cx = std::cos(rule.nodes[k]);
      double arc = 0.0;
      s = sx * e + cx * e_perp;
      arc += fn(s);
      s = sx * e - cx * e_perp;
      arc += fn(s);
      s = -sx * e - cx * e_perp;
      arc += fn(s);
      s = -sx * e + cx * e_perp;
      arc += fn(s);
      sum += rule.weights[k] * arc;
    }
    return sum / (2.0 * kPi);
  }

  if (n == 3) {
    const Eigen::Vector3d e = pole / norm;
    Eigen::Vector3d a, b;
    complete_basis(e, a, b);
    const auto rule = TanhSinhRule::on_interval(1.0, order);
    const int azimuth = std::max(8, order + (order % 2));
    const double dphi = 2.0 * kPi / azimuth;
    double sum = 0.0;
    Eigen::VectorXd s(3);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double x = rule.nodes[k];
      const double rho = std::sqrt((1.0 - x) * (1.0 + x));
      double ring = 0.0;
      for (int j = 0; j < azimuth; ++j) {
        const double phi = j * dphi;
        const Eigen::Vector3d lateral = rho * (std::cos(phi) * a + std::sin(phi) * b);
        s = x * e + lateral;
        ring += fn(s);
        s = -x * e + lateral;
        ring += fn(s);
      }
      sum += rule.weights[k] * ring * dphi;
    }
    return sum / (4.0 * kPi);
  }

  throw std::domain_error("sphere_average: dimension must be 1, 2 or 3");
}

}  // namespace nlpd
