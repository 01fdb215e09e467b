#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace nlpd {

/// Double-exponential (tanh-sinh) rule on [0, length].
///
/// Nodes are stored as offsets from the left end point, computed without
/// cancellation, so integrands with an algebraic singularity at 0 (such as
/// |t|^{p-2} for 1 < p < 2) can be evaluated at the nodes accurately.
struct TanhSinhRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static TanhSinhRule on_interval(double length, int order);

  template <class F>
  double integrate(F&& fn) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * fn(nodes[k]);
    return sum;
  }
};

/// Average of fn(s) over the unit sphere S^{n-1}, n in {1,2,3}.
///
/// The rule is built in a frame whose pole is `pole`, and every segment
/// boundary sits on the great circle pole.s = 0. Integrands carrying a
/// |pole.s|^{a} factor with a > -1 are therefore integrated to near machine
/// precision. n = 1 is the exact two-point sum, n = 2 uses four quarter arcs,
/// n = 3 uses tanh-sinh in pole.s times a uniform azimuthal trapezoid.
double sphere_average(int n, const Eigen::VectorXd& pole, int order,
                      const std::function<double(const Eigen::VectorXd&)>& fn);

/// Surface measure |S^{n-1}|.
double sphere_measure(int n);

}  // namespace nlpd
