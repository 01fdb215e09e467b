#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlpd/kernel.hpp"

namespace nlpd {

using Point = Eigen::Vector2d;  // y = 0 in 1D

/// Interval (n = 1) or axis-aligned box (n = 2).
struct Domain {
  int n = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};

  static Domain interval(double a, double b);
  static Domain box(double ax, double bx, double ay, double by);

  double measure() const;
  bool contains(const Point& x) const;       // open set
  double distance(const Point& x) const;     // 0 inside
};

enum class Region { interior, halo };

/// Cell-centered grid over Omega and its delta-halo.
///
/// Cells are ordered with y outermost and x innermost. `lattice` holds the
/// integer cell coordinates; interior cells have coordinates in [0, N).
struct Grid {
  int n = 1;
  double h = 0.0;
  double delta = 0.0;
  Domain domain;
  int halo_width = 0;
  std::array<int, 2> cells_per_axis{0, 1};
  std::vector<Point> centers;
  std::vector<Region> region;
  std::vector<std::array<int, 2>> lattice;
  std::vector<int> interior_cells;
  std::vector<std::string> warnings;

  int size() const { return static_cast<int>(centers.size()); }
  int interior_count() const { return static_cast<int>(interior_cells.size()); }
  bool is_interior(int i) const { return region[i] == Region::interior; }
  double cell_measure() const;
};

/// Throws ResolutionError if delta < 2h. Side lengths that are not integer
/// multiples of h are snapped (upper bound moved) with a warning.
Grid build_grid(const Domain& domain, double h, double delta);

enum class Calibration {
  /// Rescale all pair weights so the lattice moment sum over one full
  /// neighbor shell, h^n sum r^p w^p, equals 1/K_{p,n}.
  discrete,
  /// Use omega(r) as is.
  continuum,
};

/// Unordered delta-neighbor pairs (i < j), lexicographic in (i, j).
struct PairTable {
  int n = 1;
  double h = 0.0;
  double delta = 0.0;
  double p = 2.0;
  double w_quad = 0.0;  // h^{2n}
  double calibration_factor = 1.0;
  std::vector<int> i;
  std::vector<int> j;
  std::vector<double> r;
  std::vector<Point> offset;  // x_i - x_j
  std::vector<double> w;      // calibrated kernel weight

  int size() const { return static_cast<int>(i.size()); }
  double cell_measure() const;
};

/// Discrete moment h^n sum_{0<|z|<delta, z in hZ^n} |z|^p omega(|z|)^p.
double lattice_moment(const KernelSpec& spec, double h);

PairTable build_pairs(const Grid& grid, const KernelSpec& spec,
                      Calibration calibration = Calibration::discrete);

enum class Support { omega_only, omega_delta };

struct ScalarField {
  Eigen::VectorXd values;
  Support support = Support::omega_delta;
};

/// One row per cell, n columns.
struct VectorField {
  Eigen::MatrixXd values;
};

enum class Parity { antisymmetric, symmetric };

/// One value per stored pair (orientation i < j); the reversed orientation is
/// parity_sign() times the stored value.
struct TwoPointField {
  Eigen::VectorXd values;
  Parity parity = Parity::antisymmetric;

  double parity_sign() const { return parity == Parity::symmetric ? 1.0 : -1.0; }
};

ScalarField zero_scalar(const Grid& grid, Support support);
ScalarField constant_scalar(const Grid& grid, double value, Support support);
/// Zeroes halo values and tags the field omega-only.
ScalarField restrict_to_omega(const Grid& grid, ScalarField field);
VectorField zero_vector(const Grid& grid);
TwoPointField zero_two_point(const PairTable& pairs, Parity parity);

enum class CellSet { interior, all };

/// Midpoint rule: h^n sum over the chosen cells.
double integrate_cells(const Grid& grid, const ScalarField& field, CellSet region);

/// (sum over ordered pairs |v|^q h^{2n})^{1/q}.
double pair_norm_q(const PairTable& pairs, const TwoPointField& tp, double q);

/// (h^n sum_interior |v|^q)^{1/q}.
double cell_norm_q(const Grid& grid, const Eigen::VectorXd& values, double q);

/// CSV dumps: `x[,y],value` per cell and `i,j,r,value` per stored pair.
std::string field_csv(const Grid& grid, const Eigen::VectorXd& values);
std::string pair_csv(const PairTable& pairs, const TwoPointField& tp);

}  // namespace nlpd
