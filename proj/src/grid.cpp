#include <cmath>
#include <sstream>

#include "nlpd/discretization.hpp"
#include "nlpd/errors.hpp"

namespace nlpd {

Domain Domain::interval(double a, double b) {
  if (!(b > a)) throw ConfigError("domain: interval must have b > a");
  Domain d;
  d.n = 1;
  d.lo = {a, 0.0};
  d.hi = {b, 0.0};
  return d;
}

Domain Domain::box(double ax, double bx, double ay, double by) {
  if (!(bx > ax) || !(by > ay)) throw ConfigError("domain: box must have positive side lengths");
  Domain d;
  d.n = 2;
  d.lo = {ax, ay};
  d.hi = {bx, by};
  return d;
}

double Domain::measure() const {
  double m = 1.0;
  for (int k = 0; k < n; ++k) m *= hi[k] - lo[k];
  return m;
}

bool Domain::contains(const Point& x) const {
  for (int k = 0; k < n; ++k)
    if (!(x(k) > lo[k] && x(k) < hi[k])) return false;
  return true;
}

double Domain::distance(const Point& x) const {
  double d2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double gap = std::max({lo[k] - x(k), 0.0, x(k) - hi[k]});
    d2 += gap * gap;
  }
  return std::sqrt(d2);
}

double Grid::cell_measure() const { return std::pow(h, n); }

Grid build_grid(const Domain& domain, double h, double delta) {
  if (domain.n != 1 && domain.n != 2) throw ConfigError("grid: only n = 1 and n = 2 are supported");
  if (!(h > 0.0)) throw ConfigError("grid: h must be positive");
  if (!(delta > 0.0)) throw ConfigError("grid: delta must be positive");
  if (delta / h < 2.0 - 1e-12) {
    std::ostringstream msg;
    msg << "grid: delta/h = " << delta / h << " is below the resolution floor 2";
    throw ResolutionError(msg.str());
  }

  Grid g;
  g.n = domain.n;
  g.h = h;
  g.delta = delta;
  g.domain = domain;
  g.halo_width = static_cast<int>(std::ceil(delta / h - 1e-12));

  for (int k = 0; k < domain.n; ++k) {
    const double ratio = (domain.hi[k] - domain.lo[k]) / h;
    const int cells = std::max(1, static_cast<int>(std::lround(ratio)));
    if (std::abs(ratio - cells) > 1e-9 * std::max(1.0, ratio)) {
      const double snapped = domain.lo[k] + cells * h;
      std::ostringstream msg;
      msg << "grid: side " << k << " is not a multiple of h; upper bound snapped from "
          << domain.hi[k] << " to " << snapped;
      g.warnings.push_back(msg.str());
      g.domain.hi[k] = snapped;
    } else {
      g.domain.hi[k] = domain.lo[k] + cells * h;
    }
    g.cells_per_axis[k] = cells;
  }

  const int w = g.halo_width;
  const int ny_lo = g.n == 2 ? -w : 0;
  const int ny_hi = g.n == 2 ? g.cells_per_axis[1] + w : 1;
  for (int iy = ny_lo; iy < ny_hi; ++iy) {
    for (int ix = -w; ix < g.cells_per_axis[0] + w; ++ix) {
      Point x(g.domain.lo[0] + (ix + 0.5) * h, g.n == 2 ? g.domain.lo[1] + (iy + 0.5) * h : 0.0);
      const bool inside = ix >= 0 && ix < g.cells_per_axis[0] &&
                          (g.n == 1 || (iy >= 0 && iy < g.cells_per_axis[1]));
      // Corner cells beyond delta + h cannot reach Omega.
      if (!inside && g.domain.distance(x) > delta + h) continue;
      if (inside) g.interior_cells.push_back(g.size());
      g.centers.push_back(x);
      g.region.push_back(inside ? Region::interior : Region::halo);
      g.lattice.push_back({ix, iy});
    }
  }
  return g;
}

}  // namespace nlpd
