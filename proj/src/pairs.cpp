#include <algorithm>
#include <cmath>

#include "nlpd/discretization.hpp"
#include "nlpd/errors.hpp"

namespace nlpd {

namespace {

constexpr double kSupportSlack = 1e-12;  // r = delta counts as outside

struct LatticeOffset {
  int dx = 0;
  int dy = 0;
  double r = 0.0;
};

std::vector<LatticeOffset> shell_offsets(int n, double h, double delta) {
  const int w = static_cast<int>(std::ceil(delta / h));
  std::vector<LatticeOffset> out;
  const int wy = n == 2 ? w : 0;
  for (int dy = -wy; dy <= wy; ++dy)
    for (int dx = -w; dx <= w; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const double r = h * std::sqrt(double(dx) * dx + double(dy) * dy);
      if (r < delta * (1.0 - kSupportSlack)) out.push_back({dx, dy, r});
    }
  return out;
}

}  // namespace

double PairTable::cell_measure() const { return std::pow(h, n); }

double lattice_moment(const KernelSpec& spec, double h) {
  if (spec.n != 1 && spec.n != 2) throw ConfigError("lattice_moment: n must be 1 or 2");
  double sum = 0.0;
  for (const auto& o : shell_offsets(spec.n, h, spec.delta))
    sum += std::pow(o.r * omega(o.r, spec), spec.p);
  return std::pow(h, spec.n) * sum;
}

PairTable build_pairs(const Grid& grid, const KernelSpec& spec, Calibration calibration) {
  if (spec.n != grid.n) throw ConfigError("build_pairs: kernel and grid dimensions differ");
  if (spec.delta > grid.delta * (1.0 + 1e-12))
    throw ConfigError("build_pairs: kernel horizon exceeds the grid halo");

  PairTable t;
  t.n = grid.n;
  t.h = grid.h;
  t.delta = spec.delta;
  t.p = spec.p;
  t.w_quad = std::pow(grid.h, 2 * grid.n);

  const auto offsets = shell_offsets(grid.n, grid.h, spec.delta);
  if (calibration == Calibration::discrete && !offsets.empty()) {
    const double moment = lattice_moment(spec, grid.h);
    t.calibration_factor = std::pow(1.0 / (closed_form_Kpn(spec.p, spec.n) * moment), 1.0 / spec.p);
  }

  // Dense lookup from lattice coordinates to cell index.
  const int w = grid.halo_width;
  const int nx = grid.cells_per_axis[0] + 2 * w;
  const int ny = grid.n == 2 ? grid.cells_per_axis[1] + 2 * w : 1;
  const int y0 = grid.n == 2 ? w : 0;
  std::vector<int> lookup(static_cast<std::size_t>(nx) * ny, -1);
  for (int c = 0; c < grid.size(); ++c) {
    const auto& l = grid.lattice[c];
    lookup[static_cast<std::size_t>(l[1] + y0) * nx + (l[0] + w)] = c;
  }

  std::vector<std::pair<int, double>> row;
  for (int a = 0; a < grid.size(); ++a) {
    row.clear();
    const auto& la = grid.lattice[a];
    for (const auto& o : offsets) {
      const int bx = la[0] + o.dx + w;
      const int by = la[1] + o.dy + y0;
      if (bx < 0 || bx >= nx || by < 0 || by >= ny) continue;
      const int b = lookup[static_cast<std::size_t>(by) * nx + bx];
      if (b > a) row.emplace_back(b, o.r);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [b, r] : row) {
      t.i.push_back(a);
      t.j.push_back(b);
      t.r.push_back(r);
      t.offset.push_back(grid.centers[a] - grid.centers[b]);
      t.w.push_back(t.calibration_factor * omega(r, spec));
    }
  }
  return t;
}

}  // namespace nlpd
