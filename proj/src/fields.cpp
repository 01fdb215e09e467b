#include <cmath>
#include <sstream>

#include "nlpd/discretization.hpp"
#include "nlpd/errors.hpp"
#include "nlpd/format.hpp"

namespace nlpd {

ScalarField zero_scalar(const Grid& grid, Support support) {
  return {Eigen::VectorXd::Zero(grid.size()), support};
}

ScalarField constant_scalar(const Grid& grid, double value, Support support) {
  ScalarField f{Eigen::VectorXd::Constant(grid.size(), value), support};
  return support == Support::omega_only ? restrict_to_omega(grid, std::move(f)) : f;
}

ScalarField restrict_to_omega(const Grid& grid, ScalarField field) {
  if (field.values.size() != grid.size()) throw ConfigError("field size does not match grid");
  for (int c = 0; c < grid.size(); ++c)
    if (!grid.is_interior(c)) field.values(c) = 0.0;
  field.support = Support::omega_only;
  return field;
}

VectorField zero_vector(const Grid& grid) { return {Eigen::MatrixXd::Zero(grid.size(), grid.n)}; }

TwoPointField zero_two_point(const PairTable& pairs, Parity parity) {
  return {Eigen::VectorXd::Zero(pairs.size()), parity};
}

double integrate_cells(const Grid& grid, const ScalarField& field, CellSet region) {
  if (field.values.size() != grid.size()) throw ConfigError("field size does not match grid");
  double sum = 0.0;
  if (region == CellSet::all) {
    sum = field.values.sum();
  } else {
    for (int c : grid.interior_cells) sum += field.values(c);
  }
  return grid.cell_measure() * sum;
}

double pair_norm_q(const PairTable& pairs, const TwoPointField& tp, double q) {
  if (!(q > 1.0)) throw ConfigError("pair_norm_q: q must exceed 1");
  double sum = 0.0;
  for (int k = 0; k < tp.values.size(); ++k) sum += std::pow(std::abs(tp.values(k)), q);
  return std::pow(2.0 * pairs.w_quad * sum, 1.0 / q);
}

double cell_norm_q(const Grid& grid, const Eigen::VectorXd& values, double q) {
  double sum = 0.0;
  for (int c : grid.interior_cells) sum += std::pow(std::abs(values(c)), q);
  return std::pow(grid.cell_measure() * sum, 1.0 / q);
}

std::string field_csv(const Grid& grid, const Eigen::VectorXd& values) {
  std::ostringstream out;
  out << (grid.n == 2 ? "x,y,value\r\n" : "x,value\r\n");
  for (int c = 0; c < grid.size(); ++c) {
    out << format_number(grid.centers[c](0));
    if (grid.n == 2) out << ',' << format_number(grid.centers[c](1));
    out << ',' << format_number(values(c)) << "\r\n";
  }
  return out.str();
}

std::string pair_csv(const PairTable& pairs, const TwoPointField& tp) {
  std::ostringstream out;
  out << "i,j,r,value\r\n";
  for (int k = 0; k < pairs.size(); ++k)
    out << pairs.i[k] << ',' << pairs.j[k] << ',' << format_number(pairs.r[k]) << ','
        << format_number(tp.values(k)) << "\r\n";
  return out.str();
}

}  // namespace nlpd
