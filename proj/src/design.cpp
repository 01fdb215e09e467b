#include "nlpd/design.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "nlpd/errors.hpp"
#include "nlpd/kernel.hpp"
#include "nlpd/operators.hpp"

namespace nlpd {

void AdmissibleSet::validate(double omega_measure) const {
  if (!(kappa_lo > 0.0) || !(kappa_hi >= kappa_lo))
    throw ConfigError("admissible set: need 0 < kappa_lo <= kappa_hi");
  if (!(halo_value >= kappa_lo && halo_value <= kappa_hi))
    throw ConfigError("admissible set: halo_value must lie in [kappa_lo, kappa_hi]");
  if (!(V > 0.0)) throw ConfigError("admissible set: V must be positive");
  if (kappa_lo * omega_measure > V * (1.0 + 1e-12))
    throw InfeasibleError("admissible set: kappa_lo |Omega| exceeds the volume budget");
}

TwoPointField make_kappa2pt(const ScalarField& kappa, double q, const PairTable& pairs) {
  if (!(kappa.values.minCoeff() > 0.0)) throw ConfigError("make_kappa2pt: kappa must be positive");
  TwoPointField out = zero_two_point(pairs, Parity::symmetric);
  for (int k = 0; k < pairs.size(); ++k) {
    const double a = kappa.values(pairs.i[k]);
    const double b = kappa.values(pairs.j[k]);
    out.values(k) = a == b ? a
                           : std::pow(0.5 * (std::pow(a, 1.0 - q) + std::pow(b, 1.0 - q)),
                                      1.0 / (1.0 - q));
  }
  return out;
}

ScalarField row_density(const TwoPointField& sigma2pt, double q, const Grid& grid,
                        const PairTable& pairs) {
  ScalarField a = zero_scalar(grid, Support::omega_delta);
  for (int k = 0; k < pairs.size(); ++k) {
    const double v = std::pow(std::abs(sigma2pt.values(k)), q);
    a.values(pairs.i[k]) += v;
    a.values(pairs.j[k]) += v;
  }
  a.values *= grid.cell_measure();
  return a;
}

OcStep oc_update_values(const Eigen::VectorXd& A, double cell_measure, const AdmissibleSet& adm,
                        double q, double lambda_tol) {
  if (A.size() == 0) throw ConfigError("oc_update: empty density");
  if (!(A.minCoeff() >= 0.0) || !A.allFinite())
    throw ConfigError("oc_update: density must be finite and nonnegative");
  adm.validate(cell_measure * A.size());
  const double lo = adm.kappa_lo, hi = adm.kappa_hi;

  OcStep out;
  auto design_at = [&](double lambda) {
    Eigen::VectorXd k(A.size());
    for (int i = 0; i < A.size(); ++i)
      k(i) = A(i) > 0.0 ? std::clamp(std::pow((q - 1.0) * A(i) / lambda, 1.0 / q), lo, hi) : lo;
    return k;
  };
  auto volume = [&](const Eigen::VectorXd& k) { return cell_measure * k.sum(); };

  const Eigen::VectorXd top = Eigen::VectorXd::Constant(A.size(), hi);
  if (volume(top) <= adm.V) {
    out.kappa = top;
    out.volume = volume(top);
    return out;
  }
  double a_max = A.maxCoeff();
  if (a_max == 0.0) {
    out.kappa = Eigen::VectorXd::Constant(A.size(), lo);
    out.volume = volume(out.kappa);
    return out;
  }
  double a_min = a_max;
  for (int i = 0; i < A.size(); ++i)
    if (A(i) > 0.0) a_min = std::min(a_min, A(i));

  // volume(lambda) is nonincreasing; bracket the budget.
  double lam_lo = (q - 1.0) * a_min / std::pow(hi, q);
  double lam_hi = (q - 1.0) * a_max / std::pow(lo, q);
  while (volume(design_at(lam_hi)) > adm.V) lam_hi *= 2.0;
  Eigen::VectorXd k_lo = design_at(lam_lo);
  if (volume(k_lo) <= adm.V) {
    // Every active cell sits at kappa_hi and the budget still holds.
    out.kappa = k_lo;
    out.lambda = lam_lo;
    out.volume = volume(k_lo);
    return out;
  }
  Eigen::VectorXd k_hi = design_at(lam_hi);
  for (int it = 0; it < 400; ++it) {
    const double vol = volume(k_hi);
    if (adm.V - vol <= lambda_tol * adm.V) break;
    if (lam_hi / lam_lo - 1.0 < 1e-15) break;
    const double mid = std::sqrt(lam_lo * lam_hi);
    const Eigen::VectorXd k_mid = design_at(mid);
    if (volume(k_mid) > adm.V) {
      lam_lo = mid;
    } else {
      lam_hi = mid;
      k_hi = k_mid;
    }
  }
  out.kappa = k_hi;
  out.lambda = lam_hi;
  out.volume = volume(k_hi);
  return out;
}

ScalarField initial_design(const AdmissibleSet& adm, const Grid& grid) {
  const double omega = grid.cell_measure() * grid.interior_count();
  adm.validate(omega);
  const double k0 = std::clamp(adm.V / omega, adm.kappa_lo, adm.kappa_hi);
  ScalarField kappa = constant_scalar(grid, adm.halo_value, Support::omega_delta);
  for (int c : grid.interior_cells) kappa.values(c) = k0;
  return kappa;
}

ScalarField oc_update(const ScalarField& A, const AdmissibleSet& adm, double q, double lambda_tol,
                      const Grid& grid) {
  Eigen::VectorXd a(grid.interior_count());
  for (int k = 0; k < grid.interior_count(); ++k) a(k) = A.values(grid.interior_cells[k]);
  const OcStep step = oc_update_values(a, grid.cell_measure(), adm, q, lambda_tol);
  ScalarField kappa = constant_scalar(grid, adm.halo_value, Support::omega_delta);
  for (int k = 0; k < grid.interior_count(); ++k) kappa.values(grid.interior_cells[k]) = step.kappa(k);
  return kappa;
}

namespace {

// One state evaluation: objective value, density and bookkeeping.
struct Evaluation {
  double objective = 0.0;
  ScalarField density;
  double gap = 0.0;
  int iterations = 0;
};

DesignReport alternate(const AdmissibleSet& adm, const Grid& grid, double q,
                       const OuterConfig& outer,
                       const std::function<Evaluation(const ScalarField&)>& evaluate) {
  if (!(outer.tol > 0.0) || outer.max_outer < 1 || !(outer.lambda_tol > 0.0))
    throw ConfigError("design: invalid outer configuration");
  DesignReport rep;
  ScalarField kappa = initial_design(adm, grid);
  for (int it = 0; it < outer.max_outer; ++it) {
    const Evaluation ev = evaluate(kappa);
    rep.objective_history.push_back(ev.objective);
    rep.gaps.push_back(ev.gap);
    rep.inner_iterations.push_back(ev.iterations);
    rep.outer_iterations = it + 1;
    rep.kappa = kappa;
    rep.objective = ev.objective;

    const std::size_t m = rep.objective_history.size();
    if (m >= 2) {
      const double prev = rep.objective_history[m - 2];
      const double decrease = (prev - ev.objective) / std::max(std::abs(prev), 1e-300);
      if (decrease < outer.tol) {
        if (m < 3) rep.warnings.push_back("design: objective stalled before the third iteration");
        break;
      }
    }
    const ScalarField next = oc_update(ev.density, adm, q, outer.lambda_tol, grid);
    if (next.values == kappa.values) break;
    kappa = next;
  }
  double vol = 0.0;
  for (int c : grid.interior_cells) vol += rep.kappa.values(c);
  rep.volume_used = grid.cell_measure() * vol;
  return rep;
}

}  // namespace

DesignReport design_alternate(const ScalarField& f, const AdmissibleSet& adm, const Grid& grid,
                              const PairTable& pairs, const SolverConfig& solver,
                              const OuterConfig& outer) {
  const double q = conjugate_exponent(pairs.p);
  std::optional<ScalarField> warm;
  auto evaluate = [&](const ScalarField& kappa) {
    const TwoPointField k2 = make_kappa2pt(kappa, q, pairs);
    const StateReport st = solve_primal(k2, f, grid, pairs, solver, warm);
    warm = st.u;
    Evaluation ev;
    ev.objective = energy_dual(kappa, st.sigma2pt, q, pairs);
    ev.density = row_density(st.sigma2pt, q, grid, pairs);
    ev.gap = std::abs(st.primal_energy + ev.objective);
    ev.iterations = st.iterations;
    return ev;
  };
  return alternate(adm, grid, q, outer, evaluate);
}

DesignReport design_local_1d(const ScalarField& f, const AdmissibleSet& adm, double p,
                             const Grid& grid, const SolverConfig& solver,
                             const OuterConfig& outer) {
  if (grid.n != 1) throw ConfigError("design_local_1d: grid must be one-dimensional");
  const double q = conjugate_exponent(p);
  std::optional<ScalarField> warm;
  auto evaluate = [&](const ScalarField& kappa) {
    const LocalSolution sol = solve_local_1d(kappa, f, p, grid, solver, warm);
    warm = sol.u;
    Evaluation ev;
    ev.objective = sol.i_hat_loc;
    ev.density = local_row_density(grid, sol.face_flux, q);
    ev.gap = std::abs(sol.primal_energy + sol.i_hat_loc);
    ev.iterations = sol.iterations;
    return ev;
  };
  return alternate(adm, grid, q, outer, evaluate);
}

}  // namespace nlpd
