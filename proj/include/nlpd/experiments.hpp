#pragma once

#include <random>
#include <string>
#include <vector>

#include "nlpd/config.hpp"
#include "nlpd/design.hpp"
#include "nlpd/kernel.hpp"
#include "nlpd/operators.hpp"

namespace nlpd {

/// One named check; `pass` is decided by the producer (some checks are one-sided).
struct CheckResult {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

CheckResult check_close(std::string name, double value, double reference, double tolerance);
CheckResult check_at_most(std::string name, double value, double bound, double tolerance = 0.0);
CheckResult check_true(std::string name, bool ok);

struct Report {
  std::string config_hash;
  nlohmann::json problem;
  std::vector<CheckResult> results;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

struct SweepRow {
  double delta = 0.0;
  double h = 0.0;
  double value = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double runtime = 0.0;  // seconds; kept out of deterministic artifacts
};

SweepRow make_row(double delta, double h, double value, double reference, double runtime);

/// Kernel, grid, pairs and data for one horizon.
struct Setup {
  KernelSpec spec;
  Grid grid;
  PairTable pairs;
  ScalarField f;
  ScalarField kappa;
};

Setup build_setup(const RunConfig& cfg, double delta);

/// Samples a field description on the grid (interior cells only for omega_only).
ScalarField make_field(const FieldSpec& s, const Grid& grid, Support support, std::mt19937_64& rng);

/// Compact bump exp(1 - 1/(1 - |x-c|^2/rho^2)) and its gradient.
double bump_value(const Point& x, const Point& c, double rho, int n);
Eigen::Vector2d bump_gradient(const Point& x, const Point& c, double rho, int n);

/// sigma = amplitude * b(x) (1, ..., 1) and its divergence.
FieldFn bump_flux(const RunConfig& cfg);
double bump_flux_divergence(const RunConfig& cfg, const Point& x);

/// Kernel constants, trace identities, adjointness, parity, recovery bound,
/// constant round trip and normalization.
std::vector<CheckResult> verify_checks(const RunConfig& cfg);

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<double> orders;  // log2(E(delta_k)/E(delta_{k+1}))
  std::vector<CheckResult> checks;
};

/// E(delta) = ||D lift(sigma) - Div sigma||_q over Omega for a bump sigma.
SweepResult consistency_sweep(const RunConfig& cfg);

/// Nonlocal energy of the lifted bump minus its local energy (kappa = 1).
SweepResult norm_stability_sweep(const RunConfig& cfg);

/// -Ǐ_delta at the solved state against the local reference for the same kappa.
SweepResult state_localization_sweep(const RunConfig& cfg);

/// d_delta from design_alternate against d_loc from design_local_1d.
SweepResult design_localization_sweep(const RunConfig& cfg);

/// Local reference grid used by the localization sweeps.
Grid reference_grid(const RunConfig& cfg);
constexpr int kReferenceCells = 2048;

// ---- artifacts --------------------------------------------------------------

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);
std::string sweep_csv(const std::string& hash, const SweepResult& sweep);
std::string timing_csv(const SweepResult& sweep);

/// Writes a file, creating parent directories; throws IoError.
void write_file(const std::string& path, const std::string& content);

}  // namespace nlpd
