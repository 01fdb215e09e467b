#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlpd/design.hpp"
#include "nlpd/discretization.hpp"
#include "nlpd/state_solver.hpp"

namespace nlpd {

/// Source term or conductivity description.
struct FieldSpec {
  std::string kind = "const";  // const | bump | table | random
  double value = 1.0;          // const
  std::vector<double> center{0.5, 0.5};
  double radius = 0.3;         // bump
  double amplitude = 1.0;      // bump
  std::vector<double> values;  // table: one value per interior cell
  double lo = 1.0, hi = 2.0;   // random, uniform in [lo, hi]
};

struct RunConfig {
  // problem
  int n = 1;
  double p = 2.0;
  double alpha = -1.0;
  double delta = 0.1;
  double h_ratio = 8.0;
  std::vector<double> domain{0.0, 1.0};  // [a, b] or [ax, bx, ay, by]
  Calibration calibration = Calibration::discrete;
  // data
  FieldSpec f;
  FieldSpec kappa;
  AdmissibleSet admissible;
  // numerics
  SolverConfig solver;
  OuterConfig design;
  std::vector<double> deltas{0.2, 0.1, 0.05};
  std::uint64_t seed = 12345;
  // verify
  double c_norm_scale = 1.0;
  int draws = 20;
  // output
  std::string out_dir = "out";

  double h() const { return delta / h_ratio; }
  Domain make_domain() const;
};

/// Checks every module precondition that can be checked without building a grid.
void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);
/// Unknown keys and wrong types raise ConfigError.
RunConfig from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Canonical serialization (sorted keys, no whitespace). The FNV-1a 64 hash
/// covers everything except the output directory.
std::string canonical_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

std::vector<double> parse_delta_list(const std::string& text);

}  // namespace nlpd
