#include "nlpd/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nlpd/errors.hpp"

namespace nlpd {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("config: unknown key '" + where + "." + it.key() + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: wrong type for '" + where + "." + key + "'");
  }
}

json field_to_json(const FieldSpec& s) {
  json j;
  j["kind"] = s.kind;
  if (s.kind == "const") j["value"] = s.value;
  if (s.kind == "bump") {
    j["center"] = s.center;
    j["radius"] = s.radius;
    j["amplitude"] = s.amplitude;
  }
  if (s.kind == "table") j["values"] = s.values;
  if (s.kind == "random") {
    j["lo"] = s.lo;
    j["hi"] = s.hi;
  }
  return j;
}

FieldSpec field_from_json(const json& j, const std::string& where, FieldSpec s) {
  reject_unknown(j, {"kind", "value", "center", "radius", "amplitude", "values", "lo", "hi"}, where);
  read(j, "kind", s.kind, where);
  read(j, "value", s.value, where);
  read(j, "center", s.center, where);
  read(j, "radius", s.radius, where);
  read(j, "amplitude", s.amplitude, where);
  read(j, "values", s.values, where);
  read(j, "lo", s.lo, where);
  read(j, "hi", s.hi, where);
  return s;
}

void validate_field(const FieldSpec& s, const std::string& name, int n, bool positive) {
  static const std::set<std::string> kinds{"const", "bump", "table", "random"};
  if (!kinds.count(s.kind)) throw ConfigError("config: " + name + ".kind must be const|bump|table|random");
  if (s.kind == "bump") {
    if (static_cast<int>(s.center.size()) < n) throw ConfigError("config: " + name + ".center too short");
    if (!(s.radius > 0.0)) throw ConfigError("config: " + name + ".radius must be positive");
  }
  if (s.kind == "random" && !(s.hi >= s.lo)) throw ConfigError("config: " + name + " needs lo <= hi");
  if (positive) {
    if (s.kind == "bump") throw ConfigError("config: " + name + " cannot be a bump (must stay positive)");
    if (s.kind == "const" && !(s.value > 0.0)) throw ConfigError("config: " + name + " must be positive");
    if (s.kind == "random" && !(s.lo > 0.0)) throw ConfigError("config: " + name + " must be positive");
    for (double v : s.values)
      if (!(v > 0.0)) throw ConfigError("config: " + name + " must be positive");
  }
}

}  // namespace

Domain RunConfig::make_domain() const {
  if (n == 1) {
    if (domain.size() != 2) throw ConfigError("config: 1D domain needs [a, b]");
    return Domain::interval(domain[0], domain[1]);
  }
  if (domain.size() != 4) throw ConfigError("config: 2D domain needs [ax, bx, ay, by]");
  return Domain::box(domain[0], domain[1], domain[2], domain[3]);
}

void validate(const RunConfig& c) {
  if (c.n != 1 && c.n != 2) throw ConfigError("config: problem.n must be 1 or 2");
  if (!(c.p > 1.0) || !std::isfinite(c.p)) throw ConfigError("config: problem.p must exceed 1");
  const double lower = -1.0 - c.n / c.p;
  if (!(c.alpha > lower) || c.alpha > -1.0)
    throw ConfigError("config: problem.alpha must lie in (-1 - n/p, -1]");
  if (!(c.delta > 0.0)) throw ConfigError("config: problem.delta must be positive");
  if (!(c.h_ratio >= 2.0)) throw ResolutionError("config: problem.h_ratio must be at least 2");
  c.make_domain();
  validate_field(c.f, "data.f", c.n, false);
  validate_field(c.kappa, "data.kappa", c.n, true);
  if (!(c.solver.tol > 0.0) || c.solver.max_iter < 1 || !(c.solver.eta >= 0.0))
    throw ConfigError("config: invalid solver settings");
  if (c.solver.eta == 0.0 && c.p < 2.0)
    throw ConfigError("config: solver.eta = 0 is only permitted for p >= 2");
  if (!(c.solver.line_search.shrink > 0.0 && c.solver.line_search.shrink < 1.0) ||
      !(c.solver.line_search.sufficient_decrease > 0.0 && c.solver.line_search.sufficient_decrease < 0.5))
    throw ConfigError("config: invalid line search settings");
  if (!(c.design.tol > 0.0) || c.design.max_outer < 1 || !(c.design.lambda_tol > 0.0))
    throw ConfigError("config: invalid design settings");
  c.admissible.validate(c.make_domain().measure());
  for (double d : c.deltas)
    if (!(d > 0.0)) throw ConfigError("config: sweep deltas must be positive");
  if (!(c.c_norm_scale > 0.0)) throw ConfigError("config: verify.c_norm_scale must be positive");
  if (c.draws < 1) throw ConfigError("config: verify.draws must be positive");
}

json to_json(const RunConfig& c) {
  json j;
  j["problem"] = {{"n", c.n},
                  {"p", c.p},
                  {"alpha", c.alpha},
                  {"delta", c.delta},
                  {"h_ratio", c.h_ratio},
                  {"domain", c.domain},
                  {"calibration", c.calibration == Calibration::discrete ? "discrete" : "continuum"}};
  j["data"] = {{"f", field_to_json(c.f)}, {"kappa", field_to_json(c.kappa)}};
  j["admissible"] = {{"kappa_lo", c.admissible.kappa_lo},
                     {"kappa_hi", c.admissible.kappa_hi},
                     {"V", c.admissible.V},
                     {"halo_value", c.admissible.halo_value}};
  j["solver"] = {{"tol", c.solver.tol},
                 {"max_iter", c.solver.max_iter},
                 {"eta", c.solver.eta},
                 {"shrink", c.solver.line_search.shrink},
                 {"sufficient_decrease", c.solver.line_search.sufficient_decrease}};
  j["design"] = {{"tol", c.design.tol},
                 {"max_outer", c.design.max_outer},
                 {"lambda_tol", c.design.lambda_tol}};
  j["sweep"] = {{"deltas", c.deltas}};
  j["seed"] = c.seed;
  j["verify"] = {{"c_norm_scale", c.c_norm_scale}, {"draws", c.draws}};
  j["output"] = {{"dir", c.out_dir}};
  return j;
}

RunConfig from_json(const json& j) {
  RunConfig c;
  reject_unknown(j, {"problem", "data", "admissible", "solver", "design", "sweep", "seed", "verify", "output"},
                 "config");
  if (j.contains("problem")) {
    const json& s = j["problem"];
    reject_unknown(s, {"n", "p", "alpha", "delta", "h_ratio", "domain", "calibration"}, "problem");
    read(s, "n", c.n, "problem");
    read(s, "p", c.p, "problem");
    read(s, "alpha", c.alpha, "problem");
    read(s, "delta", c.delta, "problem");
    read(s, "h_ratio", c.h_ratio, "problem");
    read(s, "domain", c.domain, "problem");
    if (!s.contains("domain") && c.n == 2) c.domain = {0.0, 1.0, 0.0, 1.0};
    std::string cal = "discrete";
    read(s, "calibration", cal, "problem");
    if (cal == "discrete") {
      c.calibration = Calibration::discrete;
    } else if (cal == "continuum") {
      c.calibration = Calibration::continuum;
    } else {
      throw ConfigError("config: problem.calibration must be discrete|continuum");
    }
  }
  if (j.contains("data")) {
    const json& s = j["data"];
    reject_unknown(s, {"f", "kappa"}, "data");
    if (s.contains("f")) c.f = field_from_json(s["f"], "data.f", c.f);
    if (s.contains("kappa")) c.kappa = field_from_json(s["kappa"], "data.kappa", c.kappa);
  }
  if (j.contains("admissible")) {
    const json& s = j["admissible"];
    reject_unknown(s, {"kappa_lo", "kappa_hi", "V", "halo_value"}, "admissible");
    read(s, "kappa_lo", c.admissible.kappa_lo, "admissible");
    read(s, "kappa_hi", c.admissible.kappa_hi, "admissible");
    read(s, "V", c.admissible.V, "admissible");
    c.admissible.halo_value = c.admissible.kappa_hi;
    read(s, "halo_value", c.admissible.halo_value, "admissible");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(s, {"tol", "max_iter", "eta", "shrink", "sufficient_decrease"}, "solver");
    read(s, "tol", c.solver.tol, "solver");
    read(s, "max_iter", c.solver.max_iter, "solver");
    read(s, "eta", c.solver.eta, "solver");
    read(s, "shrink", c.solver.line_search.shrink, "solver");
    read(s, "sufficient_decrease", c.solver.line_search.sufficient_decrease, "solver");
  }
  if (j.contains("design")) {
    const json& s = j["design"];
    reject_unknown(s, {"tol", "max_outer", "lambda_tol"}, "design");
    read(s, "tol", c.design.tol, "design");
    read(s, "max_outer", c.design.max_outer, "design");
    read(s, "lambda_tol", c.design.lambda_tol, "design");
  }
  if (j.contains("sweep")) {
    reject_unknown(j["sweep"], {"deltas"}, "sweep");
    read(j["sweep"], "deltas", c.deltas, "sweep");
  }
  read(j, "seed", c.seed, "config");
  if (j.contains("verify")) {
    reject_unknown(j["verify"], {"c_norm_scale", "draws"}, "verify");
    read(j["verify"], "c_norm_scale", c.c_norm_scale, "verify");
    read(j["verify"], "draws", c.draws, "verify");
  }
  if (j.contains("output")) {
    reject_unknown(j["output"], {"dir"}, "output");
    read(j["output"], "dir", c.out_dir, "output");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return from_json(j);
}

std::string canonical_json(const RunConfig& cfg) { return to_json(cfg).dump(); }

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  // The output location does not affect results, so it stays out of the hash.
  json j = to_json(cfg);
  j.erase("output");
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> parse_delta_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("--deltas: cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("--deltas: empty list");
  return out;
}

}  // namespace nlpd
