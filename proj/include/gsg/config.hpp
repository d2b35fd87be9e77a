#pragma once

// JSON run configuration. Physical fields carry their SI unit in the key name
// (mass_a_kg, tau_s, ...); unknown keys are rejected with their key path.

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsg/decoherence.hpp"
#include "gsg/entanglement.hpp"
#include "gsg/gsg_dynamics.hpp"
#include "gsg/optimizer.hpp"

namespace gsg::io {

using json = nlohmann::json;

inline constexpr std::string_view preset_screened = "paper-2017-screened";

/// How the interferometer parameters are specified.
enum class GsgMode { coupling_ratio, gradient, diamagnetic };

inline const char* to_string(GsgMode m) {
  switch (m) {
    case GsgMode::coupling_ratio: return "coupling_ratio";
    case GsgMode::gradient: return "gradient";
    case GsgMode::diamagnetic: return "diamagnetic";
  }
  return "?";
}

struct GsgSettings {
  GsgMode mode = GsgMode::coupling_ratio;
  double mass = 1e-14;            // kg
  double trap_frequency = 1.0;    // rad/s (coupling_ratio, gradient)
  double k = 2.0;                 // coupling_ratio
  double gradient = 3e-3;         // T/m (gradient, diamagnetic)
  double susceptibility = 6e-9;   // m^3/kg (diamagnetic)
  double lande_g = 2.0;

  GsgParams resolve(const Constants& c = codata2018) const {
    switch (mode) {
      case GsgMode::coupling_ratio: return params_from_coupling_ratio(mass, trap_frequency, k, lande_g, c);
      case GsgMode::gradient: return coupling_from_gradient(mass, trap_frequency, gradient, lande_g, c);
      case GsgMode::diamagnetic: {
        const auto r = diamagnetic_params(susceptibility, mass, gradient, lande_g, c);
        if (std::holds_alternative<UnboundedSplittingTime>(r))
          throw ConfigError("gsg.gradient_t_per_m", "zero gradient gives an unbounded splitting time");
        return std::get<DiamagneticDerivation>(r).params;
      }
    }
    throw ConfigError("gsg.mode", "unknown mode");
  }
};

/// Input state for evolve, husimi and entangle. B is the geometry partner of A.
struct StateSettings {
  std::string type = "css";  // css | superposition | sss_one_axis | sss_two_axis | ground
  double theta = pi / 2;
  double phi = 0.0;
  double theta2 = pi / 2;
  double phi2 = 0.0;
  double chi = 0.0;
};

struct EvolveSettings {
  std::vector<double> time_fractions{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};  // of t_s
  int x_points = 1201;
  int trajectory_points = 101;
};

struct HusimiSettings {
  int n_theta = 91;
  int n_phi = 180;
};

struct EntangleSettings {
  bool witness = false;
  bool gellmann = false;
};

struct SweepSettings {
  std::string kind = "theta_surface";  // theta_surface | theta_line | time | spin
  int grid_n = 101;                    // theta surface resolution
  std::vector<double> taus{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  std::vector<double> j_list{0.5, 1.0, 2.0, 5.0, 10.0};
};

struct DecohereSettings {
  DecoherenceLimit limit = DecoherenceLimit::short_wavelength;
  std::vector<double> rates{0.0, 0.05, 0.1, 0.2, 0.3, 0.5};
  std::vector<double> j_list{0.5, 2.0, 10.0};
};

struct OracleSettings {
  std::vector<double> j_list{0.5, 1.0, 2.0};
  std::vector<double> k_list{0.05, 0.2};
  std::vector<double> time_factors{0.5, 1.0, 2.0};  // of t_s
  int n_fock = 0;  // 0: default truncation
};

struct TablesSettings {
  std::vector<double> j_list{0.5, 2.0, 5.0, 10.0};
  std::vector<std::string> families{"css", "css_superposition_symmetric", "sss_one_axis", "sss_two_axis"};
};

struct RunConfig {
  std::optional<std::string> preset;
  ExperimentConfig experiment;
  StateFamilySpec family;
  Objective objective = Objective::entropy;
  OptimizeOptions optimizer;
  double gamma_short = 0.0;  // Hz
  double gamma_long = 0.0;   // Hz / m^2
  GsgSettings gsg;
  StateSettings state;
  EvolveSettings evolve;
  HusimiSettings husimi;
  EntangleSettings entangle;
  SweepSettings sweep;
  DecohereSettings decohere;
  OracleSettings oracle;
  TablesSettings tables;

  DecoherenceModel decoherence() const {
    DecoherenceModel m;
    m.gamma_short = gamma_short;
    m.gamma_long = gamma_long;
    m.delta_x = experiment.delta_x;
    m.tau = experiment.tau;
    return m;
  }
};

inline Family family_from_string(const std::string& s, const std::string& path) {
  for (Family f : {Family::css, Family::css_superposition_symmetric, Family::sss_one_axis, Family::sss_two_axis,
                   Family::css_two_angle})
    if (s == to_string(f)) return f;
  throw ConfigError(path, "unknown family '" + s + "'");
}

namespace detail {

inline std::string join_path(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

/// Reads one JSON object, tracking which keys were declared so leftovers can be rejected.
class Reader {
 public:
  Reader(const json* obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (obj_ && !obj_->is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool present() const { return obj_ != nullptr; }
  const std::string& path() const { return path_; }

  static std::string key_of(std::string_view base, std::string_view unit) {
    return unit.empty() ? std::string(base) : std::string(base) + "_" + std::string(unit);
  }

  const json* find(std::string_view base, std::string_view unit) {
    const std::string key = key_of(base, unit);
    fields_.push_back({std::string(base), std::string(unit)});
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  std::string key_path(std::string_view base, std::string_view unit) const {
    return join_path(path_, key_of(base, unit));
  }

  void number(std::string_view base, std::string_view unit, double& out, bool required = false) {
    const json* v = find(base, unit);
    if (!v) {
      if (required) throw ConfigError(key_path(base, unit), "missing required key");
      return;
    }
    if (!v->is_number()) throw ConfigError(key_path(base, unit), "expected a number");
    out = v->get<double>();
    if (!std::isfinite(out)) throw ConfigError(key_path(base, unit), "must be finite");
  }

  void integer(std::string_view base, int& out) {
    const json* v = find(base, "");
    if (!v) return;
    if (!v->is_number_integer()) throw ConfigError(key_path(base, ""), "expected an integer");
    out = v->get<int>();
  }

  void boolean(std::string_view base, bool& out) {
    const json* v = find(base, "");
    if (!v) return;
    if (!v->is_boolean()) throw ConfigError(key_path(base, ""), "expected true or false");
    out = v->get<bool>();
  }

  void string(std::string_view base, std::string& out, bool required = false) {
    const json* v = find(base, "");
    if (!v) {
      if (required) throw ConfigError(key_path(base, ""), "missing required key");
      return;
    }
    if (!v->is_string()) throw ConfigError(key_path(base, ""), "expected a string");
    out = v->get<std::string>();
  }

  void numbers(std::string_view base, std::string_view unit, std::vector<double>& out) {
    const json* v = find(base, unit);
    if (!v) return;
    if (!v->is_array()) throw ConfigError(key_path(base, unit), "expected an array of numbers");
    std::vector<double> vals;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number())
        throw ConfigError(key_path(base, unit) + "[" + std::to_string(i) + "]", "expected a number");
      vals.push_back((*v)[i].get<double>());
    }
    out = std::move(vals);
  }

  void strings(std::string_view base, std::vector<std::string>& out) {
    const json* v = find(base, "");
    if (!v) return;
    if (!v->is_array()) throw ConfigError(key_path(base, ""), "expected an array of strings");
    std::vector<std::string> vals;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_string())
        throw ConfigError(key_path(base, "") + "[" + std::to_string(i) + "]", "expected a string");
      vals.push_back((*v)[i].get<std::string>());
    }
    out = std::move(vals);
  }

  void range(std::string_view base, std::string_view unit, ParamRange& out) {
    std::vector<double> v;
    const bool had = obj_ && obj_->contains(key_of(base, unit));
    numbers(base, unit, v);
    if (!had) return;
    if (v.size() != 2 || !(v[0] <= v[1])) throw ConfigError(key_path(base, unit), "expected [lo, hi] with lo <= hi");
    out = {v[0], v[1]};
  }

  Reader child(std::string_view name) {
    const json* v = find(name, "");
    return Reader(v, join_path(path_, name));
  }

  /// Rejects keys that were never declared. A key sharing a declared base name
  /// but carrying a different unit suffix is reported as a unit mismatch.
  void finish() const {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      const std::string& key = it.key();
      bool known = false;
      for (const auto& f : fields_)
        if (key_of(f.base, f.unit) == key) known = true;
      if (known) continue;
      const Field* best = nullptr;
      for (const auto& f : fields_) {
        if (f.unit.empty()) continue;
        if (key == f.base || key.rfind(f.base + "_", 0) == 0)
          if (!best || f.base.size() > best->base.size()) best = &f;
      }
      if (best)
        throw ConfigError(join_path(path_, key),
                          "unit-suffix mismatch, expected '" + key_of(best->base, best->unit) + "'");
      throw ConfigError(join_path(path_, key), "unknown key");
    }
  }

 private:
  struct Field {
    std::string base;
    std::string unit;
  };
  const json* obj_;
  std::string path_;
  std::vector<Field> fields_;
};

inline void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

inline void check_spin_values(const std::vector<double>& js, const std::string& path) {
  require(!js.empty(), path, "must not be empty");
  for (std::size_t i = 0; i < js.size(); ++i) {
    try {
      Spin::from_value(js[i]);
    } catch (const InvalidSpinError& e) {
      throw ConfigError(path + "[" + std::to_string(i) + "]", e.what());
    }
  }
}

}  // namespace detail

/// Values of the screened-geometry preset.
inline void apply_preset(RunConfig& cfg, const std::string& name, const std::string& path = "preset") {
  if (name != preset_screened) throw ConfigError(path, "unknown preset '" + name + "'");
  cfg.preset = name;
  cfg.experiment.geometry = Geometry::parallel;
  cfg.experiment.parallel_distance = ParallelDistance::euclidean;
  cfg.experiment.j = Spin::from_twice(1);
  cfg.experiment.mass_a = 1e-14;
  cfg.experiment.mass_b = 1e-14;
  cfg.experiment.delta_x = 2.5e-4;
  cfg.experiment.delta_s = 5e-5;
  cfg.experiment.tau = 2.0;
  cfg.experiment.k = 0.0;
  cfg.gsg.mode = GsgMode::diamagnetic;
  cfg.gsg.mass = 1e-14;
  cfg.gsg.susceptibility = 6e-9;
  cfg.gsg.gradient = 3e-3;
  cfg.gsg.lande_g = 2.0;
}

/// Parses JSON text. `preset_override` (from the command line) wins over a preset key in the text.
inline RunConfig parse_config_text(std::string_view text, std::optional<std::string> preset_override = std::nullopt) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  detail::Reader top(&root, "");
  RunConfig cfg;

  std::string preset;
  top.string("preset", preset);
  if (preset_override) preset = *preset_override;
  if (!preset.empty()) apply_preset(cfg, preset);
  const bool need_experiment = preset.empty();

  {
    detail::Reader r = top.child("experiment");
    if (need_experiment && !r.present()) throw ConfigError("experiment", "missing required section (or give a preset)");
    auto& e = cfg.experiment;
    std::string geometry = to_string(e.geometry);
    std::string distance = to_string(e.parallel_distance);
    r.string("geometry", geometry);
    r.string("parallel_distance", distance);
    if (geometry == "parallel")
      e.geometry = Geometry::parallel;
    else if (geometry == "linear")
      e.geometry = Geometry::linear;
    else
      throw ConfigError(r.key_path("geometry", ""), "expected 'linear' or 'parallel'");
    if (distance == "euclidean")
      e.parallel_distance = ParallelDistance::euclidean;
    else if (distance == "literal")
      e.parallel_distance = ParallelDistance::literal;
    else
      throw ConfigError(r.key_path("parallel_distance", ""), "expected 'euclidean' or 'literal'");
    double j = e.j.value();
    r.number("j", "", j, need_experiment);
    try {
      e.j = Spin::from_value(j);
    } catch (const InvalidSpinError& err) {
      throw ConfigError(r.key_path("j", ""), err.what());
    }
    r.number("mass_a", "kg", e.mass_a, need_experiment);
    r.number("mass_b", "kg", e.mass_b, need_experiment);
    r.number("delta_x", "m", e.delta_x, need_experiment);
    r.number("delta_s", "m", e.delta_s, need_experiment);
    r.number("tau", "s", e.tau, need_experiment);
    r.number("k", "", e.k);
    detail::require(e.mass_a > 0.0, r.key_path("mass_a", "kg"), "must be positive");
    detail::require(e.mass_b > 0.0, r.key_path("mass_b", "kg"), "must be positive");
    detail::require(e.delta_x >= 0.0, r.key_path("delta_x", "m"), "must be non-negative");
    detail::require(e.delta_s > 0.0, r.key_path("delta_s", "m"), "must be positive");
    detail::require(e.tau >= 0.0, r.key_path("tau", "s"), "must be non-negative");
    r.finish();
  }

  {
    std::string objective = to_string(cfg.objective);
    top.string("objective", objective);
    if (objective == "entropy")
      cfg.objective = Objective::entropy;
    else if (objective == "negativity")
      cfg.objective = Objective::negativity;
    else
      throw ConfigError("objective", "expected 'entropy' or 'negativity'");
  }

  {
    detail::Reader r = top.child("family");
    std::string name = to_string(cfg.family.family);
    r.string("name", name);
    cfg.family = StateFamilySpec::defaults(family_from_string(name, r.key_path("name", "")));
    auto& f = cfg.family;
    r.range("theta_range", "rad", f.theta);
    r.range("delta_theta_range", "rad", f.delta_theta);
    r.range("delta_phi_range", "rad", f.delta_phi);
    r.range("chi_range", "", f.chi);
    r.boolean("free_delta_phi", f.free_delta_phi);
    r.number("delta_phi", "rad", f.fixed_delta_phi);
    r.number("superposition_center", "rad", f.superposition_center);
    r.number("base_theta", "rad", f.base_theta);
    r.number("base_phi", "rad", f.base_phi);
    try {
      f.validate();
    } catch (const DomainError& e) {
      throw ConfigError(r.path(), e.what());
    }
    r.finish();
  }

  {
    detail::Reader r = top.child("optimizer");
    r.integer("grid_n", cfg.optimizer.grid_n);
    r.boolean("refine", cfg.optimizer.refine);
    r.number("tolerance", "rad", cfg.optimizer.tolerance);
    detail::require(cfg.optimizer.grid_n >= 3, r.key_path("grid_n", ""), "must be at least 3");
    detail::require(cfg.optimizer.tolerance > 0.0, r.key_path("tolerance", "rad"), "must be positive");
    r.finish();
  }

  {
    detail::Reader r = top.child("decoherence");
    r.number("gamma_short", "hz", cfg.gamma_short);
    r.number("gamma_long", "hz_per_m2", cfg.gamma_long);
    detail::require(cfg.gamma_short >= 0.0, r.key_path("gamma_short", "hz"), "must be non-negative");
    detail::require(cfg.gamma_long >= 0.0, r.key_path("gamma_long", "hz_per_m2"), "must be non-negative");
    r.finish();
  }

  {
    detail::Reader r = top.child("gsg");
    auto& g = cfg.gsg;
    std::string mode = to_string(g.mode);
    r.string("mode", mode);
    if (mode == "coupling_ratio")
      g.mode = GsgMode::coupling_ratio;
    else if (mode == "gradient")
      g.mode = GsgMode::gradient;
    else if (mode == "diamagnetic")
      g.mode = GsgMode::diamagnetic;
    else
      throw ConfigError(r.key_path("mode", ""), "expected 'coupling_ratio', 'gradient' or 'diamagnetic'");
    r.number("mass", "kg", g.mass);
    r.number("lande_g", "", g.lande_g);
    if (g.mode != GsgMode::diamagnetic) r.number("trap_frequency", "rad_per_s", g.trap_frequency);
    if (g.mode == GsgMode::coupling_ratio) r.number("k", "", g.k);
    if (g.mode != GsgMode::coupling_ratio) r.number("gradient", "t_per_m", g.gradient);
    if (g.mode == GsgMode::diamagnetic) r.number("susceptibility", "m3_per_kg", g.susceptibility);
    detail::require(g.mass > 0.0, r.key_path("mass", "kg"), "must be positive");
    if (g.mode != GsgMode::diamagnetic)
      detail::require(g.trap_frequency > 0.0, r.key_path("trap_frequency", "rad_per_s"), "must be positive");
    if (g.mode == GsgMode::diamagnetic) {
      detail::require(g.susceptibility != 0.0, r.key_path("susceptibility", "m3_per_kg"), "must be nonzero");
      detail::require(g.gradient != 0.0, r.key_path("gradient", "t_per_m"),
                      "zero gradient gives an unbounded splitting time");
    }
    r.finish();
  }

  {
    detail::Reader r = top.child("state");
    auto& s = cfg.state;
    r.string("type", s.type);
    r.number("theta", "rad", s.theta);
    r.number("phi", "rad", s.phi);
    r.number("theta2", "rad", s.theta2);
    r.number("phi2", "rad", s.phi2);
    r.number("chi", "", s.chi);
    static const std::set<std::string> types{"css", "superposition", "sss_one_axis", "sss_two_axis", "ground"};
    detail::require(types.count(s.type) == 1, r.key_path("type", ""),
                    "expected css, superposition, sss_one_axis, sss_two_axis or ground");
    detail::require(s.theta >= 0.0 && s.theta <= pi, r.key_path("theta", "rad"), "must lie in [0, pi]");
    detail::require(s.theta2 >= 0.0 && s.theta2 <= pi, r.key_path("theta2", "rad"), "must lie in [0, pi]");
    r.finish();
  }

  {
    detail::Reader r = top.child("evolve");
    r.numbers("time_fractions", "ts", cfg.evolve.time_fractions);
    r.integer("x_points", cfg.evolve.x_points);
    r.integer("trajectory_points", cfg.evolve.trajectory_points);
    detail::require(!cfg.evolve.time_fractions.empty(), r.key_path("time_fractions", "ts"), "must not be empty");
    for (double t : cfg.evolve.time_fractions)
      detail::require(t >= 0.0, r.key_path("time_fractions", "ts"), "times must be non-negative");
    detail::require(cfg.evolve.x_points >= 3, r.key_path("x_points", ""), "must be at least 3");
    detail::require(cfg.evolve.trajectory_points >= 2, r.key_path("trajectory_points", ""), "must be at least 2");
    r.finish();
  }

  {
    detail::Reader r = top.child("husimi");
    r.integer("n_theta", cfg.husimi.n_theta);
    r.integer("n_phi", cfg.husimi.n_phi);
    detail::require(cfg.husimi.n_theta >= 2, r.key_path("n_theta", ""), "must be at least 2");
    detail::require(cfg.husimi.n_phi >= 2, r.key_path("n_phi", ""), "must be at least 2");
    r.finish();
  }

  {
    detail::Reader r = top.child("entangle");
    r.boolean("witness", cfg.entangle.witness);
    r.boolean("gellmann", cfg.entangle.gellmann);
    r.finish();
  }

  {
    detail::Reader r = top.child("sweep");
    auto& s = cfg.sweep;
    r.string("kind", s.kind);
    r.integer("grid_n", s.grid_n);
    r.numbers("taus", "s", s.taus);
    r.numbers("j_list", "", s.j_list);
    detail::require(s.kind == "theta_surface" || s.kind == "theta_line" || s.kind == "time" || s.kind == "spin",
                    r.key_path("kind", ""), "expected theta_surface, theta_line, time or spin");
    detail::require(s.grid_n >= 3, r.key_path("grid_n", ""), "must be at least 3");
    for (double t : s.taus) detail::require(t >= 0.0, r.key_path("taus", "s"), "times must be non-negative");
    detail::check_spin_values(s.j_list, r.key_path("j_list", ""));
    r.finish();
  }

  {
    detail::Reader r = top.child("decohere");
    auto& d = cfg.decohere;
    std::string limit = to_string(d.limit);
    r.string("limit", limit);
    if (limit == "short")
      d.limit = DecoherenceLimit::short_wavelength;
    else if (limit == "long")
      d.limit = DecoherenceLimit::long_wavelength;
    else
      throw ConfigError(r.key_path("limit", ""), "expected 'short' or 'long'");
    // Units follow the limit: Hz for short, Hz/m^2 for long.
    r.numbers("rates", d.limit == DecoherenceLimit::short_wavelength ? "hz" : "hz_per_m2", d.rates);
    r.numbers("j_list", "", d.j_list);
    const std::string rate_key =
        r.key_path("rates", d.limit == DecoherenceLimit::short_wavelength ? "hz" : "hz_per_m2");
    detail::require(!d.rates.empty(), rate_key, "must not be empty");
    for (double x : d.rates) detail::require(x >= 0.0, rate_key, "rates must be non-negative");
    detail::check_spin_values(d.j_list, r.key_path("j_list", ""));
    r.finish();
  }

  {
    detail::Reader r = top.child("oracle");
    auto& o = cfg.oracle;
    r.numbers("j_list", "", o.j_list);
    r.numbers("k_list", "", o.k_list);
    r.numbers("time_factors", "ts", o.time_factors);
    r.integer("n_fock", o.n_fock);
    detail::check_spin_values(o.j_list, r.key_path("j_list", ""));
    detail::require(!o.k_list.empty(), r.key_path("k_list", ""), "must not be empty");
    for (double t : o.time_factors)
      detail::require(t >= 0.0, r.key_path("time_factors", "ts"), "times must be non-negative");
    detail::require(o.n_fock >= 0, r.key_path("n_fock", ""), "must be non-negative (0 selects the default)");
    r.finish();
  }

  {
    detail::Reader r = top.child("tables");
    r.numbers("j_list", "", cfg.tables.j_list);
    r.strings("families", cfg.tables.families);
    detail::check_spin_values(cfg.tables.j_list, r.key_path("j_list", ""));
    for (std::size_t i = 0; i < cfg.tables.families.size(); ++i)
      family_from_string(cfg.tables.families[i], r.key_path("families", "") + "[" + std::to_string(i) + "]");
    r.finish();
  }

  top.finish();
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path, std::optional<std::string> preset_override = std::nullopt) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), std::move(preset_override));
}

/// Fully expanded canonical form. Parsing it back yields the same configuration.
inline json to_json(const RunConfig& c) {
  json j;
  if (c.preset) j["preset"] = *c.preset;
  const auto& e = c.experiment;
  j["experiment"] = {{"geometry", to_string(e.geometry)},
                     {"parallel_distance", to_string(e.parallel_distance)},
                     {"j", e.j.value()},
                     {"mass_a_kg", e.mass_a},
                     {"mass_b_kg", e.mass_b},
                     {"delta_x_m", e.delta_x},
                     {"delta_s_m", e.delta_s},
                     {"tau_s", e.tau},
                     {"k", e.k}};
  j["objective"] = to_string(c.objective);
  const auto& f = c.family;
  j["family"] = {{"name", to_string(f.family)},
                 {"theta_range_rad", {f.theta.lo, f.theta.hi}},
                 {"delta_theta_range_rad", {f.delta_theta.lo, f.delta_theta.hi}},
                 {"delta_phi_range_rad", {f.delta_phi.lo, f.delta_phi.hi}},
                 {"chi_range", {f.chi.lo, f.chi.hi}},
                 {"free_delta_phi", f.free_delta_phi},
                 {"delta_phi_rad", f.fixed_delta_phi},
                 {"superposition_center_rad", f.superposition_center},
                 {"base_theta_rad", f.base_theta},
                 {"base_phi_rad", f.base_phi}};
  j["optimizer"] = {{"grid_n", c.optimizer.grid_n},
                    {"refine", c.optimizer.refine},
                    {"tolerance_rad", c.optimizer.tolerance}};
  j["decoherence"] = {{"gamma_short_hz", c.gamma_short}, {"gamma_long_hz_per_m2", c.gamma_long}};
  const auto& g = c.gsg;
  json gj = {{"mode", to_string(g.mode)}, {"mass_kg", g.mass}, {"lande_g", g.lande_g}};
  if (g.mode != GsgMode::diamagnetic) gj["trap_frequency_rad_per_s"] = g.trap_frequency;
  if (g.mode == GsgMode::coupling_ratio) gj["k"] = g.k;
  if (g.mode != GsgMode::coupling_ratio) gj["gradient_t_per_m"] = g.gradient;
  if (g.mode == GsgMode::diamagnetic) gj["susceptibility_m3_per_kg"] = g.susceptibility;
  j["gsg"] = gj;
  const auto& s = c.state;
  j["state"] = {{"type", s.type},     {"theta_rad", s.theta},   {"phi_rad", s.phi},
                {"theta2_rad", s.theta2}, {"phi2_rad", s.phi2}, {"chi", s.chi}};
  j["evolve"] = {{"time_fractions_ts", c.evolve.time_fractions},
                 {"x_points", c.evolve.x_points},
                 {"trajectory_points", c.evolve.trajectory_points}};
  j["husimi"] = {{"n_theta", c.husimi.n_theta}, {"n_phi", c.husimi.n_phi}};
  j["entangle"] = {{"witness", c.entangle.witness}, {"gellmann", c.entangle.gellmann}};
  j["sweep"] = {{"kind", c.sweep.kind}, {"grid_n", c.sweep.grid_n}, {"taus_s", c.sweep.taus}, {"j_list", c.sweep.j_list}};
  const bool short_limit = c.decohere.limit == DecoherenceLimit::short_wavelength;
  j["decohere"] = {{"limit", to_string(c.decohere.limit)},
                   {short_limit ? "rates_hz" : "rates_hz_per_m2", c.decohere.rates},
                   {"j_list", c.decohere.j_list}};
  j["oracle"] = {{"j_list", c.oracle.j_list},
                 {"k_list", c.oracle.k_list},
                 {"time_factors_ts", c.oracle.time_factors},
                 {"n_fock", c.oracle.n_fock}};
  j["tables"] = {{"j_list", c.tables.j_list}, {"families", c.tables.families}};
  return j;
}

inline std::string canonical_text(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace gsg::io
