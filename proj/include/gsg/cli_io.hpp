#pragma once

// Subcommand dispatch. Every subcommand writes its CSV files plus summary.json
// (results and the canonical config) and a manifest.json with checksums.

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "gsg/config.hpp"
#include "gsg/output.hpp"

namespace gsg::io {

inline constexpr std::string_view tool_version = "0.1.0";

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"evolve", "husimi",       "entangle", "optimize",
                                              "sweep",  "decohere", "oracle-check", "tables"};
  return names;
}

struct RunManifest {
  std::string subcommand;
  json config;               // canonical snapshot
  json results;              // same content as summary.json "results"
  std::vector<EmittedFile> outputs;
  std::string output_dir;
  double wall_time_s = 0.0;

  json to_json() const {
    json files = json::array();
    for (const auto& f : outputs) files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", hex64(f.checksum)}});
    return {{"subcommand", subcommand},   {"tool_version", tool_version}, {"config", config},
            {"outputs", files},           {"wall_time_s", wall_time_s},
            {"parallel_distance", config["experiment"]["parallel_distance"]}};
  }
};

inline SpinState build_state(const StateSettings& s, Spin j) {
  if (s.type == "css") return coherent_spin_state(j, s.theta, s.phi);
  if (s.type == "superposition") return css_superposition(j, s.theta, s.phi, s.theta2, s.phi2);
  if (s.type == "sss_one_axis") return squeezed_spin_state(j, s.chi, s.theta, s.phi, Twisting::one_axis);
  if (s.type == "sss_two_axis") return squeezed_spin_state(j, s.chi, s.theta, s.phi, Twisting::two_axis);
  if (s.type == "ground") return ground_state(j);
  throw ConfigError("state.type", "unknown state type '" + s.type + "'");
}

/// Indices of strict local maxima above rel_threshold * max(values).
inline std::vector<std::size_t> find_peaks(const std::vector<double>& values, double rel_threshold = 1e-3) {
  std::vector<std::size_t> peaks;
  if (values.size() < 3) return peaks;
  const double top = *std::max_element(values.begin(), values.end());
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > rel_threshold * top)
      peaks.push_back(i);
  return peaks;
}

namespace detail {

inline json number_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

inline std::string value_column(Objective o) { return o == Objective::entropy ? "entropy_nats" : "negativity"; }

inline std::string param_column(const std::string& name) {
  return name == "chi" ? "chi" : name + "_rad";
}

inline json optimum_json(const SweepResult& r) {
  json p = json::object();
  for (std::size_t i = 0; i < r.optimum_point.size() && i < r.columns.size(); ++i)
    p[r.columns[i]] = r.optimum_point[i];
  return {{"objective", to_string(r.objective)}, {"value", r.optimum_value}, {"point", p}};
}

/// Long-format CSV of a sweep: parameter columns then the objective value.
inline CsvTable sweep_table(const SweepResult& r) {
  std::vector<std::string> header;
  for (const auto& c : r.columns) header.push_back(c == "tau_s" || c == "j" ? c : param_column(c));
  header.push_back(value_column(r.objective));
  CsvTable t(header);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    std::vector<CsvCell> row(r.points[i].begin(), r.points[i].end());
    row.emplace_back(r.values[i]);
    t.row(row);
  }
  return t;
}

inline std::vector<Spin> spins_of(const std::vector<double>& js) {
  std::vector<Spin> out;
  for (double j : js) out.push_back(Spin::from_value(j));
  return out;
}

inline json run_evolve(const RunConfig& cfg, OutputDir& out) {
  const GsgParams p = cfg.gsg.resolve(cfg.experiment.constants);
  const SpinState state = build_state(cfg.state, cfg.experiment.j);
  const Spin j = state.spin();
  const double ts = p.splitting_time;
  const auto extent = superposition_extent(p, j);
  const double sigma = p.sigma_x();
  const double half = 0.5 * extent.delta_d + 6.0 * sigma;
  const std::vector<double> x = linspace(-half, half, cfg.evolve.x_points);
  const double cell = x[1] - x[0];

  CsvTable density({"t_s", "x_m", "density_per_m"});
  json snapshots = json::array();
  for (double frac : cfg.evolve.time_fractions) {
    const double t = frac * ts;
    const auto rho = position_density(state, p, t, x);
    for (std::size_t i = 0; i < x.size(); ++i) density.row({t, x[i], rho[i]});
    const auto peaks = find_peaks(rho);
    double spacing = 0.0;
    if (peaks.size() > 1) spacing = (x[peaks.back()] - x[peaks.front()]) / static_cast<double>(peaks.size() - 1);
    json peak_x = json::array();
    for (auto i : peaks) peak_x.push_back(x[i]);
    snapshots.push_back({{"time_fraction_ts", frac},
                         {"t_s", t},
                         {"peak_count", peaks.size()},
                         {"mean_peak_spacing_m", spacing},
                         {"peak_positions_m", peak_x}});
  }
  out.write("density.csv", density);

  CsvTable traj({"t_s", "m", "x_m", "p_kg_m_per_s", "phase_rad"});
  const double t_end = 2.0 * ts;
  for (double t : linspace(0.0, t_end, cfg.evolve.trajectory_points)) {
    const auto b = branch_trajectories(p, j, t);
    for (int i = 0; i < j.dim(); ++i) traj.row({t, j.m(i), b.position[i], b.momentum[i], b.phase[i]});
  }
  out.write("trajectories.csv", traj);

  return {{"splitting_time_s", ts},
          {"trap_frequency_rad_per_s", p.trap_frequency},
          {"coupling_rad_per_s", p.coupling},
          {"k", p.k},
          {"gradient_t_per_m", p.gradient},
          {"sigma_x_m", sigma},
          {"branch_spacing_m", extent.delta_x},
          {"total_spread_m", extent.delta_d},
          {"grid_cell_m", cell},
          // Peak counts are only meaningful when the grid resolves one packet width.
          {"peaks_resolved", cell < sigma},
          {"branches", j.dim()},
          {"snapshots", snapshots}};
}

inline json run_husimi(const RunConfig& cfg, OutputDir& out) {
  const SpinState state = build_state(cfg.state, cfg.experiment.j);
  const auto f = husimi_q(state, cfg.husimi.n_theta, cfg.husimi.n_phi);
  CsvTable t({"theta_rad", "phi_rad", "q"});
  double qmax = 0.0;
  std::size_t imax = 0;
  for (int i = 0; i < f.n_theta; ++i)
    for (int k = 0; k < f.n_phi; ++k) {
      t.row({f.thetas[i], f.phis[k], f.at(i, k)});
      const std::size_t idx = static_cast<std::size_t>(i) * f.n_phi + k;
      if (f.q[idx] > qmax) {
        qmax = f.q[idx];
        imax = idx;
      }
    }
  out.write("husimi.csv", t);
  return {{"normalization", f.normalization(state.spin())},
          {"q_max", qmax},
          {"argmax_theta_rad", f.thetas[imax / f.n_phi]},
          {"argmax_phi_rad", f.phis[imax % f.n_phi]}};
}

inline json run_entangle(const RunConfig& cfg, OutputDir& out) {
  const auto& e = cfg.experiment;
  const SpinState a = build_state(cfg.state, e.j);
  const SpinState b = e.geometry == Geometry::parallel ? a : mirror_m(a);
  const PhaseMatrix ph = phase_matrix(e);
  const BipartiteState psi = joint_state(a, b, ph, e.k);
  const int d = e.j.dim();

  CsvTable phases({"m_a", "m_b", "phase_rad"});
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) phases.row({e.j.m(m), e.j.m(n), ph.phi(m, n)});
  out.write("phases.csv", phases);

  const RVector sc = schmidt_coefficients(psi);
  CsvTable schmidt({"index", "schmidt_coefficient"});
  for (Eigen::Index i = 0; i < sc.size(); ++i) schmidt.row({static_cast<long long>(i), sc[i]});
  out.write("schmidt.csv", schmidt);

  json res = {{"entropy_nats", entanglement_entropy(psi)}, {"negativity_pure", negativity_pure(psi)}};
  const DecoherenceModel model = cfg.decoherence();
  if (!model.is_trivial() || cfg.entangle.witness || cfg.entangle.gellmann) {
    const DensityMatrix rho = apply(DensityMatrix::from_pure(psi), model);
    const auto rep = negativity(rho, {.witness = cfg.entangle.witness || cfg.entangle.gellmann,
                                      .gellmann = cfg.entangle.gellmann});
    res["negativity"] = rep.negativity;
    res["negative_eigenvalues"] = number_array(rep.negative_eigenvalues);
    res["entropy_a_nats"] = von_neumann_entropy(reduced_density(rho, Subsystem::A));
    if (cfg.entangle.witness || cfg.entangle.gellmann) {
      const cplx expectation = (rep.witness * rho.matrix()).trace();
      res["witness_expectation"] = expectation.real();
    }
    if (cfg.entangle.gellmann) {
      CsvTable g({"a", "b", "coefficient"});
      for (Eigen::Index i = 0; i < rep.gellmann.rows(); ++i)
        for (Eigen::Index k = 0; k < rep.gellmann.cols(); ++k)
          g.row({static_cast<long long>(i), static_cast<long long>(k), rep.gellmann(i, k)});
      out.write("witness_gellmann.csv", g);
    }
  } else {
    res["negativity"] = res["negativity_pure"];
  }
  return res;
}

inline json run_optimize(const RunConfig& cfg, OutputDir& out, unsigned threads) {
  OptimizeOptions o = cfg.optimizer;
  o.threads = threads;
  const DecoherenceModel model = cfg.decoherence();
  const auto r = optimize(cfg.family, cfg.experiment, cfg.objective, o,
                          model.is_trivial() ? std::nullopt : std::optional<DecoherenceModel>(model));
  out.write("optimize.csv", sweep_table(r));
  json res = optimum_json(r);
  res["family"] = to_string(cfg.family.family);
  res["j"] = cfg.experiment.j.value();
  res["grid_n"] = r.grid_n;
  return res;
}

inline json run_sweep(const RunConfig& cfg, OutputDir& out, unsigned threads) {
  const auto& s = cfg.sweep;
  OptimizeOptions o = cfg.optimizer;
  o.threads = threads;
  json res = {{"kind", s.kind}};
  if (s.kind == "theta_surface") {
    const auto r = sweep_theta_surface(cfg.experiment, s.grid_n, cfg.objective, threads);
    out.write("theta_surface.csv", sweep_table(r));
    double residual = 0.0;
    const int n = r.grid_n;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        residual = std::max(residual, std::abs(r.values[static_cast<std::size_t>(i) * n + k] -
                                               r.values[static_cast<std::size_t>(k) * n + i]));
    res["optimum"] = optimum_json(r);
    res["symmetry_residual"] = residual;
    if (n % 2 == 1 && cfg.objective == Objective::entropy) res["ridge_width_rad"] = ridge_width(r);
  } else if (s.kind == "theta_line") {
    CsvTable t({"j", "theta_rad", value_column(cfg.objective)});
    json optima = json::array();
    OptimizeOptions line = o;
    line.grid_n = s.grid_n;
    line.refine = false;
    for (Spin j : spins_of(s.j_list)) {
      const auto r = optimize(StateFamilySpec::defaults(Family::css), cfg.experiment.with_spin(j), cfg.objective, line);
      for (std::size_t i = 0; i < r.points.size(); ++i) t.row({j.value(), r.points[i][0], r.values[i]});
      json opt = optimum_json(r);
      opt["j"] = j.value();
      optima.push_back(opt);
    }
    out.write("theta_line.csv", t);
    res["optima"] = optima;
  } else if (s.kind == "time") {
    const auto r = sweep_time(cfg.family, cfg.experiment, s.taus, cfg.objective, o);
    out.write("time.csv", sweep_table(r));
    res["optimum"] = optimum_json(r);
  } else {
    const auto r = sweep_spin(cfg.family, cfg.experiment, spins_of(s.j_list), cfg.objective, o);
    out.write("spin.csv", sweep_table(r));
    json rows = json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) rows.push_back({{"j", r.points[i][0]}, {"value", r.values[i]}});
    res["rows"] = rows;
    res["asymptote_estimate"] = r.values.empty() ? 0.0 : r.values.back();
  }
  return res;
}

inline json run_decohere(const RunConfig& cfg, OutputDir& out, unsigned threads) {
  const auto& d = cfg.decohere;
  OptimizeOptions o = cfg.optimizer;
  o.threads = threads;
  const auto r = sweep_decoherence(cfg.family, cfg.experiment, spins_of(d.j_list), d.rates, d.limit, o);
  const std::string rate_col = d.limit == DecoherenceLimit::short_wavelength ? "rate_hz" : "rate_hz_per_m2";
  std::vector<std::string> header{"j", rate_col};
  for (std::size_t i = 2; i < r.columns.size(); ++i) header.push_back(param_column(r.columns[i]));
  header.push_back("negativity");
  CsvTable t(header);
  json rows = json::array();
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    std::vector<CsvCell> row(r.points[i].begin(), r.points[i].end());
    row.emplace_back(r.values[i]);
    t.row(row);
    rows.push_back({{"j", r.points[i][0]}, {"rate", r.points[i][1]}, {"negativity", r.values[i]}});
  }
  out.write("decoherence.csv", t);
  return {{"limit", to_string(d.limit)}, {"rows", rows}};
}

inline json run_oracle(const RunConfig& cfg, OutputDir& out) {
  const auto& o = cfg.oracle;
  CsvTable t({"j", "k", "t_over_ts", "n_fock", "fidelity", "norm", "top_occupancy", "min_vacuum_overlap"});
  double min_fid = 1.0;
  double min_closure = 1.0;
  for (double jv : o.j_list) {
    const Spin j = Spin::from_value(jv);
    const SpinState s = coherent_spin_state(j, pi / 2, 0.0);
    for (double k : o.k_list)
      for (double f : o.time_factors) {
        const int n_fock = o.n_fock > 0 ? o.n_fock : default_fock_truncation(j, k);
        const auto r = fock_oracle_evolve(s, k, pi * f, n_fock);
        double vac = 1.0;
        for (int i = 0; i < j.dim(); ++i)
          if (auto v = r.vacuum_overlap(i)) vac = std::min(vac, *v);
        t.row({jv, k, f, static_cast<long long>(n_fock), r.fidelity, r.norm, r.top_occupancy, vac});
        min_fid = std::min(min_fid, r.fidelity);
        if (std::abs(f - 2.0) < 1e-12) min_closure = std::min(min_closure, vac);
      }
  }
  out.write("oracle.csv", t);
  return {{"min_fidelity", min_fid},
          {"min_loop_closure_vacuum_overlap", min_closure},
          {"pass", min_fid >= 1.0 - 1e-6 && min_closure >= 1.0 - 1e-6}};
}

inline json run_tables(const RunConfig& cfg, OutputDir& out, unsigned threads) {
  const auto& tb = cfg.tables;
  struct Cell {
    Family family;
    Spin j;
    Objective objective;
    SweepResult result;
  };
  std::vector<Cell> cells;
  for (Objective obj : {Objective::entropy, Objective::negativity})
    for (const auto& name : tb.families)
      for (double jv : tb.j_list) cells.push_back({family_from_string(name, "tables.families"), Spin::from_value(jv), obj, {}});
  OptimizeOptions o = cfg.optimizer;
  o.threads = 1;
  parallel_for(cells.size(), threads, [&](std::size_t i) {
    auto& c = cells[i];
    StateFamilySpec spec = StateFamilySpec::defaults(c.family);
    if (c.family == cfg.family.family) spec = cfg.family;
    c.result = optimize(spec, cfg.experiment.with_spin(c.j), c.objective, o);
  });
  json res = json::object();
  for (Objective obj : {Objective::entropy, Objective::negativity}) {
    const std::string file = obj == Objective::entropy ? "table_entropy.csv" : "table_negativity.csv";
    CsvTable t({"family", "j", value_column(obj), "param1", "param1_value", "param2", "param2_value"});
    json rows = json::array();
    for (const auto& c : cells) {
      if (c.objective != obj) continue;
      const auto& r = c.result;
      std::vector<CsvCell> row{std::string(to_string(c.family)), c.j.value(), r.optimum_value};
      for (std::size_t k = 0; k < 2; ++k) {
        if (k < r.columns.size()) {
          row.emplace_back(r.columns[k]);
          row.emplace_back(r.optimum_point[k]);
        } else {
          row.emplace_back(std::string());
          row.emplace_back(std::string());
        }
      }
      t.row(row);
      rows.push_back({{"family", to_string(c.family)}, {"j", c.j.value()}, {"value", r.optimum_value}});
    }
    out.write(file, t);
    res[to_string(obj)] = rows;
  }
  return res;
}

}  // namespace detail

/// Runs one subcommand, writing outputs and manifest.json under out_dir.
inline RunManifest run_subcommand(const std::string& name, const RunConfig& cfg, const std::string& out_dir,
                                  unsigned threads = 1) {
  if (std::find(subcommands().begin(), subcommands().end(), name) == subcommands().end())
    throw ConfigError("<subcommand>", "unknown subcommand '" + name + "'");
  const auto start = std::chrono::steady_clock::now();
  cfg.experiment.validate();
  OutputDir out(out_dir);
  RunManifest m;
  m.subcommand = name;
  m.config = to_json(cfg);
  m.output_dir = out.root().string();
  if (name == "evolve")
    m.results = detail::run_evolve(cfg, out);
  else if (name == "husimi")
    m.results = detail::run_husimi(cfg, out);
  else if (name == "entangle")
    m.results = detail::run_entangle(cfg, out);
  else if (name == "optimize")
    m.results = detail::run_optimize(cfg, out, threads);
  else if (name == "sweep")
    m.results = detail::run_sweep(cfg, out, threads);
  else if (name == "decohere")
    m.results = detail::run_decohere(cfg, out, threads);
  else if (name == "oracle-check")
    m.results = detail::run_oracle(cfg, out);
  else
    m.results = detail::run_tables(cfg, out, threads);

  const json summary = {{"subcommand", name}, {"config", m.config}, {"results", m.results}};
  out.write("summary.json", summary.dump(2) + "\n");
  m.outputs = out.files();
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string manifest = m.to_json().dump(2) + "\n";
  std::ofstream f(out.root() / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!f || !(f << manifest)) throw IoError("cannot write manifest.json in " + m.output_dir);
  return m;
}

}  // namespace gsg::io
