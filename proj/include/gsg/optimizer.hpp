#pragma once

// Spin-state family search: maximize entanglement entropy or minimize negativity
// for a fixed experiment, plus the sweeps over theta, tau, j and decoherence rate.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "gsg/decoherence.hpp"
#include "gsg/entanglement.hpp"
#include "gsg/spin_states.hpp"

namespace gsg {

enum class Family {
  css,                          // free: theta
  css_superposition_symmetric,  // free: delta_theta (and delta_phi when enabled)
  sss_one_axis,                 // free: chi
  sss_two_axis,                 // free: chi
  css_two_angle,                // free: theta_A, theta_B; no symmetry reduction
};

enum class Objective { entropy, negativity };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::css: return "css";
    case Family::css_superposition_symmetric: return "css_superposition_symmetric";
    case Family::sss_one_axis: return "sss_one_axis";
    case Family::sss_two_axis: return "sss_two_axis";
    case Family::css_two_angle: return "css_two_angle";
  }
  return "?";
}

inline const char* to_string(Objective o) { return o == Objective::entropy ? "entropy" : "negativity"; }

struct ParamRange {
  double lo = 0.0;
  double hi = pi;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct StateFamilySpec {
  Family family = Family::css;
  ParamRange theta{0.0, pi};
  ParamRange delta_theta{0.0, pi};
  ParamRange delta_phi{0.0, pi};
  ParamRange chi{0.0, pi};
  bool free_delta_phi = false;
  double fixed_delta_phi = 0.0;       // used when delta_phi is not free
  double superposition_center = pi / 2;
  double base_theta = pi / 2;         // input coherent state of the squeezed families
  double base_phi = 0.0;

  /// Defaults per family. The two-axis chi window is narrower than the one-axis one.
  static StateFamilySpec defaults(Family f) {
    StateFamilySpec s;
    s.family = f;
    if (f == Family::sss_two_axis) s.chi = {0.0, 0.5};
    return s;
  }

  void validate() const {
    auto in_0_pi = [](ParamRange r) { return r.lo >= 0.0 && r.hi <= pi + 1e-15 && r.lo <= r.hi; };
    if (!in_0_pi(theta) || !in_0_pi(delta_theta) || !in_0_pi(delta_phi))
      throw DomainError("StateFamilySpec: angle ranges must lie within [0, pi]");
    if (!(chi.lo <= chi.hi) || !std::isfinite(chi.lo) || !std::isfinite(chi.hi))
      throw DomainError("StateFamilySpec: invalid chi range");
    if (!(base_theta >= 0.0 && base_theta <= pi)) throw DomainError("StateFamilySpec: base_theta outside [0, pi]");
  }

  std::vector<std::string> parameter_names() const {
    switch (family) {
      case Family::css: return {"theta"};
      case Family::css_superposition_symmetric:
        return free_delta_phi ? std::vector<std::string>{"delta_theta", "delta_phi"}
                              : std::vector<std::string>{"delta_theta"};
      case Family::sss_one_axis:
      case Family::sss_two_axis: return {"chi"};
      case Family::css_two_angle: return {"theta_a", "theta_b"};
    }
    return {};
  }

  std::vector<ParamRange> ranges() const {
    switch (family) {
      case Family::css: return {theta};
      case Family::css_superposition_symmetric:
        return free_delta_phi ? std::vector<ParamRange>{delta_theta, delta_phi} : std::vector<ParamRange>{delta_theta};
      case Family::sss_one_axis:
      case Family::sss_two_axis: return {chi};
      case Family::css_two_angle: return {theta, theta};
    }
    return {};
  }
};

/// Reverse the Dicke order (m -> -m). Maps css(theta, 0) onto css(pi - theta, 0).
inline SpinState mirror_m(const SpinState& s) {
  return SpinState(s.spin(), CVector(s.amplitudes().reverse())).with_canonical_phase();
}

/// Evaluates one objective at many family points, caching what does not depend on the point.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(StateFamilySpec family, ExperimentConfig config, Objective objective,
                     std::optional<DecoherenceModel> decoherence = std::nullopt)
      : family_(std::move(family)),
        config_(std::move(config)),
        objective_(objective),
        decoherence_(std::move(decoherence)),
        phases_(phase_matrix(config_)) {
    family_.validate();
    if (decoherence_) {
      decoherence_->validate();
      if (decoherence_->is_trivial()) decoherence_.reset();
    }
    if (family_.family == Family::sss_one_axis || family_.family == Family::sss_two_axis) {
      const Twisting mode = family_.family == Family::sss_one_axis ? Twisting::one_axis : Twisting::two_axis;
      Eigen::SelfAdjointEigenSolver<CMatrix> es(twisting_generator(config_.j, mode));
      if (es.info() != Eigen::Success) throw NumericalError("ObjectiveEvaluator: eigensolver failed");
      twist_vectors_ = es.eigenvectors();
      twist_values_ = es.eigenvalues();
      base_in_eigenbasis_ = twist_vectors_.adjoint() *
                            coherent_spin_state(config_.j, family_.base_theta, family_.base_phi).amplitudes();
    }
  }

  const StateFamilySpec& family() const noexcept { return family_; }
  const ExperimentConfig& config() const noexcept { return config_; }
  Objective objective() const noexcept { return objective_; }
  std::size_t dimension() const { return family_.ranges().size(); }

  /// States of masses A and B at a family point, symmetry applied.
  std::pair<SpinState, SpinState> states(std::span<const double> p) const {
    const Spin j = config_.j;
    auto partner = [&](const SpinState& a) { return config_.geometry == Geometry::parallel ? a : mirror_m(a); };
    switch (family_.family) {
      case Family::css: {
        SpinState a = coherent_spin_state(j, p[0], 0.0);
        return {a, partner(a)};
      }
      case Family::css_superposition_symmetric: {
        const double dph = family_.free_delta_phi ? p[1] : family_.fixed_delta_phi;
        const double c = family_.superposition_center;
        const double t1 = std::clamp(c + p[0], 0.0, pi);
        const double t2 = std::clamp(c - p[0], 0.0, pi);
        SpinState a = css_superposition(j, t1, dph, t2, -dph);
        return {a, partner(a)};
      }
      case Family::sss_one_axis:
      case Family::sss_two_axis: {
        CVector ph = (twist_values_.cast<cplx>() * (-I * p[0])).array().exp();
        SpinState a =
            SpinState(j, twist_vectors_ * ph.cwiseProduct(base_in_eigenbasis_)).with_canonical_phase();
        return {a, partner(a)};
      }
      case Family::css_two_angle:
        return {coherent_spin_state(j, p[0], 0.0), coherent_spin_state(j, p[1], 0.0)};
    }
    throw DomainError("ObjectiveEvaluator: unknown family");
  }

  double operator()(std::span<const double> p) const {
    const auto [a, b] = states(p);
    const BipartiteState psi = joint_state(a, b, phases_, config_.k);
    if (!decoherence_) return objective_ == Objective::entropy ? entanglement_entropy(psi) : negativity_pure(psi);
    const DensityMatrix rho = apply(DensityMatrix::from_pure(psi), *decoherence_);
    if (objective_ == Objective::entropy) return von_neumann_entropy(reduced_density(rho, Subsystem::A));
    return negativity(rho, {.witness = false, .gellmann = false}).negativity;
  }

  double operator()(std::initializer_list<double> p) const {
    return (*this)(std::span<const double>(p.begin(), p.size()));
  }

  /// True when a is a strictly better objective value than b.
  bool better(double a, double b) const { return objective_ == Objective::entropy ? a > b : a < b; }

 private:
  StateFamilySpec family_;
  ExperimentConfig config_;
  Objective objective_;
  std::optional<DecoherenceModel> decoherence_;
  PhaseMatrix phases_;
  CMatrix twist_vectors_;
  RVector twist_values_;
  CVector base_in_eigenbasis_;
};

inline double objective(const StateFamilySpec& family, std::span<const double> point, const ExperimentConfig& config,
                        Objective kind, const std::optional<DecoherenceModel>& decoherence = std::nullopt) {
  return ObjectiveEvaluator(family, config, kind, decoherence)(point);
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be written
/// to disjoint, preallocated slots so the outcome is independent of scheduling.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(std::max(n, 1)));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
  return v;
}

/// Grid of objective values with the located optimum.
struct SweepResult {
  Objective objective = Objective::entropy;
  std::vector<std::string> columns;          // parameter columns of `points`
  std::vector<std::vector<double>> points;   // one row per evaluated point
  std::vector<double> values;                // objective value per row
  std::vector<double> optimum_point;
  double optimum_value = 0.0;
  ExperimentConfig config;
  StateFamilySpec family;
  int grid_n = 0;
  std::size_t evaluations = 0;
  double wall_time_s = 0.0;

  /// Index of the best row, first one on ties.
  std::size_t best_row() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
      const bool b = objective == Objective::entropy ? values[i] > values[best] : values[i] < values[best];
      if (b) best = i;
    }
    return best;
  }
};

struct OptimizeOptions {
  int grid_n = 201;
  bool refine = true;
  double tolerance = 1e-4;  // refinement stops once the bracket is narrower than this (rad)
  unsigned threads = 1;
};

namespace detail {

/// Golden-section search for the better value of f on [lo, hi].
inline std::pair<double, double> golden_section(const std::function<double(double)>& f, double lo, double hi,
                                                bool maximize, double tol, std::size_t& evals) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  evals += 2;
  auto better = [&](double x, double y) { return maximize ? x > y : x < y; };
  while (b - a > tol) {
    if (better(fc, fd)) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return better(fc, fd) ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace detail

/// Coarse uniform grid over every free parameter, then coordinate-wise golden-section
/// refinement inside the neighbouring grid cells of the best node.
inline SweepResult optimize(const ObjectiveEvaluator& eval, const OptimizeOptions& opts = {}) {
  if (opts.grid_n < 3) throw DomainError("optimize: grid_n must be at least 3");
  const auto start = std::chrono::steady_clock::now();
  const auto ranges = eval.family().ranges();
  const std::size_t dim = ranges.size();
  SweepResult r;
  r.objective = eval.objective();
  r.columns = eval.family().parameter_names();
  r.config = eval.config();
  r.family = eval.family();
  r.grid_n = opts.grid_n;

  std::vector<std::vector<double>> axes;
  for (const auto& rg : ranges) axes.push_back(linspace(rg.lo, rg.hi, opts.grid_n));
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.size();
  r.points.resize(total);
  r.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    std::vector<double> p(dim);
    for (std::size_t k = dim; k-- > 0;) {
      p[k] = axes[k][rem % axes[k].size()];
      rem /= axes[k].size();
    }
    r.points[i] = std::move(p);
  }
  parallel_for(total, opts.threads, [&](std::size_t i) { r.values[i] = eval(r.points[i]); });
  r.evaluations = total;

  const std::size_t best = r.best_row();
  r.optimum_point = r.points[best];
  r.optimum_value = r.values[best];

  if (opts.refine) {
    std::vector<double> x = r.optimum_point;
    double fx = r.optimum_value;
    const bool maximize = eval.objective() == Objective::entropy;
    for (int sweep = 0; sweep < 20; ++sweep) {
      double moved = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double h = ranges[k].width() / (opts.grid_n - 1);
        const double lo = std::max(ranges[k].lo, x[k] - h);
        const double hi = std::min(ranges[k].hi, x[k] + h);
        if (!(hi > lo)) continue;
        auto f = [&](double v) {
          std::vector<double> y = x;
          y[k] = v;
          return eval(y);
        };
        const auto [xk, fk] = detail::golden_section(f, lo, hi, maximize, opts.tolerance, r.evaluations);
        if (eval.better(fk, fx)) {
          moved = std::max(moved, std::abs(xk - x[k]));
          x[k] = xk;
          fx = fk;
        }
      }
      if (dim == 1 || moved < opts.tolerance) break;
    }
    r.optimum_point = x;
    r.optimum_value = fx;
  }
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline SweepResult optimize(const StateFamilySpec& family, const ExperimentConfig& config, Objective objective,
                            const OptimizeOptions& opts = {},
                            const std::optional<DecoherenceModel>& decoherence = std::nullopt) {
  return optimize(ObjectiveEvaluator(family, config, objective, decoherence), opts);
}

/// Full (theta_A, theta_B) surface of coherent inputs, no symmetry reduction.
inline SweepResult sweep_theta_surface(const ExperimentConfig& config, int grid_n,
                                       Objective objective = Objective::entropy, unsigned threads = 1) {
  OptimizeOptions o;
  o.grid_n = grid_n;
  o.refine = false;
  o.threads = threads;
  return optimize(StateFamilySpec::defaults(Family::css_two_angle), config, objective, o);
}

/// Full width at half maximum of the surface along the anti-diagonal through
/// (pi/2, pi/2), measured as the theta_A offset. Needs an odd grid.
inline double ridge_width(const SweepResult& surface) {
  const int n = surface.grid_n;
  if (n % 2 == 0 || surface.columns.size() != 2) throw DomainError("ridge_width: needs an odd 2-D theta surface");
  const int c = n / 2;
  auto value = [&](int i, int j) { return surface.values[static_cast<std::size_t>(i) * n + j]; };
  const double peak = value(c, c);
  const double h = pi / (n - 1);
  double half_width = c * h;
  for (int s = 1; s <= c; ++s) {
    const double v = value(c + s, c - s);
    if (v < 0.5 * peak) {
      const double prev = value(c + s - 1, c - s + 1);
      half_width = (s - 1 + (prev - 0.5 * peak) / (prev - v)) * h;
      break;
    }
  }
  return 2.0 * half_width;
}

namespace detail {
inline SweepResult collect_optima(const std::vector<SweepResult>& optima, std::vector<std::string> lead_columns,
                                  const std::vector<std::vector<double>>& lead_values, Objective objective,
                                  const ExperimentConfig& config, const StateFamilySpec& family, int grid_n) {
  SweepResult r;
  r.objective = objective;
  r.columns = std::move(lead_columns);
  if (!optima.empty())
    for (const auto& name : optima.front().columns) r.columns.push_back(name + "_opt");
  r.config = config;
  r.family = family;
  r.grid_n = grid_n;
  for (std::size_t i = 0; i < optima.size(); ++i) {
    std::vector<double> row = lead_values[i];
    row.insert(row.end(), optima[i].optimum_point.begin(), optima[i].optimum_point.end());
    r.points.push_back(std::move(row));
    r.values.push_back(optima[i].optimum_value);
    r.evaluations += optima[i].evaluations;
    r.wall_time_s += optima[i].wall_time_s;
  }
  if (!r.values.empty()) {
    const std::size_t b = r.best_row();
    r.optimum_point = r.points[b];
    r.optimum_value = r.values[b];
  }
  return r;
}
}  // namespace detail

/// Re-optimized family optimum at each interaction time.
inline SweepResult sweep_time(const StateFamilySpec& family, const ExperimentConfig& config,
                              const std::vector<double>& taus, Objective objective = Objective::entropy,
                              const OptimizeOptions& opts = {}) {
  for (double t : taus)
    if (!(t >= 0.0)) throw DomainError("sweep_time: tau values must be non-negative");
  std::vector<SweepResult> optima(taus.size());
  OptimizeOptions inner = opts;
  inner.threads = 1;
  parallel_for(taus.size(), opts.threads,
               [&](std::size_t i) { optima[i] = optimize(family, config.with_tau(taus[i]), objective, inner); });
  std::vector<std::vector<double>> lead;
  for (double t : taus) lead.push_back({t});
  return detail::collect_optima(optima, {"tau_s"}, lead, objective, config, family, opts.grid_n);
}

/// Family optimum as a function of j.
inline SweepResult sweep_spin(const StateFamilySpec& family, const ExperimentConfig& config,
                              const std::vector<Spin>& spins, Objective objective = Objective::entropy,
                              const OptimizeOptions& opts = {}) {
  std::vector<SweepResult> optima(spins.size());
  OptimizeOptions inner = opts;
  inner.threads = 1;
  parallel_for(spins.size(), opts.threads,
               [&](std::size_t i) { optima[i] = optimize(family, config.with_spin(spins[i]), objective, inner); });
  std::vector<std::vector<double>> lead;
  for (Spin s : spins) lead.push_back({s.value()});
  return detail::collect_optima(optima, {"j"}, lead, objective, config, family, opts.grid_n);
}

enum class DecoherenceLimit { short_wavelength, long_wavelength };

inline const char* to_string(DecoherenceLimit l) {
  return l == DecoherenceLimit::short_wavelength ? "short" : "long";
}

/// Decoherence model for one rate in the given limit (short: Hz, long: Hz/m^2).
inline DecoherenceModel decoherence_at(const ExperimentConfig& config, DecoherenceLimit limit, double rate) {
  DecoherenceModel m;
  m.delta_x = config.delta_x;
  m.tau = config.tau;
  if (limit == DecoherenceLimit::short_wavelength)
    m.gamma_short = rate;
  else
    m.gamma_long = rate;
  return m;
}

/// Minimal negativity per (j, rate), re-optimizing the family parameter at every rate.
inline SweepResult sweep_decoherence(const StateFamilySpec& family, const ExperimentConfig& config,
                                     const std::vector<Spin>& spins, const std::vector<double>& rates,
                                     DecoherenceLimit limit, const OptimizeOptions& opts = {}) {
  for (double r : rates)
    if (!(r >= 0.0)) throw DomainError("sweep_decoherence: rates must be non-negative");
  std::vector<std::vector<double>> lead;
  for (Spin s : spins)
    for (double rate : rates) lead.push_back({s.value(), rate});
  std::vector<SweepResult> optima(lead.size());
  OptimizeOptions inner = opts;
  inner.threads = 1;
  parallel_for(lead.size(), opts.threads, [&](std::size_t i) {
    const ExperimentConfig c = config.with_spin(Spin::from_value(lead[i][0]));
    optima[i] = optimize(family, c, Objective::negativity, inner, decoherence_at(c, limit, lead[i][1]));
  });
  return detail::collect_optima(optima, {"j", "rate"}, lead, Objective::negativity, config, family, opts.grid_n);
}

}  // namespace gsg
