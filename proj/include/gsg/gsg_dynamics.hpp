#pragma once

// Generalized Stern-Gerlach splitting and recombination of a mass carrying spin j.
//
// H = hbar w a^dag a - hbar g J_z (a + a^dag); each Dicke component m follows a
// coherent-state branch alpha_m(t) = m k (1 - e^{-i w t}) with k = g / w.

#include <cmath>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gsg/constants.hpp"
#include "gsg/errors.hpp"
#include "gsg/linalg.hpp"
#include "gsg/spin_states.hpp"

namespace gsg {

struct GsgParams {
  double mass = 0.0;             // kg
  double trap_frequency = 0.0;   // rad/s
  double gradient = 0.0;         // T/m
  double lande_g = 2.0;
  double coupling = 0.0;         // g, rad/s
  double k = 0.0;                // g / w
  double splitting_time = 0.0;   // t_s = pi / w, s
  Constants constants = codata2018;

  /// sqrt(hbar / (M w)), the branch Gaussian width used for P(x, t).
  double sigma_x() const { return std::sqrt(constants.hbar / (mass * trap_frequency)); }
  /// sqrt(2 hbar / (M w)), converts Re(alpha) to metres.
  double position_scale() const { return std::sqrt(2.0 * constants.hbar / (mass * trap_frequency)); }
};

namespace detail {
inline void require_positive_mass_frequency(double mass, double omega, const char* where) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError(std::string(where) + ": mass must be positive");
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw DomainError(std::string(where) + ": trap frequency must be positive");
}
inline double coupling_per_gradient(double mass, double omega, double lande_g, const Constants& c) {
  return lande_g * c.bohr_magneton * std::sqrt(1.0 / (2.0 * c.hbar * mass * omega));
}
}  // namespace detail

/// g = g~ mu_B sqrt(1 / (2 hbar M w)) dB/dx.
inline GsgParams coupling_from_gradient(double mass, double trap_frequency, double gradient, double lande_g,
                                        const Constants& c = codata2018) {
  detail::require_positive_mass_frequency(mass, trap_frequency, "coupling_from_gradient");
  GsgParams p;
  p.mass = mass;
  p.trap_frequency = trap_frequency;
  p.gradient = gradient;
  p.lande_g = lande_g;
  p.coupling = detail::coupling_per_gradient(mass, trap_frequency, lande_g, c) * gradient;
  p.k = p.coupling / trap_frequency;
  p.splitting_time = pi / trap_frequency;
  p.constants = c;
  return p;
}

/// Parameters with a prescribed dimensionless coupling k; the gradient is back-solved.
inline GsgParams params_from_coupling_ratio(double mass, double trap_frequency, double k, double lande_g = 2.0,
                                            const Constants& c = codata2018) {
  detail::require_positive_mass_frequency(mass, trap_frequency, "params_from_coupling_ratio");
  const double per_gradient = detail::coupling_per_gradient(mass, trap_frequency, lande_g, c);
  if (per_gradient == 0.0) throw DomainError("params_from_coupling_ratio: Lande factor must be nonzero");
  return coupling_from_gradient(mass, trap_frequency, k * trap_frequency / per_gradient, lande_g, c);
}

struct DiamagneticDerivation {
  double susceptibility = 0.0;   // chi_m, m^3/kg
  double permeability = 0.0;     // mu_0
  double gradient = 0.0;         // dB/dx, T/m
  double trap_frequency = 0.0;   // w = sqrt(|chi| / mu_0) |dB/dx|
  double coupling = 0.0;         // g
  double splitting_time = 0.0;   // pi / w
  double delta_x = 0.0;          // 2 g~ mu_B mu_0 / (M |chi| |dB/dx|)
  GsgParams params;
};

/// Zero gradient: the diamagnetic trap vanishes and the splitting never completes.
struct UnboundedSplittingTime {
  double susceptibility = 0.0;
};

using DiamagneticResult = std::variant<DiamagneticDerivation, UnboundedSplittingTime>;

inline DiamagneticResult diamagnetic_params(double susceptibility, double mass, double gradient, double lande_g,
                                            const Constants& c = codata2018) {
  if (susceptibility == 0.0 || !std::isfinite(susceptibility))
    throw DomainError("diamagnetic_params: susceptibility must be nonzero");
  if (!(mass > 0.0)) throw DomainError("diamagnetic_params: mass must be positive");
  if (!std::isfinite(gradient)) throw DomainError("diamagnetic_params: gradient must be finite");
  if (gradient == 0.0) return UnboundedSplittingTime{susceptibility};
  const double chi = std::abs(susceptibility);
  const double grad = std::abs(gradient);
  DiamagneticDerivation d;
  d.susceptibility = susceptibility;
  d.permeability = c.vacuum_permeability;
  d.gradient = gradient;
  d.trap_frequency = std::sqrt(chi / c.vacuum_permeability) * grad;
  d.params = coupling_from_gradient(mass, d.trap_frequency, grad, lande_g, c);
  d.coupling = d.params.coupling;
  d.splitting_time = pi / d.trap_frequency;
  d.delta_x = 2.0 * lande_g * c.bohr_magneton * c.vacuum_permeability / (mass * chi * grad);
  return d;
}

struct TrajectoryBundle {
  Spin j;
  double time = 0.0;
  std::vector<cplx> alpha;         // alpha_m(t)
  std::vector<double> position;    // <x_m(t)>, m
  std::vector<double> momentum;    // <p_m(t)>, kg m/s
  std::vector<double> phase;       // k^2 m^2 (w t - sin w t), rad
  double sigma_x = 0.0;
};

inline TrajectoryBundle branch_trajectories(const GsgParams& p, Spin j, double t) {
  if (!(t >= 0.0)) throw DomainError("branch_trajectories: time must be non-negative");
  const double wt = p.trap_frequency * t;
  const cplx eta = 1.0 - std::exp(-I * wt);
  const double xs = p.position_scale();
  const double ps = p.coupling * std::sqrt(2.0 * p.constants.hbar * p.mass / p.trap_frequency);
  TrajectoryBundle b{j, t, {}, {}, {}, {}, p.sigma_x()};
  for (int i = 0; i < j.dim(); ++i) {
    const double m = j.m(i);
    b.alpha.push_back(m * p.k * eta);
    b.position.push_back(m * p.k * xs * (1.0 - std::cos(wt)));
    b.momentum.push_back(m * ps * std::sin(wt));
    b.phase.push_back(p.k * p.k * m * m * (wt - std::sin(wt)));
  }
  return b;
}

struct SuperpositionExtent {
  double delta_x = 0.0;  // adjacent-branch separation at t_s
  double delta_d = 0.0;  // total spread 2 j delta_x
};

inline SuperpositionExtent superposition_extent(const GsgParams& p, Spin j) {
  const double dx = 2.0 * p.position_scale() * p.coupling / p.trap_frequency;
  return {dx, j.twice() * dx};
}

/// P(x, t) = sum_m P_s(m) N(<x_m(t)>, hbar / (M w)).
inline std::vector<double> position_density(const SpinState& state, const GsgParams& p, double t,
                                            std::span<const double> x_grid) {
  if (x_grid.empty()) throw DomainError("position_density: empty grid");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (!(x_grid[i] > x_grid[i - 1])) throw DomainError("position_density: grid must be strictly increasing");
  const auto traj = branch_trajectories(p, state.spin(), t);
  const RVector w = state.probabilities();
  const double s = traj.sigma_x;
  const double norm = 1.0 / (s * std::sqrt(2.0 * pi));
  std::vector<double> out(x_grid.size(), 0.0);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    double acc = 0.0;
    for (int m = 0; m < state.dim(); ++m) {
      if (w[m] == 0.0) continue;
      const double z = (x_grid[i] - traj.position[m]) / s;
      acc += w[m] * std::exp(-0.5 * z * z);
    }
    out[i] = norm * acc;
  }
  return out;
}

/// Spin-branch state at t_s: amplitudes c_m e^{i pi k^2 m^2}, branch m at m * delta_x.
struct SplitState {
  SpinState spin;
  std::vector<double> branch_positions;
  double k = 0.0;
};

inline SplitState split_state(const SpinState& state, const GsgParams& p) {
  const Spin j = state.spin();
  CVector c = state.amplitudes();
  const double dx = superposition_extent(p, j).delta_x;
  std::vector<double> pos(j.dim());
  for (int i = 0; i < j.dim(); ++i) {
    const double m = j.m(i);
    c[i] *= std::exp(I * (pi * p.k * p.k * m * m));
    pos[i] = m * dx;
  }
  return {SpinState(j, std::move(c)), std::move(pos), p.k};
}

/// Second half of the loop: another e^{i pi k^2 m^2} and optional per-branch
/// interaction phases applied as e^{-i phi_m}. The position register is dropped.
inline SpinState recombine_state(const SplitState& split, std::span<const double> branch_phases = {}) {
  const Spin j = split.spin.spin();
  if (!branch_phases.empty() && static_cast<int>(branch_phases.size()) != j.dim())
    throw DimensionMismatchError("recombine_state: need one interaction phase per branch");
  CVector c = split.spin.amplitudes();
  for (int i = 0; i < j.dim(); ++i) {
    const double m = j.m(i);
    double ph = pi * split.k * split.k * m * m;
    if (!branch_phases.empty()) ph -= branch_phases[i];
    c[i] *= std::exp(I * ph);
  }
  return SpinState(j, std::move(c));
}

/// Fock amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n < n_fock.
inline CVector coherent_fock_amplitudes(cplx alpha, int n_fock) {
  CVector v(n_fock);
  cplx term = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < n_fock; ++n) {
    v[n] = term;
    term *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

inline int default_fock_truncation(Spin j, double k) {
  const double a = 2.0 * j.value() * std::abs(k);
  return static_cast<int>(std::ceil(a * a + 10.0 * a + 20.0));
}

/// Closed-form joint state sum_m c_m e^{i k^2 m^2 (wt - sin wt)} |m> (x) |alpha_m(t)>,
/// index m_index * n_fock + n.
inline CVector closed_form_joint_state(const SpinState& state, double k, double wt, int n_fock) {
  const Spin j = state.spin();
  CVector out(j.dim() * n_fock);
  const cplx eta = 1.0 - std::exp(-I * wt);
  for (int i = 0; i < j.dim(); ++i) {
    const double m = j.m(i);
    const cplx amp = state[i] * std::exp(I * (k * k * m * m * (wt - std::sin(wt))));
    out.segment(static_cast<Eigen::Index>(i) * n_fock, n_fock) = amp * coherent_fock_amplitudes(m * k * eta, n_fock);
  }
  return out;
}

struct FockEvolution {
  Spin j;
  int n_fock = 0;
  CVector joint;              // numerically evolved state
  CVector closed_form;        // closed-form state on the same truncated space
  double fidelity = 0.0;      // |<closed|joint>|^2 / (|closed|^2 |joint|^2)
  double norm = 0.0;          // |joint|
  double top_occupancy = 0.0; // largest population in the highest Fock level, per branch weight

  /// Oscillator part of branch i (unnormalized).
  CVector branch(int i) const { return joint.segment(static_cast<Eigen::Index>(i) * n_fock, n_fock); }

  /// |<0|phi_m>|^2 / <phi_m|phi_m> for branch i, or nullopt for an empty branch.
  std::optional<double> vacuum_overlap(int i) const {
    const CVector b = branch(i);
    const double w = b.squaredNorm();
    if (w < 1e-24) return std::nullopt;
    return std::norm(b[0]) / w;
  }
};

/// Direct exponentiation of the splitting Hamiltonian on spin (x) Fock(n_fock),
/// compared against the closed-form branch state. `wt` is omega_M * t.
inline FockEvolution fock_oracle_evolve(const SpinState& state, double k, double wt, int n_fock) {
  const Spin j = state.spin();
  const double a_max = j.value() * std::abs(k) * std::abs(1.0 - std::exp(-I * wt));
  if (n_fock < 2 || a_max * a_max + 6.0 * a_max >= n_fock)
    throw TruncationError("fock_oracle_evolve: n_fock = " + std::to_string(n_fock) +
                          " too small for |alpha| = " + std::to_string(a_max));
  const int d = j.dim();
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * n_fock;
  // H / (hbar w) = a^dag a - k J_z (a + a^dag)
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int i = 0; i < d; ++i) {
    const double m = j.m(i);
    const Eigen::Index base = static_cast<Eigen::Index>(i) * n_fock;
    for (int n = 0; n < n_fock; ++n) {
      h(base + n, base + n) = n;
      if (n + 1 < n_fock) {
        const double x = -k * m * std::sqrt(static_cast<double>(n + 1));
        h(base + n + 1, base + n) = x;
        h(base + n, base + n + 1) = x;
      }
    }
  }
  CVector initial = CVector::Zero(dim);
  for (int i = 0; i < d; ++i) initial[static_cast<Eigen::Index>(i) * n_fock] = state[i];

  FockEvolution r{j, n_fock, {}, {}, 0.0, 0.0, 0.0};
  r.joint = wt == 0.0 ? initial : CVector(unitary_from_hermitian(h, wt) * initial);
  r.closed_form = closed_form_joint_state(state, k, wt, n_fock);
  r.norm = r.joint.norm();
  const double cn = r.closed_form.squaredNorm();
  r.fidelity = std::norm(r.closed_form.dot(r.joint)) / (cn * r.joint.squaredNorm());
  for (int i = 0; i < d; ++i) {
    const double w = std::norm(state[i]);
    if (w < 1e-24) continue;
    r.top_occupancy = std::max(r.top_occupancy, std::norm(r.branch(i)[n_fock - 1]) / w);
  }
  if (r.top_occupancy > 1e-8)
    throw TruncationError("fock_oracle_evolve: top Fock level occupancy " + std::to_string(r.top_occupancy) +
                          " exceeds 1e-8");
  return r;
}

inline FockEvolution fock_oracle_evolve(const SpinState& state, const GsgParams& p, double t, int n_fock) {
  return fock_oracle_evolve(state, p.k, p.trap_frequency * t, n_fock);
}

}  // namespace gsg
