#pragma once

// Two-interferometer gravitational phases and bipartite entanglement measures.
//
// Bipartite index convention: basis vector |m>_A |n>_B sits at a * d + b, where a
// and b are the Dicke indices of m and n. rho_{m,m',n,n'} = rho(a d + b, a' d + b').

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gsg/constants.hpp"
#include "gsg/errors.hpp"
#include "gsg/linalg.hpp"
#include "gsg/spin_states.hpp"

namespace gsg {

enum class Geometry { linear, parallel };
enum class ParallelDistance { euclidean, literal };

inline const char* to_string(Geometry g) { return g == Geometry::linear ? "linear" : "parallel"; }
inline const char* to_string(ParallelDistance p) { return p == ParallelDistance::euclidean ? "euclidean" : "literal"; }

struct ExperimentConfig {
  Geometry geometry = Geometry::parallel;
  Spin j = Spin::from_twice(1);
  double mass_a = 1e-14;    // kg
  double mass_b = 1e-14;    // kg
  double delta_x = 2.5e-4;  // m
  double delta_s = 5e-5;    // m
  double tau = 2.0;         // s
  double k = 0.0;
  ParallelDistance parallel_distance = ParallelDistance::euclidean;
  Constants constants = codata2018;

  void validate() const {
    if (!(delta_s > 0.0)) throw DomainError("ExperimentConfig: delta_s must be positive");
    if (!(delta_x >= 0.0)) throw DomainError("ExperimentConfig: delta_x must be non-negative");
    if (!(tau >= 0.0)) throw DomainError("ExperimentConfig: tau must be non-negative");
    if (!(mass_a > 0.0) || !(mass_b > 0.0)) throw DomainError("ExperimentConfig: masses must be positive");
  }

  ExperimentConfig with_spin(Spin s) const {
    ExperimentConfig c = *this;
    c.j = s;
    return c;
  }
  ExperimentConfig with_tau(double t) const {
    ExperimentConfig c = *this;
    c.tau = t;
    return c;
  }

  /// G M_A M_B tau / hbar, in rad m.
  double phase_scale() const { return constants.gravitational * mass_a * mass_b * tau / constants.hbar; }
};

/// phi_{m,n} in radians; row m (system A), column n (system B).
struct PhaseMatrix {
  Spin j;
  RMatrix phi;
};

/// Distance between branch m of A and branch n of B used by the phase formula.
inline double branch_distance(const ExperimentConfig& c, double m, double n) {
  if (c.geometry == Geometry::linear) return std::abs(c.delta_s + c.delta_x * (c.j.twice() + m - n));
  const double dm = m - n;
  const double sq = c.delta_s * c.delta_s + c.delta_x * c.delta_x * dm * dm;
  // Literal mode keeps the squared expression, read against a 1 m reference length.
  return c.parallel_distance == ParallelDistance::euclidean ? std::sqrt(sq) : sq / 1.0;
}

inline PhaseMatrix phase_matrix(const ExperimentConfig& c) {
  c.validate();
  const int d = c.j.dim();
  const double scale = c.phase_scale();
  PhaseMatrix p{c.j, RMatrix::Zero(d, d)};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const double dist = branch_distance(c, c.j.m(a), c.j.m(b));
      if (!(dist > 0.0)) throw DomainError("phase_matrix: vanishing branch distance");
      p.phi(a, b) = scale / dist;
    }
  return p;
}

/// Pure joint spin amplitudes psi_{m,n} (row m of A, column n of B).
struct BipartiteState {
  Spin j;
  CMatrix psi;
};

/// psi_{m,n} = c_m^A c_n^B e^{i 2 pi k^2 (m^2 - n^2)} e^{-i phi_{m,n}}.
inline BipartiteState joint_state(const SpinState& a, const SpinState& b, const PhaseMatrix& phases, double k) {
  if (!(a.spin() == b.spin()) || !(a.spin() == phases.j))
    throw DimensionMismatchError("joint_state: spin mismatch between inputs");
  const Spin j = a.spin();
  const int d = j.dim();
  CMatrix psi(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const double mm = j.m(m), nn = j.m(n);
      const double ph = 2.0 * pi * k * k * (mm * mm - nn * nn) - phases.phi(m, n);
      psi(m, n) = a[m] * b[n] * std::exp(I * ph);
    }
  psi /= psi.norm();
  return {j, std::move(psi)};
}

/// Density matrix over the (2j+1)^2-dimensional bipartite space.
class DensityMatrix {
 public:
  DensityMatrix(Spin j, CMatrix rho) : j_(j), rho_(std::move(rho)) {
    const Eigen::Index dd = static_cast<Eigen::Index>(j.dim()) * j.dim();
    if (rho_.rows() != dd || rho_.cols() != dd)
      throw DimensionMismatchError("DensityMatrix: expected a " + std::to_string(dd) + "-dimensional square matrix");
  }

  static DensityMatrix from_pure(const BipartiteState& s) {
    const int d = s.j.dim();
    CVector v(static_cast<Eigen::Index>(d) * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) v[a * d + b] = s.psi(a, b);
    return DensityMatrix(s.j, v * v.adjoint());
  }

  Spin spin() const noexcept { return j_; }
  int local_dim() const noexcept { return j_.dim(); }
  const CMatrix& matrix() const noexcept { return rho_; }

  /// rho_{m,m',n,n'} by Dicke indices.
  cplx at(int m, int mp, int n, int np) const {
    const int d = j_.dim();
    return rho_(m * d + n, mp * d + np);
  }

 private:
  Spin j_;
  CMatrix rho_;
};

enum class Subsystem { A, B };

inline CMatrix reduced_density(const BipartiteState& s, Subsystem which) {
  if (which == Subsystem::A) return s.psi * s.psi.adjoint();
  return s.psi.transpose() * s.psi.conjugate();
}

/// Partial trace of a mixed bipartite state.
inline CMatrix reduced_density(const DensityMatrix& rho, Subsystem which) {
  const int d = rho.local_dim();
  CMatrix out = CMatrix::Zero(d, d);
  for (int x = 0; x < d; ++x)
    for (int xp = 0; xp < d; ++xp)
      for (int t = 0; t < d; ++t)
        out(x, xp) += which == Subsystem::A ? rho.at(x, xp, t, t) : rho.at(t, t, x, xp);
  return out;
}

/// S = -Tr[rho ln rho]; eigenvalues below 1e-14 contribute nothing.
inline double von_neumann_entropy(const CMatrix& rho) {
  if (!is_hermitian(rho, 1e-10)) throw NumericalError("von_neumann_entropy: input is not Hermitian");
  const RVector ev = hermitian_eigenvalues(rho);
  double s = 0.0;
  for (double l : ev)
    if (l > 1e-14) s -= l * std::log(l);
  return std::max(0.0, s);
}

/// Squared Schmidt coefficients lambda_i (descending), summing to one.
inline RVector schmidt_coefficients(const BipartiteState& s) {
  Eigen::JacobiSVD<CMatrix> svd(s.psi);
  RVector l = svd.singularValues().cwiseAbs2();
  return l / l.sum();
}

/// Entropy of either reduced state, from the Schmidt spectrum.
inline double entanglement_entropy(const BipartiteState& s) {
  double out = 0.0;
  for (double l : schmidt_coefficients(s))
    if (l > 1e-14) out -= l * std::log(l);
  return std::max(0.0, out);
}

/// rho^{PT}_{m,m',n,n'} = rho_{m',m,n,n'} (transpose on A).
inline CMatrix partial_transpose(const DensityMatrix& rho) {
  const int d = rho.local_dim();
  const CMatrix& r = rho.matrix();
  CMatrix out(r.rows(), r.cols());
  for (int m = 0; m < d; ++m)
    for (int mp = 0; mp < d; ++mp)
      out.block(static_cast<Eigen::Index>(m) * d, static_cast<Eigen::Index>(mp) * d, d, d) =
          r.block(static_cast<Eigen::Index>(mp) * d, static_cast<Eigen::Index>(m) * d, d, d);
  return out;
}

/// Eigenvalues below this count as negative: 1e-10 times the local dimension.
inline double negativity_threshold(Spin j) { return -1e-10 * j.dim(); }

/// Pure-state negativity -sum_{i<j} sqrt(lambda_i lambda_j). Pairs whose partial-transpose
/// eigenvalue would sit above the noise cut are skipped, as in the mixed-state path.
inline double negativity_pure(const BipartiteState& s) {
  const RVector r = schmidt_coefficients(s).cwiseMax(0.0).cwiseSqrt();
  const double cut = -negativity_threshold(s.j);
  double sum = 0.0;
  for (Eigen::Index a = 0; a < r.size(); ++a)
    for (Eigen::Index b = a + 1; b < r.size(); ++b)
      if (r[a] * r[b] > cut) sum += r[a] * r[b];
  return -sum;
}

struct WitnessReport {
  double negativity = 0.0;               // sum of negative PT eigenvalues, <= 0
  std::vector<double> negative_eigenvalues;
  CMatrix projector;                     // P = sum |lambda><lambda| over negative eigenvalues
  CMatrix witness;                       // W = P^{PT}; Tr(W rho) = negativity
  RMatrix gellmann;                      // W = sum c_ab L_a (x) L_b, when requested
};

struct WitnessOptions {
  bool witness = true;
  bool gellmann = false;
};

/// Generalized Gell-Mann basis element as a sparse list of entries.
struct GellMannElement {
  struct Entry {
    int row, col;
    cplx value;
  };
  std::vector<Entry> entries;
};

/// Ordering: sqrt(2/d) I, symmetric (k<l), antisymmetric (k<l), diagonal l = 1..d-1.
/// All elements satisfy Tr(L_a L_b) = 2 delta_ab.
inline std::vector<GellMannElement> gellmann_basis(int d) {
  std::vector<GellMannElement> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  GellMannElement id;
  for (int i = 0; i < d; ++i) id.entries.push_back({i, i, std::sqrt(2.0 / d)});
  basis.push_back(std::move(id));
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) basis.push_back({{{k, l, 1.0}, {l, k, 1.0}}});
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) basis.push_back({{{k, l, -I}, {l, k, I}}});
  for (int l = 1; l < d; ++l) {
    GellMannElement g;
    const double c = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int i = 0; i < l; ++i) g.entries.push_back({i, i, c});
    g.entries.push_back({l, l, -l * c});
    basis.push_back(std::move(g));
  }
  return basis;
}

inline CMatrix to_dense(const GellMannElement& g, int d) {
  CMatrix m = CMatrix::Zero(d, d);
  for (const auto& e : g.entries) m(e.row, e.col) += e.value;
  return m;
}

/// Real coefficients c_a = Tr(H L_a) / 2 with H = sum c_a L_a.
inline RVector gellmann_decompose(const CMatrix& h) {
  if (!is_hermitian(h, 1e-10)) throw DomainError("gellmann_decompose: input is not Hermitian");
  const int d = static_cast<int>(h.rows());
  const auto basis = gellmann_basis(d);
  RVector c(basis.size());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    cplx tr = 0.0;
    for (const auto& e : basis[a].entries) tr += h(e.col, e.row) * e.value;
    c[static_cast<Eigen::Index>(a)] = 0.5 * tr.real();
  }
  return c;
}

inline CMatrix gellmann_reconstruct(const RVector& coeffs, int d) {
  const auto basis = gellmann_basis(d);
  if (coeffs.size() != static_cast<Eigen::Index>(basis.size()))
    throw DimensionMismatchError("gellmann_reconstruct: expected d^2 coefficients");
  CMatrix h = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (const auto& e : basis[a].entries) h(e.row, e.col) += coeffs[static_cast<Eigen::Index>(a)] * e.value;
  return h;
}

/// Coefficients of a bipartite operator on the product basis: W = sum c_ab L_a (x) L_b,
/// c_ab = Tr(W L_a (x) L_b) / 4.
inline RMatrix gellmann_decompose_bipartite(const CMatrix& w, int d) {
  if (w.rows() != static_cast<Eigen::Index>(d) * d || w.cols() != w.rows())
    throw DimensionMismatchError("gellmann_decompose_bipartite: operator dimension must be d^2");
  if (!is_hermitian(w, 1e-10)) throw DomainError("gellmann_decompose_bipartite: input is not Hermitian");
  const auto basis = gellmann_basis(d);
  const Eigen::Index nb = static_cast<Eigen::Index>(basis.size());
  RMatrix c(nb, nb);
  for (Eigen::Index a = 0; a < nb; ++a)
    for (Eigen::Index b = 0; b < nb; ++b) {
      cplx tr = 0.0;
      for (const auto& ea : basis[a].entries)
        for (const auto& eb : basis[b].entries)
          tr += w(static_cast<Eigen::Index>(ea.col) * d + eb.col, static_cast<Eigen::Index>(ea.row) * d + eb.row) *
                ea.value * eb.value;
      c(a, b) = 0.25 * tr.real();
    }
  return c;
}

inline CMatrix gellmann_reconstruct_bipartite(const RMatrix& c, int d) {
  const auto basis = gellmann_basis(d);
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  CMatrix w = CMatrix::Zero(dd, dd);
  for (Eigen::Index a = 0; a < c.rows(); ++a)
    for (Eigen::Index b = 0; b < c.cols(); ++b) {
      if (c(a, b) == 0.0) continue;
      for (const auto& ea : basis[a].entries)
        for (const auto& eb : basis[b].entries)
          w(static_cast<Eigen::Index>(ea.row) * d + eb.row, static_cast<Eigen::Index>(ea.col) * d + eb.col) +=
              c(a, b) * ea.value * eb.value;
    }
  return w;
}

/// Sum of negative eigenvalues of rho^{PT}, with the witness built from their eigenvectors.
inline WitnessReport negativity(const DensityMatrix& rho, const WitnessOptions& opts = {}) {
  const CMatrix pt = partial_transpose(rho);
  const double cut = negativity_threshold(rho.spin());
  WitnessReport rep;
  const Eigen::Index dim = pt.rows();
  if (!opts.witness && !opts.gellmann) {
    for (double l : hermitian_eigenvalues(pt))
      if (l < cut) rep.negative_eigenvalues.push_back(l);
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(pt);
    if (es.info() != Eigen::Success) throw NumericalError("negativity: eigensolver failed");
    rep.projector = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double l = es.eigenvalues()[i];
      if (l >= cut) continue;
      rep.negative_eigenvalues.push_back(l);
      rep.projector += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    rep.witness = partial_transpose(DensityMatrix(rho.spin(), rep.projector));
    if (opts.gellmann) rep.gellmann = gellmann_decompose_bipartite(rep.witness, rho.local_dim());
  }
  for (double l : rep.negative_eigenvalues) rep.negativity += l;
  return rep;
}

struct CasimirPolder {
  double v_cp = 0.0;     // J, attractive (<= 0)
  double v_grav = 0.0;   // G M_A M_B / r, J
  double ratio = 0.0;    // |V_grav / V_CP|
  bool outside_far_field = false;  // r < 5 R
};

/// V_CP = -(23 hbar c / 4 pi) (R^6 / r^7) ((eps - 1)/(eps + 2))^2 versus Newtonian G M_A M_B / r.
inline CasimirPolder casimir_polder_ratio(double radius, double permittivity, double r, double mass_a, double mass_b,
                                          const Constants& c = codata2018) {
  if (!(radius > 0.0)) throw DomainError("casimir_polder_ratio: radius must be positive");
  if (!(r > 2.0 * radius)) throw DomainError("casimir_polder_ratio: separation must exceed 2R");
  const double pol = (permittivity - 1.0) / (permittivity + 2.0);
  CasimirPolder out;
  out.v_cp = -(23.0 * c.hbar * c.speed_of_light / (4.0 * pi)) * std::pow(radius, 6) / std::pow(r, 7) * pol * pol;
  out.v_grav = c.gravitational * mass_a * mass_b / r;
  out.ratio = out.v_cp == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(out.v_grav / out.v_cp);
  out.outside_far_field = r < 5.0 * radius;
  return out;
}

/// Radius of a homogeneous sphere of the given mass and density.
inline double sphere_radius(double mass, double density) { return std::cbrt(3.0 * mass / (4.0 * pi * density)); }

}  // namespace gsg
