#pragma once

// Spin-state families in the Dicke basis of a fixed spin j.
//
// Amplitudes are stored in ascending m: index 0 is m = -j, index 2j is m = +j.
// The coherent state at theta = 0 is |m = -j>, at theta = pi it is |m = +j>.

#include <cmath>
#include <string>
#include <vector>

#include "gsg/constants.hpp"
#include "gsg/errors.hpp"
#include "gsg/linalg.hpp"

namespace gsg {

/// Total angular momentum j, held as the integer 2j.
class Spin {
 public:
  static Spin from_twice(int twice_j) {
    if (twice_j < 1) throw InvalidSpinError("spin j must be >= 1/2, got 2j = " + std::to_string(twice_j));
    return Spin(twice_j);
  }

  static Spin from_value(double j) {
    const double twice = 2.0 * j;
    const double rounded = std::round(twice);
    if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-9 || rounded < 1.0)
      throw InvalidSpinError("spin j must be a positive multiple of 1/2, got " + std::to_string(j));
    return Spin(static_cast<int>(rounded));
  }

  int twice() const noexcept { return twice_; }
  double value() const noexcept { return 0.5 * twice_; }
  int dim() const noexcept { return twice_ + 1; }
  /// Magnetic quantum number at Dicke index i.
  double m(int i) const noexcept { return i - 0.5 * twice_; }
  bool is_integer() const noexcept { return twice_ % 2 == 0; }

  friend bool operator==(Spin a, Spin b) noexcept { return a.twice_ == b.twice_; }

 private:
  explicit Spin(int twice) : twice_(twice) {}
  int twice_;
};

inline std::string to_string(Spin j) {
  return j.is_integer() ? std::to_string(j.twice() / 2) : std::to_string(j.twice()) + "/2";
}

/// Normalized amplitude vector over the Dicke basis.
class SpinState {
 public:
  /// Normalizes `amplitudes`; the global phase is left untouched.
  SpinState(Spin j, CVector amplitudes) : j_(j), amps_(std::move(amplitudes)) {
    if (amps_.size() != j.dim())
      throw DimensionMismatchError("SpinState: expected " + std::to_string(j.dim()) + " amplitudes, got " +
                                   std::to_string(amps_.size()));
    const double n = amps_.norm();
    if (!std::isfinite(n) || n < 1e-300) throw DomainError("SpinState: amplitudes have zero or non-finite norm");
    amps_ /= n;
  }

  Spin spin() const noexcept { return j_; }
  int dim() const noexcept { return j_.dim(); }
  const CVector& amplitudes() const noexcept { return amps_; }
  cplx operator[](int i) const { return amps_[i]; }

  /// P_s(m) = |c_m|^2 in Dicke order.
  RVector probabilities() const { return amps_.cwiseAbs2(); }

  /// Copy with the first non-negligible amplitude rotated onto the positive real axis.
  SpinState with_canonical_phase() const {
    const double scale = amps_.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i]) > 1e-12 * scale) {
        const cplx phase = std::conj(amps_[i]) / std::abs(amps_[i]);
        CVector out = amps_ * phase;
        out[i] = std::abs(amps_[i]);
        return SpinState(j_, std::move(out));
      }
    }
    return *this;
  }

 private:
  Spin j_;
  CVector amps_;
};

/// |<a|b>|
inline double overlap_modulus(const SpinState& a, const SpinState& b) {
  if (!(a.spin() == b.spin())) throw DimensionMismatchError("overlap_modulus: spin mismatch");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

/// Dense J_x, J_y, J_z, J_+, J_- in the ascending Dicke basis (hbar = 1).
struct SpinOperatorSet {
  Spin j;
  CMatrix jx, jy, jz, jplus, jminus;
};

inline SpinOperatorSet spin_operators(Spin j) {
  const int d = j.dim();
  const double jv = j.value();
  CMatrix jp = CMatrix::Zero(d, d);
  CMatrix jz = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = j.m(i);
    jz(i, i) = m;
    if (i + 1 < d) jp(i + 1, i) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
  }
  CMatrix jm = jp.adjoint();
  CMatrix jx = 0.5 * (jp + jm);
  CMatrix jy = (jp - jm) / (2.0 * I);
  return {j, std::move(jx), std::move(jy), std::move(jz), std::move(jp), std::move(jm)};
}

inline double expectation(const SpinState& s, const CMatrix& op) {
  return std::real(s.amplitudes().dot(op * s.amplitudes()));
}

/// Variances of the spin components in the plane orthogonal to the mean spin
/// vector, returned as {min, max} over directions in that plane.
inline std::pair<double, double> transverse_variances(const SpinState& s) {
  const auto ops = spin_operators(s.spin());
  const CMatrix* comp[3] = {&ops.jx, &ops.jy, &ops.jz};
  Eigen::Vector3d mean;
  for (int a = 0; a < 3; ++a) mean[a] = expectation(s, *comp[a]);
  Eigen::Matrix3d cov;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const CMatrix sym = 0.5 * ((*comp[a]) * (*comp[b]) + (*comp[b]) * (*comp[a]));
      cov(a, b) = expectation(s, sym) - mean[a] * mean[b];
    }
  Eigen::Vector3d n = mean.norm() > 1e-12 ? Eigen::Vector3d(mean.normalized()) : Eigen::Vector3d::UnitZ();
  // Orthonormal basis {u, v} of the transverse plane.
  Eigen::Vector3d helper = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  Eigen::Vector3d u = n.cross(helper).normalized();
  Eigen::Vector3d v = n.cross(u);
  Eigen::Matrix2d t;
  t << u.dot(cov * u), u.dot(cov * v), v.dot(cov * u), v.dot(cov * v);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(t);
  return {es.eigenvalues()[0], es.eigenvalues()[1]};
}

inline SpinState ground_state(Spin j) {
  CVector c = CVector::Zero(j.dim());
  c[0] = 1.0;
  return SpinState(j, std::move(c));
}

inline SpinState ground_state(double j) { return ground_state(Spin::from_value(j)); }

/// Coherent spin state pointing along (theta, phi), with
/// c_m ~ mu^(j+m) sqrt(C(2j, j+m)), mu = e^{i phi} tan(theta/2).
inline SpinState coherent_spin_state(Spin j, double theta, double phi) {
  if (!(theta >= 0.0 && theta <= pi)) throw DomainError("coherent_spin_state: theta must lie in [0, pi]");
  if (!std::isfinite(phi)) throw DomainError("coherent_spin_state: phi must be finite");
  const int n = j.twice();
  CVector c = CVector::Zero(n + 1);
  if (theta == pi) {
    c[n] = 1.0;
    return SpinState(j, std::move(c));
  }
  // Normalized form of mu^k sqrt(C(n,k)): sqrt(C(n,k)) sin^k(theta/2) cos^(n-k)(theta/2).
  const double s = std::sin(0.5 * theta);
  const double co = std::cos(0.5 * theta);
  for (int k = 0; k <= n; ++k) {
    const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double mag = std::exp(0.5 * log_binom) * std::pow(s, k) * std::pow(co, n - k);
    c[k] = std::polar(mag, phi * k);
  }
  return SpinState(j, std::move(c)).with_canonical_phase();
}

inline SpinState coherent_spin_state(double j, double theta, double phi) {
  return coherent_spin_state(Spin::from_value(j), theta, phi);
}

/// Normalized sum of two coherent states; the normalization uses their exact overlap.
inline SpinState css_superposition(Spin j, double theta1, double phi1, double theta2, double phi2) {
  const SpinState a = coherent_spin_state(j, theta1, phi1);
  const SpinState b = coherent_spin_state(j, theta2, phi2);
  const double norm2 = 2.0 + 2.0 * std::real(a.amplitudes().dot(b.amplitudes()));
  if (norm2 < 1e-24) throw DomainError("css_superposition: the two coherent states cancel");
  CVector v = (a.amplitudes() + b.amplitudes()) / std::sqrt(norm2);
  return SpinState(j, std::move(v)).with_canonical_phase();
}

enum class Twisting { one_axis, two_axis };

inline const char* to_string(Twisting t) { return t == Twisting::one_axis ? "one_axis" : "two_axis"; }

/// Hermitian generator H of the twisting unitary exp(-i chi H).
/// One-axis: J_y^2. Two-axis: -i (J_+^2 - J_-^2).
inline CMatrix twisting_generator(Spin j, Twisting mode) {
  const auto ops = spin_operators(j);
  if (mode == Twisting::one_axis) return ops.jy * ops.jy;
  return -I * (ops.jplus * ops.jplus - ops.jminus * ops.jminus);
}

inline SpinState squeezed_spin_state(Spin j, double chi, double theta, double phi, Twisting mode) {
  const SpinState base = coherent_spin_state(j, theta, phi);
  if (chi == 0.0) return base;
  if (!std::isfinite(chi)) throw DomainError("squeezed_spin_state: chi must be finite");
  const CMatrix u = unitary_from_hermitian(twisting_generator(j, mode), chi);
  return SpinState(j, u * base.amplitudes()).with_canonical_phase();
}

/// R(alpha, beta, gamma) = exp(-i alpha J_z) exp(-i beta J_y) exp(-i gamma J_z).
/// The global phase of the result is not normalized, so the SU(2) sign is visible.
inline SpinState rotate(const SpinState& state, double alpha, double beta, double gamma) {
  const Spin j = state.spin();
  const int d = j.dim();
  CVector v = state.amplitudes();
  for (int i = 0; i < d; ++i) v[i] *= std::exp(-I * gamma * j.m(i));
  if (beta != 0.0) v = unitary_from_hermitian(spin_operators(j).jy, beta) * v;
  for (int i = 0; i < d; ++i) v[i] *= std::exp(-I * alpha * j.m(i));
  return SpinState(j, std::move(v));
}

/// Q(theta, phi) = |<theta, phi|psi>|^2 on a uniform grid:
/// theta_i = pi i / (n_theta - 1), phi_k = 2 pi k / n_phi.
struct HusimiField {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> thetas;
  std::vector<double> phis;
  std::vector<double> q;  // theta-major, q[i * n_phi + k]

  double at(int i, int k) const { return q[static_cast<std::size_t>(i) * n_phi + k]; }

  /// (2j+1)/(4 pi) * integral of Q sin(theta); trapezoid in theta, periodic sum in phi.
  double normalization(Spin j) const {
    const double dth = pi / (n_theta - 1);
    const double dph = 2.0 * pi / n_phi;
    double total = 0.0;
    for (int i = 0; i < n_theta; ++i) {
      const double w = (i == 0 || i == n_theta - 1) ? 0.5 : 1.0;
      double row = 0.0;
      for (int k = 0; k < n_phi; ++k) row += at(i, k);
      total += w * std::sin(thetas[i]) * row;
    }
    return j.dim() / (4.0 * pi) * total * dth * dph;
  }
};

inline HusimiField husimi_q(const SpinState& state, int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2) throw DomainError("husimi_q: grid needs at least 2 points per axis");
  const Spin j = state.spin();
  const int d = j.dim();
  HusimiField f;
  f.n_theta = n_theta;
  f.n_phi = n_phi;
  f.thetas.resize(n_theta);
  f.phis.resize(n_phi);
  f.q.resize(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) f.thetas[i] = i == n_theta - 1 ? pi : pi * i / (n_theta - 1);
  for (int k = 0; k < n_phi; ++k) f.phis[k] = 2.0 * pi * k / n_phi;
  const CVector& psi = state.amplitudes();
  for (int i = 0; i < n_theta; ++i) {
    // Coherent amplitudes at phi = 0 are real; the phi dependence is e^{i phi k}.
    const RVector a = coherent_spin_state(j, f.thetas[i], 0.0).amplitudes().real();
    for (int k = 0; k < n_phi; ++k) {
      cplx acc = 0.0;
      for (int m = 0; m < d; ++m) acc += a[m] * std::exp(-I * (f.phis[k] * m)) * psi[m];
      f.q[static_cast<std::size_t>(i) * n_phi + k] = std::min(1.0, std::norm(acc));
    }
  }
  return f;
}

}  // namespace gsg
