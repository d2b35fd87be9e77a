#pragma once

// Reference implementations used only by the tests. They avoid the library code
// paths on purpose: Pascal-triangle binomials, Taylor scaling-and-squaring
// exponentials, explicit index loops for partial traces, literal constants.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kG = 6.67430e-11;
inline constexpr double kMuB = 9.2740100783e-24;
inline constexpr double kMu0 = 1.25663706212e-6;
inline constexpr double kC = 299792458.0;

inline double binomial(int n, int k) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i)
    for (int r = i; r >= 1; --r) row[r] += row[r - 1];
  return row[k];
}

/// exp(A) by scaling and squaring with a degree-24 Taylor polynomial.
inline CMatrix expm(const CMatrix& a) {
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.25) ++s;
  const CMatrix b = a / std::ldexp(1.0, s);
  CMatrix term = CMatrix::Identity(a.rows(), a.cols());
  CMatrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// Angular momentum matrices from <m+1|J+|m> = sqrt((j - m)(j + m + 1)), ascending m.
struct Spin {
  CMatrix jz, jp, jm, jx, jy;
};

inline Spin spin_matrices(int twice_j) {
  const int d = twice_j + 1;
  const double j = 0.5 * twice_j;
  Spin s;
  s.jz = CMatrix::Zero(d, d);
  s.jp = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = -j + i;
    s.jz(i, i) = m;
    if (i + 1 < d) s.jp(i + 1, i) = std::sqrt((j - m) * (j + m + 1.0));
  }
  s.jm = s.jp.adjoint();
  s.jx = 0.5 * (s.jp + s.jm);
  s.jy = cplx(0.0, -0.5) * (s.jp - s.jm);
  return s;
}

inline CVector ground(int twice_j) {
  CVector v = CVector::Zero(twice_j + 1);
  v[0] = 1.0;
  return v;
}

/// e^{-i theta J_y}|-j> rotated by e^{-i(pi - phi) J_z}: a coherent state along (theta, phi).
inline CVector css_by_rotation(int twice_j, double theta, double phi) {
  const Spin s = spin_matrices(twice_j);
  CVector v = expm(cplx(0.0, -theta) * s.jy) * ground(twice_j);
  return expm(cplx(0.0, -(kPi - phi)) * s.jz) * v;
}

inline double overlap_modulus(const CVector& a, const CVector& b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

/// Partial trace over B of a (d*d)x(d*d) matrix with index a*d + b.
inline CMatrix trace_out_b(const CMatrix& rho, int d) {
  CMatrix out = CMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int ap = 0; ap < d; ++ap)
      for (int b = 0; b < d; ++b) out(a, ap) += rho(a * d + b, ap * d + b);
  return out;
}

inline CMatrix trace_out_a(const CMatrix& rho, int d) {
  CMatrix out = CMatrix::Zero(d, d);
  for (int b = 0; b < d; ++b)
    for (int bp = 0; bp < d; ++bp)
      for (int a = 0; a < d; ++a) out(b, bp) += rho(a * d + b, a * d + bp);
  return out;
}

/// Spectrum of psi psi^dag partially transposed, from Schmidt coefficients s_i:
/// {s_i^2} together with {+s_i s_j, -s_i s_j} for i < j.
inline std::vector<double> pt_spectrum_from_schmidt(const std::vector<double>& s, int d) {
  std::vector<double> out;
  for (double x : s) out.push_back(x * x);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t k = i + 1; k < s.size(); ++k) {
      out.push_back(s[i] * s[k]);
      out.push_back(-s[i] * s[k]);
    }
  while (static_cast<int>(out.size()) < d * d) out.push_back(0.0);
  std::sort(out.begin(), out.end());
  return out;
}

inline double shannon(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 1e-15) s -= x * std::log(x);
  return s;
}

/// Seeded generators for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  CVector state(int d) {
    CVector v(d);
    for (int i = 0; i < d; ++i) v[i] = cplx(normal(), normal());
    return v / v.norm();
  }

  CMatrix hermitian(int d) {
    CMatrix a(d, d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) a(i, k) = cplx(normal(), normal());
    return 0.5 * (a + a.adjoint());
  }

  /// Random density matrix of the given rank.
  CMatrix density(int d, int rank) {
    CMatrix g(d, rank);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < rank; ++k) g(i, k) = cplx(normal(), normal());
    CMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
