#pragma once

#include <complex>

#include <Eigen/Dense>

#include "gsg/errors.hpp"

namespace gsg {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr cplx I{0.0, 1.0};

/// Largest elementwise |A - A^dagger|.
inline double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const CMatrix& a, double tol = 1e-10) {
  return a.size() == 0 || hermiticity_defect(a) <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

/// exp(-i * s * H) for Hermitian H, through the spectral decomposition of H.
inline CMatrix unitary_from_hermitian(const CMatrix& h, double s) {
  if (!is_hermitian(h)) throw NumericalError("unitary_from_hermitian: generator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("unitary_from_hermitian: eigensolver failed");
  CVector phases = (es.eigenvalues().cast<cplx>() * (-I * s)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Ascending eigenvalues of a Hermitian matrix.
inline RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_eigenvalues: eigensolver failed");
  return es.eigenvalues();
}

}  // namespace gsg
