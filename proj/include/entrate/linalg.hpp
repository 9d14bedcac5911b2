#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace entrate {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Raised when an input violates a documented precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Max-entry deviation from the conjugate transpose, relative to the largest
/// entry magnitude. Zero matrices are Hermitian.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& x) {
  if (x.rows() != x.cols()) return std::numeric_limits<double>::infinity();
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (x - x.adjoint()).cwiseAbs().maxCoeff() / scale;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& x, double tol = 1e-12) {
  return hermiticity_defect(x) <= tol;
}

/// Throws entrate::Error("<what>: non-Hermitian part") when x is not Hermitian.
void require_hermitian(const CMatrix& x, const std::string& what);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Ascending eigenvalues of a Hermitian matrix.
RVector hermitian_eigenvalues(const CMatrix& x);

struct Norms {
  double trace = 0.0;  // Schatten-1
  double hs = 0.0;     // Schatten-2 (Frobenius)
  double op = 0.0;     // largest singular value
};

/// Trace, Hilbert-Schmidt and operator norms. Hermitian inputs take the
/// eigenvalue path; everything else goes through the singular values.
Norms norms(const CMatrix& x);

template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& x) {
  return norms(CMatrix(x)).trace;
}

template <typename Derived>
double hs_norm(const Eigen::MatrixBase<Derived>& x) {
  return x.norm();
}

template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& x) {
  return norms(CMatrix(x)).op;
}

/// min over real c of ||x - c I||, i.e. half the spectral spread.
double norm_prime(const CMatrix& x);

/// Gaussian Hermitian matrix: diagonal N(0,1) reals, off-diagonal complex
/// entries with E|z|^2 = 1.
CMatrix random_hermitian(Index n, Rng& rng);

/// Haar unitary via QR of a complex Ginibre matrix with the phase fix.
CMatrix random_unitary(Index n, Rng& rng);

/// Pauli-Z generalised to side n: diag(+1, -1, +1, ...).
CMatrix alternating_z(Index n);

}  // namespace entrate
