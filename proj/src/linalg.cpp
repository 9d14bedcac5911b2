#include "entrate/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace entrate {

void require_hermitian(const CMatrix& x, const std::string& what) {
  if (x.rows() != x.cols()) {
    throw Error(what + ": matrix is not square");
  }
  if (!is_hermitian(x)) {
    throw Error(what + ": non-Hermitian part");
  }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

RVector hermitian_eigenvalues(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error("eigensolver failed to converge");
  }
  return es.eigenvalues();
}

Norms norms(const CMatrix& x) {
  Norms n;
  if (x.size() == 0) return n;
  n.hs = x.norm();
  if (x.rows() == x.cols() && is_hermitian(x)) {
    const RVector ev = hermitian_eigenvalues(x);
    n.trace = ev.cwiseAbs().sum();
    n.op = ev.cwiseAbs().maxCoeff();
  } else {
    Eigen::JacobiSVD<CMatrix> svd(x);
    const RVector sv = svd.singularValues();
    n.trace = sv.sum();
    n.op = sv.size() > 0 ? sv(0) : 0.0;
  }
  return n;
}

double norm_prime(const CMatrix& x) {
  require_hermitian(x, "norm_prime");
  if (x.size() == 0) return 0.0;
  const RVector ev = hermitian_eigenvalues(x);
  return 0.5 * (ev(ev.size() - 1) - ev(0));
}

CMatrix random_hermitian(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double off = std::sqrt(0.5);
  CMatrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    h(i, i) = normal(rng);
    for (Index j = i + 1; j < n; ++j) {
      const double re = normal(rng) * off;
      const double im = normal(rng) * off;
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  return h;
}

CMatrix random_unitary(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      z(i, j) = Complex(normal(rng), normal(rng));
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix alternating_z(Index n) {
  CMatrix z = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) z(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
  return z;
}

}  // namespace entrate
