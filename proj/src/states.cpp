#include "entrate/states.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "entrate/matrix_io.hpp"

namespace entrate {

QuantumState QuantumState::pure(CVector psi, std::optional<Dims> dims) {
  if (psi.size() == 0) throw Error("pure state: empty vector");
  if (std::abs(psi.norm() - 1.0) > 1e-12) throw Error("pure state: vector is not normalized");
  if (dims && dims->total() != psi.size()) throw Error("pure state: dims do not match vector length");
  QuantumState s;
  s.kind_ = Kind::Pure;
  s.psi_ = std::move(psi);
  s.dims_ = dims;
  return s;
}

QuantumState QuantumState::density(CMatrix rho, std::optional<Dims> dims) {
  if (rho.rows() == 0 || rho.rows() != rho.cols()) throw Error("density matrix: not square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw Error("density matrix: not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10) throw Error("density matrix: trace is not 1");
  if (hermitian_eigenvalues(rho)(0) < -1e-10) throw Error("density matrix: not positive semidefinite");
  if (dims && dims->total() != rho.rows()) throw Error("density matrix: dims do not match side");
  QuantumState s;
  s.kind_ = Kind::Density;
  s.rho_ = std::move(rho);
  s.dims_ = dims;
  return s;
}

const CVector& QuantumState::vector() const {
  if (kind_ != Kind::Pure) throw Error("state is not pure");
  return psi_;
}

CMatrix QuantumState::density_matrix() const {
  if (kind_ == Kind::Pure) return psi_ * psi_.adjoint();
  return rho_;
}

SubspaceProjector SubspaceProjector::full(Index d) { return {CMatrix::Identity(d, d)}; }

SubspaceProjector SubspaceProjector::energy_window(const SpectralData& sd, double lo, double hi) {
  Index cols = 0;
  for (Index n = 0; n < sd.d_e; ++n) {
    const double e = sd.energies[static_cast<std::size_t>(n)];
    if (e >= lo && e <= hi) cols += sd.degeneracies[static_cast<std::size_t>(n)];
  }
  if (cols == 0) throw Error("energy window contains no eigenvalues");
  CMatrix basis(sd.dim(), cols);
  Index at = 0;
  for (Index n = 0; n < sd.d_e; ++n) {
    const double e = sd.energies[static_cast<std::size_t>(n)];
    if (e >= lo && e <= hi) {
      const Index k = sd.degeneracies[static_cast<std::size_t>(n)];
      basis.middleCols(at, k) = sd.block(n);
      at += k;
    }
  }
  return {std::move(basis)};
}

SubspaceProjector SubspaceProjector::from_basis(CMatrix basis) {
  if (basis.cols() < 1) throw Error("subspace basis is empty");
  const CMatrix gram = basis.adjoint() * basis;
  if ((gram - CMatrix::Identity(gram.rows(), gram.cols())).norm() > 1e-10) {
    throw Error("subspace basis is not orthonormal");
  }
  return {std::move(basis)};
}

QuantumState haar_random_state(const SubspaceProjector& subspace, Rng& rng, std::optional<Dims> dims) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector z(subspace.dim_r());
  for (Index i = 0; i < z.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    z(i) = Complex(re, im);
  }
  CVector psi = subspace.basis * z;
  psi /= psi.norm();
  return QuantumState::pure(std::move(psi), dims);
}

QuantumState haar_random_state(const SubspaceProjector& subspace, std::uint64_t seed,
                               std::optional<Dims> dims) {
  Rng rng(seed);
  return haar_random_state(subspace, rng, dims);
}

namespace {

// Row-major split of the joint index: psi(s * d_B + b) -> A(s, b).
CMatrix as_system_by_bath(const CVector& v, Dims dims) {
  return Eigen::Map<const CMatrix>(v.data(), dims.bath, dims.system).transpose();
}

}  // namespace

CMatrix partial_trace_outer(const CVector& a, const CVector& b, Dims dims) {
  return as_system_by_bath(a, dims) * as_system_by_bath(b, dims).adjoint();
}

CMatrix partial_trace(const CMatrix& op, Dims dims, Keep keep) {
  if (op.rows() != dims.total() || op.cols() != dims.total()) {
    throw Error("partial_trace: operator does not match dims");
  }
  const Index ds = dims.system;
  const Index db = dims.bath;
  if (keep == Keep::System) {
    CMatrix out = CMatrix::Zero(ds, ds);
    for (Index s = 0; s < ds; ++s)
      for (Index t = 0; t < ds; ++t)
        for (Index b = 0; b < db; ++b) out(s, t) += op(s * db + b, t * db + b);
    return out;
  }
  CMatrix out = CMatrix::Zero(db, db);
  for (Index b = 0; b < db; ++b)
    for (Index c = 0; c < db; ++c)
      for (Index s = 0; s < ds; ++s) out(b, c) += op(s * db + b, s * db + c);
  return out;
}

QuantumState partial_trace(const QuantumState& state, Keep keep) {
  if (!state.dims()) throw Error("partial_trace: dimension metadata missing");
  const Dims dims = *state.dims();
  CMatrix reduced;
  if (state.is_pure()) {
    const CMatrix a = as_system_by_bath(state.vector(), dims);
    reduced = keep == Keep::System ? CMatrix(a * a.adjoint()) : CMatrix(a.transpose() * a.conjugate());
  } else {
    reduced = partial_trace(state.density_matrix(), dims, keep);
  }
  // Round-off can leave the diagonal with a tiny imaginary part.
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  return QuantumState::density(std::move(reduced));
}

RVector energy_weights(const QuantumState& initial, const SpectralData& sd) {
  if (initial.dim() != sd.dim()) throw Error("energy_weights: state and spectrum dimensions differ");
  RVector w(sd.d_e);
  if (initial.is_pure()) {
    const CVector c = sd.eigenvectors.adjoint() * initial.vector();
    for (Index n = 0; n < sd.d_e; ++n) {
      w(n) = c.segment(sd.offsets[static_cast<std::size_t>(n)], sd.degeneracies[static_cast<std::size_t>(n)])
                 .squaredNorm();
    }
  } else {
    const CMatrix rho = initial.density_matrix();
    for (Index n = 0; n < sd.d_e; ++n) {
      const auto v = sd.block(n);
      w(n) = (v.adjoint() * rho * v).trace().real();
    }
  }
  return w;
}

double effective_dimension(const QuantumState& initial, const SpectralData& sd) {
  const RVector w = energy_weights(initial, sd);
  if (std::abs(w.sum() - 1.0) > 1e-8) {
    throw Error("effective_dimension: energy weights do not sum to 1 (inconsistent SpectralData)");
  }
  return 1.0 / w.squaredNorm();
}

QuantumState dephased_state(const QuantumState& initial, const SpectralData& sd) {
  if (initial.dim() != sd.dim()) throw Error("dephased_state: state and spectrum dimensions differ");
  const CMatrix rho = initial.density_matrix();
  CMatrix omega = CMatrix::Zero(sd.dim(), sd.dim());
  for (Index n = 0; n < sd.d_e; ++n) {
    const auto v = sd.block(n);
    omega.noalias() += v * (v.adjoint() * rho * v) * v.adjoint();
  }
  omega = 0.5 * (omega + omega.adjoint()).eval();
  return QuantumState::density(std::move(omega), initial.dims());
}

double von_neumann_entropy(const CMatrix& rho, double floor) {
  const RVector r = hermitian_eigenvalues(rho);
  double s = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    if (r(i) > floor) s -= r(i) * std::log(r(i));
  }
  return s;
}

double von_neumann_entropy(const QuantumState& rho, double floor) {
  if (rho.is_pure()) return 0.0;
  return von_neumann_entropy(rho.density_matrix(), floor);
}

// State files: `kind pure|density`, optional `dims <d_S> <d_B>`, then the
// matrix block. Pure states store one entry per row.
QuantumState read_state(std::istream& in) {
  std::string keyword, kind;
  if (!(in >> keyword >> kind) || keyword != "kind") throw Error("state file: expected 'kind' header");
  std::optional<Dims> dims;
  std::string next;
  in >> next;
  if (next == "dims") {
    long long ds = 0, db = 0;
    if (!(in >> ds >> db) || ds < 1 || db < 1) throw Error("state file: malformed 'dims' line");
    dims = Dims{ds, db};
    in >> next;
  }
  long long n = 0;
  if (next != "dim" || !(in >> n) || n <= 0) throw Error("state file: expected 'dim <n>'");
  std::string token;
  if (kind == "pure") {
    CVector psi(n);
    for (Index i = 0; i < n; ++i) {
      if (!(in >> token)) throw Error("state file: too few entries");
      psi(i) = io::parse_complex(token);
    }
    return QuantumState::pure(std::move(psi), dims);
  }
  if (kind == "density") {
    CMatrix rho(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (!(in >> token)) throw Error("state file: too few entries");
        rho(i, j) = io::parse_complex(token);
      }
    return QuantumState::density(std::move(rho), dims);
  }
  throw Error("state file: unknown kind '" + kind + "'");
}

void write_state(std::ostream& out, const QuantumState& state) {
  out << "kind " << (state.is_pure() ? "pure" : "density") << '\n';
  if (state.dims()) out << "dims " << state.dims()->system << ' ' << state.dims()->bath << '\n';
  if (state.is_pure()) {
    out << "dim " << state.dim() << '\n';
    for (Index i = 0; i < state.dim(); ++i) out << io::format_complex(state.vector()(i)) << '\n';
  } else {
    io::write_matrix(out, state.density_matrix());
  }
}

QuantumState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open state file '" + path + "'");
  return read_state(in);
}

void save_state(const std::string& path, const QuantumState& state) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write state file '" + path + "'");
  write_state(out, state);
}

}  // namespace entrate
