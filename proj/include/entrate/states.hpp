#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "entrate/linalg.hpp"
#include "entrate/spectral.hpp"

namespace entrate {

/// Bipartition of a joint space, basis index s * bath + b.
struct Dims {
  Index system = 0;
  Index bath = 0;
  Index total() const { return system * bath; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Pure state vector or density matrix. Construction validates the state
/// invariants; instances are immutable values.
class QuantumState {
 public:
  enum class Kind { Pure, Density };

  static QuantumState pure(CVector psi, std::optional<Dims> dims = std::nullopt);
  static QuantumState density(CMatrix rho, std::optional<Dims> dims = std::nullopt);

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::Pure; }
  Index dim() const { return kind_ == Kind::Pure ? psi_.size() : rho_.rows(); }
  const std::optional<Dims>& dims() const { return dims_; }

  /// Only valid for pure states.
  const CVector& vector() const;
  /// |psi><psi| for pure states, the stored matrix otherwise.
  CMatrix density_matrix() const;

 private:
  QuantumState() = default;
  Kind kind_ = Kind::Pure;
  CVector psi_;
  CMatrix rho_;
  std::optional<Dims> dims_;
};

/// Orthonormal basis of a subspace H_R of the joint space.
struct SubspaceProjector {
  CMatrix basis;  // d x d_R, orthonormal columns

  Index dim_r() const { return basis.cols(); }
  CMatrix projector() const { return basis * basis.adjoint(); }

  static SubspaceProjector full(Index d);
  /// Span of the energy blocks with lo <= E_n <= hi.
  static SubspaceProjector energy_window(const SpectralData& sd, double lo, double hi);
  static SubspaceProjector from_basis(CMatrix basis);
};

QuantumState haar_random_state(const SubspaceProjector& subspace, std::uint64_t seed,
                               std::optional<Dims> dims = std::nullopt);
/// Same draw as above from a caller-owned stream.
QuantumState haar_random_state(const SubspaceProjector& subspace, Rng& rng,
                               std::optional<Dims> dims = std::nullopt);

enum class Keep { System, Bath };

QuantumState partial_trace(const QuantumState& state, Keep keep);
/// Tr_B or Tr_S of an arbitrary operator on the joint space.
CMatrix partial_trace(const CMatrix& op, Dims dims, Keep keep);
/// Tr_B |a><b| computed from the vectors directly, O(d_S^2 d_B).
CMatrix partial_trace_outer(const CVector& a, const CVector& b, Dims dims);

/// Tr[P_n rho] for every energy block.
RVector energy_weights(const QuantumState& initial, const SpectralData& sd);

/// 1 / sum_n Tr[P_n rho]^2.
double effective_dimension(const QuantumState& initial, const SpectralData& sd);

/// sum_n P_n rho P_n, the infinite-time average.
QuantumState dephased_state(const QuantumState& initial, const SpectralData& sd);

double von_neumann_entropy(const QuantumState& rho, double floor = 1e-12);
double von_neumann_entropy(const CMatrix& rho, double floor = 1e-12);

QuantumState read_state(std::istream& in);
void write_state(std::ostream& out, const QuantumState& state);
QuantumState load_state(const std::string& path);
void save_state(const std::string& path, const QuantumState& state);

}  // namespace entrate
