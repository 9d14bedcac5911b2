#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entrate/linalg.hpp"

namespace entrate {

/// Joint Hamiltonian on H_S ⊗ H_B with basis index s * d_B + b.
struct JointHamiltonian {
  Index dim_s = 0;
  Index dim_b = 0;
  CMatrix h_s;
  CMatrix h_b;
  CMatrix h_int;
  CMatrix h_total;
  std::uint64_t seed = 0;  // seed used for random parts, 0 when none were drawn

  Index dim() const { return dim_s * dim_b; }
};

enum class HamiltonianModel {
  Explicit,        // h_s, h_b, h_int given (possibly loaded from files)
  RandomGaussian,  // independent Gaussian Hermitian parts, h_int scaled by coupling
  QubitDephasing,  // h_s = σ_z, h_b random, h_int = coupling · σ_z ⊗ B with B random
  Diagonal,        // h_total = diag(energies), carried entirely by h_int
};

struct HamiltonianSpec {
  HamiltonianModel model = HamiltonianModel::RandomGaussian;
  Index dim_s = 2;
  Index dim_b = 2;
  double coupling = 1.0;
  std::uint64_t seed = 0;
  CMatrix h_s;    // Explicit
  CMatrix h_b;    // Explicit
  CMatrix h_int;  // Explicit
  std::vector<double> energies;  // Diagonal
};

JointHamiltonian build_hamiltonian(const HamiltonianSpec& spec);

/// Assembles h_s ⊗ I + I ⊗ h_b + h_int after checking shapes and hermiticity.
JointHamiltonian make_joint_hamiltonian(CMatrix h_s, CMatrix h_b, CMatrix h_int);

/// Distinct eigenvalues of h_total with their eigenspaces. Columns of
/// `eigenvectors` are grouped by block: block n occupies columns
/// [offsets[n], offsets[n] + degeneracies[n]).
struct SpectralData {
  std::vector<double> energies;
  std::vector<Index> degeneracies;
  std::vector<Index> offsets;
  CMatrix eigenvectors;
  RVector column_energies;  // block energy repeated per column
  Index d_e = 0;
  Index d_g = 0;
  double grouping_tol = 0.0;
  bool ambiguous_clusters = false;  // two clusters closer than 10 * grouping_tol

  Index dim() const { return eigenvectors.rows(); }
  auto block(Index n) const {
    return eigenvectors.middleCols(offsets[static_cast<std::size_t>(n)],
                                   degeneracies[static_cast<std::size_t>(n)]);
  }
  CMatrix projector(Index n) const;
  /// E_max - E_min over the distinct energies.
  double spread() const { return energies.empty() ? 0.0 : energies.back() - energies.front(); }
};

/// Default merge tolerance: 1e-9 times the spread, or 1e-9 when the spread is zero.
double default_tolerance(double spread);

SpectralData decompose(const CMatrix& h_total, double grouping_tol);
SpectralData decompose(const JointHamiltonian& h, double grouping_tol);
/// Uses default_tolerance of the raw eigenvalue spread.
SpectralData decompose(const JointHamiltonian& h);

struct GapStructure {
  std::vector<double> gap_values;  // ascending, symmetric under negation
  std::vector<Index> gap_degens;
  Index d_gap_max = 0;
  double delta_min = 0.0;
  double gap_merge_tol = 0.0;

  Index total_count() const;
};

GapStructure gap_structure(const std::vector<double>& energies, double gap_merge_tol);
GapStructure gap_structure(const SpectralData& sd, double gap_merge_tol);
GapStructure gap_structure(const SpectralData& sd);

/// Largest total multiplicity of gaps inside any window [E, E + delta).
Index n_delta(const GapStructure& gs, double delta);

bool is_nonresonant(const GapStructure& gs);

/// h = ||h_s ⊗ I_B + h_int||'.
double effective_h(const JointHamiltonian& h);

}  // namespace entrate
