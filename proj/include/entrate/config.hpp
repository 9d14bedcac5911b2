#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entrate/bounds.hpp"
#include "entrate/spectral.hpp"

namespace entrate {

/// Raised for invalid configurations (CLI exit status 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat key-value experiment description. Energies are in arbitrary units
/// with hbar = 1; times are in inverse energy units.
struct ExperimentConfig {
  // Hamiltonian
  std::string model = "random";  // random | dephasing | file | diagonal
  double coupling = 1.0;          // λ scaling h_int (random), g (dephasing)
  std::optional<std::uint64_t> hamiltonian_seed;  // default: derived from master_seed
  std::string h_s_file;
  std::string h_b_file;
  std::string h_int_file;
  std::vector<double> energies;  // diagonal model

  Index d_s = 2;
  Index d_b = 16;
  std::vector<Index> d_b_list;  // sweep only

  std::string subspace = "full";  // full | energy_window
  double subspace_energy_min = 0.0;
  double subspace_energy_max = 0.0;

  std::string initial_state = "haar";  // haar | ground | <path to state file>

  Index trials = 100;
  Horizon horizon = Horizon::finite(10.0);
  double measure_horizon = 100.0;  // finite horizon used for measured LHS when horizon is infinite
  Index samples = 256;
  double eta = 0.2;
  std::vector<double> deltas;  // window widths for N(Δ) and the gap-window Lemma 1 bound; empty = automatic

  std::optional<double> tol_degeneracy;  // absolute; default 1e-9 * spread
  std::optional<double> tol_gap;         // absolute; default 1e-9 * spread
  double entropy_floor = 1e-12;

  std::uint64_t master_seed = 1;
  std::string out_dir;
  unsigned workers = 0;  // 0 = hardware concurrency
  bool measure_rate = true;  // ensemble: also measure <|dS/dtau|>_T per trial

  std::uint64_t effective_hamiltonian_seed(std::uint64_t system_index = 0) const;
  unsigned effective_workers() const;
  /// Horizon actually simulated.
  double simulated_horizon() const { return horizon.infinite ? measure_horizon : horizon.value; }

  /// Throws ConfigError with a description of the first invalid field.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
/// Full echo including defaults and units.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Parses "inf" / "infinity" or a positive number.
Horizon parse_horizon(const std::string& text);

HamiltonianSpec hamiltonian_spec(const ExperimentConfig& cfg, Index d_b, std::uint64_t system_index = 0);

}  // namespace entrate
