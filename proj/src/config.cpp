#include "entrate/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "entrate/matrix_io.hpp"
#include "entrate/seeds.hpp"

namespace entrate {

using nlohmann::json;

std::uint64_t ExperimentConfig::effective_hamiltonian_seed(std::uint64_t system_index) const {
  if (hamiltonian_seed) return *hamiltonian_seed + system_index;
  return derive_seed(master_seed, SeedStream::Hamiltonian, system_index);
}

unsigned ExperimentConfig::effective_workers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> models{"random", "dephasing", "file", "diagonal"};
  if (!models.count(model)) throw ConfigError("unknown model '" + model + "'");
  if (d_s < 2 || d_b < 2) throw ConfigError("d_s and d_b must be at least 2");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (samples < 2) throw ConfigError("samples must be at least 2");
  if (!horizon.infinite && !(horizon.value > 0.0)) throw ConfigError("horizon must be positive or 'inf'");
  if (!(measure_horizon > 0.0)) throw ConfigError("measure_horizon must be positive");
  if (tol_degeneracy && !(*tol_degeneracy > 0.0)) throw ConfigError("tol_degeneracy must be positive");
  if (tol_gap && !(*tol_gap > 0.0)) throw ConfigError("tol_gap must be positive");
  if (!(entropy_floor > 0.0)) throw ConfigError("entropy_floor must be positive");
  if (eta < 0.0) throw ConfigError("eta must be nonnegative");
  for (double d : deltas) {
    if (!(d > 0.0)) throw ConfigError("every entry of deltas must be positive");
  }
  for (Index db : d_b_list) {
    if (db < 2) throw ConfigError("every entry of d_b_list must be at least 2");
  }
  if (subspace != "full" && subspace != "energy_window") throw ConfigError("unknown subspace '" + subspace + "'");
  if (subspace == "energy_window" && !(subspace_energy_max >= subspace_energy_min)) {
    throw ConfigError("energy window needs subspace_energy_min <= subspace_energy_max");
  }
  if (model == "file" && (h_s_file.empty() || h_b_file.empty() || h_int_file.empty())) {
    throw ConfigError("model 'file' needs h_s_file, h_b_file and h_int_file");
  }
  if (model == "diagonal" && energies.empty()) throw ConfigError("model 'diagonal' needs energies");
}

Horizon parse_horizon(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return Horizon::unbounded();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("horizon: cannot parse '" + text + "'");
  }
  if (used != text.size() || !(v > 0.0)) throw ConfigError("horizon: expected a positive number or 'inf'");
  if (std::isinf(v)) return Horizon::unbounded();
  return Horizon::finite(v);
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  static const std::set<std::string> known{
      "model", "coupling", "hamiltonian_seed", "h_s_file", "h_b_file", "h_int_file", "energies",
      "d_s", "d_b", "d_b_list", "subspace", "subspace_energy_min", "subspace_energy_max",
      "initial_state", "trials", "horizon", "measure_horizon", "samples", "eta", "deltas",
      "tol_degeneracy", "tol_gap", "entropy_floor", "master_seed", "out_dir", "workers",
      "measure_rate", "units"};
  if (!j.is_object()) throw ConfigError("config must be a key-value object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    read(j, "model", cfg.model);
    read(j, "coupling", cfg.coupling);
    read(j, "hamiltonian_seed", cfg.hamiltonian_seed);
    read(j, "h_s_file", cfg.h_s_file);
    read(j, "h_b_file", cfg.h_b_file);
    read(j, "h_int_file", cfg.h_int_file);
    read(j, "energies", cfg.energies);
    read(j, "d_s", cfg.d_s);
    read(j, "d_b", cfg.d_b);
    read(j, "d_b_list", cfg.d_b_list);
    read(j, "subspace", cfg.subspace);
    read(j, "subspace_energy_min", cfg.subspace_energy_min);
    read(j, "subspace_energy_max", cfg.subspace_energy_max);
    read(j, "initial_state", cfg.initial_state);
    read(j, "trials", cfg.trials);
    if (j.contains("horizon")) {
      const auto& h = j.at("horizon");
      if (h.is_string()) {
        cfg.horizon = parse_horizon(h.get<std::string>());
      } else {
        cfg.horizon = Horizon::finite(h.get<double>());
      }
    }
    read(j, "measure_horizon", cfg.measure_horizon);
    read(j, "samples", cfg.samples);
    read(j, "eta", cfg.eta);
    read(j, "deltas", cfg.deltas);
    read(j, "tol_degeneracy", cfg.tol_degeneracy);
    read(j, "tol_gap", cfg.tol_gap);
    read(j, "entropy_floor", cfg.entropy_floor);
    read(j, "master_seed", cfg.master_seed);
    read(j, "out_dir", cfg.out_dir);
    read(j, "workers", cfg.workers);
    read(j, "measure_rate", cfg.measure_rate);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  // workers and out_dir do not influence results and are left out so that
  // reports compare equal across machines.
  json j;
  j["model"] = cfg.model;
  j["coupling"] = cfg.coupling;
  j["hamiltonian_seed"] = cfg.hamiltonian_seed ? json(*cfg.hamiltonian_seed) : json(nullptr);
  j["h_s_file"] = cfg.h_s_file;
  j["h_b_file"] = cfg.h_b_file;
  j["h_int_file"] = cfg.h_int_file;
  j["energies"] = cfg.energies;
  j["d_s"] = cfg.d_s;
  j["d_b"] = cfg.d_b;
  j["d_b_list"] = cfg.d_b_list;
  j["subspace"] = cfg.subspace;
  j["subspace_energy_min"] = cfg.subspace_energy_min;
  j["subspace_energy_max"] = cfg.subspace_energy_max;
  j["initial_state"] = cfg.initial_state;
  j["trials"] = cfg.trials;
  j["horizon"] = cfg.horizon.infinite ? json("inf") : json(cfg.horizon.value);
  j["measure_horizon"] = cfg.measure_horizon;
  j["samples"] = cfg.samples;
  j["eta"] = cfg.eta;
  j["deltas"] = cfg.deltas;
  j["tol_degeneracy"] = cfg.tol_degeneracy ? json(*cfg.tol_degeneracy) : json("1e-9*spread");
  j["tol_gap"] = cfg.tol_gap ? json(*cfg.tol_gap) : json("1e-9*spread");
  j["entropy_floor"] = cfg.entropy_floor;
  j["master_seed"] = cfg.master_seed;
  j["measure_rate"] = cfg.measure_rate;
  j["units"] = {{"energy", "arbitrary, hbar = 1"}, {"time", "inverse energy"}};
  return j;
}

HamiltonianSpec hamiltonian_spec(const ExperimentConfig& cfg, Index d_b, std::uint64_t system_index) {
  HamiltonianSpec spec;
  spec.dim_s = cfg.d_s;
  spec.dim_b = d_b;
  spec.coupling = cfg.coupling;
  spec.seed = cfg.effective_hamiltonian_seed(system_index);
  if (cfg.model == "random") {
    spec.model = HamiltonianModel::RandomGaussian;
  } else if (cfg.model == "dephasing") {
    spec.model = HamiltonianModel::QubitDephasing;
  } else if (cfg.model == "diagonal") {
    spec.model = HamiltonianModel::Diagonal;
    spec.energies = cfg.energies;
  } else if (cfg.model == "file") {
    spec.model = HamiltonianModel::Explicit;
    spec.h_s = io::load_matrix(cfg.h_s_file);
    spec.h_b = io::load_matrix(cfg.h_b_file);
    spec.h_int = io::load_matrix(cfg.h_int_file);
    spec.seed = 0;
  } else {
    throw ConfigError("unknown model '" + cfg.model + "'");
  }
  return spec;
}

}  // namespace entrate
