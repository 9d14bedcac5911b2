#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entrate/config.hpp"
#include "entrate/spectral.hpp"

namespace entrate {

/// Spectral facts of one simulated system, as persisted in reports.
struct SpectrumSummary {
  Index d_s = 0;
  Index d_b = 0;
  std::uint64_t hamiltonian_seed = 0;
  Index d_e = 0;
  Index d_g = 0;
  Index d_gap = 0;
  double delta_min = 0.0;
  bool nonresonant = false;
  bool nondegenerate = false;
  double h_eff = 0.0;
  double grouping_tol = 0.0;
  double gap_merge_tol = 0.0;
  bool ambiguous_clusters = false;
  Index d_r = 0;
  double inv_deff_exact = 0.0;
  double inv_deff_bound = 0.0;
  std::vector<double> energies;
  std::vector<Index> degeneracies;
  std::vector<double> gap_values;
  std::vector<Index> gap_degens;
  std::vector<double> deltas;
  std::vector<Index> n_delta;
};

struct ObservableRecord {
  std::string name;
  double norm_prime = 0.0;
  double lhs = 0.0;
  double rhs_gap_degeneracy = 0.0;
  std::vector<double> rhs_gap_window;  // one per configured delta
  bool holds = false;
};

/// One Monte Carlo trial. Optional fields are absent when the campaign does
/// not measure them; every flag can be recomputed from the stored numbers.
struct TrialRecord {
  Index trial = 0;
  Index system = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string failure;

  std::optional<double> d_eff;

  std::optional<double> lhs_lemma2;
  std::optional<double> rhs_lemma2;
  std::optional<double> lemma2_quadrature_change;
  std::optional<bool> lemma2_holds;

  std::vector<ObservableRecord> lemma1;
  std::optional<bool> lemma1_holds;

  std::optional<double> lhs_theorem1;
  std::optional<double> near_singular_fraction;
  std::optional<double> theorem1_quadrature_change;
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::optional<bool> theorem1_exceeds;

  std::optional<double> trace_distance_initial;
  std::optional<double> trace_distance_max;
  std::optional<double> trace_distance_mean;
  std::optional<double> premise_failure_fraction;
  std::optional<bool> levy_event;
};

struct CampaignReport {
  std::string campaign;
  ExperimentConfig config;
  std::vector<SpectrumSummary> spectra;
  std::vector<TrialRecord> records;
  nlohmann::json aggregates = nlohmann::json::object();
  std::vector<std::string> notes;
  double wall_clock_seconds = 0.0;

  bool violations_found() const { return aggregates.value("violations_found", false); }
};

/// Relative slack granted to deterministic bound comparisons (quadrature).
inline constexpr double kBoundSlack = 1e-9;

CampaignReport run_spectrum_analysis(const ExperimentConfig& cfg);
CampaignReport run_lemma1_campaign(const ExperimentConfig& cfg);
CampaignReport run_lemma2_campaign(const ExperimentConfig& cfg);
CampaignReport run_theorem1_campaign(const ExperimentConfig& cfg);
CampaignReport run_ensemble_average_campaign(const ExperimentConfig& cfg);
CampaignReport run_db_scaling_sweep(const ExperimentConfig& cfg);
/// Concentration check at tau = 0: frequency of ||rho_S - I/d_S||_1 >= sqrt(d_S/d_B) + eta.
CampaignReport run_levy_campaign(const ExperimentConfig& cfg);

/// Recomputes the aggregate block from spectra, records and config. Campaign
/// runners use this too, so persisted reports can be re-audited.
nlohmann::json compute_aggregates(const CampaignReport& report);

/// Runs `trial(i)` for i in [0, count) on a bounded pool. Records come back
/// in index order; an exception marks that record failed and never aborts
/// the rest.
std::vector<TrialRecord> run_trials(Index count, unsigned workers,
                                    const std::function<TrialRecord(Index)>& trial);

}  // namespace entrate
