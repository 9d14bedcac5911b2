#pragma once

#include <string>
#include <vector>

#include "entrate/linalg.hpp"
#include "entrate/spectral.hpp"
#include "entrate/states.hpp"

namespace entrate {

/// Averaging horizon. The infinite flag drops the 8 log2(D_E)/(Δ T) term.
struct Horizon {
  double value = 0.0;
  bool infinite = false;

  static Horizon finite(double t) { return {t, false}; }
  static Horizon unbounded() { return {0.0, true}; }
};

/// Everything the right-hand sides consume.
struct BoundInputs {
  double h_eff = 0.0;
  Index d_s = 0;
  Index d_b = 0;
  Index d_e = 0;
  Index d_g = 0;
  Index d_gap = 0;
  double delta_min = 0.0;
  double d_eff = 1.0;
  Index d_r = 0;
  Horizon horizon;
  double eta = 0.0;
  double delta_window = 0.0;
  Index n_delta_value = 0;
};

/// Fills the spectral fields from sd/gs; d_r defaults to the full space.
BoundInputs make_bound_inputs(const JointHamiltonian& h, const SpectralData& sd, const GapStructure& gs,
                              double d_eff, Horizon horizon, double eta = 0.0);

/// 1 + 8 log2(D_E) / (gap_scale * T), or 1 at the infinite horizon.
double finite_time_factor(Index d_e, double gap_scale, Horizon horizon);

enum class Lemma1Variant { GapWindow, GapDegeneracy };

double lemma1_rhs(const BoundInputs& bi, double o_norm_prime, Lemma1Variant variant);
double lemma2_rhs(const BoundInputs& bi);
/// 2h sqrt(d_S^2 / D_eff): the T -> infinity, D_G = 1 form of lemma2_rhs.
double eq12_rhs(double h_eff, Index d_s, double d_eff);

struct LogRatio {
  double max_log = 0.0;  // max_i |ln(r_i d_S)|
  bool premise_holds = false;
  double rhs = 0.0;  // d_S ||rho_S - I/d_S||_1
};

LogRatio log_ratio_bound(const CMatrix& rho_s);

struct Theorem1Bound {
  double delta = 0.0;
  double epsilon = 0.0;
  bool vacuous = false;        // epsilon >= 1
  bool eta_admissible = true;  // sqrt(d_S/d_B) + eta <= 1/d_S
  std::string note;            // which inequality failed, if any
};

/// Throws when d_S^3 > d_B or eta < 0. The upper eta limit only sets
/// eta_admissible = false.
Theorem1Bound theorem1_delta_epsilon(const BoundInputs& bi);

double levy_rhs(Index d_s, Index d_b, double eta);
/// sqrt(d_S/d_B) + eta, the trace-distance threshold of the concentration event.
double levy_threshold(Index d_s, Index d_b, double eta);

double haar_avg_inv_deff_exact(const SpectralData& sd, const SubspaceProjector& subspace);
double haar_avg_inv_deff_exact(const SpectralData& sd);
double haar_avg_inv_deff_bound(const SpectralData& sd, Index d_r);

double eq25_rhs(const BoundInputs& bi);
double eq26_rhs(double h_eff, Index d_s, Index d_b);

}  // namespace entrate
