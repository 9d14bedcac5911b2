#pragma once

#include <functional>
#include <span>
#include <vector>

#include "entrate/linalg.hpp"
#include "entrate/spectral.hpp"
#include "entrate/states.hpp"

namespace entrate {

/// Pure joint trajectory sampled on the midpoint grid tau_j = (j + 1/2) T / M.
/// Holds a reference to the SpectralData, which must outlive it.
class Trajectory {
 public:
  Trajectory(QuantumState initial, const SpectralData& sd, double horizon, Index samples);

  const QuantumState& initial() const { return initial_; }
  const SpectralData& spectral() const { return *sd_; }
  double horizon() const { return horizon_; }
  Index samples() const { return samples_; }
  std::vector<double> sample_times() const;
  /// Same state and horizon with a different sample count.
  Trajectory resampled(Index samples) const { return {initial_, *sd_, horizon_, samples}; }

  /// |phi(tau)> = exp(-i tau H) |phi(0)>, computed from the cached energy-basis coefficients.
  CVector state_at(double tau) const;

 private:
  QuantumState initial_;
  const SpectralData* sd_;
  double horizon_;
  Index samples_;
  CVector coeffs_;  // V^dagger |phi(0)>
};

QuantumState evolve(const QuantumState& initial, const SpectralData& sd, double tau);

/// d rho_S / d tau = Tr_B[i [rho_SB, H]].
CMatrix rho_s_dot(const QuantumState& joint, const JointHamiltonian& h);
CMatrix rho_s_dot(const CVector& psi, const JointHamiltonian& h);

struct EntropyRate {
  double value = 0.0;
  bool near_singular = false;  // some eigenvalue <= 10 * floor
  bool singular = false;       // velocity has weight on eigenvalues <= floor; those terms are dropped
};

/// dS(rho_S)/dtau = -Tr[(ln rho_S - ln(I/d_S)) rho_S_dot], evaluated in the eigenbasis of rho_S.
EntropyRate entropy_rate(const CMatrix& rho_s, const CMatrix& rho_s_dot, double floor = 1e-12);
EntropyRate entropy_rate(const QuantumState& rho_s, const CMatrix& rho_s_dot, double floor = 1e-12);

/// Midpoint-rule estimate of (1/T) int_0^T X(tau) dtau. An evaluator that
/// throws is reported with the offending time.
double time_average(const Trajectory& traj, const std::function<double(double)>& quantity);

struct CheckedAverage {
  double value = 0.0;            // M samples
  double refined = 0.0;          // 2M samples
  double relative_change = 0.0;  // |refined - value| / max(|refined|, tiny)
  bool converged = false;        // relative_change < 1e-3
};

CheckedAverage time_average_checked(const Trajectory& traj, const std::function<double(double)>& quantity);

/// <||d rho_S/dtau||_1>_T.
double lhs_lemma2(const Trajectory& traj, const JointHamiltonian& h);

struct Theorem1Lhs {
  double value = 0.0;  // <|dS/dtau|>_T
  double near_singular_fraction = 0.0;
};

Theorem1Lhs lhs_theorem1(const Trajectory& traj, const JointHamiltonian& h, double floor = 1e-12);

/// <|Tr[rho O] - Tr[omega O]|^2>_T for a joint-space observable.
double lhs_lemma1(const Trajectory& traj, const CMatrix& observable);

/// All trajectory averages a trial needs, gathered in one pass over the grid.
struct TrajectoryMeasurement {
  double mean_rate_norm = 0.0;        // <||rho_S_dot||_1>_T
  double mean_abs_entropy_rate = 0.0;  // <|dS/dtau|>_T
  double near_singular_fraction = 0.0;
  double trace_distance_max = 0.0;   // max_tau ||rho_S - I/d_S||_1
  double trace_distance_mean = 0.0;
  double premise_failure_fraction = 0.0;  // fraction of tau with d_S ||rho_S - I/d_S||_1 > 1
  std::vector<double> observable_deviation;  // <|Tr[rho O] - Tr[omega O]|^2>_T per observable
};

TrajectoryMeasurement measure_trajectory(const Trajectory& traj, const JointHamiltonian& h,
                                         std::span<const CMatrix> observables, double floor = 1e-12);

}  // namespace entrate
