#include "entrate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace entrate {

Trajectory::Trajectory(QuantumState initial, const SpectralData& sd, double horizon, Index samples)
    : initial_(std::move(initial)), sd_(&sd), horizon_(horizon), samples_(samples) {
  if (!initial_.is_pure()) throw Error("trajectory: initial state must be pure");
  if (!initial_.dims()) throw Error("trajectory: initial state needs dimension metadata");
  if (initial_.dim() != sd.dim()) throw Error("trajectory: state and spectrum dimensions differ");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error("trajectory: horizon must be positive and finite");
  if (samples < 2) throw Error("trajectory: at least 2 samples required");
  coeffs_ = sd.eigenvectors.adjoint() * initial_.vector();
}

std::vector<double> Trajectory::sample_times() const {
  std::vector<double> t(static_cast<std::size_t>(samples_));
  const double step = horizon_ / static_cast<double>(samples_);
  for (Index j = 0; j < samples_; ++j) t[static_cast<std::size_t>(j)] = (static_cast<double>(j) + 0.5) * step;
  return t;
}

CVector Trajectory::state_at(double tau) const {
  const CVector phases = (sd_->column_energies * Complex(0.0, -tau)).array().exp().matrix();
  return sd_->eigenvectors * coeffs_.cwiseProduct(phases);
}

QuantumState evolve(const QuantumState& initial, const SpectralData& sd, double tau) {
  if (!initial.is_pure()) throw Error("evolve: initial state must be pure");
  if (tau == 0.0) return initial;
  const CVector c = sd.eigenvectors.adjoint() * initial.vector();
  const CVector phases = (sd.column_energies * Complex(0.0, -tau)).array().exp().matrix();
  CVector psi = sd.eigenvectors * c.cwiseProduct(phases);
  return QuantumState::pure(std::move(psi), initial.dims());
}

CMatrix rho_s_dot(const CVector& psi, const JointHamiltonian& h) {
  const Dims dims{h.dim_s, h.dim_b};
  const CVector h_psi = h.h_total * psi;
  // Tr_B i(|psi><H psi| - |H psi><psi|) = i (X - X^dagger) with X = Tr_B |psi><H psi|.
  const CMatrix x = partial_trace_outer(psi, h_psi, dims);
  return Complex(0.0, 1.0) * (x - x.adjoint());
}

CMatrix rho_s_dot(const QuantumState& joint, const JointHamiltonian& h) {
  if (joint.dim() != h.dim()) throw Error("rho_s_dot: state and Hamiltonian dimensions differ");
  if (joint.is_pure()) return rho_s_dot(joint.vector(), h);
  const CMatrix rho = joint.density_matrix();
  const CMatrix comm = Complex(0.0, 1.0) * (rho * h.h_total - h.h_total * rho);
  return partial_trace(comm, Dims{h.dim_s, h.dim_b}, Keep::System);
}

EntropyRate entropy_rate(const CMatrix& rho_s, const CMatrix& rho_s_dot, double floor) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_s);
  if (es.info() != Eigen::Success) throw Error("entropy_rate: eigensolver failed");
  const RVector& r = es.eigenvalues();
  const CMatrix& u = es.eigenvectors();
  const double log_uniform = -std::log(static_cast<double>(rho_s.rows()));
  const RVector velocity = (u.adjoint() * rho_s_dot * u).diagonal().real();
  // Same magnitude scale as the velocity entries; anything below counts as zero.
  const double null_tol = 1e-12 * std::max(1.0, rho_s_dot.cwiseAbs().maxCoeff());

  EntropyRate out;
  double acc = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    if (r(i) <= 10.0 * floor) out.near_singular = true;
    if (r(i) <= floor) {
      if (std::abs(velocity(i)) > null_tol) out.singular = true;
      continue;
    }
    acc += (std::log(r(i)) - log_uniform) * velocity(i);
  }
  out.value = -acc;
  return out;
}

EntropyRate entropy_rate(const QuantumState& rho_s, const CMatrix& rho_s_dot, double floor) {
  return entropy_rate(rho_s.density_matrix(), rho_s_dot, floor);
}

namespace {

double midpoint_average(const Trajectory& traj, const std::function<double(double)>& quantity) {
  double sum = 0.0;
  for (double tau : traj.sample_times()) {
    try {
      sum += quantity(tau);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "evaluator failed at tau=" << tau << ": " << e.what();
      throw Error(msg.str());
    }
  }
  return sum / static_cast<double>(traj.samples());
}

}  // namespace

double time_average(const Trajectory& traj, const std::function<double(double)>& quantity) {
  return midpoint_average(traj, quantity);
}

CheckedAverage time_average_checked(const Trajectory& traj, const std::function<double(double)>& quantity) {
  CheckedAverage out;
  out.value = midpoint_average(traj, quantity);
  out.refined = midpoint_average(traj.resampled(2 * traj.samples()), quantity);
  const double scale = std::max(std::abs(out.refined), 1e-300);
  out.relative_change = std::abs(out.refined - out.value) / scale;
  if (out.value == out.refined) out.relative_change = 0.0;
  out.converged = out.relative_change < 1e-3;
  return out;
}

double lhs_lemma2(const Trajectory& traj, const JointHamiltonian& h) {
  return time_average(traj, [&](double tau) { return norms(rho_s_dot(traj.state_at(tau), h)).trace; });
}

Theorem1Lhs lhs_theorem1(const Trajectory& traj, const JointHamiltonian& h, double floor) {
  const Dims dims{h.dim_s, h.dim_b};
  Index flagged = 0;
  Theorem1Lhs out;
  out.value = time_average(traj, [&](double tau) {
    const CVector psi = traj.state_at(tau);
    const CMatrix rho_s = partial_trace_outer(psi, psi, dims);
    const EntropyRate rate = entropy_rate(rho_s, rho_s_dot(psi, h), floor);
    if (rate.near_singular) ++flagged;
    return std::abs(rate.value);
  });
  out.near_singular_fraction = static_cast<double>(flagged) / static_cast<double>(traj.samples());
  return out;
}

namespace {

// Tr[omega O] = sum_n c_n^dagger (V_n^dagger O V_n) c_n.
double dephased_expectation(const SpectralData& sd, const CVector& psi0, const CMatrix& observable) {
  const CVector c = sd.eigenvectors.adjoint() * psi0;
  double acc = 0.0;
  for (Index n = 0; n < sd.d_e; ++n) {
    const auto v = sd.block(n);
    const Index off = sd.offsets[static_cast<std::size_t>(n)];
    const Index k = sd.degeneracies[static_cast<std::size_t>(n)];
    const CVector cn = c.segment(off, k);
    acc += (cn.adjoint() * (v.adjoint() * observable * v) * cn)(0, 0).real();
  }
  return acc;
}

}  // namespace

double lhs_lemma1(const Trajectory& traj, const CMatrix& observable) {
  require_hermitian(observable, "observable");
  const double omega_value = dephased_expectation(traj.spectral(), traj.initial().vector(), observable);
  return time_average(traj, [&](double tau) {
    const CVector psi = traj.state_at(tau);
    const double dev = psi.dot(observable * psi).real() - omega_value;
    return dev * dev;
  });
}

TrajectoryMeasurement measure_trajectory(const Trajectory& traj, const JointHamiltonian& h,
                                         std::span<const CMatrix> observables, double floor) {
  const Dims dims{h.dim_s, h.dim_b};
  const double ds = static_cast<double>(h.dim_s);
  const CMatrix uniform = CMatrix::Identity(h.dim_s, h.dim_s) / ds;

  std::vector<double> omega_values;
  for (const auto& o : observables) {
    omega_values.push_back(dephased_expectation(traj.spectral(), traj.initial().vector(), o));
  }

  TrajectoryMeasurement m;
  m.observable_deviation.assign(observables.size(), 0.0);
  Index flagged = 0;
  Index premise_failures = 0;
  for (double tau : traj.sample_times()) {
    const CVector psi = traj.state_at(tau);
    const CMatrix rho_s = partial_trace_outer(psi, psi, dims);
    const CMatrix velocity = rho_s_dot(psi, h);
    const EntropyRate rate = entropy_rate(rho_s, velocity, floor);

    m.mean_rate_norm += norms(velocity).trace;
    m.mean_abs_entropy_rate += std::abs(rate.value);
    if (rate.near_singular) ++flagged;

    const double distance = norms(rho_s - uniform).trace;
    m.trace_distance_mean += distance;
    m.trace_distance_max = std::max(m.trace_distance_max, distance);
    if (ds * distance > 1.0) ++premise_failures;

    for (std::size_t k = 0; k < observables.size(); ++k) {
      const double dev = psi.dot(observables[k] * psi).real() - omega_values[k];
      m.observable_deviation[k] += dev * dev;
    }
  }
  const double count = static_cast<double>(traj.samples());
  m.mean_rate_norm /= count;
  m.mean_abs_entropy_rate /= count;
  m.trace_distance_mean /= count;
  m.near_singular_fraction = static_cast<double>(flagged) / count;
  m.premise_failure_fraction = static_cast<double>(premise_failures) / count;
  for (double& v : m.observable_deviation) v /= count;
  return m;
}

}  // namespace entrate
