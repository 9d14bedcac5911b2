#include "entrate/bounds.hpp"

#include <cmath>
#include <sstream>

namespace entrate {
namespace {

void require_horizon(Horizon t) {
  if (!t.infinite && !(t.value > 0.0)) throw Error("zero horizon");
}

double as_double(Index i) { return static_cast<double>(i); }

}  // namespace

BoundInputs make_bound_inputs(const JointHamiltonian& h, const SpectralData& sd, const GapStructure& gs,
                              double d_eff, Horizon horizon, double eta) {
  BoundInputs bi;
  bi.h_eff = effective_h(h);
  bi.d_s = h.dim_s;
  bi.d_b = h.dim_b;
  bi.d_e = sd.d_e;
  bi.d_g = sd.d_g;
  bi.d_gap = gs.d_gap_max;
  bi.delta_min = gs.delta_min;
  bi.d_eff = d_eff;
  bi.d_r = h.dim();
  bi.horizon = horizon;
  bi.eta = eta;
  return bi;
}

double finite_time_factor(Index d_e, double gap_scale, Horizon horizon) {
  require_horizon(horizon);
  if (horizon.infinite) return 1.0;
  if (!(gap_scale > 0.0)) throw Error("gap scale must be positive");
  return 1.0 + 8.0 * std::log2(as_double(d_e)) / (gap_scale * horizon.value);
}

double lemma1_rhs(const BoundInputs& bi, double o_norm_prime, Lemma1Variant variant) {
  require_horizon(bi.horizon);
  const double o2 = o_norm_prime * o_norm_prime;
  if (variant == Lemma1Variant::GapWindow) {
    if (!(bi.delta_window > 0.0)) throw Error("lemma1_rhs: gap-window variant needs delta_window > 0");
    return as_double(bi.n_delta_value) * o2 / bi.d_eff *
           finite_time_factor(bi.d_e, bi.delta_window, bi.horizon);
  }
  if (bi.d_gap < 1) throw Error("lemma1_rhs: gap-degeneracy variant needs D_G >= 1");
  return as_double(bi.d_gap) * o2 / bi.d_eff * finite_time_factor(bi.d_e, bi.delta_min, bi.horizon);
}

double lemma2_rhs(const BoundInputs& bi) {
  require_horizon(bi.horizon);
  const double ds = as_double(bi.d_s);
  return 2.0 * bi.h_eff *
         std::sqrt(as_double(bi.d_gap) * ds * ds / bi.d_eff * finite_time_factor(bi.d_e, bi.delta_min, bi.horizon));
}

double eq12_rhs(double h_eff, Index d_s, double d_eff) {
  const double ds = as_double(d_s);
  return 2.0 * h_eff * std::sqrt(ds * ds / d_eff);
}

LogRatio log_ratio_bound(const CMatrix& rho_s) {
  const Index d = rho_s.rows();
  if (d < 2) throw Error("log_ratio_bound: d_S must be at least 2");
  const RVector r = hermitian_eigenvalues(rho_s);
  const double ds = as_double(d);
  LogRatio out;
  bool has_zero = false;
  for (Index i = 0; i < d; ++i) {
    if (r(i) <= 0.0) {
      has_zero = true;
      out.max_log = std::numeric_limits<double>::infinity();
      continue;
    }
    out.max_log = std::max(out.max_log, std::abs(std::log(r(i) * ds)));
  }
  out.rhs = ds * (r.array() - 1.0 / ds).abs().sum();
  out.premise_holds = out.rhs <= 1.0;
  if (out.premise_holds && has_zero) {
    throw Error("log_ratio_bound: numerical inconsistency (zero eigenvalue with premise satisfied)");
  }
  return out;
}

Theorem1Bound theorem1_delta_epsilon(const BoundInputs& bi) {
  const double ds = as_double(bi.d_s);
  const double db = as_double(bi.d_b);
  if (bi.d_s * bi.d_s * bi.d_s > bi.d_b) {
    std::ostringstream msg;
    msg << "theorem1 precondition failed: d_S^3 = " << bi.d_s * bi.d_s * bi.d_s << " > d_B = " << bi.d_b;
    throw Error(msg.str());
  }
  if (bi.eta < 0.0) throw Error("theorem1 precondition failed: eta must be >= 0");
  require_horizon(bi.horizon);

  Theorem1Bound out;
  const double threshold = std::sqrt(ds / db) + bi.eta;
  if (threshold > 1.0 / ds) {
    out.eta_admissible = false;
    std::ostringstream msg;
    msg << "sqrt(d_S/d_B) + eta = " << threshold << " exceeds 1/d_S = " << 1.0 / ds;
    out.note = msg.str();
  }
  out.delta = 2.0 * bi.h_eff * threshold *
              std::sqrt(as_double(bi.d_gap) * ds * ds * ds * ds / bi.d_eff *
                        finite_time_factor(bi.d_e, bi.delta_min, bi.horizon));
  out.epsilon = levy_rhs(bi.d_s, bi.d_b, bi.eta);
  out.vacuous = out.epsilon >= 1.0;
  return out;
}

double levy_rhs(Index d_s, Index d_b, double eta) {
  if (eta < 0.0) throw Error("levy_rhs: eta must be nonnegative");
  return 2.0 * std::exp(-as_double(d_s) * as_double(d_b) * eta * eta / 16.0);
}

double levy_threshold(Index d_s, Index d_b, double eta) {
  return std::sqrt(as_double(d_s) / as_double(d_b)) + eta;
}

double haar_avg_inv_deff_exact(const SpectralData& sd, const SubspaceProjector& subspace) {
  if (subspace.basis.rows() != sd.dim()) throw Error("subspace and spectrum dimensions differ");
  const double dr = as_double(subspace.dim_r());
  // Tr[(P⊗P)(Π⊗Π)] = Tr[PΠ]^2 and Tr[(P⊗P)(Π⊗Π)S] = Tr[(PΠ)^2] = ||V^† W W^† V||_F^2.
  double acc = 0.0;
  for (Index n = 0; n < sd.d_e; ++n) {
    const CMatrix overlap = sd.block(n).adjoint() * subspace.basis;
    const double tr = overlap.squaredNorm();
    const double tr_sq = (overlap * overlap.adjoint()).squaredNorm();
    acc += tr * tr + tr_sq;
  }
  return acc / (dr * (dr + 1.0));
}

double haar_avg_inv_deff_exact(const SpectralData& sd) {
  const double d = as_double(sd.dim());
  double acc = 0.0;
  for (Index e : sd.degeneracies) acc += as_double(e) * as_double(e + 1);
  return acc / (d * (d + 1.0));
}

double haar_avg_inv_deff_bound(const SpectralData& sd, Index d_r) {
  if (d_r < 1) throw Error("haar_avg_inv_deff_bound: d_R must be >= 1");
  const double dr = as_double(d_r);
  const double dg = as_double(sd.d_g);
  return 2.0 * dg * dg * as_double(sd.d_e) / (dr * (dr + 1.0));
}

double eq25_rhs(const BoundInputs& bi) {
  require_horizon(bi.horizon);
  const double ds = as_double(bi.d_s);
  const double dr = as_double(bi.d_r);
  const double dg = as_double(bi.d_g);
  const double inner = 8.0 * as_double(bi.d_gap) * as_double(bi.d_e) * dg * dg * ds * ds * ds * ds /
                       (dr * (dr + 1.0)) * finite_time_factor(bi.d_e, bi.delta_min, bi.horizon);
  return bi.h_eff * (std::sqrt(ds / as_double(bi.d_b)) + bi.eta) * std::sqrt(inner);
}

double eq26_rhs(double h_eff, Index d_s, Index d_b) {
  const double ds = as_double(d_s);
  return std::sqrt(8.0) * h_eff * ds * ds / as_double(d_b);
}

}  // namespace entrate
