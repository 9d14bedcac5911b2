#include "entrate/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace entrate {

JointHamiltonian make_joint_hamiltonian(CMatrix h_s, CMatrix h_b, CMatrix h_int) {
  if (h_s.rows() != h_s.cols() || h_b.rows() != h_b.cols() || h_int.rows() != h_int.cols()) {
    throw Error("dimension mismatch: Hamiltonian parts must be square");
  }
  const Index ds = h_s.rows();
  const Index db = h_b.rows();
  if (ds < 1 || db < 1) throw Error("dimension mismatch: empty Hamiltonian part");
  if (h_int.rows() != ds * db) {
    throw Error("dimension mismatch: h_int has side " + std::to_string(h_int.rows()) +
                ", expected " + std::to_string(ds * db));
  }
  require_hermitian(h_s, "h_s");
  require_hermitian(h_b, "h_b");
  require_hermitian(h_int, "h_int");

  JointHamiltonian h;
  h.dim_s = ds;
  h.dim_b = db;
  h.h_total = kron(h_s, CMatrix::Identity(db, db)) + kron(CMatrix::Identity(ds, ds), h_b) + h_int;
  h.h_s = std::move(h_s);
  h.h_b = std::move(h_b);
  h.h_int = std::move(h_int);
  return h;
}

JointHamiltonian build_hamiltonian(const HamiltonianSpec& spec) {
  const Index ds = spec.dim_s;
  const Index db = spec.dim_b;
  if (ds < 2 || db < 2) throw Error("build_hamiltonian: d_S and d_B must be at least 2");
  const Index d = ds * db;

  switch (spec.model) {
    case HamiltonianModel::Explicit: {
      if (spec.h_s.rows() != ds || spec.h_b.rows() != db) {
        throw Error("dimension mismatch between spec and matrices");
      }
      return make_joint_hamiltonian(spec.h_s, spec.h_b, spec.h_int);
    }
    case HamiltonianModel::RandomGaussian: {
      Rng rng(spec.seed);
      CMatrix hs = random_hermitian(ds, rng);
      CMatrix hb = random_hermitian(db, rng);
      CMatrix hi = spec.coupling * random_hermitian(d, rng);
      auto h = make_joint_hamiltonian(std::move(hs), std::move(hb), std::move(hi));
      h.seed = spec.seed;
      return h;
    }
    case HamiltonianModel::QubitDephasing: {
      if (ds != 2) throw Error("qubit dephasing model requires d_S = 2");
      Rng rng(spec.seed);
      CMatrix hs = alternating_z(2);
      CMatrix hb = random_hermitian(db, rng);
      CMatrix bath_op = random_hermitian(db, rng);
      CMatrix hi = spec.coupling * kron(alternating_z(2), bath_op);
      auto h = make_joint_hamiltonian(std::move(hs), std::move(hb), std::move(hi));
      h.seed = spec.seed;
      return h;
    }
    case HamiltonianModel::Diagonal: {
      if (static_cast<Index>(spec.energies.size()) != d) {
        throw Error("dimension mismatch: diagonal model needs d_S*d_B = " + std::to_string(d) +
                    " energies, got " + std::to_string(spec.energies.size()));
      }
      CMatrix hi = CMatrix::Zero(d, d);
      for (Index i = 0; i < d; ++i) hi(i, i) = spec.energies[static_cast<std::size_t>(i)];
      return make_joint_hamiltonian(CMatrix::Zero(ds, ds), CMatrix::Zero(db, db), std::move(hi));
    }
  }
  throw Error("unknown Hamiltonian model");
}

double default_tolerance(double spread) { return 1e-9 * (spread > 0.0 ? spread : 1.0); }

CMatrix SpectralData::projector(Index n) const {
  const auto v = block(n);
  return v * v.adjoint();
}

SpectralData decompose(const CMatrix& h_total, double grouping_tol) {
  if (!(grouping_tol > 0.0)) throw Error("decompose: grouping_tol must be positive");
  require_hermitian(h_total, "h_total");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h_total);
  if (es.info() != Eigen::Success) throw Error("decompose: eigensolver failed to converge");
  const RVector& raw = es.eigenvalues();
  const Index d = raw.size();

  SpectralData sd;
  sd.grouping_tol = grouping_tol;
  sd.eigenvectors = es.eigenvectors();
  sd.column_energies.resize(d);

  Index start = 0;
  for (Index i = 1; i <= d; ++i) {
    if (i == d || raw(i) - raw(i - 1) > grouping_tol) {
      const Index count = i - start;
      const double mean = raw.segment(start, count).mean();
      sd.energies.push_back(mean);
      sd.degeneracies.push_back(count);
      sd.offsets.push_back(start);
      sd.column_energies.segment(start, count).setConstant(mean);
      start = i;
    }
  }
  for (std::size_t n = 1; n < sd.energies.size(); ++n) {
    if (sd.energies[n] - sd.energies[n - 1] < 10.0 * grouping_tol) sd.ambiguous_clusters = true;
  }
  sd.d_e = static_cast<Index>(sd.energies.size());
  sd.d_g = *std::max_element(sd.degeneracies.begin(), sd.degeneracies.end());
  return sd;
}

SpectralData decompose(const JointHamiltonian& h, double grouping_tol) {
  return decompose(h.h_total, grouping_tol);
}

SpectralData decompose(const JointHamiltonian& h) {
  const RVector ev = hermitian_eigenvalues(h.h_total);
  return decompose(h.h_total, default_tolerance(ev(ev.size() - 1) - ev(0)));
}

Index GapStructure::total_count() const {
  return std::accumulate(gap_degens.begin(), gap_degens.end(), Index{0});
}

GapStructure gap_structure(const std::vector<double>& energies, double gap_merge_tol) {
  if (energies.size() < 2) throw Error("gapless spectrum");
  if (!(gap_merge_tol > 0.0)) throw Error("gap_structure: gap_merge_tol must be positive");

  std::vector<double> sorted = energies;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> positive;
  positive.reserve(sorted.size() * (sorted.size() - 1) / 2);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) positive.push_back(sorted[i] - sorted[j]);
  }
  std::sort(positive.begin(), positive.end());

  // Merge runs of positive gaps, then mirror them so the negative side is exact.
  std::vector<double> values;
  std::vector<Index> counts;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= positive.size(); ++i) {
    if (i == positive.size() || positive[i] - positive[i - 1] > gap_merge_tol) {
      double sum = 0.0;
      for (std::size_t k = start; k < i; ++k) sum += positive[k];
      values.push_back(sum / static_cast<double>(i - start));
      counts.push_back(static_cast<Index>(i - start));
      start = i;
    }
  }

  GapStructure gs;
  gs.gap_merge_tol = gap_merge_tol;
  const std::size_t m = values.size();
  gs.gap_values.resize(2 * m);
  gs.gap_degens.resize(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    gs.gap_values[m - 1 - k] = -values[k];
    gs.gap_degens[m - 1 - k] = counts[k];
    gs.gap_values[m + k] = values[k];
    gs.gap_degens[m + k] = counts[k];
  }
  gs.d_gap_max = *std::max_element(counts.begin(), counts.end());
  gs.delta_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < gs.gap_values.size(); ++k) {
    gs.delta_min = std::min(gs.delta_min, gs.gap_values[k] - gs.gap_values[k - 1]);
  }
  return gs;
}

GapStructure gap_structure(const SpectralData& sd, double gap_merge_tol) {
  return gap_structure(sd.energies, gap_merge_tol);
}

GapStructure gap_structure(const SpectralData& sd) {
  return gap_structure(sd.energies, default_tolerance(sd.spread()));
}

Index n_delta(const GapStructure& gs, double delta) {
  if (!(delta > 0.0)) throw Error("n_delta: delta must be positive");
  const auto& g = gs.gap_values;
  Index best = 0;
  Index window = 0;
  std::size_t right = 0;
  for (std::size_t left = 0; left < g.size(); ++left) {
    const double edge = g[left] + delta;
    while (right < g.size() && g[right] < edge) {
      window += gs.gap_degens[right];
      ++right;
    }
    best = std::max(best, window);
    window -= gs.gap_degens[left];
  }
  return best;
}

bool is_nonresonant(const GapStructure& gs) {
  return std::all_of(gs.gap_degens.begin(), gs.gap_degens.end(), [](Index g) { return g == 1; });
}

double effective_h(const JointHamiltonian& h) {
  return norm_prime(kron(h.h_s, CMatrix::Identity(h.dim_b, h.dim_b)) + h.h_int);
}

}  // namespace entrate
