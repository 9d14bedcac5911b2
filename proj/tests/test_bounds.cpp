#include <doctest.h>

#include "entrate/bounds.hpp"
#include "entrate/dynamics.hpp"
#include "oracles.hpp"

using namespace entrate;

namespace {

CMatrix diag(std::initializer_list<double> values) {
  CMatrix m = CMatrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

BoundInputs random_inputs(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> small(1, 6);
  BoundInputs bi;
  bi.h_eff = 0.1 + 5.0 * u(rng);
  bi.d_s = small(rng) + 1;
  bi.d_b = bi.d_s * bi.d_s * bi.d_s * small(rng);
  bi.d_e = bi.d_s * bi.d_b;
  bi.d_g = small(rng);
  bi.d_gap = small(rng);
  bi.delta_min = 0.01 + u(rng);
  bi.d_eff = 1.0 + (static_cast<double>(bi.d_e) - 1.0) * u(rng);
  bi.d_r = bi.d_e;
  bi.horizon = Horizon::finite(0.5 + 100.0 * u(rng));
  bi.eta = 0.2 * u(rng);
  bi.delta_window = 0.01 + u(rng);
  bi.n_delta_value = small(rng);
  return bi;
}

}  // namespace

TEST_CASE("lemma1_rhs examples") {
  BoundInputs bi;
  bi.d_eff = 4.0;
  bi.d_e = 4;
  bi.n_delta_value = 1;
  bi.delta_window = 0.5;
  bi.horizon = Horizon::unbounded();
  CHECK(lemma1_rhs(bi, 1.0, Lemma1Variant::GapWindow) == doctest::Approx(0.25));

  BoundInputs b2;
  b2.d_gap = 1;
  b2.d_eff = 4.0;
  b2.d_e = 16;
  b2.delta_min = 1.0;
  b2.horizon = Horizon::finite(32.0);
  CHECK(lemma1_rhs(b2, 1.0, Lemma1Variant::GapDegeneracy) == doctest::Approx(0.5));

  b2.horizon = Horizon::finite(0.0);
  CHECK_THROWS_WITH_AS(lemma1_rhs(b2, 1.0, Lemma1Variant::GapDegeneracy), doctest::Contains("zero horizon"), Error);
  CHECK_THROWS_WITH_AS(lemma2_rhs(b2), doctest::Contains("zero horizon"), Error);
  CHECK_THROWS_WITH_AS(eq25_rhs(b2), doctest::Contains("zero horizon"), Error);
  CHECK_THROWS_WITH_AS(finite_time_factor(4, 1.0, Horizon::finite(0.0)), doctest::Contains("zero horizon"), Error);
  b2.horizon = Horizon::finite(1.0);
  CHECK_THROWS_AS(lemma1_rhs(b2, 1.0, Lemma1Variant::GapWindow), Error);
}

TEST_CASE("lemma2_rhs examples and the infinite-horizon eq12 limit") {
  BoundInputs bi;
  bi.h_eff = 1.0;
  bi.d_gap = 1;
  bi.d_s = 2;
  bi.d_eff = 4.0;
  bi.d_e = 8;
  bi.delta_min = 0.3;
  bi.horizon = Horizon::unbounded();
  CHECK(lemma2_rhs(bi) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eq12_rhs(1.0, 2, 4.0) == doctest::Approx(2.0).epsilon(1e-15));

  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    BoundInputs r = random_inputs(rng);
    r.d_gap = 1;
    r.horizon = Horizon::unbounded();
    const double a = lemma2_rhs(r);
    const double b = eq12_rhs(r.h_eff, r.d_s, r.d_eff);
    CHECK(std::abs(a - b) <= 1e-12 * b);
  }
}

TEST_CASE("log_ratio_bound examples") {
  for (Index d : {2, 3, 5}) {
    const LogRatio c = log_ratio_bound(CMatrix(CMatrix::Identity(d, d) / static_cast<double>(d)));
    CHECK(c.max_log == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.premise_holds);
    CHECK(c.rhs == doctest::Approx(0.0).epsilon(1e-15));
  }
  const LogRatio r = log_ratio_bound(diag({0.6, 0.4}));
  CHECK(r.rhs == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(r.max_log == doctest::Approx(0.2231435513142097).epsilon(1e-14));
  CHECK(r.premise_holds);
  CHECK(r.max_log <= r.rhs);

  const LogRatio p = log_ratio_bound(diag({1.0, 0.0}));
  CHECK(p.rhs == doctest::Approx(2.0));
  CHECK_FALSE(p.premise_holds);
  CHECK_THROWS_AS(log_ratio_bound(diag({1.0})), Error);
}

TEST_CASE("log-ratio bound over random spectra") {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(2, 6);
  int premise_cases = 0;
  for (int k = 0; k < 20000; ++k) {
    const Index d = dim(rng);
    // Mix a random point of the simplex towards the center; some land just inside the boundary.
    Eigen::VectorXd p(d);
    for (Index i = 0; i < d; ++i) p(i) = -std::log(u(rng) + 1e-300);
    p /= p.sum();
    const Eigen::VectorXd center = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
    const double dist = static_cast<double>(d) * (p - center).cwiseAbs().sum();
    const double target = (k % 4 == 0) ? 1.0 - 1e-9 * u(rng) : 1.2 * u(rng);
    const double w = dist > 0.0 ? std::min(1.0, target / dist) : 1.0;
    const Eigen::VectorXd r = center + w * (p - center);
    const CMatrix u_mat = random_unitary(d, rng);
    CMatrix rho = u_mat * r.cast<Complex>().asDiagonal() * u_mat.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    const LogRatio lr = log_ratio_bound(rho);
    if (lr.premise_holds) {
      ++premise_cases;
      CHECK(lr.max_log <= lr.rhs * (1 + 1e-12) + 1e-15);
    }
  }
  CHECK(premise_cases >= 10000);
}

TEST_CASE("theorem1_delta_epsilon examples") {
  BoundInputs bi;
  bi.h_eff = 1.0;
  bi.d_s = 2;
  bi.d_b = 32;
  bi.d_e = 64;
  bi.d_g = 1;
  bi.d_gap = 1;
  bi.delta_min = 0.1;
  bi.d_eff = 30.0;
  bi.horizon = Horizon::finite(10.0);
  bi.eta = 0.1;
  Theorem1Bound t = theorem1_delta_epsilon(bi);
  CHECK(t.epsilon == doctest::Approx(1.9215788783046464).epsilon(1e-12));
  CHECK(t.vacuous);
  CHECK(t.eta_admissible);

  bi.d_b = 512;
  bi.d_e = 1024;
  bi.eta = 0.3;
  t = theorem1_delta_epsilon(bi);
  CHECK(t.epsilon == doctest::Approx(0.006302223196888883).epsilon(1e-10));
  CHECK_FALSE(t.vacuous);

  bi.d_b = 16;
  bi.eta = 0.2;
  t = theorem1_delta_epsilon(bi);
  CHECK_FALSE(t.eta_admissible);
  CHECK(t.note.find("exceeds 1/d_S") != std::string::npos);
  CHECK(t.epsilon == doctest::Approx(2.0 * std::exp(-0.08)).epsilon(1e-12));

  bi.d_s = 3;
  CHECK_THROWS_WITH_AS(theorem1_delta_epsilon(bi), doctest::Contains("d_S^3 = 27 > d_B = 16"), Error);
  bi.d_s = 2;
  bi.eta = -0.1;
  CHECK_THROWS_AS(theorem1_delta_epsilon(bi), Error);
}

TEST_CASE("theorem 1 chain consistency") {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const BoundInputs bi = random_inputs(rng);
    const Theorem1Bound t = theorem1_delta_epsilon(bi);
    const double chain = levy_threshold(bi.d_s, bi.d_b, bi.eta) * static_cast<double>(bi.d_s) * lemma2_rhs(bi);
    CHECK(std::abs(t.delta - chain) <= 1e-12 * chain);
  }
}

TEST_CASE("levy_rhs examples") {
  CHECK(levy_rhs(2, 512, 0.3) == doctest::Approx(0.006302223196888883).epsilon(1e-10));
  CHECK(levy_rhs(2, 64, 0.2) == doctest::Approx(1.4522980741473819).epsilon(1e-12));
  CHECK(levy_rhs(2, 64, 0.0) == 2.0);
  CHECK(levy_rhs(2, 64, 1e-9) == doctest::Approx(2.0));
  CHECK(levy_threshold(2, 16, 0.2) == doctest::Approx(0.5535533905932737));
  CHECK_THROWS_AS(levy_rhs(2, 64, -1.0), Error);
}

TEST_CASE("Levy event frequency at d_S=2, d_B=64, eta=0.2") {
  const Index ds = 2, db = 64;
  const SubspaceProjector full = SubspaceProjector::full(ds * db);
  const double threshold = levy_threshold(ds, db, 0.2);
  const CMatrix center = CMatrix::Identity(ds, ds) / static_cast<double>(ds);
  int events = 0;
  const int n = 2000;
  for (int k = 0; k < n; ++k) {
    const QuantumState s = haar_random_state(full, static_cast<std::uint64_t>(k + 1), Dims{ds, db});
    const CMatrix r = partial_trace(s, Keep::System).density_matrix();
    if (norms(CMatrix(r - center)).trace >= threshold) ++events;
  }
  CHECK(static_cast<double>(events) / n <= levy_rhs(ds, db, 0.2));
}

TEST_CASE("Haar average of 1/D_eff: closed forms") {
  Rng rng(4);
  const CMatrix u = random_unitary(4, rng);
  const SpectralData nondeg = decompose(CMatrix(u * diag({0, 1, 3, 7}) * u.adjoint()), 1e-9);
  CHECK(haar_avg_inv_deff_exact(nondeg) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(haar_avg_inv_deff_exact(nondeg, SubspaceProjector::full(4)) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(haar_avg_inv_deff_bound(nondeg, 4) == doctest::Approx(0.4).epsilon(1e-14));

  const SpectralData single = decompose(CMatrix::Zero(5, 5), 1e-9);
  CHECK(haar_avg_inv_deff_exact(single) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(haar_avg_inv_deff_exact(single, SubspaceProjector::full(5)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(haar_avg_inv_deff_bound(single, 5) == doctest::Approx(2.0 * 25.0 / 30.0));

  const SpectralData pairs = decompose(diag({0, 0, 1, 1, 2, 2}), 1e-9);
  CHECK(haar_avg_inv_deff_exact(pairs) == doctest::Approx(3.0 * 6.0 / 42.0).epsilon(1e-14));
  CHECK(haar_avg_inv_deff_bound(pairs, 6) == doctest::Approx(2.0 * 4.0 * 3.0 / 42.0).epsilon(1e-14));
  CHECK_THROWS_AS(haar_avg_inv_deff_bound(pairs, 0), Error);
  CHECK_THROWS_AS(haar_avg_inv_deff_exact(pairs, SubspaceProjector::full(4)), Error);
}

TEST_CASE("Haar average of 1/D_eff: Monte Carlo at d=4") {
  Rng rng(5);
  const SpectralData sd = decompose(random_hermitian(4, rng), 1e-9);
  const SubspaceProjector full = SubspaceProjector::full(4);
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  Rng draws(6);
  for (int k = 0; k < n; ++k) {
    const double x = 1.0 / effective_dimension(haar_random_state(full, draws), sd);
    sum += x, sum2 += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 0.4) <= 3.0 * se);
}

TEST_CASE("Haar average of 1/D_eff on a restricted subspace") {
  // Window subspace: the exact value from the trace identities must match Monte Carlo.
  Rng rng(7);
  const CMatrix u = random_unitary(6, rng);
  const SpectralData sd = decompose(CMatrix(u * diag({0, 0, 1, 2, 2, 5}) * u.adjoint()), 1e-9);
  const SubspaceProjector window = SubspaceProjector::energy_window(sd, -0.5, 2.5);
  REQUIRE(window.dim_r() == 5);
  const double exact = haar_avg_inv_deff_exact(sd, window);
  CHECK(exact == doctest::Approx((2.0 * 3.0 + 1.0 * 2.0 + 2.0 * 3.0) / 30.0).epsilon(1e-12));
  CHECK(exact <= haar_avg_inv_deff_bound(sd, window.dim_r()));

  // A subspace that does not commute with H: oracle sums Tr[PΠ]^2 + Tr[(PΠ)^2] explicitly.
  const SubspaceProjector generic = SubspaceProjector::from_basis(random_unitary(6, rng).leftCols(3));
  const CMatrix pi = generic.projector();
  double acc = 0.0;
  for (Index n = 0; n < sd.d_e; ++n) {
    const CMatrix ppi = sd.projector(n) * pi;
    acc += std::pow(ppi.trace().real(), 2) + (ppi * ppi).trace().real();
  }
  CHECK(haar_avg_inv_deff_exact(sd, generic) == doctest::Approx(acc / 12.0).epsilon(1e-12));
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  Rng draws(8);
  for (int k = 0; k < n; ++k) {
    const double x = 1.0 / effective_dimension(haar_random_state(generic, draws), sd);
    sum += x, sum2 += x * x;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - acc / 12.0) <= 3.0 * std::sqrt((sum2 / n - mean * mean) / n));
}

TEST_CASE("exact Haar average never exceeds the bound") {
  Rng rng(9);
  std::uniform_int_distribution<int> levels(1, 5), mult(1, 4);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> e;
    const int nl = levels(rng);
    for (int l = 0; l < nl; ++l)
      for (int m = mult(rng); m > 0; --m) e.push_back(static_cast<double>(l));
    CMatrix h = CMatrix::Zero(static_cast<Index>(e.size()), static_cast<Index>(e.size()));
    for (std::size_t i = 0; i < e.size(); ++i) h(static_cast<Index>(i), static_cast<Index>(i)) = e[i];
    const SpectralData sd = decompose(h, 1e-9);
    CHECK(haar_avg_inv_deff_exact(sd) <= haar_avg_inv_deff_bound(sd, sd.dim()) * (1 + 1e-12));
  }
}

TEST_CASE("eq25 and eq26") {
  BoundInputs bi;
  bi.h_eff = 1.0;
  bi.d_s = 2;
  bi.d_b = 16;
  bi.eta = 0.0;
  bi.d_gap = 1;
  bi.d_g = 1;
  bi.d_e = 32;
  bi.d_r = 32;
  bi.delta_min = 0.5;
  bi.horizon = Horizon::unbounded();
  // (1/sqrt 8) * sqrt(8*32*16/(32*33)), evaluated independently.
  const double expect = (1.0 / std::sqrt(8.0)) * std::sqrt(8.0 * 32.0 * 16.0 / (32.0 * 33.0));
  CHECK(expect == doctest::Approx(0.6963106238227914).epsilon(1e-14));
  CHECK(eq25_rhs(bi) == doctest::Approx(0.6963106238227914).epsilon(1e-13));

  CHECK(eq26_rhs(1.0, 2, 64) == doctest::Approx(0.1767766952966369).epsilon(1e-14));
  CHECK(eq26_rhs(0.0, 2, 64) == 0.0);
  for (Index db : {8, 16, 32, 64}) CHECK(eq26_rhs(1.3, 2, 2 * db) == 0.5 * eq26_rhs(1.3, 2, db));

  // Substituting d_R = d_S d_B and D_G = 1: eq25 approaches eq26 with relative deviation <= 1/d_R.
  for (Index db : {8, 16, 32, 64, 128}) {
    BoundInputs s = bi;
    s.d_b = db;
    s.d_e = s.d_r = 2 * db;
    s.h_eff = 2.7;
    const double a = eq25_rhs(s);
    const double b = eq26_rhs(s.h_eff, 2, db);
    CHECK(a <= b);
    CHECK(std::abs(a - b) / b <= 1.0 / static_cast<double>(s.d_r));
    CHECK(a == doctest::Approx(b * std::sqrt(static_cast<double>(s.d_r) / (s.d_r + 1.0))).epsilon(1e-13));
  }
}

TEST_CASE("every right-hand side is nonincreasing in T and D_eff") {
  Rng rng(10);
  for (int k = 0; k < 300; ++k) {
    const BoundInputs bi = random_inputs(rng);
    BoundInputs later = bi;
    later.horizon = Horizon::finite(bi.horizon.value * 2.0);
    BoundInputs never = bi;
    never.horizon = Horizon::unbounded();
    BoundInputs spread = bi;
    spread.d_eff = std::min(static_cast<double>(bi.d_e), bi.d_eff * 1.5);
    auto all = [](const BoundInputs& b) {
      return std::array<double, 5>{lemma1_rhs(b, 1.3, Lemma1Variant::GapWindow),
                                   lemma1_rhs(b, 1.3, Lemma1Variant::GapDegeneracy), lemma2_rhs(b),
                                   theorem1_delta_epsilon(b).delta, eq25_rhs(b)};
    };
    const auto base = all(bi), t2 = all(later), tinf = all(never), deff = all(spread);
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(t2[i] <= base[i]);
      CHECK(tinf[i] <= t2[i]);
      CHECK(deff[i] <= base[i]);
    }
    // eq25 does not depend on D_eff.
    CHECK(deff[4] == base[4]);
  }
}

TEST_CASE("make_bound_inputs collects the spectral fields") {
  HamiltonianSpec spec;
  spec.dim_s = 2;
  spec.dim_b = 8;
  spec.seed = 11;
  const JointHamiltonian h = build_hamiltonian(spec);
  const SpectralData sd = decompose(h);
  const GapStructure gs = gap_structure(sd);
  const BoundInputs bi = make_bound_inputs(h, sd, gs, 3.5, Horizon::finite(10.0), 0.2);
  CHECK(bi.h_eff == effective_h(h));
  CHECK(bi.d_s == 2);
  CHECK(bi.d_b == 8);
  CHECK(bi.d_e == sd.d_e);
  CHECK(bi.d_g == sd.d_g);
  CHECK(bi.d_gap == gs.d_gap_max);
  CHECK(bi.delta_min == gs.delta_min);
  CHECK(bi.d_eff == 3.5);
  CHECK(bi.d_r == 16);
  CHECK(bi.eta == 0.2);
}

TEST_CASE("lemma 1 holds on a random 2x8 system for 100 seeds") {
  HamiltonianSpec spec;
  spec.dim_s = 2;
  spec.dim_b = 8;
  spec.seed = 12;
  const JointHamiltonian h = build_hamiltonian(spec);
  const SpectralData sd = decompose(h);
  const GapStructure gs = gap_structure(sd);
  const CMatrix obs = kron(alternating_z(2), CMatrix::Identity(8, 8));
  const double onp = norm_prime(obs);
  CHECK(onp == doctest::Approx(1.0));
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const QuantumState s = haar_random_state(SubspaceProjector::full(16), seed, Dims{2, 8});
    const Trajectory traj(s, sd, 10.0, 256);
    BoundInputs bi = make_bound_inputs(h, sd, gs, effective_dimension(s, sd), Horizon::finite(10.0));
    bi.delta_window = 2.0 * gs.delta_min;
    bi.n_delta_value = n_delta(gs, bi.delta_window);
    const double lhs = lhs_lemma1(traj, obs);
    CHECK(lhs <= lemma1_rhs(bi, onp, Lemma1Variant::GapDegeneracy));
    CHECK(lhs <= lemma1_rhs(bi, onp, Lemma1Variant::GapWindow));
  }
}
