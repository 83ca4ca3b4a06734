#include <gtest/gtest.h>

#include "metriq/fock.hpp"
#include "oracles.hpp"

using namespace metriq;

namespace {

BosonQuadraticForm swanson(double alpha, double beta, double gamma, double xi = 0.0) {
  BosonQuadraticForm f;
  f.alpha = RealMatrix::Constant(1, 1, alpha);
  f.beta = RealMatrix::Constant(1, 1, beta);
  f.metric = MetricSpec::uniform(1, gamma, xi);
  return f;
}

/// Random stable form: α = S + shift·I, β small symmetric, D ≻ 0.
BosonQuadraticForm random_stable_form(int n, oracle::Rng& rng) {
  while (true) {
    BosonQuadraticForm f;
    f.alpha = oracle::random_symmetric(n, rng, 0.5) + 2.0 * RealMatrix::Identity(n, n);
    f.beta = oracle::random_symmetric(n, rng, 0.6);
    f.metric.gammas = oracle::random_vector(n, rng, -0.3, 0.3);
    f.metric.xis = oracle::random_vector(n, rng, -0.5, 0.5);
    if (oracle::d_min(f.alpha, f.beta) > 0.1) return f;
  }
}

}  // namespace

TEST(FockSpace, PerModeEnumeration) {
  const FockSpace s(2, 3);
  EXPECT_EQ(s.dim(), 16);
  EXPECT_EQ(s.occupation(0), (Occupation{0, 0}));
  EXPECT_EQ(s.occupation(1), (Occupation{1, 0}));
  EXPECT_EQ(s.occupation(4), (Occupation{0, 1}));
  for (Eigen::Index i = 0; i < s.dim(); ++i) EXPECT_EQ(*s.index_of(s.occupation(i)), i);
  EXPECT_FALSE(s.index_of({4, 0}).has_value());
}

TEST(FockSpace, TotalOccupationEnumeration) {
  const FockSpace s(3, 4, Truncation::TotalOccupation);
  EXPECT_EQ(s.dim(), 35);  // C(4+3, 3)
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    const auto& o = s.occupation(i);
    EXPECT_LE(o[0] + o[1] + o[2], 4);
  }
  EXPECT_EQ(s.sector(2).size(), 6u);
}

TEST(FockSpace, Rejections) {
  EXPECT_THROW(FockSpace(0, 3), DomainError);
  EXPECT_THROW(FockSpace(1, 0), DomainError);
  EXPECT_THROW(FockSpace(4, 9), DomainError);  // 10^4 > default cap
  EXPECT_NO_THROW(FockSpace(4, 9, Truncation::PerMode, 10000));
}

TEST(Ladder, SingleModeTextbookMatrix) {
  const FockSpace s(1, 2);
  const auto a = ladder_ops(s, 0);
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected(0, 1) = 1.0;
  expected(1, 2) = std::sqrt(2.0);
  EXPECT_LT((a.lower - expected).norm(), 1e-15);
  EXPECT_LT((a.raise - expected.adjoint()).norm(), 1e-15);
}

TEST(Ladder, CanonicalCommutatorsBelowCutoff) {
  for (auto trunc : {Truncation::PerMode, Truncation::TotalOccupation}) {
    const FockSpace s(2, 6, trunc);
    const auto a0 = ladder_ops(s, 0), a1 = ladder_ops(s, 1);
    const auto below = s.below_cutoff_indices();
    const ComplexMatrix c00 = commutator(a0.lower, a0.raise);
    const ComplexMatrix c01 = commutator(a0.lower, a1.raise);
    const ComplexMatrix c01n = commutator(a0.lower, a1.lower);
    for (auto k : below) {
      EXPECT_LT((c00 * s.basis_vector(k) - s.basis_vector(k)).norm(), 1e-14);
      EXPECT_LT((c01 * s.basis_vector(k)).norm(), 1e-14);
      EXPECT_LT((c01n * s.basis_vector(k)).norm(), 1e-14);
    }
  }
}

TEST(Ladder, RealizeMatchesKroneckerInPerModeOrder) {
  const FockSpace s(2, 3);
  const FockSpace one(1, 3);
  const ComplexMatrix a = ladder_ops(one, 0).lower;
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  EXPECT_LT((ladder_ops(s, 0).lower - kron(id, a)).norm(), 1e-15);
  EXPECT_LT((ladder_ops(s, 1).lower - kron(a, id)).norm(), 1e-15);
}

TEST(Realize, ProductsAreExactProjections) {
  // P a a† P keeps the top state: (a a†)|n_max⟩ = (n_max + 1)|n_max⟩.
  const FockSpace s(1, 4);
  const ComplexMatrix m = realize(s, BosonExpr::annihilate(0) * BosonExpr::create(0));
  for (int n = 0; n <= 4; ++n) EXPECT_NEAR(m(n, n).real(), n + 1.0, 1e-14);
  const ComplexMatrix num = realize(s, BosonExpr::number(0));
  for (int n = 0; n <= 4; ++n) EXPECT_NEAR(num(n, n).real(), n, 1e-14);
}

TEST(TildeOps, ScalingAndEtaAdjoint) {
  const FockSpace s(2, 5);
  const MetricSpec zero = MetricSpec::uniform(2, 0.0);
  const auto t0 = tilde_ops(s, zero, 1);
  const auto a1 = ladder_ops(s, 1);
  EXPECT_LT((t0.lower - a1.lower).norm(), 1e-15);

  const MetricSpec m{{0.2, 0.7}, {0.0, 0.0}};
  const auto t = tilde_ops(s, m, 1);
  EXPECT_NEAR(std::exp(-0.7), 0.4965853037914095, 1e-15);
  EXPECT_LT((t.lower - std::exp(-0.7) * a1.lower).norm(), 1e-14);
  const ComplexMatrix eta = build_metric(s, m);
  for (int mode : {0, 1}) {
    const auto tm = tilde_ops(s, m, mode);
    EXPECT_LT((eta_adjoint(tm.lower, eta) - tm.raise).norm(), 1e-12);
  }
}

TEST(Metric, Examples) {
  const FockSpace s(1, 2);
  EXPECT_LT((build_metric(s, MetricSpec::uniform(1, 0.0)) - ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
  const auto d = metric_diagonal(s, MetricSpec::uniform(1, 0.5));
  EXPECT_NEAR(d[0], 1.0, 1e-15);
  EXPECT_NEAR(d[1], std::exp(-1.0), 1e-15);
  EXPECT_NEAR(d[2], std::exp(-2.0), 1e-15);
}

TEST(Metric, PositiveAndGuarded) {
  const FockSpace s(2, 10);
  oracle::Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const MetricSpec m{oracle::random_vector(2, rng, -3.0, 3.0), {0.0, 0.0}};
    for (double x : metric_diagonal(s, m)) EXPECT_GT(x, 0.0);
  }
  EXPECT_THROW(metric_diagonal(s, MetricSpec::uniform(2, 6.5)), DomainError);
  EXPECT_THROW(metric_diagonal(s, MetricSpec::uniform(3, 0.1)), DimensionError);
}

TEST(QuadraticH, HermitianLimitAndNumberOperator) {
  oracle::Rng rng(22);
  auto f = random_stable_form(2, rng);
  f.metric = MetricSpec::uniform(2, 0.0);
  const FockSpace s(2, 5);
  EXPECT_LT(hermiticity_defect(build_quadratic_H(s, f)), 1e-15);

  const auto g = swanson(1.7, 0.0, 0.4, 0.3);
  const ComplexMatrix h = build_quadratic_H(FockSpace(1, 6), g);
  for (int n = 0; n <= 6; ++n) EXPECT_NEAR(std::abs(h(n, n) - cplx(1.7 * n)), 0.0, 1e-14);
  EXPECT_LT((h - ComplexMatrix(h.diagonal().asDiagonal())).norm(), 1e-15);
}

TEST(QuadraticH, PseudoHermitianForRandomForms) {
  oracle::Rng rng(23);
  const FockSpace s(3, 4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_stable_form(3, rng);
    const auto r = is_pseudo_hermitian(build_quadratic_H(s, f), build_metric(s, f.metric));
    EXPECT_LT(r.residual, 1e-12);
  }
}

TEST(QuadraticH, CounterpartIsTheUndeformedForm) {
  oracle::Rng rng(24);
  const FockSpace s(2, 6);
  auto f = random_stable_form(2, rng);
  auto f0 = f;
  f0.metric = MetricSpec::uniform(2, 0.0);
  const ComplexMatrix h = build_quadratic_H(s, f);
  const ComplexMatrix mapped =
      to_hermitian(h, boson_inner_product_space(s, f.metric), phase_unitary(s, f.metric));
  EXPECT_LT((mapped - build_quadratic_H(s, f0)).norm(), 1e-12);
}

TEST(Swanson, LevelSpacing) {
  const auto f = swanson(2.0, 0.5, 0.3);
  const auto b = bogoliubov_frequencies(f);
  EXPECT_NEAR(b.omegas[0], std::sqrt(3.75), 1e-14);
  EXPECT_NEAR(b.omegas[0], 1.9364916731037085, 1e-14);
  EXPECT_NEAR(quadratic_spectrum(f, std::vector<Occupation>{{0}})[0], 0.9682458365518543, 1e-14);

  const FockSpace s(1, 60);
  const auto ev = lowest_eigenvalues(build_quadratic_H(s, f), 4);
  for (std::size_t k = 1; k < ev.size(); ++k) {
    EXPECT_NEAR(ev[k].real() - ev[k - 1].real(), std::sqrt(3.75), 1e-8);
    EXPECT_LT(std::abs(ev[k].imag()), 1e-9);
  }
  EXPECT_NEAR(ev[0].real() + normal_order_shift(f), 0.5 * std::sqrt(3.75), 1e-8);
}

TEST(Bogoliubov, FreeModeAndInstability) {
  EXPECT_NEAR(bogoliubov_frequencies(swanson(1.3, 0.0, 0.0)).omegas[0], 1.3, 1e-14);
  try {
    bogoliubov_frequencies(swanson(1.0, 1.5, 0.0));
    FAIL() << "expected UnstableFormError";
  } catch (const UnstableFormError& e) {
    EXPECT_NEAR(e.d_min_eigenvalue(), -0.5, 1e-14);
    EXPECT_NE(std::string(e.what()).find("-0.5"), std::string::npos);
  }
}

TEST(Bogoliubov, RandomFormsMatchOracle) {
  oracle::Rng rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_stable_form(3, rng);
    const auto b = bogoliubov_frequencies(f);
    EXPECT_LT(b.pairing_residual, 1e-10);
    EXPECT_LT(oracle::max_abs_diff(b.omegas, oracle::bogoliubov_oracle(f.alpha, f.beta)), 1e-10);
    EXPECT_NEAR(b.d_min_eigenvalue, oracle::d_min(f.alpha, f.beta), 1e-12);
    for (double om : b.omegas) EXPECT_GT(om, 0.0);
  }
}

TEST(QuadraticSpectrum, GroundStateAndOrdering) {
  oracle::Rng rng(26);
  const auto f = random_stable_form(2, rng);
  const auto om = bogoliubov_frequencies(f).omegas;
  EXPECT_NEAR(quadratic_spectrum(f, std::vector<Occupation>{{0, 0}})[0], 0.5 * (om[0] + om[1]), 1e-14);
  const auto lv = lowest_quadratic_levels(f, 12);
  const auto brute = oracle::oscillator_sums(om, 12);
  for (std::size_t k = 0; k < lv.size(); ++k) EXPECT_NEAR(lv[k], brute[k], 1e-12);
}

TEST(QuadraticSpectrum, TruncatedDiagonalizationConverges) {
  oracle::Rng rng(27);
  const auto f = random_stable_form(2, rng);
  const auto levels = lowest_quadratic_levels(f, 5);
  const FockSpace s(2, 20);
  const auto ev = lowest_eigenvalues(build_quadratic_H(s, f), 5);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_NEAR(ev[k].real() + normal_order_shift(f), levels[k], 1e-6);
  }
  const double est = truncation_error_estimate(
      [&](int c) { return build_quadratic_H(FockSpace(2, c), f); }, 20, 5);
  EXPECT_LT(est, 1e-6);
}

TEST(LowestLevelSums, MatchesBruteForce) {
  oracle::Rng rng(28);
  for (int trial = 0; trial < 10; ++trial) {
    const auto om = oracle::random_vector(3, rng, 0.3, 2.0);
    const auto lv = lowest_level_sums(om, 20);
    const auto brute = oracle::oscillator_sums(om, 20);
    ASSERT_EQ(lv.size(), 20u);
    for (std::size_t k = 0; k < lv.size(); ++k) EXPECT_NEAR(lv[k], brute[k], 1e-12);
  }
  const std::vector<double> bad{1.0, 0.0};
  EXPECT_THROW(lowest_level_sums(bad, 3), DomainError);
}

TEST(FormValidation, SymmetryAndShape) {
  auto f = swanson(1.0, 0.1, 0.0);
  f.alpha = RealMatrix{{1.0, 0.2}, {0.3, 1.0}};
  f.beta = RealMatrix::Zero(2, 2);
  f.metric = MetricSpec::uniform(2, 0.0);
  try {
    f.validate();
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,2)"), std::string::npos);
  }
  f.alpha = RealMatrix::Identity(2, 2);
  f.beta = RealMatrix::Zero(3, 3);
  EXPECT_THROW(f.validate(), DimensionError);
}

TEST(Schwinger, AlgebraAndEtaAdjoint) {
  const FockSpace s(2, 8, Truncation::TotalOccupation);
  const MetricSpec m{{0.3, -0.1}, {0.0, 0.0}};
  const auto j = schwinger_su2(s, m);
  const ComplexMatrix c1 = commutator(j.jplus, j.jminus) - 2.0 * j.jz;
  const ComplexMatrix c2 = commutator(j.jz, j.jplus) - j.jplus;
  const ComplexMatrix c3 = commutator(j.jz, j.jminus) + j.jminus;
  for (auto k : s.below_cutoff_indices()) {
    EXPECT_LT((c1 * s.basis_vector(k)).norm(), 1e-13);
    EXPECT_LT((c2 * s.basis_vector(k)).norm(), 1e-13);
    EXPECT_LT((c3 * s.basis_vector(k)).norm(), 1e-13);
  }
  EXPECT_LT((eta_adjoint(j.jminus, build_metric(s, m)) - j.jplus).norm(), 1e-12);

  // Ĵ₊ = e^{γ₁−γ₂} a₁†a₂: element ⟨1,0|Ĵ₊|0,1⟩
  const auto from = *s.index_of({0, 1}), to = *s.index_of({1, 0});
  EXPECT_NEAR(j.jplus(to, from).real(), std::exp(0.4), 1e-14);
  EXPECT_NEAR(std::exp(0.4), 1.4918246976412703, 1e-15);
}

TEST(Schwinger, EqualGammasGiveHermitianPair) {
  const FockSpace s(2, 6, Truncation::TotalOccupation);
  const auto j = schwinger_su2(s, MetricSpec::uniform(2, 0.25));
  EXPECT_LT((j.jplus - j.jminus.adjoint()).norm(), 1e-14);
  EXPECT_LT(hermiticity_defect(j.jz), 1e-15);
}

TEST(Lmg, StandardLimitAndDiagonalCase) {
  const FockSpace s(2, 10, Truncation::TotalOccupation);
  EXPECT_LT(hermiticity_defect(build_lmg(s, MetricSpec::uniform(2, 0.0), 1.0, 0.3)), 1e-15);

  const ComplexMatrix h = build_lmg(s, MetricSpec{{0.4, -0.2}, {0.0, 0.0}}, 1.5, 0.0);
  std::vector<double> expected;
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    const auto& o = s.occupation(i);
    expected.push_back(1.5 * 0.5 * (o[0] - o[1]));
  }
  EXPECT_LT(oracle::max_abs_diff(spectrum(h).real_parts(), oracle::sorted(expected)), 1e-13);
}

TEST(Lmg, IsospectralSectorBySector) {
  const FockSpace s(2, 20, Truncation::TotalOccupation);
  const ComplexMatrix h0 = build_lmg(s, MetricSpec::uniform(2, 0.0), 1.0, 0.2);
  const ComplexMatrix h1 = build_lmg(s, MetricSpec{{0.4, -0.2}, {0.1, 0.3}}, 1.0, 0.2);
  for (int total = 0; total <= 20; ++total) {
    const auto idx = s.sector(total);
    const auto a = spectrum(restrict_to(h0, idx));
    const auto b = spectrum(restrict_to(h1, idx));
    EXPECT_LT(spectral_distance(a.eigenvalues, b.eigenvalues), 1e-10) << "sector " << total;
    EXPECT_TRUE(b.is_real());
  }
}

TEST(Truncation, EstimateRequiresRoom) {
  auto build = [](int c) { return build_quadratic_H(FockSpace(1, c), swanson(2.0, 0.5, 0.3)); };
  EXPECT_THROW(truncation_error_estimate(build, 2, 1), DomainError);
  EXPECT_LT(truncation_error_estimate(build, 40, 3), 1e-8);
}
