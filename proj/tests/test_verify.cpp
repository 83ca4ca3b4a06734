#include <gtest/gtest.h>

#include "metriq/fock.hpp"
#include "metriq/spin.hpp"
#include "metriq/verify.hpp"
#include "oracles.hpp"

using namespace metriq;

namespace {

const CheckResult& find(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(Suite, HermitianWithIdentityPassesEverything) {
  oracle::Rng rng(51);
  const auto r = run_suite(oracle::random_hermitian(6, rng), ComplexMatrix::Identity(6, 6));
  ASSERT_EQ(r.checks.size(), 5u);
  EXPECT_EQ(r.checks[0].name, "metric");
  EXPECT_EQ(r.checks[4].name, "normConservation");
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.version, kVersion);
}

TEST(Suite, NilpotentFailsPseudoHermiticity) {
  ComplexMatrix e = ComplexMatrix::Zero(2, 2);
  e(0, 1) = 1.0;
  const auto r = run_suite(e, ComplexMatrix::Identity(2, 2));
  const auto& ph = find(r, "pseudoHermiticity");
  EXPECT_FALSE(ph.passed);
  EXPECT_GT(ph.residual, 0.0);
  EXPECT_FALSE(r.all_passed());
  // a defective matrix cannot be evolved; the failure is flagged as numerical
  EXPECT_TRUE(find(r, "normConservation").numerical_failure);
}

TEST(Suite, BuilderOutputsPass) {
  oracle::Rng rng(52);
  {
    const FockSpace s(2, 8);
    BosonQuadraticForm f{RealMatrix{{2.0, 0.3}, {0.3, 1.5}}, RealMatrix{{0.4, 0.1}, {0.1, 0.2}},
                         MetricSpec{{0.2, -0.1}, {0.3, 0.0}}};
    EXPECT_TRUE(run_suite(build_quadratic_H(s, f), boson_inner_product_space(s, f.metric)).all_passed());
  }
  {
    auto spec = SpinChainSpec::zeros(5, 1.0, 0.4);
    spec.fields_a = oracle::random_vector(5, rng, -1, 1);
    spec.fields_c = oracle::random_vector(5, rng, -1, 1);
    spec.metric.gammas = oracle::random_vector(5, rng, -0.4, 0.4);
    spec.metric.xis = oracle::random_vector(5, rng, -1, 1);
    const auto r = run_suite(build_xxz_asymmetric(spec), chain_inner_product_space(spec));
    for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.residual << " " << c.detail;
  }
  {
    const ComplexMatrix h = build_haldane_shastry(4, 1, MetricSpec{{0.1, -0.2, 0.3, 0.0}, {0, 0.1, 0, 0}});
    auto spec = SpinChainSpec::zeros(4);
    spec.metric = MetricSpec{{0.1, -0.2, 0.3, 0.0}, {0, 0.1, 0, 0}};
    EXPECT_TRUE(run_suite(h, build_zeta_metric(spec)).all_passed());
  }
}

TEST(Suite, NonPositiveMetricFailsMetricCheck) {
  const ComplexMatrix eta = Eigen::Vector2d(1.0, -1.0).cast<cplx>().asDiagonal();
  const auto r = run_suite(ComplexMatrix::Identity(2, 2), eta);
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_FALSE(r.checks[0].passed);
  EXPECT_EQ(r.checks[0].name, "metric");
}

TEST(Suite, ToleranceOverridesAndSeed) {
  SuiteOptions o;
  o.tolerances["reality"] = 1e-30;
  o.seed = 99;
  ComplexMatrix h(2, 2);
  h << 0.0, std::exp(0.4), std::exp(-0.4), 0.0;
  const auto r = run_suite(h, Eigen::Vector2d(std::exp(-0.8), 1.0).cast<cplx>().asDiagonal(), o);
  EXPECT_EQ(find(r, "reality").tolerance, 1e-30);
  EXPECT_EQ(r.seed, 99u);
  EXPECT_EQ(default_tolerance("isospectral"), 1e-10);
  EXPECT_EQ(default_tolerance("somethingElse"), 1e-10);
  EXPECT_EQ(o.time_grid().size(), 32u);
  EXPECT_DOUBLE_EQ(o.time_grid().back(), 10.0);
}

TEST(Suite, ResultsAreReproducibleForAFixedSeed) {
  oracle::Rng rng(54);
  const ComplexMatrix eta = oracle::random_hermitian_pd(5, rng);
  const auto sp = matrix_sqrt_pd(eta);
  const ComplexMatrix h = sp.rho_inverse() * oracle::random_hermitian(5, rng) * sp.rho();
  const auto a = run_suite(h, eta), b = run_suite(h, eta);
  EXPECT_EQ(find(a, "normConservation").residual, find(b, "normConservation").residual);
  EXPECT_EQ(random_state(4, 3), random_state(4, 3));
  EXPECT_NE(random_state(4, 3), random_state(4, 4));
}

TEST(MakeCheck, NaNFails) {
  EXPECT_FALSE(make_check("x", NAN, 1.0).passed);
  EXPECT_TRUE(make_check("x", 1.0, 1.0).passed);
  EXPECT_FALSE(failed_check("x", 1.0, "boom").passed);
}

TEST(Graded, SymmetrizeExamples) {
  GradedMatrix zero{RealMatrix{{1.0, 2.0}, {2.0, 3.0}}, {0.0, 0.0}};
  EXPECT_LT((pseudo_symmetric_symmetrize(zero) - zero.core.cast<cplx>()).norm(), 1e-15);
  EXPECT_LT((zero.realized() - zero.core.cast<cplx>()).norm(), 1e-15);

  GradedMatrix m{RealMatrix{{0.0, 1.0}, {1.0, 0.0}}, {0.5, 0.0}};
  const ComplexMatrix real = m.realized();
  EXPECT_NEAR(real(0, 1).real(), std::exp(0.5), 1e-15);
  EXPECT_NEAR(real(1, 0).real(), std::exp(-0.5), 1e-15);
  const ComplexMatrix sym = pseudo_symmetric_symmetrize(m);
  EXPECT_NEAR(sym(0, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(sym(1, 0).real(), 1.0, 1e-15);
  EXPECT_LT(oracle::max_abs_diff(spectrum(real).real_parts(), {-1.0, 1.0}), 1e-15);
}

TEST(Graded, RandomSymmetrization) {
  oracle::Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    GradedMatrix m{oracle::random_symmetric(6, rng), oracle::random_vector(6, rng, -1, 1)};
    const ComplexMatrix sym = pseudo_symmetric_symmetrize(m);
    EXPECT_LT((sym - sym.transpose()).norm(), 1e-13);
    EXPECT_LT((sym - m.core.cast<cplx>()).norm(), 1e-13);
    const auto sp = spectrum(m.realized());
    EXPECT_TRUE(sp.is_real(1e-10));
    EXPECT_LT(oracle::max_abs_diff(sp.real_parts(), oracle::hermitian_spectrum(m.core.cast<cplx>())), 1e-10);
  }
}

TEST(Graded, Validation) {
  GradedMatrix bad{RealMatrix{{1.0, 2.0}, {2.5, 3.0}}, {0.0, 0.0}};
  EXPECT_THROW(bad.validate(), DomainError);
  GradedMatrix shape{RealMatrix::Identity(2, 2), {0.0}};
  EXPECT_THROW(shape.validate(), DimensionError);
}

TEST(GradedConjugation, Examples) {
  oracle::Rng rng(56);
  const ComplexMatrix x = oracle::random_complex(4, rng);
  const ComplexMatrix grading = Eigen::Vector4d(1, 0, -2, 3).cast<cplx>().asDiagonal();
  const auto zero = graded_conjugation_check(x, grading, 0.0);
  EXPECT_EQ(zero.entrywise, 0.0);
  EXPECT_EQ(zero.cycle, 0.0);

  // single entry at (0, 1), m_0 = 1, m_1 = 0: scaled by e^{γ}
  ComplexMatrix single = ComplexMatrix::Zero(2, 2);
  single(0, 1) = 1.0;
  const ComplexMatrix g2 = Eigen::Vector2d(1, 0).cast<cplx>().asDiagonal();
  const ComplexMatrix rho = Eigen::Vector2d(std::exp(-0.4), 1.0).cast<cplx>().asDiagonal();
  const ComplexMatrix conj = rho.inverse() * single * rho;
  EXPECT_NEAR(conj(0, 1).real(), 1.4918246976412703, 1e-15);
  EXPECT_LT(graded_conjugation_check(single, g2, 0.4).entrywise, 1e-15);
}

TEST(GradedConjugation, RandomTwentyByTwenty) {
  oracle::Rng rng(57);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix x = oracle::random_complex(20, rng);
    Eigen::VectorXd grades(20);
    for (int i = 0; i < 20; ++i) grades(i) = std::floor(oracle::uniform(rng, -3, 4));
    const auto r = graded_conjugation_check(x, grades.cast<cplx>().asDiagonal(), oracle::uniform(rng, -0.5, 0.5));
    EXPECT_LT(r.entrywise, 1e-14);
    EXPECT_LT(r.cycle, 1e-13);
  }
  const ComplexMatrix frac = Eigen::Vector2d(0.5, 0).cast<cplx>().asDiagonal();
  EXPECT_THROW(graded_conjugation_check(ComplexMatrix::Identity(2, 2), frac, 0.1), DomainError);
}
