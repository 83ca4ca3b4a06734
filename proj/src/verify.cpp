#include "metriq/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace metriq {
namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

template <typename F>
CheckResult guarded(const std::string& name, double tol, F&& body) {
  try {
    return body();
  } catch (const NumericalError& e) {
    auto c = failed_check(name, tol, e.what());
    c.numerical_failure = true;
    return c;
  } catch (const std::exception& e) {
    return failed_check(name, tol, e.what());
  }
}

}  // namespace

CheckResult make_check(std::string name, double residual, double tolerance, std::string detail) {
  CheckResult c;
  c.name = std::move(name);
  c.residual = residual;
  c.tolerance = tolerance;
  c.passed = residual <= tolerance;
  c.detail = std::move(detail);
  return c;
}

CheckResult failed_check(std::string name, double tolerance, const std::string& what) {
  return make_check(std::move(name), std::numeric_limits<double>::infinity(), tolerance, what);
}

bool VerificationReport::all_passed() const {
  if (checks.empty()) return false;
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

double default_tolerance(const std::string& check) {
  static const std::map<std::string, double> table{
      {check_names::kMetric, 1e-12},           {check_names::kPseudoHermiticity, 1e-12},
      {check_names::kReality, 1e-9},           {check_names::kIsospectral, 1e-10},
      {check_names::kNormConservation, 1e-10},
  };
  const auto it = table.find(check);
  return it == table.end() ? 1e-10 : it->second;
}

double SuiteOptions::tolerance(const std::string& check) const {
  const auto it = tolerances.find(check);
  return it == tolerances.end() ? default_tolerance(check) : it->second;
}

std::vector<double> SuiteOptions::time_grid() const {
  if (!times.empty()) return times;
  std::vector<double> t(32);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 10.0 * double(k) / double(t.size() - 1);
  return t;
}

ComplexVector random_state(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

VerificationReport run_suite(const ComplexMatrix& h, const ComplexMatrix& eta,
                             const SuiteOptions& options) {
  require_operator(h, "run_suite");
  require_operator(eta, "run_suite");
  if (h.rows() != eta.rows()) throw DimensionError("run_suite: H and eta differ in dimension");
  try {
    return run_suite(h, matrix_sqrt_pd(eta), options);
  } catch (const Error& e) {
    VerificationReport r;
    r.model = options.model;
    r.seed = options.seed;
    r.checks.push_back(failed_check(check_names::kMetric, options.tolerance(check_names::kMetric),
                                    e.what()));
    return r;
  }
}

VerificationReport run_suite(const ComplexMatrix& h, const InnerProductSpace& space,
                             const SuiteOptions& options) {
  using namespace check_names;
  require_operator(h, "run_suite");
  if (h.rows() != space.dim()) throw DimensionError("run_suite: H and metric differ in dimension");
  const auto start = std::chrono::steady_clock::now();

  VerificationReport r;
  r.model = options.model;
  r.seed = options.seed;
  const ComplexMatrix& eta = space.metric();

  r.checks.push_back(guarded(kMetric, options.tolerance(kMetric), [&] {
    const double herm = hermiticity_defect(eta);
    const double root = (space.rho() * space.rho() - eta).norm() / eta.norm();
    const auto ev = hermitian_eigenvalues(eta);
    std::string detail = "min/max eigenvalue " + fmt(ev.front() / ev.back());
    if (!(ev.front() > tolerance::kPositiveDefinite * ev.back())) {
      return failed_check(kMetric, options.tolerance(kMetric), "not positive definite: " + detail);
    }
    return make_check(kMetric, std::max(herm, root), options.tolerance(kMetric), detail);
  }));

  r.checks.push_back(guarded(kPseudoHermiticity, options.tolerance(kPseudoHermiticity), [&] {
    const auto ph = is_pseudo_hermitian(h, eta);
    return make_check(kPseudoHermiticity, ph.residual, options.tolerance(kPseudoHermiticity));
  }));

  SpectrumResult spec;
  r.checks.push_back(guarded(kReality, options.tolerance(kReality), [&] {
    spec = spectrum(h);
    return make_check(kReality, spec.reality_defect(), options.tolerance(kReality),
                      "max |Im| " + fmt(spec.max_imag_abs));
  }));

  r.checks.push_back(guarded(kIsospectral, options.tolerance(kIsospectral), [&] {
    if (spec.eigenvalues.empty()) spec = spectrum(h);
    const ComplexMatrix hh = to_hermitian(h, space);
    const double herm = hermiticity_defect(hh);
    const double dist = spectral_distance(spec.eigenvalues, hermitian_eigenvalues(hh));
    return make_check(kIsospectral, std::max(dist, herm), options.tolerance(kIsospectral),
                      "spectral distance " + fmt(dist) + ", hermiticity defect " + fmt(herm));
  }));

  r.checks.push_back(guarded(kNormConservation, options.tolerance(kNormConservation), [&] {
    ComplexVector psi = random_state(h.rows(), options.seed);
    psi /= std::sqrt(modified_inner(psi, psi, eta).real());
    const auto grid = options.time_grid();
    const auto states = evolve(h, psi, grid);
    double eta_drift = 0.0, dirac_drift = 0.0;
    const double dirac0 = psi.squaredNorm();
    for (const auto& s : states) {
      eta_drift = std::max(eta_drift, std::abs(modified_inner(s, s, eta).real() - 1.0));
      dirac_drift = std::max(dirac_drift, std::abs(s.squaredNorm() - dirac0) / dirac0);
    }
    return make_check(kNormConservation, eta_drift, options.tolerance(kNormConservation),
                      std::to_string(grid.size()) + " times; Dirac-norm drift " + fmt(dirac_drift));
  }));

  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---- graded bases ----------------------------------------------------------

void GradedMatrix::validate() const {
  const auto n = core.rows();
  if (n < 1 || core.cols() != n) throw DimensionError("GradedMatrix: core must be square");
  if (static_cast<Eigen::Index>(grades.size()) != n) {
    throw DimensionError("GradedMatrix: need one grade per row");
  }
  if (!core.allFinite()) throw DomainError("GradedMatrix: non-finite core entry");
  for (double g : grades) {
    if (!std::isfinite(g)) throw DomainError("GradedMatrix: non-finite grade");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (core(i, j) != core(j, i)) {
        throw DomainError("GradedMatrix: core is not symmetric at (" + std::to_string(i + 1) +
                          "," + std::to_string(j + 1) + ")");
      }
    }
  }
}

ComplexMatrix GradedMatrix::realized() const {
  validate();
  const auto n = core.rows();
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = core(i, j) * std::exp(grades[i] - grades[j]);
    }
  }
  return m;
}

ComplexMatrix pseudo_symmetric_symmetrize(const GradedMatrix& m) {
  const ComplexMatrix realized = m.realized();
  ComplexVector rho(realized.rows()), rho_inv(realized.rows());
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    rho(i) = std::exp(-m.grades[i]);
    rho_inv(i) = std::exp(m.grades[i]);
  }
  return rho.asDiagonal() * realized * rho_inv.asDiagonal();
}

GradedConjugation graded_conjugation_check(const ComplexMatrix& x, const ComplexMatrix& grading,
                                           double gamma) {
  require_operator(x, "graded_conjugation_check");
  if (grading.rows() != x.rows() || grading.cols() != x.cols()) {
    throw DimensionError("graded_conjugation_check: grading does not match X");
  }
  const auto n = x.rows();
  std::vector<double> m(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && grading(i, j) != 0.0) {
        throw DomainError("graded_conjugation_check: grading is not diagonal");
      }
    }
    const cplx g = grading(i, i);
    if (g.imag() != 0.0 || g.real() != std::round(g.real())) {
      throw DomainError("graded_conjugation_check: grading entries must be integers");
    }
    m[static_cast<std::size_t>(i)] = g.real();
  }

  ComplexVector rho(n), rho_inv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rho(i) = std::exp(-gamma * m[i]);
    rho_inv(i) = std::exp(gamma * m[i]);
  }
  const ComplexMatrix conj = rho_inv.asDiagonal() * x * rho.asDiagonal();

  GradedConjugation out;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx expected = std::exp((m[i] - m[j]) * gamma) * x(i, j);
      out.entrywise = std::max(out.entrywise, std::abs(conj(i, j) - expected) / (1.0 + std::abs(expected)));
    }
  }
  auto rel = [](cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.cycle = std::max(out.cycle, rel(conj(i, j) * conj(j, i), x(i, j) * x(j, i)));
      for (Eigen::Index k = 0; k < n; ++k) {
        out.cycle = std::max(out.cycle, rel(conj(i, j) * conj(j, k) * conj(k, i),
                                            x(i, j) * x(j, k) * x(k, i)));
      }
    }
  }
  return out;
}

}  // namespace metriq
