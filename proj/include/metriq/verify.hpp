#pragma once

// Check engine over a (H, η) pair, plus graded-basis conjugation identities and
// pseudo-symmetric secular matrices.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "metriq/opcore.hpp"

namespace metriq {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
  bool numerical_failure = false;  ///< evaluation hit a NumericalError
};

/// passed = residual <= tolerance (NaN fails).
CheckResult make_check(std::string name, double residual, double tolerance, std::string detail = {});
/// A check whose evaluation threw: residual = ∞, detail carries the message.
CheckResult failed_check(std::string name, double tolerance, const std::string& what);

struct VerificationReport {
  std::string model;
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;
  std::string version = kVersion;
  std::uint64_t seed = kDefaultSeed;

  bool all_passed() const;
};

namespace check_names {
inline constexpr const char* kMetric = "metric";
inline constexpr const char* kPseudoHermiticity = "pseudoHermiticity";
inline constexpr const char* kReality = "reality";
inline constexpr const char* kIsospectral = "isospectral";
inline constexpr const char* kNormConservation = "normConservation";
}  // namespace check_names

/// Default tolerance for a named check; 1e-10 for names it does not know.
double default_tolerance(const std::string& check);

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> times;  ///< empty = 32 points on [0, 10]
  std::map<std::string, double> tolerances;  ///< overrides by check name
  std::string model = "matrix";

  double tolerance(const std::string& check) const;
  std::vector<double> time_grid() const;
};

/// metric, pseudoHermiticity, reality, isospectral, normConservation, in that order.
VerificationReport run_suite(const ComplexMatrix& h, const ComplexMatrix& eta,
                             const SuiteOptions& options = {});
/// Same, with ρ supplied instead of computed from η.
VerificationReport run_suite(const ComplexMatrix& h, const InnerProductSpace& space,
                             const SuiteOptions& options = {});

/// Seeded complex Gaussian vector.
ComplexVector random_state(Eigen::Index dim, std::uint64_t seed);

// ---- graded bases ----------------------------------------------------------

/// M_ij = a_ij e^{γ_i − γ_j} for symmetric a.
struct GradedMatrix {
  RealMatrix core;
  std::vector<double> grades;

  void validate() const;
  ComplexMatrix realized() const;
};

/// ρ M ρ⁻¹ with ρ = diag(e^{−γ_i}).
ComplexMatrix pseudo_symmetric_symmetrize(const GradedMatrix& m);

struct GradedConjugation {
  double entrywise = 0.0;  ///< max_ij |(ρ⁻¹Xρ)_ij − e^{(m_i−m_j)γ} X_ij| / (1 + |expected|)
  double cycle = 0.0;      ///< max over 2- and 3-cycles of the relative change in the product
};

/// ρ = e^{−γ·grading} for a diagonal integer grading.
GradedConjugation graded_conjugation_check(const ComplexMatrix& x, const ComplexMatrix& grading,
                                           double gamma);

}  // namespace metriq
