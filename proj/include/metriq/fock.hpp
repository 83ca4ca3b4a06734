#pragma once

// Truncated multimode bosonic Fock spaces, the non-hermitian quadratic boson
// form with its product metric, Bogoliubov frequencies, the deformed Schwinger
// realization of su(2) and the deformed Lipkin-Meshkov-Glick model.
//
// Basis ordering is little-endian in the occupations: mode 0 varies fastest.
// With Truncation::PerMode this is the Kronecker order mode_{N-1} ⊗ ... ⊗ mode_0.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "metriq/opcore.hpp"

namespace metriq {

enum class Truncation {
  PerMode,          ///< every n_i <= cutoff
  TotalOccupation,  ///< Σ n_i <= cutoff; commutes with every number-conserving operator
};

using Occupation = std::vector<int>;

class FockSpace {
 public:
  static constexpr std::size_t kDefaultDimCap = 4096;

  FockSpace(int modes, int cutoff, Truncation truncation = Truncation::PerMode,
            std::size_t dim_cap = kDefaultDimCap);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  Truncation truncation() const { return truncation_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(states_.size()); }

  const Occupation& occupation(Eigen::Index i) const { return states_[static_cast<std::size_t>(i)]; }
  std::optional<Eigen::Index> index_of(const Occupation& occ) const;

  /// States from which one more quantum in any mode stays inside the space.
  bool below_cutoff(Eigen::Index i) const;
  std::vector<Eigen::Index> below_cutoff_indices() const;
  /// States with total occupation `total`, in basis order.
  std::vector<Eigen::Index> sector(int total) const;
  ComplexVector basis_vector(Eigen::Index i) const;

 private:
  int modes_;
  int cutoff_;
  Truncation truncation_;
  std::vector<Occupation> states_;
  std::map<Occupation, Eigen::Index> lookup_;
};

/// A polynomial in creation/annihilation operators. Words act right to left,
/// as in an operator product.
class BosonExpr {
 public:
  struct Ladder {
    int mode;
    bool raise;
  };
  struct Term {
    cplx coeff;
    std::vector<Ladder> word;
  };

  BosonExpr() = default;
  static BosonExpr identity(cplx coeff = 1.0);
  static BosonExpr annihilate(int mode);
  static BosonExpr create(int mode);
  static BosonExpr number(int mode);

  const std::vector<Term>& terms() const { return terms_; }

  BosonExpr& operator+=(const BosonExpr& other);
  friend BosonExpr operator+(BosonExpr a, const BosonExpr& b) { return a += b; }
  friend BosonExpr operator-(BosonExpr a, const BosonExpr& b) { return a += (-1.0) * b; }
  friend BosonExpr operator*(const BosonExpr& a, const BosonExpr& b);
  friend BosonExpr operator*(cplx s, BosonExpr a);

 private:
  std::vector<Term> terms_;
};

/// Matrix of P·expr·P, where P projects on the truncated space. Words are applied
/// without intermediate truncation, so products are exact projections.
ComplexMatrix realize(const FockSpace& space, const BosonExpr& expr);

struct LadderPair {
  ComplexMatrix lower;
  ComplexMatrix raise;
};

/// Truncated a_i and a_i†.
LadderPair ladder_ops(const FockSpace& space, int mode);
/// A_i = e^{−γ_i} a_i and A_i‡ = e^{γ_i} a_i†, the η-adjoint pair.
LadderPair tilde_ops(const FockSpace& space, const MetricSpec& metric, int mode);

/// Diagonal of ∏_k e^{−2γ_k n_k}; entries are formed in log space.
std::vector<double> metric_diagonal(const FockSpace& space, const MetricSpec& metric);
ComplexMatrix build_metric(const FockSpace& space, const MetricSpec& metric);
InnerProductSpace boson_inner_product_space(const FockSpace& space, const MetricSpec& metric);
/// U = ∏_k e^{−iξ_k n_k}
ComplexMatrix phase_unitary(const FockSpace& space, const MetricSpec& metric);

struct BosonQuadraticForm {
  RealMatrix alpha;
  RealMatrix beta;
  MetricSpec metric;

  int modes() const { return static_cast<int>(alpha.rows()); }
  /// Exact symmetry of alpha and beta, matching sizes.
  void validate() const;
};

ComplexMatrix build_quadratic_H(const FockSpace& space, const BosonQuadraticForm& form);

struct BogoliubovResult {
  std::vector<double> omegas;  ///< ascending, all positive
  double pairing_residual = 0.0;
  double d_min_eigenvalue = 0.0;
};

/// D = [[α, β], [β, α]] is not strictly positive.
class UnstableFormError : public DomainError {
 public:
  UnstableFormError(const std::string& what, double d_min) : DomainError(what), d_min_(d_min) {}
  double d_min_eigenvalue() const { return d_min_; }

 private:
  double d_min_;
};

BogoliubovResult bogoliubov_frequencies(const BosonQuadraticForm& form);

/// Σ_i (n_i + ½) Ω_i for each requested occupation list.
std::vector<double> quadratic_spectrum(const BosonQuadraticForm& form,
                                       std::span<const Occupation> levels);
/// The `count` lowest values of Σ_i (n_i + ½) Ω_i, ascending.
std::vector<double> lowest_quadratic_levels(const BosonQuadraticForm& form, std::size_t count);
/// Same enumeration for arbitrary positive mode frequencies.
std::vector<double> lowest_level_sums(std::span<const double> omegas, std::size_t count);
/// ½ tr α: the constant separating the normal-ordered Hamiltonian built by
/// build_quadratic_H from the symmetrically ordered one whose levels are
/// Σ(n_i + ½)Ω_i. spectrum(build_quadratic_H) + shift = quadratic levels.
double normal_order_shift(const BosonQuadraticForm& form);

struct SchwingerGenerators {
  ComplexMatrix jplus;
  ComplexMatrix jminus;
  ComplexMatrix jz;
};

SchwingerGenerators schwinger_su2(const FockSpace& space, const MetricSpec& metric);

/// ω₀ Ĵ_z + ω (Ĵ₋² + Ĵ₊²), block diagonal in the total boson number.
ComplexMatrix build_lmg(const FockSpace& space, const MetricSpec& metric, double omega0,
                        double omega);

/// Largest shift among the `count` lowest eigenvalues (ordered by real part)
/// between cutoffs n_max and n_max − 2.
double truncation_error_estimate(const std::function<ComplexMatrix(int)>& build, int cutoff,
                                 std::size_t count);

/// The `count` lowest eigenvalues of a matrix, ordered by real part.
std::vector<cplx> lowest_eigenvalues(const ComplexMatrix& h, std::size_t count);

}  // namespace metriq
