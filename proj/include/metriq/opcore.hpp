#pragma once

// Dense complex operator algebra and the metric machinery shared by every
// model: adjoints with respect to a metric, principal square roots, similarity
// maps to hermitian form, modified inner products, spectra and time evolution.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "metriq/errors.hpp"

namespace metriq {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

/// Module-wide numerical thresholds.
namespace tolerance {
/// Positive-definiteness guard, relative to the largest eigenvalue.
inline constexpr double kPositiveDefinite = 1e-12;
/// An eigenvalue counts as real when |Im λ| <= kReality * (1 + |λ|).
inline constexpr double kReality = 1e-9;
/// Metrics with an estimated condition number above this are singular.
inline constexpr double kMaxCondition = 1e14;
/// Eigenvector matrices above this condition number are treated as defective.
inline constexpr double kMaxEigenvectorCondition = 1e10;
/// Hermiticity / unitarity acceptance for metric-like inputs.
inline constexpr double kStructure = 1e-10;
}  // namespace tolerance

/// Per-mode (or per-site) deformation parameters w_i = γ_i + iξ_i.
struct MetricSpec {
  std::vector<double> gammas;
  std::vector<double> xis;

  static MetricSpec uniform(std::size_t n, double gamma, double xi = 0.0);
  static MetricSpec from_ws(std::span<const cplx> ws);

  std::size_t size() const { return gammas.size(); }
  cplx w(std::size_t i) const { return {gammas[i], xis[i]}; }
  std::vector<cplx> ws() const;
  /// Throws DomainError on unequal lengths or non-finite entries.
  void validate() const;

  bool operator==(const MetricSpec&) const = default;
};

/// Eigenvalues sorted by (real part, imaginary part).
struct SpectrumResult {
  std::vector<cplx> eigenvalues;
  double max_imag_abs = 0.0;
  /// max over eigenpairs of ||Av - λv|| / ||v||
  double residual = 0.0;

  /// Largest |Im λ| / (1 + |λ|).
  double reality_defect() const;
  bool is_real(double tol = tolerance::kReality) const { return reality_defect() <= tol; }
  std::vector<double> real_parts() const;
};

/// A metric η, its principal square root ρ and ρ⁻¹.
class InnerProductSpace {
 public:
  const ComplexMatrix& metric() const { return metric_; }
  const ComplexMatrix& rho() const { return rho_; }
  const ComplexMatrix& rho_inverse() const { return rho_inverse_; }
  Eigen::Index dim() const { return metric_.rows(); }

  /// Exact construction for a diagonal metric given by its (positive) diagonal.
  static InnerProductSpace from_diagonal(std::span<const double> metric_diagonal);
  /// Construction from a known hermitian root ρ and its inverse; the metric is ρ².
  /// Validates ρ hermitian and ρ·ρ⁻¹ = I.
  static InnerProductSpace from_root(ComplexMatrix rho, ComplexMatrix rho_inverse);

 private:
  friend InnerProductSpace matrix_sqrt_pd(const ComplexMatrix& eta);
  InnerProductSpace(ComplexMatrix metric, ComplexMatrix rho, ComplexMatrix rho_inverse)
      : metric_(std::move(metric)), rho_(std::move(rho)), rho_inverse_(std::move(rho_inverse)) {}

  ComplexMatrix metric_;
  ComplexMatrix rho_;
  ComplexMatrix rho_inverse_;
};

struct PseudoHermiticity {
  bool holds = false;
  double residual = 0.0;
};

// ---- structural helpers ----------------------------------------------------

/// Throws DimensionError/DomainError unless `a` is square, non-empty and finite.
void require_operator(const ComplexMatrix& a, const char* what);
/// ||A - A†||_F / (1 + ||A||_F)
double hermiticity_defect(const ComplexMatrix& a);
/// ||U†U - I||_F / sqrt(dim)
double unitarity_defect(const ComplexMatrix& u);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// e^{c L} for hermitian L, evaluated block by block on the connected
/// components of L's sparsity pattern.
ComplexMatrix exp_hermitian(const ComplexMatrix& l, cplx c);
/// Principal submatrix on the given indices.
ComplexMatrix restrict_to(const ComplexMatrix& a, std::span<const Eigen::Index> indices);

// ---- metric operations -----------------------------------------------------

/// η⁻¹ A† η. Pseudo-hermitian A (A† = ηAη⁻¹) is a fixed point.
ComplexMatrix eta_adjoint(const ComplexMatrix& a, const ComplexMatrix& eta);

/// Tests A†η = ηA; residual = ||A†η − ηA||_F / (1 + ||ηA||_F).
PseudoHermiticity is_pseudo_hermitian(const ComplexMatrix& a, const ComplexMatrix& eta,
                                      double tol = 1e-12);

/// Principal square root of a hermitian positive-definite metric.
InnerProductSpace matrix_sqrt_pd(const ComplexMatrix& eta);

/// ⟨ψ, ηφ⟩, conjugate-linear in ψ.
cplx modified_inner(const ComplexVector& psi, const ComplexVector& phi, const ComplexMatrix& eta);

/// (Uρ) H (Uρ)⁻¹.
ComplexMatrix to_hermitian(const ComplexMatrix& h, const InnerProductSpace& space,
                           const ComplexMatrix& u);
ComplexMatrix to_hermitian(const ComplexMatrix& h, const InnerProductSpace& space);

/// ρ⁻¹ B̂ ρ for a Dirac-hermitian B̂.
ComplexMatrix map_observable(const ComplexMatrix& bhat, const InnerProductSpace& space);

// ---- spectra and dynamics --------------------------------------------------

SpectrumResult spectrum(const ComplexMatrix& a);
/// Sorted real eigenvalues of a hermitian matrix (hermitian part is used).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// Largest pairwise distance between two spectra after (Re, Im) sorting.
double spectral_distance(std::span<const cplx> a, std::span<const cplx> b);
double spectral_distance(std::span<const cplx> a, std::span<const double> b);
double spectral_distance(std::span<const double> a, std::span<const double> b);

/// ψ(t) = e^{−iHt} ψ₀ through the eigendecomposition of H; one state per time.
std::vector<ComplexVector> evolve(const ComplexMatrix& h, const ComplexVector& psi0,
                                  std::span<const double> times);

}  // namespace metriq
