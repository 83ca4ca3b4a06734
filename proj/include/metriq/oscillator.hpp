#pragma once

// Two-dimensional oscillator with complex angular frequencies, realized on a
// two-mode Fock space with total-occupation truncation (mode 0 = x, mode 1 = y).
// Position and momentum use the reference scale Ω₀ = 1:
//   x = (a + a†)/√(2m),  p = i√(m/2)(a† − a).

#include <array>
#include <utility>
#include <vector>

#include "metriq/fock.hpp"

namespace metriq {

struct OscillatorParams {
  double mass = 1.0;
  double k1 = 1.0;
  double k2 = 1.0;
  double k3 = 0.0;
  double gamma = 0.0;
  double xi = 0.0;

  cplx w() const { return {gamma, xi}; }
  /// k1 > 0, k2 > 0 and 4 k1 k2 > k3².
  bool in_real_spectrum_regime() const;
  /// Throws DomainError unless m > 0 and every field is finite.
  void validate() const;

  bool operator==(const OscillatorParams&) const = default;
};

/// The combinations m ω₁², m ω₂², m ω₃².
struct ComplexFrequencies {
  cplx mw1sq;
  cplx mw2sq;
  cplx mw3sq;
};

ComplexFrequencies complex_frequencies(const OscillatorParams& params);
/// Recovers (k1, k2, k3) from the complex combinations at deformation w.
std::array<double, 3> stiffness_from_frequencies(const ComplexFrequencies& f, cplx w);

/// λ± as printed, {λ₊, λ₋}. Throws DomainError outside the real-spectrum regime.
std::pair<double, double> lambda_pm_paper(const OscillatorParams& params);
/// ω± = √(κ±/m) from the stiffness matrix [[k1, k3/2], [k3/2, k2]], {ω₊, ω₋}.
std::pair<double, double> normal_mode_frequencies(const OscillatorParams& params);
/// Lowest `count` values of (n₊ + ½)ω₊ + (n₋ + ½)ω₋.
std::vector<double> oscillator_levels(const OscillatorParams& params, std::size_t count);

struct RotatedFrame {
  double theta = 0.0;
};

/// θ = ½ atan(k3/(k1 − k2)); π/4 when k1 = k2 and k3 ≠ 0; 0 when k1 = k2 and k3 = 0.
RotatedFrame rotation_angle(double k1, double k2, double k3);

/// Two-mode space with Σn ≤ cutoff.
FockSpace oscillator_space(int cutoff);

/// Position and momentum expressions for one mode.
BosonExpr position_expr(int mode, double mass = 1.0);
BosonExpr momentum_expr(int mode, double mass = 1.0);
/// L_z = x p_y − y p_x = i(a₁a₂† − a₁†a₂).
BosonExpr angular_momentum_expr();

ComplexMatrix angular_momentum_z(const FockSpace& space);
ComplexMatrix build_xy_hamiltonian(const OscillatorParams& params, const FockSpace& space);

/// η₊ = e^{−2γL_z} with ρ = e^{−γL_z}.
InnerProductSpace oscillator_inner_product_space(const FockSpace& space, double gamma);
/// U = e^{−iξL_z}
ComplexMatrix oscillator_rotation(const FockSpace& space, double xi);

struct CanonicalOps {
  ComplexMatrix x, y, px, py, lz;
};

/// Untransformed (x, y, p_x, p_y, L_z), unit mass.
CanonicalOps canonical_ops(const FockSpace& space);
/// (X, Y, P_X, P_Y, L_Z), unit mass. Every operator and product of operators
/// is realized as an exact projection.
CanonicalOps transformed_canonical_ops(const FockSpace& space, cplx w);

struct CanonicalIdentities {
  double length_residual = 0.0;     ///< ||(X²+Y²) − (x²+y²)||_F
  double momentum_residual = 0.0;   ///< ||(P_X²+P_Y²) − (p_x²+p_y²)||_F
  double commutator_residual = 0.0; ///< [X, P_X] − i and [Y, P_Y] − i on sub-cutoff columns
  double cross_residual = 0.0;      ///< [X, P_Y], [X, Y], [P_X, P_Y] on sub-cutoff columns
  double rotation_residual = 0.0;   ///< ρXρ⁻¹ − (x cos ξ − y sin ξ), relative
};

CanonicalIdentities transformed_identities(const FockSpace& space, cplx w);

/// ||L̄_z|n,m⟩ − (√((n+1)m)|n+1,m−1⟩ − √(n(m+1))|n−1,m+1⟩)|| with L̄_z = iL_z.
/// Requires n + m + 1 < cutoff.
double lz_ladder_identity(const FockSpace& space, int n, int m);
/// Same identity on unnormalized monomials (a_u†)^n (a_v†)^m |0⟩, where the
/// coefficients are m and n; returned relative to the norm of the image.
double lz_ladder_identity_monomial(const FockSpace& space, int n, int m);

/// max over pairs of |⟨⟨e^{wL}ψ′, Â e^{wL}ψ⟩⟩_η − ⟨ψ′|(Uρ)Â(Uρ)⁻¹|ψ⟩|, ψ, ψ′ basis states.
double matrix_element_equivalence(const FockSpace& space, const ComplexMatrix& ahat, cplx w,
                                  std::span<const std::pair<Eigen::Index, Eigen::Index>> pairs);
/// max |G − I| for the η-Gram matrix of e^{wL_z}|k⟩ over the given basis indices.
double transformed_gram_defect(const FockSpace& space, cplx w,
                               std::span<const Eigen::Index> indices);

}  // namespace metriq
