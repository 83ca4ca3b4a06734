#pragma once

// Spin-1/2 and fermion chains with per-site deformations w_i = γ_i + iξ_i.
//
// Basis: site 0 is the most significant tensor factor. Spins: up before down,
// so S^z = diag(½, −½). Fermions: empty before occupied, so c = [[0,1],[0,0]],
// with the Jordan-Wigner string diag(1, −1) on every site left of the target.

#include <vector>

#include "metriq/opcore.hpp"

namespace metriq {

inline constexpr int kMaxChainSites = 12;

struct SpinMatrices {
  ComplexMatrix x, y, z;
};

/// Spin-j matrices in the basis m = j, j−1, …, −j.
SpinMatrices spin_matrices(int twice_j);
/// Spin-1/2 operators of site i in an N-site chain.
SpinMatrices site_spin_ops(int sites, int i);

struct PseudoSpinSite {
  int twice_j = 1;
  cplx beta{0.0, 0.0};  ///< β = δ + iχ
};

/// T_X = cosh β S_x + i sinh β S_y, T_Y = −i sinh β S_x + cosh β S_y, T_Z = S_z.
SpinMatrices pseudo_spin_ops(const PseudoSpinSite& site);
/// ζ₊ = e^{−2δ S_z}
ComplexMatrix pseudo_spin_metric(const PseudoSpinSite& site);

struct SpinChainSpec {
  int sites = 2;
  double coupling = 1.0;    ///< Γ
  double anisotropy = 0.0;  ///< Δ
  std::vector<double> fields_a;
  std::vector<double> fields_b;
  std::vector<double> fields_c;
  MetricSpec metric;  ///< per-site γ_i, ξ_i

  /// Fills empty field lists and the metric with zeros for `sites` sites.
  static SpinChainSpec zeros(int sites, double coupling = 1.0, double anisotropy = 0.0);
  void validate() const;

  bool operator==(const SpinChainSpec&) const = default;
};

/// Diagonal of ∏_i e^{−2γ_i S_i^z}.
std::vector<double> zeta_diagonal(int sites, const MetricSpec& metric);
ComplexMatrix build_zeta_metric(const SpinChainSpec& spec);
InnerProductSpace chain_inner_product_space(const SpinChainSpec& spec);
/// U = ∏_i e^{−iξ_i S_i^z}
ComplexMatrix chain_phase_unitary(int sites, const MetricSpec& metric);

/// Open chain with hopping Γ(e^{w_i−w_{i+1}} S_i^+ S_{i+1}^- + e^{−(w_i−w_{i+1})} S_i^- S_{i+1}^+),
/// Δ S^z S^z bonds, and deformed fields on every site.
ComplexMatrix build_xxz_asymmetric(const SpinChainSpec& spec);
/// Γ(S^x S^x + S^y S^y) + Δ S^z S^z bonds with uniformly deformed fields.
/// Rejects specs whose w_i differ.
ComplexMatrix build_xxz_symmetric(const SpinChainSpec& spec);

enum class XxzVariant { Asymmetric, Symmetric };

/// The hermitian counterpart built from (Γ, Δ, A, B, C) alone. The asymmetric
/// variant carries the hopping Γ(S^+S^- + S^-S^+); the symmetric one Γ(S^xS^x + S^yS^y).
ComplexMatrix hermitian_counterpart(const SpinChainSpec& spec,
                                    XxzVariant variant = XxzVariant::Asymmetric);

/// ±Σ_{i<j} T_i·T_j / (2 sin²(π(i−j)/N)) with per-site pseudo-spins.
ComplexMatrix build_haldane_shastry(int sites, int sign, const MetricSpec& metric);

/// Γ = 1, Δ = cosh q, C_1 = −C_N = −sinh q, all other fields zero, w = 0.
SpinChainSpec suq2_limit(int sites, double q);
/// γ_k = γ − k φ, ξ_k = ξ for k = 0 … N−1.
MetricSpec gradient_metric(int sites, double gamma, double xi, double phi);

struct FermionOps {
  ComplexMatrix c;
  ComplexMatrix c_dagger;
};

FermionOps fermion_ops(int sites, int i);

struct FermionQuadraticSpec {
  RealMatrix a;  ///< symmetric hopping
  RealMatrix b;  ///< antisymmetric pairing
  MetricSpec metric;

  int sites() const { return static_cast<int>(a.rows()); }
  void validate() const;
};

/// Σ A_ij e^{w_i−w_j} c_i†c_j + ½ Σ B_ij (e^{w_i+w_j} c_i†c_j† + e^{−(w_i+w_j)} c_j c_i).
ComplexMatrix build_fermion_quadratic(const FermionQuadraticSpec& spec);
/// The same form at w = 0.
ComplexMatrix fermion_hermitian_counterpart(const FermionQuadraticSpec& spec);
/// ∏ e^{−2γ_i n_i} as ρ², with ρ diagonal.
InnerProductSpace fermion_inner_product_space(const FermionQuadraticSpec& spec);
/// U = ∏ e^{−iξ_i n_i}
ComplexMatrix fermion_phase_unitary(const FermionQuadraticSpec& spec);

struct SpinOrbitSystem {
  ComplexMatrix coupling;  ///< L·T on spin-l ⊗ spin-s
  ComplexMatrix metric;    ///< e^{−2γL_z} ⊗ e^{−2δS_z}
};

SpinOrbitSystem spin_orbit_system(int twice_l, int twice_s, double gamma, double delta, double xi,
                                  double chi);
/// Pseudo-hermiticity residual of L·T with respect to the product metric.
double spin_orbit_check(int twice_l, int twice_s, double gamma, double delta, double xi,
                        double chi);

}  // namespace metriq
