#include "metriq/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace metriq {
namespace {

constexpr double kExponentGuard = 60.0;

void require_oscillator_space(const FockSpace& space, const char* what) {
  if (space.modes() != 2 || space.truncation() != Truncation::TotalOccupation) {
    throw DomainError(std::string(what) +
                      ": expects a two-mode space with total-occupation truncation");
  }
}

// Spectrum of L_z on the truncated space lies in [−cutoff, cutoff].
void guard_exponent(const FockSpace& space, double scale, const char* what) {
  if (std::abs(scale) * space.cutoff() > kExponentGuard) {
    std::ostringstream msg;
    msg << what << ": |exponent| * cutoff = " << std::abs(scale) * space.cutoff()
        << " exceeds the overflow guard " << kExponentGuard;
    throw DomainError(msg.str());
  }
}

struct CanonicalExprs {
  BosonExpr x, y, px, py;
};

CanonicalExprs transformed_exprs(cplx w) {
  const cplx ch = std::cosh(w);
  const cplx sh = std::sinh(w);
  const BosonExpr x = position_expr(0), y = position_expr(1);
  const BosonExpr px = momentum_expr(0), py = momentum_expr(1);
  return {ch * x + (kI * sh) * y, (-kI * sh) * x + ch * y, ch * px + (kI * sh) * py,
          (-kI * sh) * px + ch * py};
}

ComplexMatrix columns_below_cutoff(const FockSpace& space, const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), 0);
  const auto idx = space.below_cutoff_indices();
  out.resize(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
  return out;
}

}  // namespace

bool OscillatorParams::in_real_spectrum_regime() const {
  return k1 > 0.0 && k2 > 0.0 && 4.0 * k1 * k2 > k3 * k3;
}

void OscillatorParams::validate() const {
  for (double v : {mass, k1, k2, k3, gamma, xi}) {
    if (!std::isfinite(v)) throw DomainError("OscillatorParams: non-finite parameter");
  }
  if (!(mass > 0.0)) throw DomainError("OscillatorParams: mass must be positive");
}

ComplexFrequencies complex_frequencies(const OscillatorParams& p) {
  p.validate();
  const cplx ch = std::cosh(p.w());
  const cplx sh = std::sinh(p.w());
  const cplx ch2 = ch * ch, sh2 = sh * sh, cs = ch * sh;
  return {p.k1 * ch2 - p.k2 * sh2 - kI * p.k3 * cs, p.k2 * ch2 - p.k1 * sh2 + kI * p.k3 * cs,
          2.0 * kI * (p.k1 - p.k2) * cs + p.k3 * (ch2 + sh2)};
}

std::array<double, 3> stiffness_from_frequencies(const ComplexFrequencies& f, cplx w) {
  // (mω₁² − mω₂², mω₃²) = [[cosh 2w, −i sinh 2w], [i sinh 2w, cosh 2w]] (k1 − k2, k3)
  const cplx c = std::cosh(2.0 * w);
  const cplx s = std::sinh(2.0 * w);
  const cplx d = f.mw1sq - f.mw2sq;
  const cplx diff = c * d + kI * s * f.mw3sq;
  const cplx k3 = -kI * s * d + c * f.mw3sq;
  const cplx sum = f.mw1sq + f.mw2sq;
  return {0.5 * (sum + diff).real(), 0.5 * (sum - diff).real(), k3.real()};
}

std::pair<double, double> lambda_pm_paper(const OscillatorParams& p) {
  p.validate();
  if (!p.in_real_spectrum_regime()) {
    throw DomainError("lambda_pm_paper: parameters outside k1 > 0, k2 > 0, 4 k1 k2 > k3^2");
  }
  const double root = std::sqrt(p.k3 * p.k3 + (p.k1 - p.k2) * (p.k1 - p.k2));
  const double pre = 1.0 / (2.0 * std::sqrt(p.mass));
  return {pre * std::sqrt(p.k1 + p.k2 + root), pre * std::sqrt(p.k1 + p.k2 - root)};
}

std::pair<double, double> normal_mode_frequencies(const OscillatorParams& p) {
  p.validate();
  if (!p.in_real_spectrum_regime()) {
    throw DomainError("normal_mode_frequencies: parameters outside the real-spectrum regime");
  }
  const double root = std::hypot(p.k1 - p.k2, p.k3);
  const double kplus = 0.5 * (p.k1 + p.k2 + root);
  const double kminus = 0.5 * (p.k1 + p.k2 - root);
  return {std::sqrt(kplus / p.mass), std::sqrt(kminus / p.mass)};
}

std::vector<double> oscillator_levels(const OscillatorParams& params, std::size_t count) {
  const auto [wp, wm] = normal_mode_frequencies(params);
  const std::array<double, 2> om{wp, wm};
  return lowest_level_sums(om, count);
}

RotatedFrame rotation_angle(double k1, double k2, double k3) {
  if (k1 == k2) return {k3 == 0.0 ? 0.0 : std::numbers::pi / 4.0};
  return {0.5 * std::atan(k3 / (k1 - k2))};
}

FockSpace oscillator_space(int cutoff) { return FockSpace(2, cutoff, Truncation::TotalOccupation); }

BosonExpr position_expr(int mode, double mass) {
  return (1.0 / std::sqrt(2.0 * mass)) * (BosonExpr::annihilate(mode) + BosonExpr::create(mode));
}

BosonExpr momentum_expr(int mode, double mass) {
  return (kI * std::sqrt(mass / 2.0)) * (BosonExpr::create(mode) - BosonExpr::annihilate(mode));
}

BosonExpr angular_momentum_expr() {
  return kI * (BosonExpr::annihilate(0) * BosonExpr::create(1) -
               BosonExpr::create(0) * BosonExpr::annihilate(1));
}

ComplexMatrix angular_momentum_z(const FockSpace& space) {
  require_oscillator_space(space, "angular_momentum_z");
  return realize(space, angular_momentum_expr());
}

ComplexMatrix build_xy_hamiltonian(const OscillatorParams& params, const FockSpace& space) {
  require_oscillator_space(space, "build_xy_hamiltonian");
  const auto f = complex_frequencies(params);
  const double m = params.mass;
  const BosonExpr x = position_expr(0, m), y = position_expr(1, m);
  const BosonExpr px = momentum_expr(0, m), py = momentum_expr(1, m);
  const BosonExpr h = (1.0 / (2.0 * m)) * (px * px + py * py) +
                      (0.5 * f.mw1sq) * (x * x) + (0.5 * f.mw2sq) * (y * y) +
                      (0.5 * f.mw3sq) * (x * y);
  return realize(space, h);
}

InnerProductSpace oscillator_inner_product_space(const FockSpace& space, double gamma) {
  guard_exponent(space, 2.0 * gamma, "oscillator metric");
  const ComplexMatrix lz = angular_momentum_z(space);
  return InnerProductSpace::from_root(exp_hermitian(lz, -gamma), exp_hermitian(lz, gamma));
}

ComplexMatrix oscillator_rotation(const FockSpace& space, double xi) {
  return exp_hermitian(angular_momentum_z(space), -kI * xi);
}

CanonicalOps canonical_ops(const FockSpace& space) { return transformed_canonical_ops(space, 0.0); }

CanonicalOps transformed_canonical_ops(const FockSpace& space, cplx w) {
  require_oscillator_space(space, "transformed_canonical_ops");
  const auto e = transformed_exprs(w);
  return {realize(space, e.x), realize(space, e.y), realize(space, e.px), realize(space, e.py),
          realize(space, e.x * e.py - e.y * e.px)};
}

CanonicalIdentities transformed_identities(const FockSpace& space, cplx w) {
  require_oscillator_space(space, "transformed_identities");
  guard_exponent(space, w.real(), "transformed_identities");
  const auto t = transformed_exprs(w);
  const auto b = transformed_exprs(0.0);
  CanonicalIdentities out;
  out.length_residual =
      realize(space, t.x * t.x + t.y * t.y - (b.x * b.x + b.y * b.y)).norm();
  out.momentum_residual =
      realize(space, t.px * t.px + t.py * t.py - (b.px * b.px + b.py * b.py)).norm();

  const auto ops = transformed_canonical_ops(space, w);
  const auto n = space.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  out.commutator_residual =
      std::max(columns_below_cutoff(space, commutator(ops.x, ops.px) - kI * id).norm(),
               columns_below_cutoff(space, commutator(ops.y, ops.py) - kI * id).norm());
  out.cross_residual = std::max({columns_below_cutoff(space, commutator(ops.x, ops.py)).norm(),
                                 columns_below_cutoff(space, commutator(ops.y, ops.px)).norm(),
                                 columns_below_cutoff(space, commutator(ops.x, ops.y)).norm(),
                                 columns_below_cutoff(space, commutator(ops.px, ops.py)).norm()});

  const auto ip = oscillator_inner_product_space(space, w.real());
  const auto plain = canonical_ops(space);
  const ComplexMatrix expect = std::cos(w.imag()) * plain.x - std::sin(w.imag()) * plain.y;
  out.rotation_residual =
      (ip.rho() * ops.x * ip.rho_inverse() - expect).norm() / (1.0 + expect.norm());
  return out;
}

double lz_ladder_identity(const FockSpace& space, int n, int m) {
  require_oscillator_space(space, "lz_ladder_identity");
  if (n < 0 || m < 0 || n + m + 1 >= space.cutoff()) {
    throw DomainError("lz_ladder_identity: requires n, m >= 0 and n + m + 1 < cutoff");
  }
  const ComplexMatrix lbar = kI * angular_momentum_z(space);
  const ComplexVector image = lbar * space.basis_vector(*space.index_of({n, m}));
  ComplexVector target = ComplexVector::Zero(space.dim());
  if (m > 0) target(*space.index_of({n + 1, m - 1})) += std::sqrt(double((n + 1) * m));
  if (n > 0) target(*space.index_of({n - 1, m + 1})) -= std::sqrt(double(n * (m + 1)));
  return (image - target).norm();
}

double lz_ladder_identity_monomial(const FockSpace& space, int n, int m) {
  require_oscillator_space(space, "lz_ladder_identity_monomial");
  if (n < 0 || m < 0 || n + m + 1 >= space.cutoff()) {
    throw DomainError("lz_ladder_identity_monomial: requires n, m >= 0 and n + m + 1 < cutoff");
  }
  // (a_u†)^n (a_v†)^m |0⟩ = √(n! m!) |n, m⟩
  auto monomial = [&](int p, int q) {
    ComplexVector v = space.basis_vector(*space.index_of({p, q}));
    return ComplexVector(v * std::sqrt(std::tgamma(p + 1.0) * std::tgamma(q + 1.0)));
  };
  const ComplexMatrix lbar = kI * angular_momentum_z(space);
  const ComplexVector image = lbar * monomial(n, m);
  ComplexVector target = ComplexVector::Zero(space.dim());
  if (m > 0) target += double(m) * monomial(n + 1, m - 1);
  if (n > 0) target -= double(n) * monomial(n - 1, m + 1);
  return (image - target).norm() / (1.0 + image.norm());
}

double matrix_element_equivalence(const FockSpace& space, const ComplexMatrix& ahat, cplx w,
                                  std::span<const std::pair<Eigen::Index, Eigen::Index>> pairs) {
  require_oscillator_space(space, "matrix_element_equivalence");
  require_operator(ahat, "matrix_element_equivalence");
  if (ahat.rows() != space.dim()) {
    throw DimensionError("matrix_element_equivalence: operator does not match the space");
  }
  guard_exponent(space, 2.0 * w.real(), "matrix_element_equivalence");
  const ComplexMatrix lz = angular_momentum_z(space);
  const ComplexMatrix dressing = exp_hermitian(lz, w);  // e^{wL_z}
  const auto ip = oscillator_inner_product_space(space, w.real());
  const ComplexMatrix ah = to_hermitian(ahat, ip, oscillator_rotation(space, w.imag()));
  double worst = 0.0;
  for (const auto& [bra, ket] : pairs) {
    const ComplexVector psi_bra = dressing.col(bra);
    const ComplexVector psi_ket = dressing.col(ket);
    const cplx lhs = modified_inner(psi_bra, ahat * psi_ket, ip.metric());
    worst = std::max(worst, std::abs(lhs - ah(bra, ket)));
  }
  return worst;
}

double transformed_gram_defect(const FockSpace& space, cplx w,
                               std::span<const Eigen::Index> indices) {
  require_oscillator_space(space, "transformed_gram_defect");
  guard_exponent(space, 2.0 * w.real(), "transformed_gram_defect");
  const ComplexMatrix lz = angular_momentum_z(space);
  const ComplexMatrix dressing = exp_hermitian(lz, w);
  const ComplexMatrix eta = exp_hermitian(lz, -2.0 * w.real());
  double worst = 0.0;
  for (Eigen::Index i : indices) {
    for (Eigen::Index j : indices) {
      const cplx g = modified_inner(dressing.col(i), dressing.col(j), eta);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace metriq
