#include "metriq/opcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lapack_eigen.hpp"

namespace metriq {
namespace {

bool lex_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.rows() << "x" << a.cols() << " vs " << b.rows()
        << "x" << b.cols() << ")";
    throw DimensionError(msg.str());
  }
}

void require_hermitian(const ComplexMatrix& a, const char* what) {
  const double defect = hermiticity_defect(a);
  if (defect > tolerance::kStructure) {
    std::ostringstream msg;
    msg << what << ": matrix is not hermitian (defect " << defect << ")";
    throw DomainError(msg.str());
  }
}

// LU of a metric, rejecting numerically singular input.
Eigen::PartialPivLU<ComplexMatrix> checked_lu(const ComplexMatrix& eta, const char* what) {
  Eigen::PartialPivLU<ComplexMatrix> lu(eta);
  const double rcond = lu.rcond();
  if (!(rcond * tolerance::kMaxCondition >= 1.0)) {
    std::ostringstream msg;
    msg << what << ": metric is numerically singular (condition estimate " << 1.0 / rcond << ")";
    throw NumericalError(msg.str());
  }
  return lu;
}

std::vector<cplx> sorted_values(const ComplexVector& v) {
  std::vector<cplx> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

}  // namespace

// ---- MetricSpec / SpectrumResult -------------------------------------------

MetricSpec MetricSpec::uniform(std::size_t n, double gamma, double xi) {
  return MetricSpec{std::vector<double>(n, gamma), std::vector<double>(n, xi)};
}

MetricSpec MetricSpec::from_ws(std::span<const cplx> ws) {
  MetricSpec out;
  for (const cplx& w : ws) {
    out.gammas.push_back(w.real());
    out.xis.push_back(w.imag());
  }
  return out;
}

std::vector<cplx> MetricSpec::ws() const {
  std::vector<cplx> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(w(i));
  return out;
}

void MetricSpec::validate() const {
  if (gammas.size() != xis.size()) {
    throw DomainError("MetricSpec: gammas and xis differ in length");
  }
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!std::isfinite(gammas[i]) || !std::isfinite(xis[i])) {
      throw DomainError("MetricSpec: non-finite parameter at index " + std::to_string(i));
    }
  }
}

double SpectrumResult::reality_defect() const {
  double worst = 0.0;
  for (const cplx& l : eigenvalues) worst = std::max(worst, std::abs(l.imag()) / (1.0 + std::abs(l)));
  return worst;
}

std::vector<double> SpectrumResult::real_parts() const {
  std::vector<double> out;
  out.reserve(eigenvalues.size());
  for (const cplx& l : eigenvalues) out.push_back(l.real());
  return out;
}

// ---- InnerProductSpace -----------------------------------------------------

InnerProductSpace InnerProductSpace::from_diagonal(std::span<const double> metric_diagonal) {
  const auto n = static_cast<Eigen::Index>(metric_diagonal.size());
  if (n == 0) throw DimensionError("InnerProductSpace: empty metric");
  ComplexVector d(n), r(n), ri(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = metric_diagonal[static_cast<std::size_t>(i)];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("InnerProductSpace: diagonal metric entry " + std::to_string(i) +
                        " is not a finite positive number");
    }
    d(i) = v;
    r(i) = std::sqrt(v);
    ri(i) = 1.0 / std::sqrt(v);
  }
  return InnerProductSpace(d.asDiagonal(), r.asDiagonal(), ri.asDiagonal());
}

InnerProductSpace InnerProductSpace::from_root(ComplexMatrix rho, ComplexMatrix rho_inverse) {
  require_operator(rho, "InnerProductSpace::from_root");
  require_same_dim(rho, rho_inverse, "InnerProductSpace::from_root");
  require_hermitian(rho, "InnerProductSpace::from_root");
  const auto n = rho.rows();
  const double defect =
      (rho * rho_inverse - ComplexMatrix::Identity(n, n)).norm() / std::sqrt(double(n));
  if (defect > tolerance::kStructure) {
    throw NumericalError("InnerProductSpace::from_root: rho * rho_inverse deviates from identity by " +
                         std::to_string(defect));
  }
  ComplexMatrix metric = rho * rho;
  return InnerProductSpace(std::move(metric), std::move(rho), std::move(rho_inverse));
}

// ---- structural helpers ----------------------------------------------------

void require_operator(const ComplexMatrix& a, const char* what) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw DimensionError(msg.str());
  }
  if (!a.allFinite()) throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

double hermiticity_defect(const ComplexMatrix& a) {
  return (a - a.adjoint()).norm() / (1.0 + a.norm());
}

double unitarity_defect(const ComplexMatrix& u) {
  const auto n = u.rows();
  return (u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm() / std::sqrt(double(n));
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b + b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix exp_hermitian(const ComplexMatrix& l, cplx c) {
  require_operator(l, "exp_hermitian");
  require_hermitian(l, "exp_hermitian");
  const auto n = l.rows();
  if (c == cplx{}) return ComplexMatrix::Identity(n, n);

  // union-find over the sparsity graph
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (l(i, j) != cplx{}) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> block_of(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index root = find(i);
    if (block_of[root] < 0) {
      block_of[root] = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[block_of[root]].push_back(i);
  }

  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& idx : blocks) {
    const ComplexMatrix sub = restrict_to(l, idx);
    const ComplexMatrix herm = 0.5 * (sub + sub.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
    if (es.info() != Eigen::Success) throw NumericalError("exp_hermitian: eigensolver failed");
    ComplexVector f(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < f.size(); ++k) {
      f(k) = std::exp(c * es.eigenvalues()(k));
      if (!std::isfinite(f(k).real()) || !std::isfinite(f(k).imag())) {
        throw NumericalError("exp_hermitian: exponent overflow");
      }
    }
    const ComplexMatrix block = es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        out(idx[a], idx[b]) = block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
  }
  return out;
}

ComplexMatrix restrict_to(const ComplexMatrix& a, std::span<const Eigen::Index> indices) {
  const auto m = static_cast<Eigen::Index>(indices.size());
  ComplexMatrix out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = a(indices[i], indices[j]);
  }
  return out;
}

// ---- metric operations -----------------------------------------------------

ComplexMatrix eta_adjoint(const ComplexMatrix& a, const ComplexMatrix& eta) {
  require_operator(a, "eta_adjoint");
  require_operator(eta, "eta_adjoint");
  require_same_dim(a, eta, "eta_adjoint");
  require_hermitian(eta, "eta_adjoint");
  const auto lu = checked_lu(eta, "eta_adjoint");
  return lu.solve(a.adjoint() * eta);
}

PseudoHermiticity is_pseudo_hermitian(const ComplexMatrix& a, const ComplexMatrix& eta,
                                      double tol) {
  require_operator(a, "is_pseudo_hermitian");
  require_operator(eta, "is_pseudo_hermitian");
  require_same_dim(a, eta, "is_pseudo_hermitian");
  require_hermitian(eta, "is_pseudo_hermitian");
  checked_lu(eta, "is_pseudo_hermitian");
  const ComplexMatrix eta_a = eta * a;
  const double residual = (a.adjoint() * eta - eta_a).norm() / (1.0 + eta_a.norm());
  return {residual <= tol, residual};
}

InnerProductSpace matrix_sqrt_pd(const ComplexMatrix& eta) {
  require_operator(eta, "matrix_sqrt_pd");
  require_hermitian(eta, "matrix_sqrt_pd");
  const ComplexMatrix herm = 0.5 * (eta + eta.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  if (es.info() != Eigen::Success) throw NumericalError("matrix_sqrt_pd: eigensolver failed");
  const auto& lambda = es.eigenvalues();
  const double largest = lambda.maxCoeff();
  const double smallest = lambda.minCoeff();
  if (!(largest > 0.0) || smallest <= tolerance::kPositiveDefinite * largest) {
    std::ostringstream msg;
    msg << "matrix_sqrt_pd: metric is not positive definite (smallest eigenvalue " << smallest
        << ", largest " << largest << ")";
    throw DomainError(msg.str());
  }
  const Eigen::VectorXd root = lambda.cwiseSqrt();
  const Eigen::VectorXd inv_root = root.cwiseInverse();
  const auto& v = es.eigenvectors();
  ComplexMatrix rho = v * root.cast<cplx>().asDiagonal() * v.adjoint();
  ComplexMatrix rho_inv = v * inv_root.cast<cplx>().asDiagonal() * v.adjoint();
  // enforce exact hermiticity of the returned factors
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho_inv = 0.5 * (rho_inv + rho_inv.adjoint()).eval();
  return InnerProductSpace(herm, std::move(rho), std::move(rho_inv));
}

cplx modified_inner(const ComplexVector& psi, const ComplexVector& phi, const ComplexMatrix& eta) {
  if (psi.size() != phi.size() || psi.size() != eta.rows() || eta.rows() != eta.cols()) {
    throw DimensionError("modified_inner: dimension mismatch");
  }
  return psi.dot(eta * phi);  // Eigen's dot conjugates the first argument
}

ComplexMatrix to_hermitian(const ComplexMatrix& h, const InnerProductSpace& space,
                           const ComplexMatrix& u) {
  require_operator(h, "to_hermitian");
  require_same_dim(h, space.rho(), "to_hermitian");
  require_same_dim(h, u, "to_hermitian");
  const double defect = unitarity_defect(u);
  if (defect > tolerance::kStructure) {
    throw DomainError("to_hermitian: U is not unitary (defect " + std::to_string(defect) + ")");
  }
  const ComplexMatrix forward = u * space.rho();
  const ComplexMatrix backward = space.rho_inverse() * u.adjoint();
  return forward * h * backward;
}

ComplexMatrix to_hermitian(const ComplexMatrix& h, const InnerProductSpace& space) {
  require_operator(h, "to_hermitian");
  require_same_dim(h, space.rho(), "to_hermitian");
  return space.rho() * h * space.rho_inverse();
}

ComplexMatrix map_observable(const ComplexMatrix& bhat, const InnerProductSpace& space) {
  require_operator(bhat, "map_observable");
  require_same_dim(bhat, space.rho(), "map_observable");
  require_hermitian(bhat, "map_observable");
  return space.rho_inverse() * bhat * space.rho();
}

// ---- spectra and dynamics --------------------------------------------------

SpectrumResult spectrum(const ComplexMatrix& a) {
  require_operator(a, "spectrum");
  const auto eig = detail::general_eigen(a, /*want_vectors=*/true);
  SpectrumResult out;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const ComplexVector v = eig.vectors.col(k);
    const double r = (a * v - eig.values(k) * v).norm() / v.norm();
    out.residual = std::max(out.residual, r);
  }
  out.eigenvalues = sorted_values(eig.values);
  for (const cplx& l : out.eigenvalues) out.max_imag_abs = std::max(out.max_imag_abs, std::abs(l.imag()));
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  require_operator(a, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_eigenvalues: solver failed");
  const auto& l = es.eigenvalues();
  return {l.data(), l.data() + l.size()};
}

double spectral_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionError("spectral_distance: spectra differ in length");
  std::vector<cplx> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end(), lex_less);
  std::sort(sb.begin(), sb.end(), lex_less);
  double worst = 0.0;
  for (std::size_t k = 0; k < sa.size(); ++k) worst = std::max(worst, std::abs(sa[k] - sb[k]));
  return worst;
}

double spectral_distance(std::span<const cplx> a, std::span<const double> b) {
  std::vector<cplx> bc(b.begin(), b.end());
  return spectral_distance(a, std::span<const cplx>(bc));
}

double spectral_distance(std::span<const double> a, std::span<const double> b) {
  std::vector<cplx> ac(a.begin(), a.end());
  return spectral_distance(std::span<const cplx>(ac), b);
}

std::vector<ComplexVector> evolve(const ComplexMatrix& h, const ComplexVector& psi0,
                                  std::span<const double> times) {
  require_operator(h, "evolve");
  if (psi0.size() != h.rows()) throw DimensionError("evolve: state and Hamiltonian differ in size");
  const auto eig = detail::general_eigen(h, /*want_vectors=*/true);
  Eigen::PartialPivLU<ComplexMatrix> lu(eig.vectors);
  const double rcond = lu.rcond();
  if (!(rcond * tolerance::kMaxEigenvectorCondition >= 1.0)) {
    std::ostringstream msg;
    msg << "evolve: Hamiltonian is numerically defective (eigenvector condition estimate "
        << 1.0 / rcond << ")";
    throw NumericalError(msg.str());
  }
  const ComplexVector coeffs = lu.solve(psi0);
  std::vector<ComplexVector> out;
  out.reserve(times.size());
  for (const double t : times) {
    if (t == 0.0) {
      out.push_back(psi0);
      continue;
    }
    ComplexVector phase(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) phase(k) = std::exp(-kI * eig.values(k) * t) * coeffs(k);
    out.push_back(eig.vectors * phase);
  }
  return out;
}

}  // namespace metriq
