#include "metriq/spin.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Sparse>

namespace metriq {
namespace {

using Local = Eigen::Matrix2cd;
using SparseC = Eigen::SparseMatrix<cplx>;

constexpr double kExponentGuard = 60.0;

void require_sites(int sites, int min_sites, const char* what) {
  if (sites < min_sites || sites > kMaxChainSites) {
    std::ostringstream msg;
    msg << what << ": number of sites " << sites << " outside [" << min_sites << ", "
        << kMaxChainSites << "]";
    throw DomainError(msg.str());
  }
}

void require_site(int sites, int i, const char* what) {
  if (i < 0 || i >= sites) {
    throw DomainError(std::string(what) + ": site " + std::to_string(i) + " out of range");
  }
}

void require_metric(const MetricSpec& metric, int sites, const char* what) {
  metric.validate();
  if (static_cast<int>(metric.size()) != sites) {
    throw DimensionError(std::string(what) + ": metric has " + std::to_string(metric.size()) +
                         " entries for " + std::to_string(sites) + " sites");
  }
  for (double g : metric.gammas) {
    if (std::abs(g) > kExponentGuard) {
      throw DomainError(std::string(what) + ": |gamma| exceeds the overflow guard");
    }
  }
}

Eigen::Index chain_dim(int sites) { return Eigen::Index{1} << sites; }

int bit_of(Eigen::Index state, int sites, int site) {
  return static_cast<int>((state >> (sites - 1 - site)) & 1);
}

Eigen::Index with_bit(Eigen::Index state, int sites, int site, int value) {
  const Eigen::Index mask = Eigen::Index{1} << (sites - 1 - site);
  return value ? (state | mask) : (state & ~mask);
}

// h += coeff · (local operator at site i)
void add_one(ComplexMatrix& h, int sites, int i, const Local& a, cplx coeff) {
  for (Eigen::Index s = 0; s < h.cols(); ++s) {
    const int b = bit_of(s, sites, i);
    for (int r = 0; r < 2; ++r) {
      if (a(r, b) != 0.0) h(with_bit(s, sites, i, r), s) += coeff * a(r, b);
    }
  }
}

// h += coeff · (a at site i)(b at site j), i ≠ j
void add_two(ComplexMatrix& h, int sites, int i, const Local& a, int j, const Local& b,
             cplx coeff) {
  for (Eigen::Index s = 0; s < h.cols(); ++s) {
    const int bi = bit_of(s, sites, i);
    const int bj = bit_of(s, sites, j);
    for (int ri = 0; ri < 2; ++ri) {
      if (a(ri, bi) == 0.0) continue;
      for (int rj = 0; rj < 2; ++rj) {
        if (b(rj, bj) == 0.0) continue;
        const Eigen::Index row = with_bit(with_bit(s, sites, i, ri), sites, j, rj);
        h(row, s) += coeff * a(ri, bi) * b(rj, bj);
      }
    }
  }
}

Local half_sx() { return (Local() << 0.0, 0.5, 0.5, 0.0).finished(); }
Local half_sy() { return (Local() << 0.0, -0.5 * kI, 0.5 * kI, 0.0).finished(); }
Local half_sz() { return (Local() << 0.5, 0.0, 0.0, -0.5).finished(); }
Local s_plus() { return (Local() << 0.0, 1.0, 0.0, 0.0).finished(); }
Local s_minus() { return (Local() << 0.0, 0.0, 1.0, 0.0).finished(); }

// (A cosh w − iB sinh w) S^x + (B cosh w + iA sinh w) S^y
Local deformed_field(double a, double b, cplx w) {
  const cplx ch = std::cosh(w), sh = std::sinh(w);
  return (a * ch - kI * b * sh) * half_sx() + (b * ch + kI * a * sh) * half_sy();
}

void add_fields(ComplexMatrix& h, const SpinChainSpec& spec, bool deformed) {
  for (int i = 0; i < spec.sites; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const cplx w = deformed ? spec.metric.w(k) : cplx{};
    const Local f = deformed_field(spec.fields_a[k], spec.fields_b[k], w) +
                    spec.fields_c[k] * half_sz();
    add_one(h, spec.sites, i, f, 1.0);
  }
}

void add_zz_bonds(ComplexMatrix& h, const SpinChainSpec& spec) {
  for (int i = 0; i + 1 < spec.sites; ++i) {
    add_two(h, spec.sites, i, half_sz(), i + 1, half_sz(), spec.anisotropy);
  }
}

SpinMatrices deform(const SpinMatrices& s, cplx beta) {
  const cplx ch = std::cosh(beta), sh = std::sinh(beta);
  return {ch * s.x + kI * sh * s.y, -kI * sh * s.x + ch * s.y, s.z};
}

ComplexMatrix diagonal_exp_sz(int twice_j, cplx scale) {
  const int d = twice_j + 1;
  ComplexVector v(d);
  for (int k = 0; k < d; ++k) v(k) = std::exp(scale * (0.5 * twice_j - k));
  return v.asDiagonal();
}

SparseC fermion_annihilator(int sites, int i) {
  const Eigen::Index n = chain_dim(sites);
  std::vector<Eigen::Triplet<cplx>> trips;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (!bit_of(s, sites, i)) continue;
    int parity = 0;
    for (int k = 0; k < i; ++k) parity += bit_of(s, sites, k);
    trips.emplace_back(with_bit(s, sites, i, 0), s, parity % 2 ? -1.0 : 1.0);
  }
  SparseC c(n, n);
  c.setFromTriplets(trips.begin(), trips.end());
  return c;
}

ComplexMatrix fermion_form(const FermionQuadraticSpec& spec, bool deformed) {
  spec.validate();
  const int n = spec.sites();
  std::vector<SparseC> c, cd;
  for (int i = 0; i < n; ++i) {
    c.push_back(fermion_annihilator(n, i));
    cd.push_back(SparseC(c.back().adjoint()));
  }
  const auto w = [&](int i) { return deformed ? spec.metric.w(static_cast<std::size_t>(i)) : cplx{}; };
  SparseC h(chain_dim(n), chain_dim(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (spec.a(i, j) != 0.0) {
        h += SparseC(spec.a(i, j) * std::exp(w(i) - w(j)) * (cd[i] * c[j]));
      }
      if (spec.b(i, j) != 0.0) {
        h += SparseC(0.5 * spec.b(i, j) * std::exp(w(i) + w(j)) * (cd[i] * cd[j]));
        h += SparseC(0.5 * spec.b(i, j) * std::exp(-(w(i) + w(j))) * (c[j] * c[i]));
      }
    }
  }
  return ComplexMatrix(h);
}

}  // namespace

// ---- single-site operators -------------------------------------------------

SpinMatrices spin_matrices(int twice_j) {
  if (twice_j < 1 || twice_j > 64) throw DomainError("spin_matrices: 2j must be in [1, 64]");
  const int d = twice_j + 1;
  const double j = 0.5 * twice_j;
  ComplexMatrix sp = ComplexMatrix::Zero(d, d);
  ComplexMatrix sz = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = j - k;
    sz(k, k) = m;
    if (k > 0) sp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const ComplexMatrix sm = sp.adjoint();
  return {0.5 * (sp + sm), (-0.5 * kI) * (sp - sm), sz};
}

SpinMatrices site_spin_ops(int sites, int i) {
  require_sites(sites, 1, "site_spin_ops");
  require_site(sites, i, "site_spin_ops");
  const auto n = chain_dim(sites);
  SpinMatrices out{ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
  add_one(out.x, sites, i, half_sx(), 1.0);
  add_one(out.y, sites, i, half_sy(), 1.0);
  add_one(out.z, sites, i, half_sz(), 1.0);
  return out;
}

SpinMatrices pseudo_spin_ops(const PseudoSpinSite& site) {
  if (!std::isfinite(site.beta.real()) || !std::isfinite(site.beta.imag())) {
    throw DomainError("pseudo_spin_ops: non-finite beta");
  }
  return deform(spin_matrices(site.twice_j), site.beta);
}

ComplexMatrix pseudo_spin_metric(const PseudoSpinSite& site) {
  spin_matrices(site.twice_j);  // validates j
  return diagonal_exp_sz(site.twice_j, -2.0 * site.beta.real());
}

// ---- chain specification ---------------------------------------------------

SpinChainSpec SpinChainSpec::zeros(int sites, double coupling, double anisotropy) {
  SpinChainSpec s;
  s.sites = sites;
  s.coupling = coupling;
  s.anisotropy = anisotropy;
  const auto n = static_cast<std::size_t>(std::max(sites, 0));
  s.fields_a.assign(n, 0.0);
  s.fields_b.assign(n, 0.0);
  s.fields_c.assign(n, 0.0);
  s.metric = MetricSpec::uniform(n, 0.0);
  return s;
}

void SpinChainSpec::validate() const {
  require_sites(sites, 1, "SpinChainSpec");
  const auto n = static_cast<std::size_t>(sites);
  auto check = [&](const std::vector<double>& v, const char* name) {
    if (v.size() != n) {
      throw DimensionError(std::string("SpinChainSpec: ") + name + " has " +
                           std::to_string(v.size()) + " entries for " + std::to_string(n) +
                           " sites");
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw DomainError(std::string("SpinChainSpec: non-finite ") + name);
    }
  };
  check(fields_a, "fieldsA");
  check(fields_b, "fieldsB");
  check(fields_c, "fieldsC");
  if (!std::isfinite(coupling) || !std::isfinite(anisotropy)) {
    throw DomainError("SpinChainSpec: non-finite coupling");
  }
  require_metric(metric, sites, "SpinChainSpec");
}

std::vector<double> zeta_diagonal(int sites, const MetricSpec& metric) {
  require_sites(sites, 1, "zeta_diagonal");
  require_metric(metric, sites, "zeta_diagonal");
  std::vector<double> d(static_cast<std::size_t>(chain_dim(sites)));
  for (Eigen::Index s = 0; s < chain_dim(sites); ++s) {
    double log_weight = 0.0;
    for (int i = 0; i < sites; ++i) {
      const double sz = bit_of(s, sites, i) ? -0.5 : 0.5;
      log_weight += -2.0 * metric.gammas[static_cast<std::size_t>(i)] * sz;
    }
    d[static_cast<std::size_t>(s)] = std::exp(log_weight);
  }
  return d;
}

ComplexMatrix build_zeta_metric(const SpinChainSpec& spec) {
  spec.validate();
  const auto d = zeta_diagonal(spec.sites, spec.metric);
  ComplexVector v(static_cast<Eigen::Index>(d.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = d[static_cast<std::size_t>(i)];
  return v.asDiagonal();
}

InnerProductSpace chain_inner_product_space(const SpinChainSpec& spec) {
  spec.validate();
  return InnerProductSpace::from_diagonal(zeta_diagonal(spec.sites, spec.metric));
}

ComplexMatrix chain_phase_unitary(int sites, const MetricSpec& metric) {
  require_sites(sites, 1, "chain_phase_unitary");
  require_metric(metric, sites, "chain_phase_unitary");
  ComplexVector v(chain_dim(sites));
  for (Eigen::Index s = 0; s < v.size(); ++s) {
    double phase = 0.0;
    for (int i = 0; i < sites; ++i) {
      const double sz = bit_of(s, sites, i) ? -0.5 : 0.5;
      phase -= metric.xis[static_cast<std::size_t>(i)] * sz;
    }
    v(s) = std::polar(1.0, phase);
  }
  return v.asDiagonal();
}

// ---- XXZ chains ------------------------------------------------------------

ComplexMatrix build_xxz_asymmetric(const SpinChainSpec& spec) {
  spec.validate();
  require_sites(spec.sites, 2, "build_xxz_asymmetric");
  const auto n = chain_dim(spec.sites);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int i = 0; i + 1 < spec.sites; ++i) {
    const cplx dw = spec.metric.w(static_cast<std::size_t>(i)) -
                    spec.metric.w(static_cast<std::size_t>(i + 1));
    if (std::abs(dw.real()) > kExponentGuard) {
      throw DomainError("build_xxz_asymmetric: hopping weight exceeds the overflow guard");
    }
    add_two(h, spec.sites, i, s_plus(), i + 1, s_minus(), spec.coupling * std::exp(dw));
    add_two(h, spec.sites, i, s_minus(), i + 1, s_plus(), spec.coupling * std::exp(-dw));
  }
  add_zz_bonds(h, spec);
  add_fields(h, spec, true);
  return h;
}

ComplexMatrix build_xxz_symmetric(const SpinChainSpec& spec) {
  spec.validate();
  require_sites(spec.sites, 2, "build_xxz_symmetric");
  for (std::size_t i = 1; i < spec.metric.size(); ++i) {
    if (spec.metric.w(i) != spec.metric.w(0)) {
      throw DomainError("build_xxz_symmetric: all w_i must be equal (site " +
                        std::to_string(i + 1) + " differs)");
    }
  }
  const auto n = chain_dim(spec.sites);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int i = 0; i + 1 < spec.sites; ++i) {
    add_two(h, spec.sites, i, half_sx(), i + 1, half_sx(), spec.coupling);
    add_two(h, spec.sites, i, half_sy(), i + 1, half_sy(), spec.coupling);
  }
  add_zz_bonds(h, spec);
  add_fields(h, spec, true);
  return h;
}

ComplexMatrix hermitian_counterpart(const SpinChainSpec& spec, XxzVariant variant) {
  spec.validate();
  const auto n = chain_dim(spec.sites);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  const double hop = variant == XxzVariant::Asymmetric ? spec.coupling : 0.5 * spec.coupling;
  for (int i = 0; i + 1 < spec.sites; ++i) {
    add_two(h, spec.sites, i, s_plus(), i + 1, s_minus(), hop);
    add_two(h, spec.sites, i, s_minus(), i + 1, s_plus(), hop);
  }
  add_zz_bonds(h, spec);
  add_fields(h, spec, false);
  return h;
}

ComplexMatrix build_haldane_shastry(int sites, int sign, const MetricSpec& metric) {
  require_sites(sites, 2, "build_haldane_shastry");
  if (sign != 1 && sign != -1) throw DomainError("build_haldane_shastry: sign must be +1 or -1");
  require_metric(metric, sites, "build_haldane_shastry");
  std::vector<SpinMatrices> t;
  for (int i = 0; i < sites; ++i) {
    const SpinMatrices s{half_sx(), half_sy(), half_sz()};
    t.push_back(deform(s, metric.w(static_cast<std::size_t>(i))));
  }
  const auto n = chain_dim(sites);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < sites; ++i) {
    for (int j = i + 1; j < sites; ++j) {
      const double s = std::sin(std::numbers::pi * (i - j) / sites);
      const double coeff = sign / (2.0 * s * s);
      add_two(h, sites, i, t[i].x, j, t[j].x, coeff);
      add_two(h, sites, i, t[i].y, j, t[j].y, coeff);
      add_two(h, sites, i, t[i].z, j, t[j].z, coeff);
    }
  }
  return h;
}

SpinChainSpec suq2_limit(int sites, double q) {
  require_sites(sites, 2, "suq2_limit");
  SpinChainSpec s = SpinChainSpec::zeros(sites, 1.0, std::cosh(q));
  s.fields_c.front() = -std::sinh(q);
  s.fields_c.back() = std::sinh(q);
  return s;
}

MetricSpec gradient_metric(int sites, double gamma, double xi, double phi) {
  require_sites(sites, 1, "gradient_metric");
  MetricSpec m;
  for (int k = 0; k < sites; ++k) {
    m.gammas.push_back(gamma - k * phi);
    m.xis.push_back(xi);
  }
  return m;
}

// ---- fermions --------------------------------------------------------------

FermionOps fermion_ops(int sites, int i) {
  require_sites(sites, 1, "fermion_ops");
  require_site(sites, i, "fermion_ops");
  const SparseC c = fermion_annihilator(sites, i);
  return {ComplexMatrix(c), ComplexMatrix(c.adjoint())};
}

void FermionQuadraticSpec::validate() const {
  const auto n = a.rows();
  require_sites(static_cast<int>(n), 1, "FermionQuadraticSpec");
  if (a.cols() != n || b.rows() != n || b.cols() != n) {
    throw DimensionError("FermionQuadraticSpec: A and B must both be N x N");
  }
  if (!a.allFinite() || !b.allFinite()) throw DomainError("FermionQuadraticSpec: non-finite entry");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (b(i, i) != 0.0) {
      throw DomainError("FermionQuadraticSpec: B is not antisymmetric at (" +
                        std::to_string(i + 1) + "," + std::to_string(i + 1) + ")");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (a(i, j) != a(j, i)) {
        throw DomainError("FermionQuadraticSpec: A is not symmetric at (" + std::to_string(i + 1) +
                          "," + std::to_string(j + 1) + ")");
      }
      if (b(i, j) != -b(j, i)) {
        throw DomainError("FermionQuadraticSpec: B is not antisymmetric at (" +
                          std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
    }
  }
  require_metric(metric, static_cast<int>(n), "FermionQuadraticSpec");
}

ComplexMatrix build_fermion_quadratic(const FermionQuadraticSpec& spec) {
  return fermion_form(spec, true);
}

ComplexMatrix fermion_hermitian_counterpart(const FermionQuadraticSpec& spec) {
  return fermion_form(spec, false);
}

InnerProductSpace fermion_inner_product_space(const FermionQuadraticSpec& spec) {
  spec.validate();
  const int n = spec.sites();
  std::vector<double> d(static_cast<std::size_t>(chain_dim(n)));
  for (Eigen::Index s = 0; s < chain_dim(n); ++s) {
    double log_weight = 0.0;
    for (int i = 0; i < n; ++i) {
      log_weight += -2.0 * spec.metric.gammas[static_cast<std::size_t>(i)] * bit_of(s, n, i);
    }
    d[static_cast<std::size_t>(s)] = std::exp(log_weight);
  }
  return InnerProductSpace::from_diagonal(d);
}

ComplexMatrix fermion_phase_unitary(const FermionQuadraticSpec& spec) {
  spec.validate();
  const int n = spec.sites();
  ComplexVector v(chain_dim(n));
  for (Eigen::Index s = 0; s < v.size(); ++s) {
    double phase = 0.0;
    for (int i = 0; i < n; ++i) phase -= spec.metric.xis[static_cast<std::size_t>(i)] * bit_of(s, n, i);
    v(s) = std::polar(1.0, phase);
  }
  return v.asDiagonal();
}

// ---- spin-orbit ------------------------------------------------------------

SpinOrbitSystem spin_orbit_system(int twice_l, int twice_s, double gamma, double delta, double xi,
                                  double chi) {
  const auto l = deform(spin_matrices(twice_l), {gamma, xi});
  const auto t = pseudo_spin_ops({twice_s, {delta, chi}});
  SpinOrbitSystem out;
  out.coupling = kron(l.x, t.x) + kron(l.y, t.y) + kron(l.z, t.z);
  out.metric = kron(diagonal_exp_sz(twice_l, -2.0 * gamma), diagonal_exp_sz(twice_s, -2.0 * delta));
  return out;
}

double spin_orbit_check(int twice_l, int twice_s, double gamma, double delta, double xi,
                        double chi) {
  const auto sys = spin_orbit_system(twice_l, twice_s, gamma, delta, xi, chi);
  return is_pseudo_hermitian(sys.coupling, sys.metric).residual;
}

}  // namespace metriq
