#include "metriq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace metriq {
namespace {

constexpr double kExponentGuard = 60.0;

void require_mode(const FockSpace& space, int mode) {
  if (mode < 0 || mode >= space.modes()) {
    throw DomainError("mode " + std::to_string(mode) + " out of range for a " +
                      std::to_string(space.modes()) + "-mode space");
  }
}

void require_metric_size(const MetricSpec& metric, int modes) {
  metric.validate();
  if (static_cast<int>(metric.size()) != modes) {
    throw DimensionError("metric has " + std::to_string(metric.size()) + " entries, expected " +
                         std::to_string(modes));
  }
}

void require_two_modes(const FockSpace& space, const MetricSpec& metric, const char* what) {
  if (space.modes() != 2) throw DomainError(std::string(what) + ": requires a two-mode space");
  require_metric_size(metric, 2);
}

}  // namespace

// ---- FockSpace -------------------------------------------------------------

FockSpace::FockSpace(int modes, int cutoff, Truncation truncation, std::size_t dim_cap)
    : modes_(modes), cutoff_(cutoff), truncation_(truncation) {
  if (modes < 1) throw DomainError("FockSpace: need at least one mode");
  if (cutoff < 1) throw DomainError("FockSpace: cutoff must be >= 1");

  Occupation occ(static_cast<std::size_t>(modes), 0);
  int total = 0;
  while (true) {
    if (states_.size() >= dim_cap) {
      std::ostringstream msg;
      msg << "FockSpace: dimension exceeds cap " << dim_cap << " (modes=" << modes
          << ", cutoff=" << cutoff << ")";
      throw DomainError(msg.str());
    }
    lookup_.emplace(occ, static_cast<Eigen::Index>(states_.size()));
    states_.push_back(occ);

    // odometer step, mode 0 fastest
    int k = 0;
    for (; k < modes; ++k) {
      ++occ[k];
      ++total;
      const bool fits = truncation == Truncation::PerMode ? occ[k] <= cutoff : total <= cutoff;
      if (fits) break;
      total -= occ[k];
      occ[k] = 0;
    }
    if (k == modes) break;
  }
}

std::optional<Eigen::Index> FockSpace::index_of(const Occupation& occ) const {
  const auto it = lookup_.find(occ);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

bool FockSpace::below_cutoff(Eigen::Index i) const {
  const Occupation& occ = occupation(i);
  if (truncation_ == Truncation::PerMode) {
    return std::all_of(occ.begin(), occ.end(), [&](int n) { return n < cutoff_; });
  }
  int total = 0;
  for (int n : occ) total += n;
  return total < cutoff_;
}

std::vector<Eigen::Index> FockSpace::below_cutoff_indices() const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (below_cutoff(i)) out.push_back(i);
  }
  return out;
}

std::vector<Eigen::Index> FockSpace::sector(int total) const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    int sum = 0;
    for (int n : occupation(i)) sum += n;
    if (sum == total) out.push_back(i);
  }
  return out;
}

ComplexVector FockSpace::basis_vector(Eigen::Index i) const {
  ComplexVector v = ComplexVector::Zero(dim());
  v(i) = 1.0;
  return v;
}

// ---- BosonExpr -------------------------------------------------------------

BosonExpr BosonExpr::identity(cplx coeff) {
  BosonExpr e;
  e.terms_.push_back({coeff, {}});
  return e;
}

BosonExpr BosonExpr::annihilate(int mode) {
  BosonExpr e;
  e.terms_.push_back({1.0, {{mode, false}}});
  return e;
}

BosonExpr BosonExpr::create(int mode) {
  BosonExpr e;
  e.terms_.push_back({1.0, {{mode, true}}});
  return e;
}

BosonExpr BosonExpr::number(int mode) { return create(mode) * annihilate(mode); }

BosonExpr& BosonExpr::operator+=(const BosonExpr& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

BosonExpr operator*(const BosonExpr& a, const BosonExpr& b) {
  BosonExpr out;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      BosonExpr::Term t{ta.coeff * tb.coeff, ta.word};
      t.word.insert(t.word.end(), tb.word.begin(), tb.word.end());
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

BosonExpr operator*(cplx s, BosonExpr a) {
  for (auto& t : a.terms_) t.coeff *= s;
  return a;
}

ComplexMatrix realize(const FockSpace& space, const BosonExpr& expr) {
  for (const auto& t : expr.terms()) {
    for (const auto& l : t.word) require_mode(space, l.mode);
  }
  const auto n = space.dim();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Occupation occ;
  for (Eigen::Index col = 0; col < n; ++col) {
    for (const auto& t : expr.terms()) {
      occ = space.occupation(col);
      double amp = 1.0;
      bool alive = true;
      for (auto it = t.word.rbegin(); it != t.word.rend(); ++it) {
        int& k = occ[static_cast<std::size_t>(it->mode)];
        if (it->raise) {
          amp *= std::sqrt(double(k + 1));
          ++k;
        } else {
          if (k == 0) {
            alive = false;
            break;
          }
          amp *= std::sqrt(double(k));
          --k;
        }
      }
      if (!alive) continue;
      if (const auto row = space.index_of(occ)) out(*row, col) += t.coeff * amp;
    }
  }
  return out;
}

// ---- ladder operators and metric -------------------------------------------

LadderPair ladder_ops(const FockSpace& space, int mode) {
  require_mode(space, mode);
  return {realize(space, BosonExpr::annihilate(mode)), realize(space, BosonExpr::create(mode))};
}

LadderPair tilde_ops(const FockSpace& space, const MetricSpec& metric, int mode) {
  require_metric_size(metric, space.modes());
  LadderPair p = ladder_ops(space, mode);
  const double g = metric.gammas[static_cast<std::size_t>(mode)];
  p.lower *= std::exp(-g);
  p.raise *= std::exp(g);
  return p;
}

std::vector<double> metric_diagonal(const FockSpace& space, const MetricSpec& metric) {
  require_metric_size(metric, space.modes());
  for (std::size_t k = 0; k < metric.size(); ++k) {
    if (std::abs(metric.gammas[k]) * space.cutoff() > kExponentGuard) {
      std::ostringstream msg;
      msg << "metric: |gamma_" << k << "| * cutoff = " << std::abs(metric.gammas[k]) * space.cutoff()
          << " exceeds the overflow guard " << kExponentGuard;
      throw DomainError(msg.str());
    }
  }
  std::vector<double> d(static_cast<std::size_t>(space.dim()));
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    double log_weight = 0.0;
    const Occupation& occ = space.occupation(i);
    for (std::size_t k = 0; k < occ.size(); ++k) log_weight += -2.0 * metric.gammas[k] * occ[k];
    d[static_cast<std::size_t>(i)] = std::exp(log_weight);
  }
  return d;
}

ComplexMatrix build_metric(const FockSpace& space, const MetricSpec& metric) {
  const auto d = metric_diagonal(space, metric);
  ComplexVector v(space.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = d[static_cast<std::size_t>(i)];
  return v.asDiagonal();
}

InnerProductSpace boson_inner_product_space(const FockSpace& space, const MetricSpec& metric) {
  return InnerProductSpace::from_diagonal(metric_diagonal(space, metric));
}

ComplexMatrix phase_unitary(const FockSpace& space, const MetricSpec& metric) {
  require_metric_size(metric, space.modes());
  ComplexVector v(space.dim());
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    double phase = 0.0;
    const Occupation& occ = space.occupation(i);
    for (std::size_t k = 0; k < occ.size(); ++k) phase -= metric.xis[k] * occ[k];
    v(i) = std::polar(1.0, phase);
  }
  return v.asDiagonal();
}

// ---- quadratic form --------------------------------------------------------

void BosonQuadraticForm::validate() const {
  const auto n = alpha.rows();
  if (n < 1 || alpha.cols() != n || beta.rows() != n || beta.cols() != n) {
    throw DimensionError("BosonQuadraticForm: alpha and beta must both be N x N");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (alpha(i, j) != alpha(j, i)) {
        throw DomainError("BosonQuadraticForm: alpha is not symmetric at (" + std::to_string(i + 1) +
                          "," + std::to_string(j + 1) + ")");
      }
      if (beta(i, j) != beta(j, i)) {
        throw DomainError("BosonQuadraticForm: beta is not symmetric at (" + std::to_string(i + 1) +
                          "," + std::to_string(j + 1) + ")");
      }
    }
  }
  if (!alpha.allFinite() || !beta.allFinite()) {
    throw DomainError("BosonQuadraticForm: non-finite coefficient");
  }
  require_metric_size(metric, static_cast<int>(n));
}

ComplexMatrix build_quadratic_H(const FockSpace& space, const BosonQuadraticForm& form) {
  form.validate();
  if (form.modes() != space.modes()) {
    throw DimensionError("build_quadratic_H: form and space disagree on the number of modes");
  }
  const int n = form.modes();
  auto weight = [](cplx exponent) {
    if (std::abs(exponent.real()) > kExponentGuard) {
      throw DomainError("build_quadratic_H: weight exponent " + std::to_string(exponent.real()) +
                        " exceeds the overflow guard");
    }
    return std::exp(exponent);
  };
  BosonExpr h;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx wi = form.metric.w(static_cast<std::size_t>(i));
      const cplx wj = form.metric.w(static_cast<std::size_t>(j));
      const double a = form.alpha(i, j);
      const double b = form.beta(i, j);
      if (a != 0.0) {
        h += (0.5 * a * weight(wi - wj)) * (BosonExpr::create(i) * BosonExpr::annihilate(j));
        h += (0.5 * a * weight(-(wi - wj))) * (BosonExpr::create(j) * BosonExpr::annihilate(i));
      }
      if (b != 0.0) {
        h += (0.5 * b * weight(-(wi + wj))) * (BosonExpr::annihilate(i) * BosonExpr::annihilate(j));
        h += (0.5 * b * weight(wi + wj)) * (BosonExpr::create(i) * BosonExpr::create(j));
      }
    }
  }
  return realize(space, h);
}

BogoliubovResult bogoliubov_frequencies(const BosonQuadraticForm& form) {
  form.validate();
  const auto n = form.alpha.rows();
  RealMatrix d(2 * n, 2 * n);
  d << form.alpha, form.beta, form.beta, form.alpha;

  Eigen::SelfAdjointEigenSolver<RealMatrix> des(d, Eigen::EigenvaluesOnly);
  const double d_min = des.eigenvalues().minCoeff();
  const double d_scale = des.eigenvalues().cwiseAbs().maxCoeff();
  if (!(d_min > tolerance::kPositiveDefinite * d_scale)) {
    std::ostringstream msg;
    msg << "bogoliubov_frequencies: D is not strictly positive (smallest eigenvalue " << d_min
        << "); stability criterion violated";
    throw UnstableFormError(msg.str(), d_min);
  }

  RealMatrix q = d;
  q.bottomRows(n) *= -1.0;  // Q = Î D
  Eigen::EigenSolver<RealMatrix> qes(q, /*computeEigenvectors=*/false);
  if (qes.info() != Eigen::Success) throw NumericalError("bogoliubov_frequencies: eigensolver failed");
  std::vector<cplx> ev(qes.eigenvalues().data(), qes.eigenvalues().data() + 2 * n);
  std::sort(ev.begin(), ev.end(), [](const cplx& a, const cplx& b) { return a.real() < b.real(); });

  BogoliubovResult out;
  out.d_min_eigenvalue = d_min;
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx pos = ev[static_cast<std::size_t>(n + k)];
    const cplx neg = ev[static_cast<std::size_t>(n - 1 - k)];
    out.omegas.push_back(pos.real());
    out.pairing_residual = std::max({out.pairing_residual, std::abs(pos + neg),
                                     std::abs(pos.imag()), std::abs(neg.imag())});
  }
  if (out.omegas.front() <= 0.0) {
    throw NumericalError("bogoliubov_frequencies: non-positive frequency despite D > 0");
  }
  return out;
}

std::vector<double> quadratic_spectrum(const BosonQuadraticForm& form,
                                       std::span<const Occupation> levels) {
  const auto bog = bogoliubov_frequencies(form);
  std::vector<double> out;
  out.reserve(levels.size());
  for (const auto& occ : levels) {
    if (occ.size() != bog.omegas.size()) {
      throw DimensionError("quadratic_spectrum: occupation list has wrong length");
    }
    double e = 0.0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
      if (occ[i] < 0) throw DomainError("quadratic_spectrum: negative occupation");
      e += (occ[i] + 0.5) * bog.omegas[i];
    }
    out.push_back(e);
  }
  return out;
}

std::vector<double> lowest_level_sums(std::span<const double> omegas, std::size_t count) {
  for (double om : omegas) {
    if (!(om > 0.0)) throw DomainError("lowest_level_sums: frequencies must be positive");
  }
  auto energy = [&](const Occupation& occ) {
    double e = 0.0;
    for (std::size_t i = 0; i < occ.size(); ++i) e += (occ[i] + 0.5) * omegas[i];
    return e;
  };
  using Entry = std::pair<double, Occupation>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::set<Occupation> seen;
  Occupation zero(omegas.size(), 0);
  heap.emplace(energy(zero), zero);
  seen.insert(zero);
  std::vector<double> out;
  while (out.size() < count) {
    auto [e, occ] = heap.top();
    heap.pop();
    out.push_back(e);
    for (std::size_t i = 0; i < occ.size(); ++i) {
      Occupation next = occ;
      ++next[i];
      if (seen.insert(next).second) heap.emplace(energy(next), next);
    }
  }
  return out;
}

std::vector<double> lowest_quadratic_levels(const BosonQuadraticForm& form, std::size_t count) {
  return lowest_level_sums(bogoliubov_frequencies(form).omegas, count);
}

double normal_order_shift(const BosonQuadraticForm& form) { return 0.5 * form.alpha.trace(); }

// ---- Schwinger / LMG -------------------------------------------------------

namespace {

struct SchwingerExprs {
  BosonExpr jplus, jminus, jz;
};

SchwingerExprs schwinger_exprs(const MetricSpec& metric) {
  const double dg = metric.gammas[0] - metric.gammas[1];
  if (std::abs(dg) > kExponentGuard) throw DomainError("schwinger_su2: gamma difference overflows");
  SchwingerExprs e;
  e.jplus = std::exp(dg) * (BosonExpr::create(0) * BosonExpr::annihilate(1));
  e.jminus = std::exp(-dg) * (BosonExpr::create(1) * BosonExpr::annihilate(0));
  e.jz = 0.5 * (BosonExpr::number(0) - BosonExpr::number(1));
  return e;
}

}  // namespace

SchwingerGenerators schwinger_su2(const FockSpace& space, const MetricSpec& metric) {
  require_two_modes(space, metric, "schwinger_su2");
  const auto e = schwinger_exprs(metric);
  return {realize(space, e.jplus), realize(space, e.jminus), realize(space, e.jz)};
}

ComplexMatrix build_lmg(const FockSpace& space, const MetricSpec& metric, double omega0,
                        double omega) {
  require_two_modes(space, metric, "build_lmg");
  const auto e = schwinger_exprs(metric);
  const BosonExpr h = cplx(omega0) * e.jz + cplx(omega) * (e.jminus * e.jminus + e.jplus * e.jplus);
  return realize(space, h);
}

// ---- truncation certificate ------------------------------------------------

std::vector<cplx> lowest_eigenvalues(const ComplexMatrix& h, std::size_t count) {
  auto ev = spectrum(h).eigenvalues;
  if (count < ev.size()) ev.resize(count);
  return ev;
}

double truncation_error_estimate(const std::function<ComplexMatrix(int)>& build, int cutoff,
                                 std::size_t count) {
  if (cutoff < 3) throw DomainError("truncation_error_estimate: cutoff must be >= 3");
  const auto hi = lowest_eigenvalues(build(cutoff), count);
  const auto lo = lowest_eigenvalues(build(cutoff - 2), count);
  if (hi.size() != lo.size()) throw DomainError("truncation_error_estimate: too few levels");
  double worst = 0.0;
  for (std::size_t k = 0; k < hi.size(); ++k) worst = std::max(worst, std::abs(hi[k] - lo[k]));
  return worst;
}

}  // namespace metriq
