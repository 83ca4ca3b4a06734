#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "metriq/cli.hpp"

namespace metriq::cli {
namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

// One realized model: H, its metric root and phase unitary, and the pieces
// model-specific checks need.
struct Built {
  ComplexMatrix h;
  std::optional<InnerProductSpace> space;
  ComplexMatrix u;
  std::function<std::vector<cplx>()> undeformed;   // spectrum at w = 0
  std::function<ComplexMatrix()> counterpart;      // directly built hermitian h
  std::function<double()> truncation;              // certificate
};

std::vector<cplx> eigen_of(const ComplexMatrix& m) { return spectrum(m).eigenvalues; }

std::vector<cplx> as_complex(const std::vector<double>& v) { return {v.begin(), v.end()}; }

InnerProductSpace diagonal_space(const std::vector<double>& d) {
  return InnerProductSpace::from_diagonal(d);
}

int boson_cutoff(const BosonQuadraticModel& m) {
  if (m.cutoff > 0) return m.cutoff;
  const int c = static_cast<int>(std::floor(std::pow(441.0, 1.0 / m.form.modes()) + 1e-9)) - 1;
  return std::clamp(c, 3, 40);
}

Built build(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> Built {
        using T = std::decay_t<decltype(m)>;
        Built b;
        if constexpr (std::is_same_v<T, OscillatorModel>) {
          const auto space = oscillator_space(m.cutoff);
          b.h = build_xy_hamiltonian(m.params, space);
          b.space = oscillator_inner_product_space(space, m.params.gamma);
          b.u = oscillator_rotation(space, m.params.xi);
          b.undeformed = [m, space] {
            auto p = m.params;
            p.gamma = p.xi = 0.0;
            return as_complex(hermitian_eigenvalues(build_xy_hamiltonian(p, space)));
          };
          b.truncation = [m] {
            return truncation_error_estimate(
                [&](int c) { return build_xy_hamiltonian(m.params, oscillator_space(c)); }, m.cutoff,
                10);
          };
        } else if constexpr (std::is_same_v<T, BosonQuadraticModel>) {
          const FockSpace space(m.form.modes(), boson_cutoff(m));
          b.h = build_quadratic_H(space, m.form);
          b.space = boson_inner_product_space(space, m.form.metric);
          b.u = phase_unitary(space, m.form.metric);
          b.undeformed = [m, space] {
            auto f = m.form;
            f.metric = MetricSpec::uniform(static_cast<std::size_t>(f.modes()), 0.0);
            return as_complex(hermitian_eigenvalues(build_quadratic_H(space, f)));
          };
          b.truncation = [m] {
            return truncation_error_estimate(
                [&](int c) { return build_quadratic_H(FockSpace(m.form.modes(), c), m.form); },
                boson_cutoff(m), 5);
          };
        } else if constexpr (std::is_same_v<T, LmgModel>) {
          const FockSpace space(2, m.cutoff, Truncation::TotalOccupation);
          b.h = build_lmg(space, m.metric, m.omega0, m.omega);
          b.space = boson_inner_product_space(space, m.metric);
          b.u = phase_unitary(space, m.metric);
          b.undeformed = [m, space] {
            return as_complex(
                hermitian_eigenvalues(build_lmg(space, MetricSpec::uniform(2, 0.0), m.omega0, m.omega)));
          };
        } else if constexpr (std::is_same_v<T, FermionQuadraticModel>) {
          b.h = build_fermion_quadratic(m.spec);
          b.space = fermion_inner_product_space(m.spec);
          b.u = fermion_phase_unitary(m.spec);
          b.counterpart = [m] { return fermion_hermitian_counterpart(m.spec); };
          b.undeformed = [m] { return as_complex(hermitian_eigenvalues(fermion_hermitian_counterpart(m.spec))); };
        } else if constexpr (std::is_same_v<T, XxzAsymmetricModel> ||
                             std::is_same_v<T, XxzSymmetricModel>) {
          constexpr bool asym = std::is_same_v<T, XxzAsymmetricModel>;
          constexpr auto variant = asym ? XxzVariant::Asymmetric : XxzVariant::Symmetric;
          b.h = asym ? build_xxz_asymmetric(m.spec) : build_xxz_symmetric(m.spec);
          b.space = chain_inner_product_space(m.spec);
          b.u = chain_phase_unitary(m.spec.sites, m.spec.metric);
          b.counterpart = [m] { return hermitian_counterpart(m.spec, variant); };
          b.undeformed = [m] { return as_complex(hermitian_eigenvalues(hermitian_counterpart(m.spec, variant))); };
        } else if constexpr (std::is_same_v<T, HaldaneShastryModel>) {
          b.h = build_haldane_shastry(m.sites, m.sign, m.metric);
          b.space = diagonal_space(zeta_diagonal(m.sites, m.metric));
          b.u = chain_phase_unitary(m.sites, m.metric);
          b.undeformed = [m] {
            return as_complex(hermitian_eigenvalues(build_haldane_shastry(
                m.sites, m.sign, MetricSpec::uniform(static_cast<std::size_t>(m.sites), 0.0))));
          };
        } else {
          b.h = m.matrix.realized();
          std::vector<double> d;
          for (double g : m.matrix.grades) d.push_back(std::exp(-2.0 * g));
          b.space = diagonal_space(d);
          b.u = ComplexMatrix::Identity(b.h.rows(), b.h.cols());
          b.undeformed = [m] {
            return as_complex(hermitian_eigenvalues(ComplexMatrix(m.matrix.core.template cast<cplx>())));
          };
        }
        return b;
      },
      model);
}

double model_default_tolerance(const ModelSpec& model, const std::string& check) {
  if (check == "closedForm") return model.index() == 0 ? 1e-7 : 1e-6;
  if (check == "truncation") return model.index() == 0 ? 1e-7 : 1e-6;
  if (check == "bogoliubov") return 1e-10;
  if (check == "counterpart") return 1e-12;
  if (check == "symmetrization") return 1e-13;
  if (check == "undeformed") return model.index() == 0 ? 1e-8 : 1e-10;
  if (model.index() == 0 && check == check_names::kIsospectral) return 1e-8;
  return default_tolerance(check);
}

// A failure caused by a numerical breakdown (as opposed to a violated property).
struct Evaluated {
  CheckResult result;
  json diagnostics;
  bool numerical = false;
};

Evaluated model_check(const std::string& name, double tol, const ModelSpec& model, const Built& b) {
  Evaluated ev;
  try {
    if (name == "undeformed") {
      const double d = spectral_distance(eigen_of(b.h), b.undeformed());
      ev.result = make_check(name, d, tol, "spectrum vs w = 0");
    } else if (name == "counterpart") {
      const ComplexMatrix h = b.counterpart();
      const ComplexMatrix mapped = to_hermitian(b.h, *b.space, b.u);
      ev.result = make_check(name, (mapped - h).norm() / (1.0 + h.norm()), tol,
                             "||(U rho) H (U rho)^-1 - h||_F relative");
    } else if (name == "truncation") {
      ev.result = make_check(name, b.truncation(), tol, "eigenvalue shift between cutoff and cutoff-2");
    } else if (name == "symmetrization") {
      const auto& g = std::get<GradedMatrixModel>(model).matrix;
      const ComplexMatrix s = pseudo_symmetric_symmetrize(g);
      const double sym = (s - s.transpose()).norm();
      const double core = (s - g.core.cast<cplx>()).norm();
      ev.result = make_check(name, std::max(sym, core), tol, "symmetry " + fmt(sym) + ", core " + fmt(core));
    } else if (name == "bogoliubov" || name == "closedForm") {
      if (const auto* osc = std::get_if<OscillatorModel>(&model)) {
        const auto expect = oscillator_levels(osc->params, 10);
        const auto got = spectrum(b.h).eigenvalues;
        double d = 0.0;
        for (std::size_t k = 0; k < expect.size(); ++k) d = std::max(d, std::abs(got[k] - expect[k]));
        const auto [lp, lm] = lambda_pm_paper(osc->params);
        const auto [wp, wm] = normal_mode_frequencies(osc->params);
        ev.diagnostics = {{"omegaPlus", wp}, {"omegaMinus", wm}, {"lambdaPlusPaper", lp},
                          {"lambdaMinusPaper", lm}, {"lambdaOverOmega", lp / wp}};
        ev.result = make_check(name, d, tol, "lowest 10 levels vs (n+1/2) omega sums");
      } else {
        const auto& form = std::get<BosonQuadraticModel>(model).form;
        try {
          const auto bog = bogoliubov_frequencies(form);
          ev.diagnostics = {{"omegas", bog.omegas}, {"dMinEigenvalue", bog.d_min_eigenvalue}};
          if (name == "bogoliubov") {
            ev.result = make_check(name, bog.pairing_residual, tol, "+/- Omega pairing");
          } else {
            const auto expect = lowest_quadratic_levels(form, 5);
            const auto got = spectrum(b.h).eigenvalues;
            const double shift = normal_order_shift(form);
            double d = 0.0;
            for (std::size_t k = 0; k < expect.size(); ++k) {
              d = std::max(d, std::abs(got[k] + shift - expect[k]));
            }
            ev.result = make_check(name, d, tol, "lowest 5 levels vs sum (n+1/2) Omega, normal-order shift " +
                                                     fmt(shift));
          }
        } catch (const UnstableFormError& e) {
          ev.diagnostics = {{"dMinEigenvalue", e.d_min_eigenvalue()}};
          ev.result = failed_check(name, tol, e.what());
        }
      }
    } else {
      throw DomainError("unknown check '" + name + "'");
    }
  } catch (const NumericalError& e) {
    ev.result = failed_check(name, tol, e.what());
    ev.numerical = true;
  } catch (const Error& e) {
    ev.result = failed_check(name, tol, e.what());
  }
  return ev;
}

json check_json(const CheckResult& c, const json& diagnostics, const std::optional<double>& point) {
  json j;
  j["name"] = c.name;
  j["passed"] = c.passed;
  j["residual"] = std::isfinite(c.residual) ? json(c.residual) : json("inf");
  j["tolerance"] = c.tolerance;
  j["detail"] = c.detail;
  if (point) j["sweepValue"] = *point;
  if (!diagnostics.is_null()) j["diagnostics"] = diagnostics;
  return j;
}

}  // namespace

RunOutcome execute(const RunConfig& config, const RunRequest& request) {
  RunOutcome out;
  json& report = out.report;
  report["model"] = kind_of(config.model);
  report["parameters"] = serialize_model(config.model);
  if (config.sweep) {
    report["sweep"] = {{"parameter", config.sweep->parameter}, {"values", config.sweep->values}};
  }
  report["checks"] = json::array();
  report["spectra"] = json::array();
  report["seed"] = config.seed;
  report["version"] = kVersion;

  std::ostringstream csv;
  csv.precision(17);
  csv << "sweep-value,index,re,im\n";

  const auto checks = config.checks.empty() ? default_checks(config.model) : config.checks;
  auto tolerance_for = [&](const std::string& name) {
    const auto it = config.tolerances.find(name);
    return it != config.tolerances.end() ? it->second : model_default_tolerance(config.model, name);
  };

  std::vector<std::optional<double>> points;
  if (config.sweep) {
    for (double v : config.sweep->values) points.emplace_back(v);
  } else {
    points.emplace_back(std::nullopt);
  }

  bool any_failed = false, numerical = false;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& point : points) {
    const std::string where =
        point ? " (sweep " + config.sweep->parameter + "=" + fmt(*point) + ")" : std::string{};
    try {
      const ModelSpec model = point ? apply_sweep(config.model, config.sweep->parameter, *point)
                                    : config.model;
      const Built b = build(model);

      if (request.run_checks) {
        SuiteOptions opts;
        opts.seed = config.seed;
        opts.model = kind_of(model);
        for (const auto& name : checks) opts.tolerances[name] = tolerance_for(name);
        std::optional<VerificationReport> suite;
        for (const auto& name : checks) {
          Evaluated ev;
          const bool generic =
              name == check_names::kMetric || name == check_names::kPseudoHermiticity ||
              name == check_names::kReality || name == check_names::kIsospectral ||
              name == check_names::kNormConservation;
          if (generic) {
            if (!suite) suite = run_suite(b.h, *b.space, opts);
            for (const auto& c : suite->checks) {
              if (c.name == name) ev.result = c;
            }
            ev.numerical = ev.result.numerical_failure;
          } else {
            ev = model_check(name, tolerance_for(name), model, b);
          }
          any_failed |= !ev.result.passed;
          numerical |= ev.numerical;
          report["checks"].push_back(check_json(ev.result, ev.diagnostics, point));
        }
      }

      if (request.collect_spectra) {
        const auto s = spectrum(b.h);
        json values = json::array();
        for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
          const cplx e = s.eigenvalues[k];
          values.push_back({e.real(), e.imag()});
          if (point) csv << *point;
          csv << ',' << k << ',' << e.real() << ',' << e.imag() << '\n';
        }
        json entry;
        if (point) entry["sweepValue"] = *point;
        entry["maxImagAbs"] = s.max_imag_abs;
        entry["eigenvalues"] = values;
        report["spectra"].push_back(entry);
      }
    } catch (const ConfigError& e) {
      report["error"] = std::string(e.what()) + where;
      out.exit_code = kConfigInvalid;
      break;
    } catch (const NumericalError& e) {
      report["error"] = std::string(e.what()) + where;
      out.exit_code = kNumericalFailure;
      break;
    } catch (const Error& e) {
      report["error"] = std::string(e.what()) + where;
      out.exit_code = kConfigInvalid;
      break;
    }
  }
  report["wallSeconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.csv = csv.str();
  if (out.exit_code == kAllPassed) {
    if (numerical) out.exit_code = kNumericalFailure;
    else if (any_failed) out.exit_code = kCheckFailed;
  }
  return out;
}

}  // namespace metriq::cli
