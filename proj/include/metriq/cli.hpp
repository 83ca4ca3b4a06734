#pragma once

// Run configurations for the `metriq` front end: typed model specs, JSON
// parsing/serialization, and the runner that produces reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "metriq/fock.hpp"
#include "metriq/oscillator.hpp"
#include "metriq/spin.hpp"
#include "metriq/verify.hpp"

namespace metriq::cli {

using json = nlohmann::ordered_json;

/// Malformed or invalid configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct OscillatorModel {
  OscillatorParams params;
  int cutoff = 24;  ///< total occupation n_x + n_y
  bool operator==(const OscillatorModel&) const = default;
};

struct BosonQuadraticModel {
  BosonQuadraticForm form;
  int cutoff = 0;  ///< per mode; 0 = chosen from the number of modes
  bool operator==(const BosonQuadraticModel& o) const;
};

struct LmgModel {
  double omega0 = 1.0;
  double omega = 0.1;
  MetricSpec metric = MetricSpec::uniform(2, 0.0);
  int cutoff = 20;  ///< total boson number, i.e. 2 j_max
  bool operator==(const LmgModel&) const = default;
};

struct FermionQuadraticModel {
  FermionQuadraticSpec spec;
  bool operator==(const FermionQuadraticModel& o) const;
};

struct XxzAsymmetricModel {
  SpinChainSpec spec;
  bool operator==(const XxzAsymmetricModel&) const = default;
};

struct XxzSymmetricModel {
  SpinChainSpec spec;  ///< uniform metric
  bool operator==(const XxzSymmetricModel&) const = default;
};

struct HaldaneShastryModel {
  int sites = 2;
  int sign = 1;
  MetricSpec metric = MetricSpec::uniform(2, 0.0);
  bool operator==(const HaldaneShastryModel&) const = default;
};

struct GradedMatrixModel {
  GradedMatrix matrix;
  bool operator==(const GradedMatrixModel& o) const;
};

using ModelSpec = std::variant<OscillatorModel, BosonQuadraticModel, LmgModel, FermionQuadraticModel,
                               XxzAsymmetricModel, XxzSymmetricModel, HaldaneShastryModel,
                               GradedMatrixModel>;

std::string kind_of(const ModelSpec& model);

struct Sweep {
  std::string parameter;  ///< "name", "name[i]" (0-based) or an array name for all elements
  std::vector<double> values;
  bool operator==(const Sweep&) const = default;
};

struct OutputSpec {
  std::string dir = ".";
  std::string format = "json";  ///< json | csv
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  ModelSpec model;
  std::vector<std::string> checks;  ///< empty = the model's default list
  std::optional<Sweep> sweep;
  OutputSpec output;
  std::uint64_t seed = kDefaultSeed;
  std::map<std::string, double> tolerances;
  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& text);
json serialize(const RunConfig& config);
json serialize_model(const ModelSpec& model);

/// Checks a kind supports, and those run when none are requested.
std::vector<std::string> supported_checks(const ModelSpec& model);
std::vector<std::string> default_checks(const ModelSpec& model);

/// A copy of `model` with the sweep parameter set to `value`.
ModelSpec apply_sweep(const ModelSpec& model, const std::string& parameter, double value);

enum ExitCode : int { kAllPassed = 0, kCheckFailed = 1, kConfigInvalid = 2, kNumericalFailure = 3 };

struct RunOutcome {
  json report;
  std::string csv;  ///< spectra table: sweep-value,index,re,im
  int exit_code = kAllPassed;
};

struct RunRequest {
  bool run_checks = true;
  bool collect_spectra = true;
};

/// Runs every sweep point; errors end the sweep but keep earlier results.
RunOutcome execute(const RunConfig& config, const RunRequest& request = {});

}  // namespace metriq::cli
