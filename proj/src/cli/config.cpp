#include <algorithm>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "metriq/cli.hpp"

namespace metriq::cli {
namespace {

bool same(const RealMatrix& a, const RealMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

// Reads one JSON object, remembering which keys were consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return path_ + "." + key; }

  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) throw ConfigError(at(key) + ": required field missing");
    return *v;
  }

  double number(const std::string& key) { return as_number(require(key), at(key)); }
  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, at(key)) : fallback;
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    const json* v = find(key);
    if (!v) {
      if (fallback) return *fallback;
      throw ConfigError(at(key) + ": required field missing");
    }
    if (!v->is_number_integer()) throw ConfigError(at(key) + ": expected an integer");
    return v->get<int>();
  }

  std::vector<double> numbers(const std::string& key, std::optional<std::size_t> default_zeros) {
    const json* v = find(key);
    if (!v) {
      if (default_zeros) return std::vector<double>(*default_zeros, 0.0);
      throw ConfigError(at(key) + ": required field missing");
    }
    return as_numbers(*v, at(key));
  }

  RealMatrix matrix(const std::string& key) {
    const json& v = require(key);
    const std::string p = at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(p + ": expected a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(v.size());
    RealMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = as_numbers(v[static_cast<std::size_t>(i)], p + "[" + std::to_string(i) + "]");
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw ConfigError(p + ": expected a square matrix, row " + std::to_string(i) + " has " +
                          std::to_string(row.size()) + " entries");
      }
      for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
    }
    return m;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError(path_ + ": unknown key '" + key + "'");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path + ": must be finite");
    return d;
  }

  static std::vector<double> as_numbers(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

json matrix_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

MetricSpec read_metric(ObjectReader& r, std::size_t n) {
  MetricSpec m;
  m.gammas = r.numbers("gammas", n);
  m.xis = r.numbers("xis", n);
  if (m.gammas.size() != n) {
    throw ConfigError(r.at("gammas") + ": expected " + std::to_string(n) + " entries");
  }
  if (m.xis.size() != n) throw ConfigError(r.at("xis") + ": expected " + std::to_string(n) + " entries");
  return m;
}

void write_metric(json& j, const MetricSpec& m) {
  j["gammas"] = m.gammas;
  j["xis"] = m.xis;
}

template <typename F>
void validated(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

SpinChainSpec read_chain(ObjectReader& r, bool uniform_metric) {
  SpinChainSpec s;
  s.sites = r.integer("sites");
  if (s.sites < 2 || s.sites > kMaxChainSites) {
    throw ConfigError(r.at("sites") + ": must be in [2, " + std::to_string(kMaxChainSites) + "]");
  }
  const auto n = static_cast<std::size_t>(s.sites);
  s.coupling = r.number("Gamma", 1.0);
  s.anisotropy = r.number("Delta", 0.0);
  s.fields_a = r.numbers("A", n);
  s.fields_b = r.numbers("B", n);
  s.fields_c = r.numbers("C", n);
  if (uniform_metric) {
    s.metric = MetricSpec::uniform(n, r.number("gamma", 0.0), r.number("xi", 0.0));
  } else {
    s.metric = read_metric(r, n);
  }
  validated(r.path(), [&] { s.validate(); });
  return s;
}

void write_chain(json& j, const SpinChainSpec& s, bool uniform_metric) {
  j["sites"] = s.sites;
  j["Gamma"] = s.coupling;
  j["Delta"] = s.anisotropy;
  j["A"] = s.fields_a;
  j["B"] = s.fields_b;
  j["C"] = s.fields_c;
  if (uniform_metric) {
    j["gamma"] = s.metric.gammas.front();
    j["xi"] = s.metric.xis.front();
  } else {
    write_metric(j, s.metric);
  }
}

ModelSpec parse_model(const json& j) {
  ObjectReader r(j, "model");
  const json& kind_json = r.require("kind");
  if (!kind_json.is_string()) throw ConfigError("model.kind: expected a string");
  const std::string kind = kind_json.get<std::string>();
  ModelSpec out;

  if (kind == "oscillator2d") {
    OscillatorModel m;
    m.params.mass = r.number("m", 1.0);
    m.params.k1 = r.number("k1");
    m.params.k2 = r.number("k2");
    m.params.k3 = r.number("k3", 0.0);
    m.params.gamma = r.number("gamma", 0.0);
    m.params.xi = r.number("xi", 0.0);
    m.cutoff = r.integer("cutoff", 24);
    if (m.cutoff < 3) throw ConfigError("model.cutoff: must be >= 3");
    validated("model", [&] { m.params.validate(); });
    out = m;
  } else if (kind == "bosonQuadratic") {
    BosonQuadraticModel m;
    m.form.alpha = r.matrix("alpha");
    m.form.beta = r.matrix("beta");
    const auto n = static_cast<std::size_t>(m.form.alpha.rows());
    m.form.metric = read_metric(r, n);
    m.cutoff = r.integer("cutoff", 0);
    if (m.cutoff != 0 && m.cutoff < 3) throw ConfigError("model.cutoff: must be >= 3");
    validated("model", [&] { m.form.validate(); });
    out = m;
  } else if (kind == "lmg") {
    LmgModel m;
    m.omega0 = r.number("omega0");
    m.omega = r.number("omega");
    m.metric = read_metric(r, 2);
    m.cutoff = r.integer("cutoff", 20);
    if (m.cutoff < 1) throw ConfigError("model.cutoff: must be >= 1");
    out = m;
  } else if (kind == "fermionQuadratic") {
    FermionQuadraticModel m;
    m.spec.a = r.matrix("A");
    m.spec.b = r.matrix("B");
    m.spec.metric = read_metric(r, static_cast<std::size_t>(m.spec.a.rows()));
    validated("model", [&] { m.spec.validate(); });
    out = m;
  } else if (kind == "xxzAsymmetric") {
    out = XxzAsymmetricModel{read_chain(r, false)};
  } else if (kind == "xxzSymmetric") {
    out = XxzSymmetricModel{read_chain(r, true)};
  } else if (kind == "haldaneShastry") {
    HaldaneShastryModel m;
    m.sites = r.integer("sites");
    if (m.sites < 2 || m.sites > kMaxChainSites) {
      throw ConfigError("model.sites: must be in [2, " + std::to_string(kMaxChainSites) + "]");
    }
    m.sign = r.integer("sign", 1);
    if (m.sign != 1 && m.sign != -1) throw ConfigError("model.sign: must be +1 or -1");
    m.metric = read_metric(r, static_cast<std::size_t>(m.sites));
    validated("model", [&] { m.metric.validate(); });
    out = m;
  } else if (kind == "gradedMatrix") {
    GradedMatrixModel m;
    m.matrix.core = r.matrix("core");
    m.matrix.grades = r.numbers("grades", static_cast<std::size_t>(m.matrix.core.rows()));
    validated("model", [&] { m.matrix.validate(); });
    out = m;
  } else {
    throw ConfigError("model.kind: unknown kind '" + kind + "'");
  }
  r.finish();
  return out;
}

// Splits "name" / "name[i]".
std::pair<std::string, std::optional<std::size_t>> split_path(const std::string& path) {
  static const std::regex re(R"(^([A-Za-z][A-Za-z0-9]*)(?:\[(\d+)\])?$)");
  std::smatch m;
  if (!std::regex_match(path, m, re)) {
    throw ConfigError("sweep.parameter: malformed path '" + path + "'");
  }
  std::optional<std::size_t> index;
  if (m[2].matched) index = std::stoul(m[2].str());
  return {m[1].str(), index};
}

}  // namespace

bool BosonQuadraticModel::operator==(const BosonQuadraticModel& o) const {
  return same(form.alpha, o.form.alpha) && same(form.beta, o.form.beta) &&
         form.metric == o.form.metric && cutoff == o.cutoff;
}

bool FermionQuadraticModel::operator==(const FermionQuadraticModel& o) const {
  return same(spec.a, o.spec.a) && same(spec.b, o.spec.b) && spec.metric == o.spec.metric;
}

bool GradedMatrixModel::operator==(const GradedMatrixModel& o) const {
  return same(matrix.core, o.matrix.core) && matrix.grades == o.matrix.grades;
}

std::string kind_of(const ModelSpec& model) {
  static const char* names[] = {"oscillator2d",   "bosonQuadratic", "lmg",
                                "fermionQuadratic", "xxzAsymmetric", "xxzSymmetric",
                                "haldaneShastry", "gradedMatrix"};
  return names[model.index()];
}

json serialize_model(const ModelSpec& model) {
  json j;
  j["kind"] = kind_of(model);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, OscillatorModel>) {
          j["m"] = m.params.mass;
          j["k1"] = m.params.k1;
          j["k2"] = m.params.k2;
          j["k3"] = m.params.k3;
          j["gamma"] = m.params.gamma;
          j["xi"] = m.params.xi;
          j["cutoff"] = m.cutoff;
        } else if constexpr (std::is_same_v<T, BosonQuadraticModel>) {
          j["alpha"] = matrix_json(m.form.alpha);
          j["beta"] = matrix_json(m.form.beta);
          write_metric(j, m.form.metric);
          j["cutoff"] = m.cutoff;
        } else if constexpr (std::is_same_v<T, LmgModel>) {
          j["omega0"] = m.omega0;
          j["omega"] = m.omega;
          write_metric(j, m.metric);
          j["cutoff"] = m.cutoff;
        } else if constexpr (std::is_same_v<T, FermionQuadraticModel>) {
          j["A"] = matrix_json(m.spec.a);
          j["B"] = matrix_json(m.spec.b);
          write_metric(j, m.spec.metric);
        } else if constexpr (std::is_same_v<T, XxzAsymmetricModel>) {
          write_chain(j, m.spec, false);
        } else if constexpr (std::is_same_v<T, XxzSymmetricModel>) {
          write_chain(j, m.spec, true);
        } else if constexpr (std::is_same_v<T, HaldaneShastryModel>) {
          j["sites"] = m.sites;
          j["sign"] = m.sign;
          write_metric(j, m.metric);
        } else {
          j["core"] = matrix_json(m.matrix.core);
          j["grades"] = m.matrix.grades;
        }
      },
      model);
  return j;
}

std::vector<std::string> supported_checks(const ModelSpec& model) {
  using namespace check_names;
  std::vector<std::string> out{kMetric, kPseudoHermiticity, kReality, kIsospectral,
                               kNormConservation};
  switch (model.index()) {
    case 0:  // oscillator2d
      out.insert(out.end(), {"undeformed", "closedForm", "truncation"});
      break;
    case 1:  // bosonQuadratic
      out.insert(out.end(), {"undeformed", "bogoliubov", "closedForm", "truncation"});
      break;
    case 2:  // lmg
      out.insert(out.end(), {"undeformed"});
      break;
    case 3:
    case 4:
    case 5:
      out.insert(out.end(), {"undeformed", "counterpart"});
      break;
    case 6:
      out.insert(out.end(), {"undeformed"});
      break;
    default:
      out.insert(out.end(), {"undeformed", "symmetrization"});
      break;
  }
  return out;
}

std::vector<std::string> default_checks(const ModelSpec& model) {
  auto out = supported_checks(model);
  if (model.index() == 0) {
    // opt-in only for the oscillator
    std::erase(out, std::string(check_names::kMetric));
    std::erase(out, std::string(check_names::kNormConservation));
  }
  return out;
}

ModelSpec apply_sweep(const ModelSpec& model, const std::string& parameter, double value) {
  if (!std::isfinite(value)) throw ConfigError("sweep.values: must be finite");
  auto [name, index] = split_path(parameter);
  json j = serialize_model(model);
  if (name == "kind" || name == "cutoff" || name == "sites" || name == "sign") {
    throw ConfigError("sweep.parameter: '" + name + "' cannot be swept");
  }
  if (!j.contains(name)) {
    // singular aliases for per-site arrays
    if (name == "gamma" && j.contains("gammas")) name = "gammas";
    else if (name == "xi" && j.contains("xis")) name = "xis";
    else throw ConfigError("sweep.parameter: '" + name + "' is not a parameter of " + kind_of(model));
  }
  json& target = j[name];
  if (target.is_number()) {
    if (index) throw ConfigError("sweep.parameter: '" + name + "' is a scalar");
    target = value;
  } else if (target.is_array() && (target.empty() || target[0].is_number())) {
    if (index) {
      if (*index >= target.size()) {
        throw ConfigError("sweep.parameter: index " + std::to_string(*index) + " out of range for '" +
                          name + "'");
      }
      target[*index] = value;
    } else {
      for (auto& e : target) e = value;
    }
  } else {
    throw ConfigError("sweep.parameter: '" + name + "' cannot be swept");
  }
  return parse_model(j);
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // locate the byte offset as line/column
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << "parse error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError(msg.str());
  }

  ObjectReader r(j, "config");
  RunConfig c;
  c.model = parse_model(r.require("model"));
  const auto supported = supported_checks(c.model);
  auto require_supported = [&](const std::string& name, const std::string& path) {
    if (std::find(supported.begin(), supported.end(), name) == supported.end()) {
      throw ConfigError(path + ": check '" + name + "' is not available for " + kind_of(c.model));
    }
  };

  if (const json* checks = r.find("checks")) {
    if (!checks->is_array()) throw ConfigError("config.checks: expected an array of names");
    for (std::size_t i = 0; i < checks->size(); ++i) {
      const std::string path = "config.checks[" + std::to_string(i) + "]";
      if (!(*checks)[i].is_string()) throw ConfigError(path + ": expected a string");
      const auto name = (*checks)[i].get<std::string>();
      require_supported(name, path);
      c.checks.push_back(name);
    }
  }

  if (const json* sweep = r.find("sweep")) {
    ObjectReader s(*sweep, "config.sweep");
    const json& p = s.require("parameter");
    if (!p.is_string()) throw ConfigError("config.sweep.parameter: expected a string");
    Sweep sw{p.get<std::string>(), s.numbers("values", std::nullopt)};
    if (sw.values.empty()) throw ConfigError("config.sweep.values: must not be empty");
    s.finish();
    apply_sweep(c.model, sw.parameter, sw.values.front());  // validates the path
    c.sweep = sw;
  }

  if (const json* output = r.find("output")) {
    ObjectReader o(*output, "config.output");
    if (const json* d = o.find("dir")) {
      if (!d->is_string()) throw ConfigError("config.output.dir: expected a string");
      c.output.dir = d->get<std::string>();
    }
    if (const json* f = o.find("format")) {
      if (!f->is_string()) throw ConfigError("config.output.format: expected a string");
      c.output.format = f->get<std::string>();
      if (c.output.format != "json" && c.output.format != "csv") {
        throw ConfigError("config.output.format: must be 'json' or 'csv'");
      }
    }
    o.finish();
  }

  if (const json* seed = r.find("seed")) {
    if (!seed->is_number_unsigned()) throw ConfigError("config.seed: expected a non-negative integer");
    c.seed = seed->get<std::uint64_t>();
  }

  if (const json* tols = r.find("tolerances")) {
    if (!tols->is_object()) throw ConfigError("config.tolerances: expected an object");
    for (const auto& [name, value] : tols->items()) {
      const std::string path = "config.tolerances." + name;
      require_supported(name, path);
      const double t = ObjectReader::as_number(value, path);
      if (!(t > 0.0)) throw ConfigError(path + ": must be positive");
      c.tolerances[name] = t;
    }
  }
  r.finish();
  return c;
}

json serialize(const RunConfig& c) {
  json j;
  j["model"] = serialize_model(c.model);
  j["checks"] = c.checks;
  if (c.sweep) j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
  j["output"] = {{"dir", c.output.dir}, {"format", c.output.format}};
  j["seed"] = c.seed;
  json tols = json::object();
  for (const auto& [k, v] : c.tolerances) tols[k] = v;
  j["tolerances"] = tols;
  return j;
}

}  // namespace metriq::cli
