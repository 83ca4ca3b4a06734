#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "metriq/cli.hpp"
#include "oracles.hpp"

using namespace metriq;
using namespace metriq::cli;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(METRIQ_FIXTURE_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  } catch (const Error& e) {
    return std::string("non-config error: ") + e.what();
  }
  return "";
}

}  // namespace

TEST(Parse, MinimalOscillator) {
  const auto c = parse_config(
      R"({"model": {"kind": "oscillator2d", "m": 1, "k1": 1, "k2": 1, "k3": 0, "gamma": 0, "xi": 0}})");
  ASSERT_TRUE(std::holds_alternative<OscillatorModel>(c.model));
  const auto& m = std::get<OscillatorModel>(c.model);
  EXPECT_EQ(m.params.k1, 1.0);
  EXPECT_EQ(m.cutoff, 24);
  EXPECT_EQ(c.seed, kDefaultSeed);
  EXPECT_TRUE(c.checks.empty());
  EXPECT_EQ(kind_of(c.model), "oscillator2d");
}

TEST(Parse, AsymmetricAlphaNamesTheEntry) {
  const auto msg = config_error(fixture("bad_alpha.json"));
  EXPECT_NE(msg.find("alpha is not symmetric at (1,2)"), std::string::npos) << msg;
}

TEST(Parse, SweepCount) {
  const auto c = parse_config(fixture("xxz_asymmetric.json"));
  ASSERT_TRUE(c.sweep.has_value());
  EXPECT_EQ(c.sweep->values.size(), 6u);
  EXPECT_EQ(c.sweep->parameter, "gamma");
}

TEST(Parse, Rejections) {
  EXPECT_NE(config_error("{").find("line 1"), std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"kind": "nope"}})").find("kind"), std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"kind": "oscillator2d", "m": 1, "k1": 1, "k2": 1, "k3": 0, "gamma": 0, "xi": 0, "mass": 1}})").find("mass"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"kind": "haldaneShastry", "sites": 3}, "checks": ["closedForm"]})")
                .find("checks[0]"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"kind": "haldaneShastry", "sites": 3}, "output": {"format": "xml"}})")
                .find("format"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"model": {"kind": "xxzAsymmetric", "sites": 3}, "sweep": {"parameter": "bogus", "values": [1]}})"),
            "");
  EXPECT_NE(config_error(R"({"model": {"kind": "oscillator2d", "m": -1, "k1": 1, "k2": 1, "k3": 0, "gamma": 0, "xi": 0}})"), "");
  EXPECT_NE(config_error(R"({"model": {"kind": "fermionQuadratic", "A": [[1]], "B": [[0.3]]}})"), "");
  EXPECT_NE(config_error(R"({"model": {"kind": "oscillator2d", "m": 1, "k1": 1, "k2": 1, "k3": 0, "gamma": 0, "xi": 0}, "tolerances": {"reality": -1}})"), "");
  EXPECT_NE(config_error(R"({"model": {"kind": "oscillator2d", "m": 1, "k1": 1, "k2": 1, "k3": 0, "gamma": 0, "xi": 0}, "seed": -3})"), "");
}

TEST(RoundTrip, FixturesAndRandomConfigs) {
  for (const char* name : {"oscillator_pass.json", "boson_unstable.json", "swanson.json",
                           "lmg_sweep.json", "xxz_asymmetric.json"}) {
    const auto c = parse_config(fixture(name));
    EXPECT_EQ(parse_config(serialize(c).dump()), c) << name;
    EXPECT_EQ(serialize(parse_config(serialize(c).dump())), serialize(c)) << name;
  }

  oracle::Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    RunConfig c;
    const int n = 2 + trial % 4;
    switch (trial % 4) {
      case 0: {
        OscillatorModel m;
        m.params = {.mass = oracle::uniform(rng, 0.5, 2), .k1 = oracle::uniform(rng, 0.5, 2),
                    .k2 = oracle::uniform(rng, 0.5, 2), .k3 = oracle::uniform(rng, -0.5, 0.5),
                    .gamma = oracle::uniform(rng, -0.3, 0.3), .xi = oracle::uniform(rng, -1, 1)};
        m.cutoff = 10 + trial;
        c.model = m;
        break;
      }
      case 1: {
        XxzAsymmetricModel m;
        m.spec = SpinChainSpec::zeros(n, oracle::uniform(rng, 0, 2), oracle::uniform(rng, -1, 1));
        m.spec.fields_a = oracle::random_vector(n, rng, -1, 1);
        m.spec.metric.gammas = oracle::random_vector(n, rng, -1, 1);
        c.model = m;
        c.sweep = Sweep{"gammas[1]", {0.1, 0.2}};
        break;
      }
      case 2: {
        FermionQuadraticModel m;
        m.spec = {oracle::random_symmetric(n, rng), oracle::random_antisymmetric(n, rng),
                  MetricSpec{oracle::random_vector(n, rng, -1, 1), oracle::random_vector(n, rng, -1, 1)}};
        c.model = m;
        c.checks = {"counterpart", "reality"};
        break;
      }
      default: {
        GradedMatrixModel m;
        m.matrix = {oracle::random_symmetric(n, rng), oracle::random_vector(n, rng, -1, 1)};
        c.model = m;
        c.tolerances["symmetrization"] = 1e-9;
        c.output = {"out_dir", "csv"};
        c.seed = 1234567 + trial;
        break;
      }
    }
    const auto back = parse_config(serialize(c).dump(2));
    EXPECT_EQ(back, c) << serialize(c).dump();
  }
}

TEST(Sweep, ApplyAndAliases) {
  const auto c = parse_config(fixture("xxz_asymmetric.json"));
  const auto m = apply_sweep(c.model, "gamma", 0.25);
  for (double g : std::get<XxzAsymmetricModel>(m).spec.metric.gammas) EXPECT_EQ(g, 0.25);
  const auto m2 = apply_sweep(c.model, "gammas[2]", -0.5);
  EXPECT_EQ(std::get<XxzAsymmetricModel>(m2).spec.metric.gammas[2], -0.5);
  EXPECT_EQ(std::get<XxzAsymmetricModel>(m2).spec.metric.gammas[0], 0.3);
  const auto m3 = apply_sweep(c.model, "Delta", 2.0);
  EXPECT_EQ(std::get<XxzAsymmetricModel>(m3).spec.anisotropy, 2.0);
  EXPECT_THROW(apply_sweep(c.model, "gammas[9]", 0.0), ConfigError);
}

TEST(Checks, SupportedAndDefaults) {
  const auto osc = parse_config(R"({"model": {"kind": "oscillator2d", "m": 1, "k1": 1, "k2": 1, "k3": 0, "gamma": 0, "xi": 0}})");
  const auto sup = supported_checks(osc.model);
  EXPECT_NE(std::find(sup.begin(), sup.end(), "closedForm"), sup.end());
  const auto def = default_checks(osc.model);
  EXPECT_EQ(std::find(def.begin(), def.end(), "metric"), def.end());
  const auto hs = parse_config(R"({"model": {"kind": "haldaneShastry", "sites": 3}})");
  EXPECT_EQ(default_checks(hs.model), supported_checks(hs.model));
}

TEST(Execute, ExitCodes) {
  EXPECT_EQ(execute(parse_config(fixture("oscillator_pass.json"))).exit_code, kAllPassed);
  EXPECT_EQ(execute(parse_config(fixture("swanson.json"))).exit_code, kAllPassed);

  const auto bad = execute(parse_config(fixture("boson_unstable.json")));
  EXPECT_EQ(bad.exit_code, kCheckFailed);
  const auto& check = bad.report["checks"][0];
  EXPECT_EQ(check["name"], "bogoliubov");
  EXPECT_FALSE(check["passed"].get<bool>());
  EXPECT_NEAR(check["diagnostics"]["dMinEigenvalue"].get<double>(), -0.5, 1e-14);
}

TEST(Execute, ReportShape) {
  const auto out = execute(parse_config(fixture("swanson.json")));
  const auto& r = out.report;
  for (const char* key : {"model", "parameters", "checks", "spectra", "seed", "version"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_EQ(r["model"], "bosonQuadratic");
  EXPECT_EQ(r["version"], kVersion);
  for (const auto& c : r["checks"]) {
    for (const char* key : {"name", "passed", "residual", "tolerance", "detail"}) {
      EXPECT_TRUE(c.contains(key)) << key;
    }
  }
  EXPECT_EQ(out.csv.substr(0, out.csv.find('\n')), "sweep-value,index,re,im");
}

TEST(Execute, LmgSweepIsIsospectral) {
  const auto out = execute(parse_config(fixture("lmg_sweep.json")));
  EXPECT_EQ(out.exit_code, kAllPassed);
  const auto& spectra = out.report["spectra"];
  ASSERT_EQ(spectra.size(), 3u);
  std::vector<std::vector<double>> re(3);
  for (std::size_t p = 0; p < 3; ++p) {
    for (const auto& ev : spectra[p]["eigenvalues"]) re[p].push_back(ev[0].get<double>());
  }
  EXPECT_LT(oracle::max_abs_diff(re[0], re[1]), 1e-10);
  EXPECT_LT(oracle::max_abs_diff(re[0], re[2]), 1e-10);
}

TEST(Execute, ToleranceOverrideCanFail) {
  auto c = parse_config(fixture("swanson.json"));
  c.tolerances["pseudoHermiticity"] = 1e-300;
  c.checks = {"pseudoHermiticity"};
  const auto out = execute(c);
  EXPECT_EQ(out.exit_code, kCheckFailed);
  EXPECT_EQ(out.report["checks"][0]["tolerance"].get<double>(), 1e-300);
}

TEST(Execute, SpectrumOnlyRequest) {
  const auto c = parse_config(R"({"model": {"kind": "haldaneShastry", "sites": 2}})");
  const auto out = execute(c, {.run_checks = false, .collect_spectra = true});
  EXPECT_TRUE(out.report["checks"].empty());
  std::vector<double> re;
  for (const auto& ev : out.report["spectra"][0]["eigenvalues"]) re.push_back(ev[0].get<double>());
  EXPECT_LT(oracle::max_abs_diff(re, {-0.375, 0.125, 0.125, 0.125}), 1e-12);
}
