// metriq: build pseudo-hermitian model matrices, verify them, emit reports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "metriq/cli.hpp"

namespace fs = std::filesystem;
using namespace metriq::cli;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

void print_summary(const json& report, std::ostream& os) {
  for (const auto& c : report["checks"]) {
    os << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>();
    if (c.contains("sweepValue")) os << " @" << c["sweepValue"].dump();
    os << "  residual=" << (c["residual"].is_number() ? c["residual"].dump() : std::string("inf"))
       << " tol=" << c["tolerance"].dump();
    const auto detail = c["detail"].get<std::string>();
    if (!detail.empty()) os << "  (" << detail << ")";
    os << '\n';
  }
  if (report.contains("error")) os << "error: " << report["error"].get<std::string>() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metriq: pseudo-hermitian Hamiltonians, metrics and their checks"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format;
  std::uint64_t seed = 0;
  std::vector<std::string> tol_args;

  auto* run = app.add_subcommand("run", "Run checks and spectra, writing report files");
  run->add_option("config", config_path, "Config JSON")->required();
  run->add_option("--out", out_dir, "Output directory (overrides config)");
  run->add_option("--seed", seed, "Random seed (overrides config)");
  run->add_option("--format", format, "json or csv (overrides config)")
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--tol", tol_args, "Tolerance override NAME=VALUE (repeatable)");

  auto* spec = app.add_subcommand("spectrum", "Print the spectrum as CSV");
  spec->add_option("config", config_path, "Config JSON")->required();

  auto* verify = app.add_subcommand("verify", "Run checks and print one line per check");
  verify->add_option("config", config_path, "Config JSON")->required();
  verify->add_option("--seed", seed, "Random seed (overrides config)");
  verify->add_option("--tol", tol_args, "Tolerance override NAME=VALUE (repeatable)");

  CLI11_PARSE(app, argc, argv);

  RunConfig config;
  try {
    config = parse_config(read_file(config_path));
    const auto supported = supported_checks(config.model);
    for (const auto& arg : tol_args) {
      const auto eq = arg.find('=');
      if (eq == std::string::npos) throw ConfigError("--tol expects NAME=VALUE, got '" + arg + "'");
      const std::string name = arg.substr(0, eq);
      if (std::find(supported.begin(), supported.end(), name) == supported.end()) {
        throw ConfigError("--tol: unknown check '" + name + "'");
      }
      double value = 0.0;
      try {
        value = std::stod(arg.substr(eq + 1));
      } catch (const std::exception&) {
        throw ConfigError("--tol: bad value in '" + arg + "'");
      }
      if (!(value > 0.0)) throw ConfigError("--tol: tolerance must be positive");
      config.tolerances[name] = value;
    }
    if (!out_dir.empty()) config.output.dir = out_dir;
    if (!format.empty()) config.output.format = format;
    if (app.got_subcommand(run) ? run->count("--seed") : verify->count("--seed")) config.seed = seed;
  } catch (const metriq::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigInvalid;
  }

  try {
    if (app.got_subcommand(spec)) {
      const auto outcome = execute(config, {.run_checks = false, .collect_spectra = true});
      std::cout << outcome.csv;
      if (outcome.report.contains("error")) {
        std::cerr << "error: " << outcome.report["error"].get<std::string>() << '\n';
      }
      return outcome.exit_code;
    }

    if (app.got_subcommand(verify)) {
      const auto outcome = execute(config, {.run_checks = true, .collect_spectra = false});
      print_summary(outcome.report, std::cout);
      return outcome.exit_code;
    }

    const auto outcome = execute(config, {});
    fs::create_directories(config.output.dir);
    const fs::path dir(config.output.dir);
    write_file(dir / "report.json", outcome.report.dump(2) + "\n");
    if (config.output.format == "csv") write_file(dir / "spectra.csv", outcome.csv);
    print_summary(outcome.report, std::cout);
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
