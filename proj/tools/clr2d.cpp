#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "clr2d/cli.hpp"

using namespace clr2d;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cli::ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negative-eigenvalue counts, CLR constants and strong-coupling brackets for 2D radial operators"};
  app.set_version_flag("--version", cli::kVersion);
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path;
  std::string format;
  unsigned workers = 1;

  for (const char* name : {"constants", "count", "verify", "sweep", "bracket"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output file (default: config output.path, else stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", workers, "threads for per-channel counting")->check(CLI::Range(1U, 256U));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const auto started = std::chrono::steady_clock::now();
  try {
    cli::ExperimentConfig cfg = cli::parse_config(read_file(config_path));
    const cli::Command cmd = *cli::parse_command(name);
    if (cfg.command && *cfg.command != cmd) {
      throw cli::ConfigError({std::string("config command '") + cli::to_string(*cfg.command) +
                              "' does not match subcommand '" + name + "'"});
    }
    cfg.command = cmd;
    if (!format.empty()) cfg.format = *cli::parse_format(format);
    if (!out_path.empty()) cfg.out_path = out_path;

    const cli::Report report = cli::run(cfg, workers);
    cli::emit_report(report, cfg.format, cfg.out_path);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::fprintf(stderr, "clr2d %s: %zu rows in %.3f s, exit %d\n", name.c_str(), report.rows.size(), secs,
                 report.exit_code);
    return report.exit_code;
  } catch (const cli::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return cli::kConfigError;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return cli::kConfigError;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical certificate failure: %s\n", e.what());
    return cli::kFlagged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kConfigError;
  }
}
