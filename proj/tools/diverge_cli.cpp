// diverge: run verification experiments for the one-to-two diverge junction.
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on bad
// arguments or an unreadable configuration.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "diverge/errors.hpp"
#include "diverge/harness.hpp"
#include "diverge/run_config.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "YAML run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out, "output directory (created if missing)");
  cmd->add_option("--seed", opt.seed, "override the configuration's seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diverge junction Riemann solvers and cell-transmission verification"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* verify = app.add_subcommand("riemann-verify",
                                        "simulate a Riemann problem and compare with theory");
  CLI::App* converge =
      app.add_subcommand("converge", "Lebacque vs Daganzo difference across resolutions");
  CLI::App* fluxmap = app.add_subcommand("flux-map", "sweep (S1, S2) and label flux regions");
  CLI::App* props = app.add_subcommand("props", "randomized and oracle property checks");
  for (CLI::App* cmd : {verify, converge, fluxmap, props}) add_common(cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  diverge::ExperimentConfig cfg;
  const std::filesystem::path out = opt.out;
  try {
    cfg = diverge::load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    cfg.sim.validate();
    std::filesystem::create_directories(out);
  } catch (const std::exception& e) {
    std::cerr << "diverge: " << e.what() << '\n';
    return kUsage;
  }

  try {
    diverge::Report report;
    if (verify->parsed()) {
      report = diverge::riemann_verify(cfg, out);
    } else if (converge->parsed()) {
      report = diverge::convergence_study(cfg, out);
    } else if (fluxmap->parsed()) {
      report = diverge::flux_map(cfg, out);
    } else {
      report = diverge::property_suite(cfg, out);
    }
    std::cout << report.render();
    return report.passed ? kPass : kFail;
  } catch (const diverge::ConfigError& e) {
    std::cerr << "diverge: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "diverge: " << e.what() << '\n';
    return kFail;
  }
}
