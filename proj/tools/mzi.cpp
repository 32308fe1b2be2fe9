// mzi: command-line front end for the fluctuating-interferometer engine.
//
//   mzi pattern    --config packet_fringes.json --out fringes.csv
//   mzi sweep      --config gaussian_sweep.json
//   mzi surface    --config packet_surface.json
//   mzi montecarlo --config montecarlo_arcsine.json --seed 7 --particles 1000000
//   mzi visibility --config visibility_uniform.json
//
// Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mzi/config.hpp"
#include "mzi/errors.hpp"
#include "mzi/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int exit_code_for(mzi::ErrorKind kind) {
  switch (kind) {
    case mzi::ErrorKind::ConfigInvalid:
    case mzi::ErrorKind::ParseFailure:
    case mzi::ErrorKind::TooFewSamples:
    case mzi::ErrorKind::InvalidArgument:
    case mzi::ErrorKind::InvalidParticleCount:
      return kExitConfig;
    case mzi::ErrorKind::IoFailure:
      return kExitIo;
    default:
      return kExitNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using mzi::experiments::Command;

  CLI::App app{"Two-channel interferometer with a fluctuating phase shifter"};
  app.set_version_flag("--version", std::string(mzi::experiments::kToolVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> particles;

  const std::pair<Command, const char*> commands[] = {
      {Command::Pattern, "N_O and N_E against the nominal shift"},
      {Command::Sweep, "decoherence parameter against k*sigma"},
      {Command::Surface, "decoherence parameter over (k0*delta, k0*sigma)"},
      {Command::MonteCarlo, "analytic vs simulated channel intensities"},
      {Command::Visibility, "local visibility |Omega(k)| over a k grid"},
  };
  std::optional<Command> chosen;
  for (const auto& [command, help] : commands) {
    auto* sub = app.add_subcommand(std::string(mzi::experiments::to_string(command)), help);
    sub->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output CSV (overrides config)");
    sub->add_option("--seed", seed, "Monte Carlo seed (overrides config)");
    sub->add_option("--particles", particles, "Monte Carlo particles per point (overrides config)");
    sub->callback([&chosen, command = command] { chosen = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto cfg = mzi::config::load_config(config_path);
    if (!out_path.empty()) cfg.output = out_path;
    if (seed || particles) {
      if (!cfg.montecarlo) cfg.montecarlo = mzi::config::MonteCarloSpec{};
      if (seed) cfg.montecarlo->seed = *seed;
      if (particles) cfg.montecarlo->particles = *particles;
    }
    const bool had_seed = cfg.montecarlo && cfg.montecarlo->seed;
    const auto resolved = mzi::experiments::run(cfg, *chosen);
    if (!had_seed && resolved.montecarlo && resolved.montecarlo->seed) {
      std::cerr << "mzi: no seed given; using " << *resolved.montecarlo->seed << '\n';
    }
    std::cerr << "mzi: wrote " << resolved.output << '\n';
  } catch (const mzi::Error& e) {
    std::cerr << "mzi: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "mzi: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
