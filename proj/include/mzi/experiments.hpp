#pragma once

// Experiment drivers behind the command-line tool: each renders one CSV
// document (with '#' metadata lines) from a SimulationConfig.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mzi/config.hpp"
#include "mzi/errors.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/montecarlo.hpp"

namespace mzi::experiments {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultParticles = 100'000;

enum class Command { Pattern, Sweep, Surface, MonteCarlo, Visibility };

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::Pattern: return "pattern";
    case Command::Sweep: return "sweep";
    case Command::Surface: return "surface";
    case Command::MonteCarlo: return "montecarlo";
    case Command::Visibility: return "visibility";
  }
  return "?";
}

/// 17 significant digits in scientific notation; locale-independent and
/// round-trips exactly.
inline std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, 16);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

class CsvDocument {
 public:
  void comment(std::string_view line) {
    text_ += "# ";
    text_ += line;
    text_ += '\n';
  }

  void header(std::initializer_list<std::string_view> columns) {
    bool first = true;
    for (auto c : columns) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
  }

  // nullopt renders as an empty field.
  void row(std::initializer_list<std::optional<double>> values) {
    bool first = true;
    for (const auto& v : values) {
      if (!first) text_ += ',';
      if (v) text_ += format_number(*v);
      first = false;
    }
    text_ += '\n';
  }

  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
};

/// Fills in defaults that must be echoed rather than left implicit: a missing
/// Monte Carlo seed is drawn from the system entropy source.
inline config::SimulationConfig resolve(config::SimulationConfig cfg, Command command) {
  const bool needs_mc = command == Command::MonteCarlo || (command == Command::Pattern && cfg.montecarlo);
  if (needs_mc) {
    if (!cfg.montecarlo) cfg.montecarlo = config::MonteCarloSpec{};
    if (!cfg.montecarlo->particles) cfg.montecarlo->particles = kDefaultParticles;
    if (!cfg.montecarlo->seed) {
      std::random_device entropy;
      cfg.montecarlo->seed = (static_cast<std::uint64_t>(entropy()) << 32) | entropy();
    }
    if (*cfg.montecarlo->particles < mc::kMinParticles) {
      throw Error(ErrorKind::ConfigInvalid, "$.montecarlo.particles: must be >= " + std::to_string(mc::kMinParticles));
    }
  }
  return cfg;
}

namespace detail {

inline void write_preamble(CsvDocument& doc, const config::SimulationConfig& cfg, Command command) {
  doc.comment("mzi " + std::string(kToolVersion));
  doc.comment("command: " + std::string(to_string(command)));
  // The output location is not part of the experiment; leaving it out keeps
  // documents from the same config byte-identical wherever they are written.
  auto echoed = config::to_json(cfg);
  echoed.erase("output");
  doc.comment("config: " + echoed.dump());
}

inline void write_mc_metadata(CsvDocument& doc, const config::SimulationConfig& cfg) {
  doc.comment("generator: " + std::string(mc::Generator::name));
  doc.comment("seed: " + std::to_string(*cfg.montecarlo->seed));
  doc.comment("particles: " + std::to_string(*cfg.montecarlo->particles));
}

inline const config::GridSpec& axis(const config::SimulationConfig& cfg, const std::string& name, Command command) {
  const auto it = cfg.sweep.find(name);
  if (it == cfg.sweep.end()) {
    throw Error(ErrorKind::ConfigInvalid,
                "$.sweep." + name + ": required by the " + std::string(to_string(command)) + " command");
  }
  return it->second;
}

// Delta0 grid from either an absolute or a k0-scaled axis, ascending.
inline std::vector<double> delta0_grid(const config::SimulationConfig& cfg, double k_char, Command command) {
  std::vector<double> grid;
  if (cfg.sweep.contains("delta0")) {
    grid = cfg.sweep.at("delta0").resolve();
  } else if (cfg.sweep.contains("k0_delta0")) {
    for (double v : cfg.sweep.at("k0_delta0").resolve()) grid.push_back(v / k_char);
  } else {
    throw Error(ErrorKind::ConfigInvalid,
                "$.sweep: the " + std::string(to_string(command)) + " command needs a delta0 or k0_delta0 axis");
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

inline void require_width_law(const config::SimulationConfig& cfg) {
  const auto& kind = cfg.distribution.kind;
  if (kind != "gaussian" && kind != "arcsine" && kind != "uniform") {
    throw Error(ErrorKind::ConfigInvalid, "$.distribution.kind: sweeps need a gaussian, arcsine or uniform law");
  }
}

}  // namespace detail

/// N_O, N_E against Delta0; Monte Carlo columns when a montecarlo section is set.
inline std::string render_pattern(const config::SimulationConfig& cfg) {
  const auto spec = config::build_spectrum(cfg.spectrum);
  const auto dist = config::build_distribution(cfg.distribution, cfg.base_dir);
  const double k_char = spec.central_wavenumber();
  const auto grid = detail::delta0_grid(cfg, k_char, Command::Pattern);

  CsvDocument doc;
  detail::write_preamble(doc, cfg, Command::Pattern);
  std::optional<mc::McPattern> mc_result;
  if (cfg.montecarlo) {
    detail::write_mc_metadata(doc, cfg);
    mc_result = mc::estimate_pattern(spec, dist, grid, *cfg.montecarlo->particles, *cfg.montecarlo->seed);
    doc.header({"delta0", "k0_delta0", "n_ordinary", "n_extraordinary", "mc_n_ordinary", "mc_std_error"});
  } else {
    doc.header({"delta0", "k0_delta0", "n_ordinary", "n_extraordinary"});
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto c = channel_intensities(spec, dist, grid[i], cfg.search.quad_tol);
    if (mc_result) {
      doc.row({grid[i], k_char * grid[i], c.n_ordinary, c.n_extraordinary, mc_result->pattern.n_ordinary[i],
               mc_result->std_error[i]});
    } else {
      doc.row({grid[i], k_char * grid[i], c.n_ordinary, c.n_extraordinary});
    }
  }
  return doc.str();
}

/// epsilon against k sigma. Plane waves take Omega by quadrature of the
/// noise density and run the Delta0 search, independent of the closed forms.
inline std::string render_sweep(const config::SimulationConfig& cfg) {
  detail::require_width_law(cfg);
  const auto spec = config::build_spectrum(cfg.spectrum);
  const double k_char = spec.central_wavenumber();
  const auto grid = detail::axis(cfg, "k_sigma", Command::Sweep).resolve();

  SearchSettings search = cfg.search;
  if (spec.is<PlaneWave>()) {
    search.omega = OmegaRoute::Quadrature;
    search.plane_wave_shortcut = false;
  }

  CsvDocument doc;
  detail::write_preamble(doc, cfg, Command::Sweep);
  doc.header({"k_sigma", "epsilon_numeric", "epsilon_closed_form", "abs_diff"});
  for (double ks : grid) {
    if (ks < 0.0) throw Error(ErrorKind::ConfigInvalid, "$.sweep.k_sigma: values must be >= 0");
    const auto dist = config::build_distribution(cfg.distribution, cfg.base_dir, ks / k_char);
    const auto report = generalized_visibility(spec, dist, search);
    const auto closed = closed_form_epsilon(spec, dist);
    std::optional<double> diff;
    if (closed) diff = std::abs(report.epsilon - *closed);
    doc.row({ks, report.epsilon, closed, diff});
  }
  return doc.str();
}

/// epsilon over (k0 delta, k0 sigma) for a Gaussian packet; one row per cell.
inline std::string render_surface(const config::SimulationConfig& cfg) {
  detail::require_width_law(cfg);
  if (cfg.spectrum.kind != "gaussian_packet") {
    throw Error(ErrorKind::ConfigInvalid, "$.spectrum.kind: the surface command needs a gaussian_packet");
  }
  const double k0 = cfg.spectrum.k0;
  const auto deltas = detail::axis(cfg, "k0_delta", Command::Surface).resolve();
  const auto sigmas = detail::axis(cfg, "k_sigma", Command::Surface).resolve();

  CsvDocument doc;
  detail::write_preamble(doc, cfg, Command::Surface);
  doc.header({"k_sigma", "k0_delta", "epsilon_numeric", "epsilon_closed_form", "abs_diff"});
  for (double kd : deltas) {
    if (!(kd > 0.0)) throw Error(ErrorKind::ConfigInvalid, "$.sweep.k0_delta: values must be > 0");
    const auto spec = MomentumSpectrum::gaussian_packet(k0, kd / k0);
    for (double ks : sigmas) {
      if (ks < 0.0) throw Error(ErrorKind::ConfigInvalid, "$.sweep.k_sigma: values must be >= 0");
      const auto dist = config::build_distribution(cfg.distribution, cfg.base_dir, ks / k0);
      const auto report = generalized_visibility(spec, dist, cfg.search);
      const auto closed = closed_form_epsilon(spec, dist);
      std::optional<double> diff;
      if (closed) diff = std::abs(report.epsilon - *closed);
      doc.row({ks, kd, report.epsilon, closed, diff});
    }
  }
  return doc.str();
}

/// Analytic and Monte Carlo channel intensities side by side.
inline std::string render_montecarlo(const config::SimulationConfig& cfg) {
  const auto spec = config::build_spectrum(cfg.spectrum);
  const auto dist = config::build_distribution(cfg.distribution, cfg.base_dir);
  const double k_char = spec.central_wavenumber();
  const auto grid = detail::delta0_grid(cfg, k_char, Command::MonteCarlo);
  const auto mc_result = mc::estimate_pattern(spec, dist, grid, *cfg.montecarlo->particles, *cfg.montecarlo->seed);

  CsvDocument doc;
  detail::write_preamble(doc, cfg, Command::MonteCarlo);
  detail::write_mc_metadata(doc, cfg);
  doc.header({"delta0", "k0_delta0", "n_ordinary", "n_extraordinary", "mc_n_ordinary", "mc_n_extraordinary",
              "mc_std_error"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto c = channel_intensities(spec, dist, grid[i], cfg.search.quad_tol);
    doc.row({grid[i], k_char * grid[i], c.n_ordinary, c.n_extraordinary, mc_result.pattern.n_ordinary[i],
             mc_result.pattern.n_extraordinary[i], mc_result.std_error[i]});
  }
  return doc.str();
}

/// Local visibility |Omega(k)| over a k grid.
inline std::string render_visibility(const config::SimulationConfig& cfg) {
  const auto dist = config::build_distribution(cfg.distribution, cfg.base_dir);
  const auto grid = detail::axis(cfg, "k", Command::Visibility).resolve();
  const double scale = dist.scale();

  CsvDocument doc;
  detail::write_preamble(doc, cfg, Command::Visibility);
  doc.header({"k", "k_sigma", "local_visibility"});
  for (double k : grid) doc.row({k, k * scale, local_visibility(dist, k)});
  return doc.str();
}

inline std::string render(const config::SimulationConfig& cfg, Command command) {
  switch (command) {
    case Command::Pattern: return render_pattern(cfg);
    case Command::Sweep: return render_sweep(cfg);
    case Command::Surface: return render_surface(cfg);
    case Command::MonteCarlo: return render_montecarlo(cfg);
    case Command::Visibility: return render_visibility(cfg);
  }
  return {};
}

/// Writes via a temporary file and rename so readers never see partial output.
inline void write_atomically(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw Error(ErrorKind::IoFailure, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::IoFailure, "cannot move output into place at " + path.string());
  }
}

/// Resolves defaults, renders, and writes cfg.output. Returns the resolved
/// config (as echoed in the output metadata).
inline config::SimulationConfig run(const config::SimulationConfig& cfg, Command command) {
  if (cfg.output.empty()) throw Error(ErrorKind::ConfigInvalid, "$.output: no output path given");
  auto resolved = resolve(cfg, command);
  write_atomically(resolved.output, render(resolved, command));
  return resolved;
}

}  // namespace mzi::experiments
