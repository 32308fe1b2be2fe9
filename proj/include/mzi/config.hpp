#pragma once

// JSON experiment configuration and shift-sample file ingestion.
//
// {
//   "schema_version": 1,
//   "spectrum":     {"kind": "plane_wave", "k": 1}
//                 | {"kind": "gaussian_packet", "k0": 1, "delta": 12}
//                 | {"kind": "tabulated", "nodes": [[k, density], ...]},
//   "distribution": {"kind": "delta"} | {"kind": "gaussian", "sigma": 1}
//                 | {"kind": "arcsine", "sigma": 1} | {"kind": "uniform", "halfwidth": 1}
//                 | {"kind": "empirical", "samples_file": "shifts.txt"},
//   "sweep": {"<axis>": {"min": 0, "max": 30, "points": 600} | {"values": [...]}},
//   "search": {"window": 40, "grid_n": 1024, "tol": 1e-10, "quad_tol": 1e-12},
//   "montecarlo": {"particles": 100000, "seed": 7},
//   "output": "out.csv"
// }
//
// Sweep axes: delta0 or k0_delta0 (pattern, montecarlo), k_sigma (sweep,
// surface), k0_delta (surface), k (visibility).

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mzi/errors.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/momentum_spectrum.hpp"
#include "mzi/shift_distribution.hpp"

namespace mzi::config {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct GridSpec {
  // Either an inclusive linear range or explicit values.
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 0;
  std::vector<double> values;

  std::vector<double> resolve() const {
    if (!values.empty()) return values;
    std::vector<double> out;
    out.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
      out.push_back(points == 1 ? min
                                : (i + 1 == points ? max
                                                   : min + (max - min) * static_cast<double>(i) /
                                                               static_cast<double>(points - 1)));
    }
    return out;
  }
};

struct SpectrumSpec {
  std::string kind;
  double k = 0.0;
  double k0 = 0.0;
  double delta = 0.0;
  std::vector<std::pair<double, double>> nodes;
};

struct DistributionSpec {
  std::string kind;
  double sigma = 0.0;
  double halfwidth = 0.0;
  std::string samples_file;
};

struct MonteCarloSpec {
  std::optional<std::uint64_t> particles;
  std::optional<std::uint64_t> seed;
};

struct SimulationConfig {
  int schema_version = kSchemaVersion;
  SpectrumSpec spectrum;
  DistributionSpec distribution;
  std::map<std::string, GridSpec> sweep;
  SearchSettings search;
  std::optional<MonteCarloSpec> montecarlo;
  std::string output;
  // Directory relative sample paths resolve against; not serialized.
  std::filesystem::path base_dir;
};

struct SampleIngest {
  ShiftDistribution distribution;
  std::size_t count = 0;
  double centering_offset = 0.0;
};

/// Reads one shift per line; '#' starts a comment, blank lines are skipped.
/// The samples are mean-centred by the Empirical constructor.
inline SampleIngest ingest_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open sample file " + path.string());
  std::vector<double> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const auto last = view.find_last_not_of(" \t\r");
    view = view.substr(first, last - first + 1);
    double value = 0.0;
    const char* begin = view.data();
    const char* end = view.data() + view.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      throw Error(ErrorKind::ParseFailure,
                  path.string() + ": line " + std::to_string(line_no) + ": not a number: '" + std::string(view) + "'");
    }
    samples.push_back(value);
  }
  if (samples.size() < 2) {
    throw Error(ErrorKind::TooFewSamples,
                path.string() + ": need at least 2 samples, found " + std::to_string(samples.size()));
  }
  auto dist = ShiftDistribution::empirical(samples);
  const double offset = std::get<EmpiricalShift>(dist.kind()).centering_offset;
  return {std::move(dist), samples.size(), offset};
}

namespace detail {

[[noreturn]] inline void invalid(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::ConfigInvalid, field + ": " + message);
}

inline const json& require(const json& node, const std::string& key, const std::string& path) {
  if (!node.is_object() || !node.contains(key)) invalid(path + "." + key, "missing");
  return node.at(key);
}

inline double number(const json& node, const std::string& key, const std::string& path) {
  const json& v = require(node, key, path);
  if (!v.is_number()) invalid(path + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(path + "." + key, "must be finite");
  return x;
}

inline std::uint64_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) invalid(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline double positive(const json& node, const std::string& key, const std::string& path) {
  const double x = number(node, key, path);
  if (!(x > 0.0)) invalid(path + "." + key, "must be > 0");
  return x;
}

inline double non_negative(const json& node, const std::string& key, const std::string& path) {
  const double x = number(node, key, path);
  if (!(x >= 0.0)) invalid(path + "." + key, "must be >= 0");
  return x;
}

inline GridSpec parse_grid(const json& node, const std::string& path) {
  if (!node.is_object()) invalid(path, "expected an object");
  GridSpec g;
  if (node.contains("values")) {
    const json& vals = node.at("values");
    if (!vals.is_array()) invalid(path + ".values", "expected an array");
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (!vals[i].is_number()) invalid(path + ".values[" + std::to_string(i) + "]", "expected a number");
      g.values.push_back(vals[i].get<double>());
    }
    if (g.values.empty()) invalid(path + ".values", "grid is empty");
    return g;
  }
  g.min = number(node, "min", path);
  g.max = number(node, "max", path);
  g.points = count(require(node, "points", path), path + ".points");
  if (g.points == 0) invalid(path + ".points", "grid is empty");
  if (g.max < g.min) invalid(path, "max < min");
  return g;
}

}  // namespace detail

inline SimulationConfig parse_config(const json& root, std::filesystem::path base_dir = {}) {
  using detail::invalid;
  if (!root.is_object()) invalid("$", "config must be a JSON object");
  SimulationConfig cfg;
  cfg.base_dir = std::move(base_dir);

  const json& version = detail::require(root, "schema_version", "$");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    invalid("$.schema_version", "unsupported (expected " + std::to_string(kSchemaVersion) + ")");
  }

  const json& sp = detail::require(root, "spectrum", "$");
  const std::string spath = "$.spectrum";
  if (!detail::require(sp, "kind", spath).is_string()) invalid(spath + ".kind", "expected a string");
  cfg.spectrum.kind = sp.at("kind").get<std::string>();
  if (cfg.spectrum.kind == "plane_wave") {
    cfg.spectrum.k = detail::positive(sp, "k", spath);
  } else if (cfg.spectrum.kind == "gaussian_packet") {
    cfg.spectrum.k0 = detail::positive(sp, "k0", spath);
    cfg.spectrum.delta = detail::positive(sp, "delta", spath);
  } else if (cfg.spectrum.kind == "tabulated") {
    const json& nodes = detail::require(sp, "nodes", spath);
    if (!nodes.is_array() || nodes.size() < 2) invalid(spath + ".nodes", "expected >= 2 [k, density] pairs");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const json& n = nodes[i];
      if (!n.is_array() || n.size() != 2 || !n[0].is_number() || !n[1].is_number()) {
        invalid(spath + ".nodes[" + std::to_string(i) + "]", "expected [k, density]");
      }
      cfg.spectrum.nodes.emplace_back(n[0].get<double>(), n[1].get<double>());
    }
  } else {
    invalid(spath + ".kind", "unknown spectrum kind '" + cfg.spectrum.kind + "'");
  }

  const json& dn = detail::require(root, "distribution", "$");
  const std::string dpath = "$.distribution";
  if (!detail::require(dn, "kind", dpath).is_string()) invalid(dpath + ".kind", "expected a string");
  cfg.distribution.kind = dn.at("kind").get<std::string>();
  if (cfg.distribution.kind == "delta") {
  } else if (cfg.distribution.kind == "gaussian" || cfg.distribution.kind == "arcsine") {
    cfg.distribution.sigma = detail::non_negative(dn, "sigma", dpath);
  } else if (cfg.distribution.kind == "uniform") {
    cfg.distribution.halfwidth = detail::non_negative(dn, "halfwidth", dpath);
  } else if (cfg.distribution.kind == "empirical") {
    const json& f = detail::require(dn, "samples_file", dpath);
    if (!f.is_string() || f.get<std::string>().empty()) invalid(dpath + ".samples_file", "expected a path");
    cfg.distribution.samples_file = f.get<std::string>();
  } else {
    invalid(dpath + ".kind", "unknown distribution kind '" + cfg.distribution.kind + "'");
  }

  if (root.contains("sweep")) {
    const json& sw = root.at("sweep");
    if (!sw.is_object()) invalid("$.sweep", "expected an object");
    for (const auto& [axis, node] : sw.items()) {
      if (axis != "delta0" && axis != "k0_delta0" && axis != "k_sigma" && axis != "k0_delta" && axis != "k") {
        invalid("$.sweep." + axis, "unknown sweep axis");
      }
      cfg.sweep[axis] = detail::parse_grid(node, "$.sweep." + axis);
    }
  }

  if (root.contains("search")) {
    const json& se = root.at("search");
    const std::string path = "$.search";
    if (!se.is_object()) invalid(path, "expected an object");
    if (se.contains("window") && !se.at("window").is_null()) cfg.search.window = detail::positive(se, "window", path);
    if (se.contains("grid_n")) {
      cfg.search.grid_n = detail::count(se.at("grid_n"), path + ".grid_n");
      if (cfg.search.grid_n < 64) invalid(path + ".grid_n", "must be >= 64");
    }
    if (se.contains("tol")) cfg.search.tol = detail::positive(se, "tol", path);
    if (se.contains("quad_tol")) cfg.search.quad_tol = detail::positive(se, "quad_tol", path);
  }

  if (root.contains("montecarlo")) {
    const json& m = root.at("montecarlo");
    if (!m.is_object()) invalid("$.montecarlo", "expected an object");
    MonteCarloSpec mc;
    if (m.contains("particles")) mc.particles = detail::count(m.at("particles"), "$.montecarlo.particles");
    if (m.contains("seed")) mc.seed = detail::count(m.at("seed"), "$.montecarlo.seed");
    cfg.montecarlo = mc;
  }

  if (root.contains("output")) {
    if (!root.at("output").is_string()) invalid("$.output", "expected a path string");
    cfg.output = root.at("output").get<std::string>();
  }
  return cfg;
}

inline SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open config " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigInvalid, path.string() + ": " + e.what());
  }
  return parse_config(root, path.parent_path());
}

inline json to_json(const SimulationConfig& cfg) {
  json root;
  root["schema_version"] = cfg.schema_version;

  json sp{{"kind", cfg.spectrum.kind}};
  if (cfg.spectrum.kind == "plane_wave") {
    sp["k"] = cfg.spectrum.k;
  } else if (cfg.spectrum.kind == "gaussian_packet") {
    sp["k0"] = cfg.spectrum.k0;
    sp["delta"] = cfg.spectrum.delta;
  } else {
    json nodes = json::array();
    for (const auto& [k, d] : cfg.spectrum.nodes) nodes.push_back({k, d});
    sp["nodes"] = nodes;
  }
  root["spectrum"] = sp;

  json dn{{"kind", cfg.distribution.kind}};
  if (cfg.distribution.kind == "gaussian" || cfg.distribution.kind == "arcsine") dn["sigma"] = cfg.distribution.sigma;
  if (cfg.distribution.kind == "uniform") dn["halfwidth"] = cfg.distribution.halfwidth;
  if (cfg.distribution.kind == "empirical") dn["samples_file"] = cfg.distribution.samples_file;
  root["distribution"] = dn;

  if (!cfg.sweep.empty()) {
    json sw = json::object();
    for (const auto& [axis, g] : cfg.sweep) {
      if (!g.values.empty()) {
        sw[axis] = {{"values", g.values}};
      } else {
        sw[axis] = {{"min", g.min}, {"max", g.max}, {"points", g.points}};
      }
    }
    root["sweep"] = sw;
  }

  json se{{"grid_n", cfg.search.grid_n}, {"tol", cfg.search.tol}, {"quad_tol", cfg.search.quad_tol}};
  if (cfg.search.window) se["window"] = *cfg.search.window;
  root["search"] = se;

  if (cfg.montecarlo) {
    json m = json::object();
    if (cfg.montecarlo->particles) m["particles"] = *cfg.montecarlo->particles;
    if (cfg.montecarlo->seed) m["seed"] = *cfg.montecarlo->seed;
    root["montecarlo"] = m;
  }
  if (!cfg.output.empty()) root["output"] = cfg.output;
  return root;
}

inline MomentumSpectrum build_spectrum(const SpectrumSpec& spec) {
  try {
    if (spec.kind == "plane_wave") return MomentumSpectrum::plane_wave(spec.k);
    if (spec.kind == "gaussian_packet") return MomentumSpectrum::gaussian_packet(spec.k0, spec.delta);
    return MomentumSpectrum::tabulated(spec.nodes);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw Error(ErrorKind::ConfigInvalid, std::string("$.spectrum: ") + e.what());
    throw;
  }
}

/// Builds the noise law; `width` overrides sigma / halfwidth when given.
inline ShiftDistribution build_distribution(const DistributionSpec& spec, const std::filesystem::path& base_dir,
                                            std::optional<double> width = std::nullopt) {
  try {
    if (spec.kind == "delta") return ShiftDistribution::delta();
    if (spec.kind == "gaussian") return ShiftDistribution::gaussian(width.value_or(spec.sigma));
    if (spec.kind == "arcsine") return ShiftDistribution::arcsine(width.value_or(spec.sigma));
    if (spec.kind == "uniform") return ShiftDistribution::uniform(width.value_or(spec.halfwidth));
    std::filesystem::path p(spec.samples_file);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return ingest_samples(p).distribution;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::IoFailure) {
      throw Error(ErrorKind::ConfigInvalid, std::string("$.distribution: ") + e.what());
    }
    throw;
  }
}

}  // namespace mzi::config
