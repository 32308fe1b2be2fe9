// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mzi/config.hpp"
#include "mzi/experiments.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/montecarlo.hpp"
#include "mzi/numerics.hpp"

namespace {

using namespace mzi;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Plane waves run through Omega by quadrature and the full Delta0 search, so
// the closed forms are checked against an independent route.
SearchSettings independent_route() {
  SearchSettings s;
  s.omega = OmegaRoute::Quadrature;
  s.plane_wave_shortcut = false;
  return s;
}

MomentumSpectrum random_table(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> nodes;
  double k = 0.3 + 2.0 * u(gen);
  const int n = 3 + static_cast<int>(6 * u(gen));
  for (int i = 0; i < n; ++i) {
    nodes.emplace_back(k, 0.05 + 2.0 * u(gen));
    k += 0.05 + 0.6 * u(gen);
  }
  return MomentumSpectrum::tabulated(nodes);
}

Outcome gaussian_plane() {
  const auto t0 = Clock::now();
  const double k = 1.0;
  double worst = 0.0;
  for (int i = 0; i <= 12; ++i) {
    const double ks = 0.25 * i;
    const auto r = generalized_visibility(MomentumSpectrum::plane_wave(k), ShiftDistribution::gaussian(ks / k),
                                          independent_route());
    worst = std::max(worst, std::abs(r.epsilon - epsilon_gaussian_plane(k, ks / k)));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && t < 1.0, fmt("max|diff|=%.3e (<=1e-8), %.3fs (<1s)", worst, t)};
}

Outcome arcsine_plane() {
  const auto t0 = Clock::now();
  const double k = 1.0;
  auto eps = [&](double two_ks) {
    return generalized_visibility(MomentumSpectrum::plane_wave(k), ShiftDistribution::arcsine(two_ks / (2 * k)),
                                  independent_route())
        .epsilon;
  };
  double worst = 0.0;
  for (int i = 0; i <= 30; ++i) {
    const double x = 0.2 * i;
    worst = std::max(worst, std::abs(eps(x) - epsilon_arcsine_plane(k, x / (2 * k))));
  }
  const double at_zero = eps(2.404826);
  const double at_three = eps(3.0);
  const double t = seconds_since(t0);
  const bool ok = worst <= 1e-8 && at_zero >= 1.0 - 1e-6 && at_three <= 0.7400 && at_three < at_zero && t < 2.0;
  return {ok, fmt("max|diff|=%.3e (<=1e-8), eps(2.404826)=%.9f (>=1-1e-6), eps(3)=%.6f (<=0.74), %.3fs (<2s)", worst,
                  at_zero, at_three, t)};
}

Outcome gaussian_packet() {
  const auto t0 = Clock::now();
  const double k0 = 1.0;
  double worst = 0.0;
  for (double kd : {0.5, 1.0, 2.0, 5.0, 12.0, 20.0}) {
    const auto spec = MomentumSpectrum::gaussian_packet(k0, kd / k0);
    for (double ks : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      const auto r = generalized_visibility(spec, ShiftDistribution::gaussian(ks / k0));
      worst = std::max(worst, std::abs(r.epsilon - epsilon_gaussian_packet(k0, kd / k0, ks / k0)));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t < 10.0, fmt("max|diff|=%.3e (<=1e-6), %.3fs (<10s)", worst, t)};
}

Outcome fluctuation_free() {
  std::mt19937_64 gen(4);
  std::vector<MomentumSpectrum> spectra{MomentumSpectrum::plane_wave(1.0), MomentumSpectrum::gaussian_packet(1.0, 1.0),
                                        MomentumSpectrum::gaussian_packet(1.0, 12.0)};
  for (int i = 0; i < 3; ++i) spectra.push_back(random_table(gen));
  const auto delta = ShiftDistribution::delta();
  double worst_v = 0.0, worst_sum = 0.0;
  for (const auto& spec : spectra) {
    worst_v = std::max(worst_v, std::abs(generalized_visibility(spec, delta).generalized_visibility - 1.0));
    std::vector<double> grid;
    const double k0 = spec.central_wavenumber();
    for (int i = 0; i < 600; ++i) grid.push_back(30.0 * i / 599.0 / k0);
    const auto p = interference_pattern(spec, delta, grid, 1e-12);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst_sum = std::max(worst_sum, std::abs(p.n_ordinary[i] + p.n_extraordinary[i] - 1.0));
    }
  }
  return {worst_v <= 1e-7 && worst_sum <= 1e-12,
          fmt("max|V-1|=%.3e (<=1e-7), max|N_O+N_E-1|=%.3e (<=1e-12)", worst_v, worst_sum)};
}

ShiftDistribution random_law(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double scale = 0.05 + 2.5 * u(gen);
  switch (static_cast<int>(4 * u(gen))) {
    case 0: return ShiftDistribution::gaussian(scale);
    case 1: return ShiftDistribution::arcsine(scale);
    case 2: return ShiftDistribution::uniform(scale);
    default: {
      std::vector<double> s(200);
      for (auto& x : s) x = scale * (2.0 * u(gen) - 1.0) * (1.0 + u(gen));
      return ShiftDistribution::empirical(s);
    }
  }
}

MomentumSpectrum random_spectrum(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (static_cast<int>(3 * u(gen))) {
    case 0: return MomentumSpectrum::plane_wave(0.2 + 4.0 * u(gen));
    case 1: return MomentumSpectrum::gaussian_packet(0.3 + 3.0 * u(gen), 0.3 + 8.0 * u(gen));
    default: return random_table(gen);
  }
}

Outcome visibility_bound_check() {
  std::mt19937_64 gen(50);
  double worst = -1.0;
  int violations = 0;
  for (int i = 0; i < 50; ++i) {
    const auto spec = random_spectrum(gen);
    const auto dist = random_law(gen);
    const double v = generalized_visibility(spec, dist).generalized_visibility;
    const double bound = visibility_bound(spec, dist, 1e-10);
    worst = std::max(worst, v - bound);
    if (v > bound + 1e-7) ++violations;
  }
  return {violations == 0, fmt("50 configs, max(V - bound)=%.3e (<=1e-7), violations=%d", worst, violations)};
}

Outcome split_packet() {
  std::mt19937_64 gen(20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double tol = 1e-10;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto spec = random_spectrum(gen);
    const auto dist = i % 5 == 4 ? ShiftDistribution::delta() : random_law(gen);
    const double d0 = 8.0 * u(gen);
    worst = std::max(worst, std::abs(split_packet_intensity(spec, dist, d0, tol) -
                                     channel_intensities(spec, dist, d0, tol).n_ordinary));
  }
  return {worst <= 2e-9, fmt("20 configs, max|diff|=%.3e (<=2e-9)", worst)};
}

Outcome monte_carlo() {
  const auto t0 = Clock::now();
  const double pi = std::numbers::pi;
  const std::vector<std::pair<double, double>> nodes{{0.5, 0.2}, {1.0, 1.0}, {1.6, 0.4}, {2.0, 0.0}};
  const std::vector<double> samples{-0.4, 0.1, 0.35, 0.9, -0.2, 0.05, 0.6};
  struct Triple {
    MomentumSpectrum spec;
    ShiftDistribution dist;
    double delta0;
  };
  const std::vector<Triple> triples{
      {MomentumSpectrum::plane_wave(1.0), ShiftDistribution::delta(), pi / 2},
      {MomentumSpectrum::plane_wave(1.0), ShiftDistribution::gaussian(1.0), 0.0},
      {MomentumSpectrum::plane_wave(2.0), ShiftDistribution::arcsine(0.6), 0.4},
      {MomentumSpectrum::plane_wave(1.0), ShiftDistribution::arcsine(2.404826 / 2), 1.0},
      {MomentumSpectrum::plane_wave(1.5), ShiftDistribution::uniform(0.8), 2.0},
      {MomentumSpectrum::gaussian_packet(1.0, 12.0), ShiftDistribution::delta(), 15.0},
      {MomentumSpectrum::gaussian_packet(1.0, 1.0), ShiftDistribution::gaussian(1.0), 0.0},
      {MomentumSpectrum::gaussian_packet(2.0, 0.7), ShiftDistribution::arcsine(0.5), 1.3},
      {MomentumSpectrum::gaussian_packet(1.0, 3.0), ShiftDistribution::uniform(1.2), 3.1},
      {MomentumSpectrum::tabulated(nodes), ShiftDistribution::gaussian(0.4), 0.9},
      {MomentumSpectrum::tabulated(nodes), ShiftDistribution::empirical(samples), 2.2},
      {MomentumSpectrum::gaussian_packet(1.0, 0.5), ShiftDistribution::empirical(samples), 0.7},
  };
  double worst_z = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& tr = triples[i];
    const auto est = mc::simulate(tr.spec, tr.dist, tr.delta0, 1'000'000, 1000 + i);
    const double analytic = channel_intensities(tr.spec, tr.dist, tr.delta0, 1e-12).n_ordinary;
    const double diff = std::abs(est.n_ordinary_hat - analytic);
    if (diff > 4.0 * est.std_error) ok = false;
    if (est.std_error > 0.0) worst_z = std::max(worst_z, diff / est.std_error);
  }
  const double t = seconds_since(t0);
  return {ok && t < 60.0, fmt("12 triples at 1e6, max|z|=%.2f (<=4), %.2fs (<60s)", worst_z, t)};
}

Outcome bessel() {
  double worst = 0.0;
  for (double x : {0.0, 1.0, 2.5, 5.0, 8.0, 11.9, 12.1, 20.0, 50.0}) {
    worst = std::max(worst, std::abs(numerics::bessel_j0(x) - numerics::bessel_j0_oracle(x, 1e-13)));
  }
  double lo = 2.0, hi = 3.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (numerics::bessel_j0(lo) * numerics::bessel_j0(mid) <= 0.0 ? hi : lo) = mid;
  }
  const double zero = 0.5 * (lo + hi);
  return {worst <= 1e-8 && std::abs(zero - 2.404826) <= 1e-5,
          fmt("max|J0-oracle|=%.3e (<=1e-8), first zero %.9f (2.404826 +- 1e-5)", worst, zero)};
}

Outcome determinism() {
  using experiments::Command;
  const auto dir = std::filesystem::temp_directory_path() / "mzi_acceptance";
  std::filesystem::create_directories(dir);
  const auto cfg = config::parse_config(config::json::parse(R"({
    "schema_version": 1,
    "spectrum": {"kind": "gaussian_packet", "k0": 1, "delta": 2},
    "distribution": {"kind": "arcsine", "sigma": 0.6},
    "sweep": {"k0_delta0": {"min": 0, "max": 10, "points": 11},
              "k_sigma": {"min": 0, "max": 2, "points": 5},
              "k0_delta": {"values": [1, 4]},
              "k": {"min": 0, "max": 5, "points": 11}},
    "montecarlo": {"particles": 200000, "seed": 424242}
  })"));
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  int mismatches = 0;
  for (auto command : {Command::Pattern, Command::Sweep, Command::Surface, Command::MonteCarlo, Command::Visibility}) {
    auto c = cfg;
    if (command == Command::Surface) c.distribution = {"gaussian", 0.6, 0.0, ""};
    std::string first;
    for (int run = 0; run < 2; ++run) {
      c.output = (dir / (std::string(experiments::to_string(command)) + std::to_string(run) + ".csv")).string();
      experiments::run(c, command);
      const auto bytes = read(c.output);
      if (run == 0) first = bytes;
      else if (bytes != first || bytes.empty()) ++mismatches;
    }
  }
  std::filesystem::remove_all(dir);
  return {mismatches == 0, fmt("5 commands run twice with seed 424242, %d byte mismatches", mismatches)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"gaussian noise, plane wave", gaussian_plane},
      {"arcsine noise, plane wave", arcsine_plane},
      {"gaussian noise, gaussian packet", gaussian_packet},
      {"fluctuation-free unit visibility", fluctuation_free},
      {"visibility bound", visibility_bound_check},
      {"split-packet equivalence", split_packet},
      {"monte carlo agreement", monte_carlo},
      {"bessel kernel", bessel},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
