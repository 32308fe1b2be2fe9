#pragma once

// Event-level Monte Carlo of the fluctuating interferometer. Each particle
// draws a wavenumber and a shift and lands in the ordinary channel with its
// Born probability cos^2(k (shift + delta0) / 2).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mzi/errors.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/momentum_spectrum.hpp"
#include "mzi/random.hpp"
#include "mzi/shift_distribution.hpp"

namespace mzi::mc {

using Generator = Xoshiro256;

inline constexpr std::uint64_t kMinParticles = 1000;
// Particles per independently seeded batch. Fixed so that results do not
// depend on how batches are spread over threads.
inline constexpr std::uint64_t kBatchSize = 1u << 16;

struct McEstimate {
  double n_ordinary_hat = 0.0;
  double std_error = 0.0;
  std::uint64_t particles = 0;
  std::uint64_t seed = 0;
  std::uint64_t ordinary_hits = 0;
};

struct McPattern {
  InterferencePattern pattern;
  std::vector<double> std_error;
  std::vector<McEstimate> points;
};

struct McOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

namespace detail {

inline std::uint64_t run_batch(const MomentumSpectrum& spec, const ShiftDistribution& dist, double delta0,
                               std::uint64_t count, std::uint64_t stream_seed) {
  Generator rng(stream_seed);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double k = sample_wavenumber(spec, rng);
    const double shift = sample(dist, rng);
    const double c = std::cos(0.5 * k * (shift + delta0));
    if (uniform_open01(rng) < c * c) ++hits;
  }
  return hits;
}

inline unsigned resolve_threads(unsigned requested, std::size_t work_items) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, work_items)));
}

}  // namespace detail

/// Estimates N_O at one nominal shift from `particles` simulated events.
/// Bit-identical for a fixed seed regardless of thread count.
inline McEstimate simulate(const MomentumSpectrum& spec, const ShiftDistribution& dist, double delta0,
                           std::uint64_t particles, std::uint64_t seed, const McOptions& options = {}) {
  if (particles < kMinParticles) {
    throw Error(ErrorKind::InvalidParticleCount,
                "need at least " + std::to_string(kMinParticles) + " particles, got " + std::to_string(particles));
  }
  const std::uint64_t batches = (particles + kBatchSize - 1) / kBatchSize;
  std::vector<std::uint64_t> hits(batches, 0);
  auto batch_size = [&](std::uint64_t b) { return std::min(kBatchSize, particles - b * kBatchSize); };

  const unsigned threads = detail::resolve_threads(options.threads, batches);
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < batches; ++b) {
      hits[b] = detail::run_batch(spec, dist, delta0, batch_size(b), derive_seed(seed, b));
    }
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t b = t; b < batches; b += threads) {
          hits[b] = detail::run_batch(spec, dist, delta0, batch_size(b), derive_seed(seed, b));
        }
      });
    }
  }

  McEstimate est;
  for (std::uint64_t h : hits) est.ordinary_hits += h;
  est.particles = particles;
  est.seed = seed;
  est.n_ordinary_hat = static_cast<double>(est.ordinary_hits) / static_cast<double>(particles);
  est.std_error = std::sqrt(est.n_ordinary_hat * (1.0 - est.n_ordinary_hat) / static_cast<double>(particles));
  return est;
}

/// simulate() at every grid point, point i seeded with derive_seed(seed, i).
inline McPattern estimate_pattern(const MomentumSpectrum& spec, const ShiftDistribution& dist,
                                  std::span<const double> delta0_grid, std::uint64_t particles_per_point,
                                  std::uint64_t seed, const McOptions& options = {}) {
  if (delta0_grid.empty()) throw Error(ErrorKind::InvalidArgument, "estimate_pattern: empty delta0 grid");
  McPattern out;
  out.pattern.delta0_grid.assign(delta0_grid.begin(), delta0_grid.end());
  for (std::size_t i = 0; i < delta0_grid.size(); ++i) {
    const auto est = simulate(spec, dist, delta0_grid[i], particles_per_point, derive_seed(seed, i), options);
    out.pattern.n_ordinary.push_back(est.n_ordinary_hat);
    out.pattern.n_extraordinary.push_back(1.0 - est.n_ordinary_hat);
    out.std_error.push_back(est.std_error);
    out.points.push_back(est);
  }
  return out;
}

}  // namespace mzi::mc
