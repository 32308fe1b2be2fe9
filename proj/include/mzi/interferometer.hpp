#pragma once

// Two-channel interferometer with a fluctuating phase shifter: channel
// intensities, momentum-resolved patterns, local and generalized visibility,
// the decoherence parameter, and closed forms for Gaussian and arcsine noise.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mzi/errors.hpp"
#include "mzi/momentum_spectrum.hpp"
#include "mzi/numerics.hpp"
#include "mzi/shift_distribution.hpp"

namespace mzi {

struct ChannelIntensities {
  double n_ordinary = 0.0;
  double n_extraordinary = 0.0;
  double abs_error = 0.0;  // quadrature error on <Omega cos>
};

struct InterferencePattern {
  std::vector<double> delta0_grid;
  std::vector<double> n_ordinary;
  std::vector<double> n_extraordinary;
};

/// How Omega(k) enters the visibility objective.
enum class OmegaRoute {
  ClosedForm,  // characteristic()
  Quadrature,  // characteristic_numeric() where a density exists
};

struct SearchSettings {
  std::optional<double> window;  // Delta0 searched on [0, window]
  std::size_t grid_n = 1024;
  double tol = 1e-10;       // golden-section bracket width
  double quad_tol = 1e-12;  // per-expectation absolute tolerance
  OmegaRoute omega = OmegaRoute::ClosedForm;
  bool plane_wave_shortcut = true;
};

struct DecoherenceReport {
  double generalized_visibility = 0.0;
  double epsilon = 1.0;
  double argmax_delta0 = 0.0;
  double quadrature_error = 0.0;  // worst per-evaluation estimate seen
  std::pair<double, double> search_bracket{0.0, 0.0};
  double window = 0.0;
  std::size_t grid_n = 0;  // grid actually scanned
};

namespace detail {

inline double omega(const ShiftDistribution& dist, double k, OmegaRoute route, double tol) {
  if (route == OmegaRoute::Quadrature && !dist.is<DeltaShift>() && !dist.is<EmpiricalShift>()) {
    return characteristic_numeric(dist, k, tol).value;
  }
  return characteristic(dist, k).value;
}

}  // namespace detail

/// Default Delta0 window: six times the larger of the fringe period at the
/// central wavenumber and the coherence length (4 delta for packets).
inline double default_search_window(const MomentumSpectrum& spec) {
  double k_char = std::abs(spec.central_wavenumber());
  if (!(k_char > 0.0)) k_char = spec.max_wavenumber();
  const double fringe = 2.0 * std::numbers::pi / k_char;
  const double spread = spec.wavenumber_spread();
  const double coherence = spread > 0.0 ? 2.0 / spread : 0.0;
  return 6.0 * std::max(fringe, coherence);
}

/// Grid size needed for a pitch below pi / (4 k_max) on [0, window].
inline std::size_t required_grid_points(const MomentumSpectrum& spec, double window) {
  const double pitch = std::numbers::pi / (4.0 * spec.max_wavenumber());
  return static_cast<std::size_t>(std::ceil(window / pitch)) + 2;
}

/// <Omega(k) cos(k delta0)> over P_in; equals N_O - N_E.
inline numerics::QuadratureResult fringe_term(const MomentumSpectrum& spec, const ShiftDistribution& dist,
                                              double delta0, double tol,
                                              OmegaRoute route = OmegaRoute::ClosedForm) {
  auto f = [&](double k) { return detail::omega(dist, k, route, 0.1 * tol) * std::cos(k * delta0); };
  return expectation(spec, f, tol);
}

inline ChannelIntensities channel_intensities(const MomentumSpectrum& spec, const ShiftDistribution& dist,
                                              double delta0, double tol) {
  const auto term = fringe_term(spec, dist, delta0, tol);
  return {0.5 * (1.0 + term.value), 0.5 * (1.0 - term.value), term.abs_error};
}

/// P_O(k) = P_in(k) [1 + Omega(k) cos(k delta0)] / 2.
inline double momentum_pattern(const MomentumSpectrum& spec, const ShiftDistribution& dist, double delta0,
                               double k) {
  return 0.5 * spectral_density(spec, k) * (1.0 + characteristic(dist, k).value * std::cos(k * delta0));
}

/// V(k) = |Omega(k)|.
inline double local_visibility(const ShiftDistribution& dist, double k) {
  return std::abs(characteristic(dist, k).value);
}

/// <|Omega(k)|>, the momentum-averaged local visibility that bounds V.
inline double visibility_bound(const MomentumSpectrum& spec, const ShiftDistribution& dist, double tol) {
  return expectation(spec, [&](double k) { return local_visibility(dist, k); }, tol).value;
}

/// V = max over delta0 of |<Omega cos(k delta0)>| and epsilon = 1 - V.
///
/// The objective is even in delta0, so only delta0 >= 0 is scanned. The grid
/// is enlarged when needed to keep its pitch below pi / (4 k_max).
inline DecoherenceReport generalized_visibility(const MomentumSpectrum& spec, const ShiftDistribution& dist,
                                                const SearchSettings& settings = {}) {
  if (!(settings.tol > 0.0) || !(settings.quad_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "search tolerances must be > 0");
  }
  if (settings.window && !(*settings.window >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "search window must be >= 0");
  }

  DecoherenceReport report;
  if (const auto* pw = std::get_if<PlaneWave>(&spec.kind()); pw && settings.plane_wave_shortcut) {
    report.generalized_visibility = std::abs(detail::omega(dist, pw->k, settings.omega, settings.quad_tol));
    report.generalized_visibility = std::min(report.generalized_visibility, 1.0);
    report.epsilon = 1.0 - report.generalized_visibility;
    return report;
  }

  const double window = settings.window.value_or(default_search_window(spec));
  const std::size_t grid_n = std::max({settings.grid_n, required_grid_points(spec, window), std::size_t{64}});

  double worst_error = 0.0;
  numerics::MaxResult best;
  if (const auto* pw = std::get_if<PlaneWave>(&spec.kind())) {
    const double om = detail::omega(dist, pw->k, settings.omega, settings.quad_tol);
    best = numerics::maximize_abs([&](double d0) { return om * std::cos(pw->k * d0); }, 0.0, window, grid_n,
                                  settings.tol);
  } else {
    auto objective = [&](double d0) {
      const auto q = fringe_term(spec, dist, d0, settings.quad_tol, settings.omega);
      worst_error = std::max(worst_error, q.abs_error);
      return q.value;
    };
    best = numerics::maximize_abs(objective, 0.0, window, grid_n, settings.tol);
  }

  report.generalized_visibility = std::clamp(best.max_abs, 0.0, 1.0);
  report.epsilon = 1.0 - report.generalized_visibility;
  report.argmax_delta0 = best.argmax;
  report.quadrature_error = worst_error;
  report.search_bracket = best.bracket;
  report.window = window;
  report.grid_n = grid_n;
  return report;
}

/// epsilon = 1 - exp(-k^2 sigma^2 / 2): Gaussian noise, plane wave.
inline double epsilon_gaussian_plane(double k, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
  const double x = k * sigma;
  return -std::expm1(-0.5 * x * x);
}

/// Gaussian noise, Gaussian packet of centre k0 and width delta.
inline double epsilon_gaussian_packet(double k0, double delta, double sigma) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be > 0");
  if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
  const double ratio = delta * delta / (delta * delta + 0.25 * sigma * sigma);
  return 1.0 - std::sqrt(ratio) * std::exp(-ratio * sigma * sigma * k0 * k0 / 2.0);
}

/// epsilon = 1 - |J0(2 k sigma)|: arcsine noise, plane wave. Not monotone in sigma.
inline double epsilon_arcsine_plane(double k, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
  return 1.0 - std::abs(numerics::bessel_j0(2.0 * k * sigma));
}

/// Closed-form epsilon when one is known for this pairing.
inline std::optional<double> closed_form_epsilon(const MomentumSpectrum& spec, const ShiftDistribution& dist) {
  if (dist.is<DeltaShift>()) return 0.0;
  if (const auto* pw = std::get_if<PlaneWave>(&spec.kind())) {
    if (const auto* g = std::get_if<GaussianShift>(&dist.kind())) return epsilon_gaussian_plane(pw->k, g->sigma);
    if (const auto* a = std::get_if<ArcsineShift>(&dist.kind())) return epsilon_arcsine_plane(pw->k, a->sigma);
    if (const auto* u = std::get_if<UniformShift>(&dist.kind())) {
      const double x = pw->k * u->halfwidth;
      return 1.0 - std::abs(std::sin(x) / x);
    }
  }
  if (const auto* gp = std::get_if<GaussianPacket>(&spec.kind())) {
    if (const auto* g = std::get_if<GaussianShift>(&dist.kind())) {
      return epsilon_gaussian_packet(gp->k0, gp->delta, g->sigma);
    }
  }
  return std::nullopt;
}

namespace detail {

// |O'(shift)|^2 with O' = (exp(-i k shift / 2) + exp(i k shift / 2)) / 2: the
// two spin components of a split packet recombined by the projection.
inline double split_packet_probability(double k, double shift) {
  const std::complex<double> half_phase(0.0, 0.5 * k * shift);
  return std::norm(0.5 * (std::exp(-half_phase) + std::exp(half_phase)));
}

// Average of |O'|^2 over the shift law centred at delta0, by direct
// integration over the law (no use of Omega).
inline double split_packet_shift_average(const ShiftDistribution& dist, double k, double delta0, double tol) {
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, DeltaShift>) {
          return split_packet_probability(k, delta0);
        } else if constexpr (std::is_same_v<T, GaussianShift>) {
          const double cut = kGaussianTruncation * law.sigma;
          auto f = [&](double x) { return density(dist, x) * split_packet_probability(k, delta0 + x); };
          return numerics::integrate(f, -cut, cut, tol).value;
        } else if constexpr (std::is_same_v<T, ArcsineShift>) {
          auto f = [&](double t) {
            return split_packet_probability(k, delta0 + 2.0 * law.sigma * std::sin(t)) / std::numbers::pi;
          };
          return numerics::integrate(f, -std::numbers::pi / 2.0, std::numbers::pi / 2.0, tol).value;
        } else if constexpr (std::is_same_v<T, UniformShift>) {
          auto f = [&](double x) { return density(dist, x) * split_packet_probability(k, delta0 + x); };
          return numerics::integrate(f, -law.halfwidth, law.halfwidth, tol).value;
        } else {
          double sum = 0.0;
          for (double s : *law.samples) {
            sum += split_packet_probability(k, delta0 + s) + split_packet_probability(k, delta0 - s);
          }
          return 0.5 * sum / static_cast<double>(law.samples->size());
        }
      },
      dist.kind());
}

}  // namespace detail

/// Ordinary-channel intensity computed through the split-packet projection
/// operator, averaged over shifts and then over P_in. Agrees with
/// channel_intensities().n_ordinary.
inline double split_packet_intensity(const MomentumSpectrum& spec, const ShiftDistribution& dist, double delta0,
                                     double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "split_packet_intensity: tol must be > 0");
  auto shift_average = [&](double k) { return detail::split_packet_shift_average(dist, k, delta0, 0.25 * tol); };
  return expectation(spec, shift_average, 0.5 * tol).value;
}

/// N_O and N_E over a grid of nominal shifts.
inline InterferencePattern interference_pattern(const MomentumSpectrum& spec, const ShiftDistribution& dist,
                                                std::span<const double> delta0_grid, double tol) {
  InterferencePattern pattern;
  pattern.delta0_grid.assign(delta0_grid.begin(), delta0_grid.end());
  pattern.n_ordinary.reserve(delta0_grid.size());
  pattern.n_extraordinary.reserve(delta0_grid.size());
  for (double d0 : delta0_grid) {
    const auto c = channel_intensities(spec, dist, d0, tol);
    pattern.n_ordinary.push_back(c.n_ordinary);
    pattern.n_extraordinary.push_back(c.n_extraordinary);
  }
  return pattern;
}

}  // namespace mzi
