#pragma once

// Noise laws w(Delta) of the fluctuating phase shifter and their
// characteristic functions Omega(k) = int w(Delta) cos(k Delta) dDelta.

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mzi/errors.hpp"
#include "mzi/numerics.hpp"
#include "mzi/random.hpp"

namespace mzi {

struct DeltaShift {};

struct GaussianShift {
  double sigma;
};

/// Law of 2 sigma sin(t) with t uniform: w = 1 / (pi sqrt(4 sigma^2 - Delta^2)).
struct ArcsineShift {
  double sigma;
};

struct UniformShift {
  double halfwidth;
};

struct EmpiricalShift {
  std::shared_ptr<const std::vector<double>> samples;  // zero-mean
  double centering_offset = 0.0;                        // mean removed at construction
};

struct CharacteristicValue {
  double value = 1.0;
  double abs_error = 0.0;
};

class ShiftDistribution {
 public:
  using Kind = std::variant<DeltaShift, GaussianShift, ArcsineShift, UniformShift, EmpiricalShift>;

  static ShiftDistribution delta() { return ShiftDistribution(DeltaShift{}); }

  // Zero width maps to the fluctuation-free law.
  static ShiftDistribution gaussian(double sigma) {
    check_width(sigma, "gaussian sigma");
    return sigma == 0.0 ? delta() : ShiftDistribution(GaussianShift{sigma});
  }

  static ShiftDistribution arcsine(double sigma) {
    check_width(sigma, "arcsine sigma");
    return sigma == 0.0 ? delta() : ShiftDistribution(ArcsineShift{sigma});
  }

  static ShiftDistribution uniform(double halfwidth) {
    check_width(halfwidth, "uniform halfwidth");
    return halfwidth == 0.0 ? delta() : ShiftDistribution(UniformShift{halfwidth});
  }

  /// Empirical law from raw samples; the sample mean is subtracted.
  static ShiftDistribution empirical(std::span<const double> samples) {
    if (samples.size() < 2) {
      throw Error(ErrorKind::TooFewSamples,
                  "empirical distribution needs at least 2 samples, got " +
                      std::to_string(samples.size()));
    }
    for (double s : samples) {
      if (!std::isfinite(s)) throw Error(ErrorKind::InvalidArgument, "non-finite shift sample");
    }
    const double mean =
        std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    auto centered = std::make_shared<std::vector<double>>(samples.begin(), samples.end());
    for (double& s : *centered) s -= mean;
    return ShiftDistribution(EmpiricalShift{std::move(centered), mean});
  }

  const Kind& kind() const noexcept { return kind_; }

  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(kind_);
  }

  /// Width parameter (sigma, halfwidth, or sample std dev); 0 for Delta.
  double scale() const {
    return std::visit(
        [](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, DeltaShift>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, UniformShift>) {
            return k.halfwidth;
          } else if constexpr (std::is_same_v<T, EmpiricalShift>) {
            double ss = 0.0;
            for (double s : *k.samples) ss += s * s;
            return std::sqrt(ss / static_cast<double>(k.samples->size()));
          } else {
            return k.sigma;
          }
        },
        kind_);
  }

  std::string name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, DeltaShift>) return "delta";
          else if constexpr (std::is_same_v<T, GaussianShift>) return "gaussian";
          else if constexpr (std::is_same_v<T, ArcsineShift>) return "arcsine";
          else if constexpr (std::is_same_v<T, UniformShift>) return "uniform";
          else return "empirical";
        },
        kind_);
  }

 private:
  explicit ShiftDistribution(Kind kind) : kind_(std::move(kind)) {}

  static void check_width(double w, const char* what) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be finite and >= 0");
    }
  }

  Kind kind_;
};

/// Pointwise density w(delta) of a centred law.
inline double density(const ShiftDistribution& dist, double delta) {
  return std::visit(
      [delta](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, DeltaShift> || std::is_same_v<T, EmpiricalShift>) {
          throw Error(ErrorKind::DensityUndefined, "delta and empirical laws have no pointwise density");
        } else if constexpr (std::is_same_v<T, GaussianShift>) {
          const double z = delta / k.sigma;
          return std::exp(-0.5 * z * z) / (k.sigma * std::sqrt(2.0 * std::numbers::pi));
        } else if constexpr (std::is_same_v<T, ArcsineShift>) {
          const double edge = 2.0 * k.sigma;
          if (std::abs(delta) == edge) {
            throw Error(ErrorKind::EndpointSingular, "arcsine density diverges at |delta| = 2 sigma");
          }
          if (std::abs(delta) > edge) return 0.0;
          return 1.0 / (std::numbers::pi * std::sqrt(edge * edge - delta * delta));
        } else {
          if (std::abs(delta) > k.halfwidth) return 0.0;
          return 0.5 / k.halfwidth;
        }
      },
      dist.kind());
}

/// One i.i.d. draw from the law. Empirical draws pick a stored sample
/// uniformly and give it a random sign, which realizes the symmetrized law
/// whose characteristic function is the real part of the sample transform.
template <class Rng>
double sample(const ShiftDistribution& dist, Rng& rng) {
  return std::visit(
      [&rng](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, DeltaShift>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, GaussianShift>) {
          return k.sigma * standard_normal(rng);
        } else if constexpr (std::is_same_v<T, ArcsineShift>) {
          const double t = 2.0 * std::numbers::pi * uniform_open01(rng);
          return 2.0 * k.sigma * std::sin(t);
        } else if constexpr (std::is_same_v<T, UniformShift>) {
          return k.halfwidth * (2.0 * uniform_open01(rng) - 1.0);
        } else {
          const auto& s = *k.samples;
          const double value = s[uniform_index(rng, s.size())];
          return (rng() >> 63) ? -value : value;
        }
      },
      dist.kind());
}

/// Omega(k) in closed form (or as the exact sample average for Empirical).
inline CharacteristicValue characteristic(const ShiftDistribution& dist, double k) {
  return std::visit(
      [k](const auto& law) -> CharacteristicValue {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, DeltaShift>) {
          return {1.0, 0.0};
        } else if constexpr (std::is_same_v<T, GaussianShift>) {
          const double x = k * law.sigma;
          return {std::exp(-0.5 * x * x), 0.0};
        } else if constexpr (std::is_same_v<T, ArcsineShift>) {
          return {numerics::bessel_j0(2.0 * k * law.sigma), 0.0};
        } else if constexpr (std::is_same_v<T, UniformShift>) {
          const double x = k * law.halfwidth;
          if (x == 0.0) return {1.0, 0.0};
          return {std::sin(x) / x, 0.0};
        } else {
          if (k == 0.0) return {1.0, 0.0};
          double sum = 0.0;
          for (double s : *law.samples) sum += std::cos(k * s);
          return {sum / static_cast<double>(law.samples->size()), 0.0};
        }
      },
      dist.kind());
}

// Gaussian quadrature support is cut at this many standard deviations.
inline constexpr double kGaussianTruncation = 10.0;

/// Omega(k) by adaptive quadrature of w(Delta) cos(k Delta); independent of
/// the closed forms in characteristic().
inline CharacteristicValue characteristic_numeric(const ShiftDistribution& dist, double k, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "characteristic_numeric: tol must be > 0");
  return std::visit(
      [&dist, k, tol](const auto& law) -> CharacteristicValue {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, DeltaShift> || std::is_same_v<T, EmpiricalShift>) {
          throw Error(ErrorKind::DensityUndefined,
                      "characteristic_numeric needs a law with a pointwise density");
        } else if constexpr (std::is_same_v<T, GaussianShift>) {
          const double cut = kGaussianTruncation * law.sigma;
          const double tail = std::erfc(kGaussianTruncation / std::numbers::sqrt2);
          auto f = [&dist, k](double d) { return density(dist, d) * std::cos(k * d); };
          const auto q = numerics::integrate(f, -cut, cut, tol - tail);
          return {q.value, q.abs_error + tail};
        } else if constexpr (std::is_same_v<T, ArcsineShift>) {
          // Delta = 2 sigma sin t turns the endpoint singularities into dt / pi.
          const double a = 2.0 * k * law.sigma;
          auto f = [a](double t) { return std::cos(a * std::sin(t)) / std::numbers::pi; };
          const auto q = numerics::integrate(f, -std::numbers::pi / 2.0, std::numbers::pi / 2.0, tol);
          return {q.value, q.abs_error};
        } else {
          auto f = [&dist, k](double d) { return density(dist, d) * std::cos(k * d); };
          const auto q = numerics::integrate(f, -law.halfwidth, law.halfwidth, tol);
          return {q.value, q.abs_error};
        }
      },
      dist.kind());
}

}  // namespace mzi
