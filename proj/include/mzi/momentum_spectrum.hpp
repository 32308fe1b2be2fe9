#pragma once

// Incoming-beam momentum spectra P_in(k) and expectations over them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mzi/errors.hpp"
#include "mzi/numerics.hpp"
#include "mzi/random.hpp"

namespace mzi {

struct PlaneWave {
  double k;
};

/// P_in(k) = sqrt(2 delta^2 / pi) exp(-2 delta^2 (k - k0)^2); std dev 1/(2 delta).
struct GaussianPacket {
  double k0;
  double delta;

  double spread() const noexcept { return 0.5 / delta; }
};

/// Piecewise-linear density through (k, density) nodes, zero outside.
struct TabulatedSpectrum {
  struct Table {
    std::vector<double> k;
    std::vector<double> density;     // normalized
    std::vector<double> cumulative;  // mass up to each node
  };
  std::shared_ptr<const Table> table;
  double renormalization = 1.0;  // factor applied to the raw densities
};

class MomentumSpectrum {
 public:
  using Kind = std::variant<PlaneWave, GaussianPacket, TabulatedSpectrum>;

  static MomentumSpectrum plane_wave(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidArgument, "plane wave k must be > 0");
    return MomentumSpectrum(PlaneWave{k});
  }

  static MomentumSpectrum gaussian_packet(double k0, double delta) {
    if (!(k0 > 0.0) || !std::isfinite(k0)) throw Error(ErrorKind::InvalidArgument, "packet k0 must be > 0");
    if (!(delta > 0.0) || !std::isfinite(delta)) {
      throw Error(ErrorKind::InvalidArgument, "packet delta must be > 0");
    }
    return MomentumSpectrum(GaussianPacket{k0, delta});
  }

  /// Nodes must be strictly increasing in k with non-negative densities; the
  /// trapezoid integral is rescaled to 1 and the factor kept.
  static MomentumSpectrum tabulated(std::span<const std::pair<double, double>> nodes) {
    if (nodes.size() < 2) throw Error(ErrorKind::InvalidArgument, "tabulated spectrum needs >= 2 nodes");
    auto table = std::make_shared<TabulatedSpectrum::Table>();
    table->k.reserve(nodes.size());
    table->density.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto [k, d] = nodes[i];
      if (!std::isfinite(k) || !std::isfinite(d)) {
        throw Error(ErrorKind::InvalidArgument, "tabulated node " + std::to_string(i) + " is not finite");
      }
      if (d < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "tabulated node " + std::to_string(i) + " has negative density");
      }
      if (i > 0 && !(k > table->k.back())) {
        throw Error(ErrorKind::InvalidArgument, "tabulated nodes must be strictly increasing in k");
      }
      table->k.push_back(k);
      table->density.push_back(d);
    }
    double mass = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      mass += 0.5 * (table->density[i] + table->density[i - 1]) * (table->k[i] - table->k[i - 1]);
    }
    if (!(mass > 0.0)) throw Error(ErrorKind::InvalidArgument, "tabulated spectrum has zero mass");
    const double factor = 1.0 / mass;
    for (double& d : table->density) d *= factor;
    table->cumulative.assign(nodes.size(), 0.0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      table->cumulative[i] = table->cumulative[i - 1] + 0.5 * (table->density[i] + table->density[i - 1]) *
                                                            (table->k[i] - table->k[i - 1]);
    }
    return MomentumSpectrum(TabulatedSpectrum{std::move(table), factor});
  }

  const Kind& kind() const noexcept { return kind_; }

  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(kind_);
  }

  /// Central wavenumber: k, k0, or the mean of the tabulated density.
  double central_wavenumber() const {
    return std::visit(
        [](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PlaneWave>) return s.k;
          else if constexpr (std::is_same_v<T, GaussianPacket>) return s.k0;
          else return tabulated_moment(*s.table, 1);
        },
        kind_);
  }

  /// Standard deviation of k; 0 for a plane wave.
  double wavenumber_spread() const {
    return std::visit(
        [](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PlaneWave>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, GaussianPacket>) {
            return s.spread();
          } else {
            const double m1 = tabulated_moment(*s.table, 1);
            return std::sqrt(std::max(0.0, tabulated_moment(*s.table, 2) - m1 * m1));
          }
        },
        kind_);
  }

  /// Largest |k| carrying appreciable weight (packets: 8 spreads out).
  double max_wavenumber() const {
    return std::visit(
        [](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PlaneWave>) return s.k;
          else if constexpr (std::is_same_v<T, GaussianPacket>) return std::abs(s.k0) + 8.0 * s.spread();
          else return std::max(std::abs(s.table->k.front()), std::abs(s.table->k.back()));
        },
        kind_);
  }

  /// Probability weight on k < 0. Non-negligible values mean the packet
  /// straddles k = 0 (e.g. k0 delta below ~3).
  double negative_wavenumber_mass() const {
    return std::visit(
        [](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PlaneWave>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, GaussianPacket>) {
            return 0.5 * std::erfc(s.k0 / (s.spread() * std::numbers::sqrt2));
          } else {
            const auto& t = *s.table;
            double mass = 0.0;
            for (std::size_t i = 1; i < t.k.size(); ++i) {
              const double a = t.k[i - 1];
              const double b = std::min(t.k[i], 0.0);
              if (!(a < b)) break;
              const double slope = (t.density[i] - t.density[i - 1]) / (t.k[i] - a);
              const double db = t.density[i - 1] + slope * (b - a);
              mass += 0.5 * (t.density[i - 1] + db) * (b - a);
            }
            return mass;
          }
        },
        kind_);
  }

  double renormalization() const noexcept {
    if (const auto* t = std::get_if<TabulatedSpectrum>(&kind_)) return t->renormalization;
    return 1.0;
  }

  std::string name() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PlaneWave>) return "plane_wave";
          else if constexpr (std::is_same_v<T, GaussianPacket>) return "gaussian_packet";
          else return "tabulated";
        },
        kind_);
  }

 private:
  explicit MomentumSpectrum(Kind kind) : kind_(std::move(kind)) {}

  // Exact moments of the piecewise-linear density.
  static double tabulated_moment(const TabulatedSpectrum::Table& t, int order) {
    double m = 0.0;
    for (std::size_t i = 1; i < t.k.size(); ++i) {
      const double a = t.k[i - 1];
      const double b = t.k[i];
      const double da = t.density[i - 1];
      const double db = t.density[i];
      const double h = b - a;
      if (order == 1) {
        m += h / 6.0 * (da * (2.0 * a + b) + db * (a + 2.0 * b));
      } else {
        m += h / 12.0 * (da * (3.0 * a * a + 2.0 * a * b + b * b) + db * (a * a + 2.0 * a * b + 3.0 * b * b));
      }
    }
    return m;
  }

  Kind kind_;
};

/// P_in(k). Plane waves have no pointwise density.
inline double spectral_density(const MomentumSpectrum& spec, double k) {
  return std::visit(
      [k](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlaneWave>) {
          throw Error(ErrorKind::DensityUndefined, "plane wave spectrum has no pointwise density");
        } else if constexpr (std::is_same_v<T, GaussianPacket>) {
          const double d2 = s.delta * s.delta;
          const double x = k - s.k0;
          return std::sqrt(2.0 * d2 / std::numbers::pi) * std::exp(-2.0 * d2 * x * x);
        } else {
          const auto& t = *s.table;
          if (k < t.k.front() || k > t.k.back()) return 0.0;
          const auto it = std::upper_bound(t.k.begin(), t.k.end(), k);
          if (it == t.k.end()) return t.density.back();
          const auto i = static_cast<std::size_t>(it - t.k.begin());
          const double w = (k - t.k[i - 1]) / (t.k[i] - t.k[i - 1]);
          return t.density[i - 1] + w * (t.density[i] - t.density[i - 1]);
        }
      },
      spec.kind());
}

/// <f(k)> over P_in to absolute accuracy tol, assuming |f| <= bound (the
/// bound sizes the Gaussian truncation window).
template <class F>
numerics::QuadratureResult expectation(const MomentumSpectrum& spec, const F& f, double tol,
                                       double bound = 1.0) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "expectation: tol must be > 0");
  return std::visit(
      [&](const auto& s) -> numerics::QuadratureResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlaneWave>) {
          return {static_cast<double>(f(s.k)), 0.0, 1};
        } else if constexpr (std::is_same_v<T, GaussianPacket>) {
          const double spread = s.spread();
          double width = 8.0;
          auto tail = [&] { return bound * std::erfc(width / std::numbers::sqrt2); };
          while (tail() > 0.5 * tol && width < 64.0) width *= 2.0;
          auto integrand = [&](double k) { return spectral_density(spec, k) * f(k); };
          auto q = numerics::integrate(integrand, s.k0 - width * spread, s.k0 + width * spread,
                                       std::max(tol - tail(), 0.5 * tol));
          q.abs_error += tail();
          return q;
        } else {
          const auto& t = *s.table;
          const double span = t.k.back() - t.k.front();
          numerics::QuadratureResult total{0.0, 0.0, 0};
          auto integrand = [&](double k) { return spectral_density(spec, k) * f(k); };
          // Panel per segment: the density has kinks at the nodes.
          for (std::size_t i = 1; i < t.k.size(); ++i) {
            if (t.density[i] == 0.0 && t.density[i - 1] == 0.0) continue;
            const double share = tol * (t.k[i] - t.k[i - 1]) / span;
            const auto q = numerics::integrate(integrand, t.k[i - 1], t.k[i], share);
            total.value += q.value;
            total.abs_error += q.abs_error;
            total.evaluations += q.evaluations;
          }
          return total;
        }
      },
      spec.kind());
}

/// One wavenumber draw from P_in (inverse CDF for tabulated spectra).
template <class Rng>
double sample_wavenumber(const MomentumSpectrum& spec, Rng& rng) {
  return std::visit(
      [&rng](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlaneWave>) {
          return s.k;
        } else if constexpr (std::is_same_v<T, GaussianPacket>) {
          return s.k0 + s.spread() * standard_normal(rng);
        } else {
          const auto& t = *s.table;
          const double target = uniform_open01(rng) * t.cumulative.back();
          auto it = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), target);
          if (it == t.cumulative.end()) return t.k.back();
          const auto i = static_cast<std::size_t>(it - t.cumulative.begin());
          const double h = t.k[i] - t.k[i - 1];
          const double d0 = t.density[i - 1];
          const double slope = (t.density[i] - d0) / h;
          const double r = target - t.cumulative[i - 1];
          // Solve d0 x + slope x^2 / 2 = r in the cancellation-free form.
          const double disc = std::max(0.0, d0 * d0 + 2.0 * slope * r);
          const double denom = d0 + std::sqrt(disc);
          const double x = denom > 0.0 ? 2.0 * r / denom : 0.0;
          return t.k[i - 1] + std::clamp(x, 0.0, h);
        }
      },
      spec.kind());
}

}  // namespace mzi
