#pragma once

// Numerical kernels: adaptive Gauss-Kronrod quadrature, grid-then-golden
// maximization of |f|, and Bessel J0 with an integral-form oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <utility>
#include <vector>

#include "mzi/errors.hpp"

namespace mzi::numerics {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  std::size_t max_evaluations = 1'000'000;
  // Number of equal panels the interval is cut into before adaptation starts.
  int initial_panels = 4;
};

struct MaxResult {
  double argmax = 0.0;
  double max_abs = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15 constants).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kKronrodNodes[1], [3], [5] and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod15(const F& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  const double fc = static_cast<double>(f(centre));
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  double abs_sum = std::abs(kronrod);

  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f1 = static_cast<double>(f(centre - dx));
    const double f2 = static_cast<double>(f(centre + dx));
    kronrod += kKronrodWeights[i] * (f1 + f2);
    abs_sum += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
  }

  kronrod *= half;
  gauss *= half;
  abs_sum *= std::abs(half);

  // |K - G| overestimates the Kronrod error for smooth integrands; the floor
  // accounts for cancellation in the weighted sum.
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  return {lo, hi, kronrod, std::max(std::abs(kronrod - gauss), roundoff)};
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [lo, hi].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops to tol. Throws QuadratureNoConvergence when the evaluation
/// budget runs out or panels shrink to machine resolution first.
template <class F>
QuadratureResult integrate(const F& f, double lo, double hi, double tol,
                           const QuadratureOptions& options = {}) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::InvalidArgument, "integrate: need finite lo < hi");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "integrate: tol must be > 0");

  auto check_finite = [&](const detail::Panel& p) {
    if (!std::isfinite(p.value) || !std::isfinite(p.error)) {
      std::ostringstream msg;
      msg << "non-finite integrand or estimate on [" << p.lo << ", " << p.hi << "]";
      throw Error(ErrorKind::QuadratureNoConvergence, msg.str());
    }
  };

  std::priority_queue<detail::Panel> panels;
  std::size_t evaluations = 0;
  const int initial = std::max(1, options.initial_panels);
  const double width = (hi - lo) / initial;
  for (int i = 0; i < initial; ++i) {
    const double a = lo + i * width;
    const double b = (i + 1 == initial) ? hi : lo + (i + 1) * width;
    const detail::Panel p = detail::gauss_kronrod15(f, a, b);
    evaluations += 15;
    check_finite(p);
    panels.push(p);
  }

  auto totals = [&panels] {
    // Copy-and-drain keeps the summation order fixed (heap order), so results
    // are reproducible run to run.
    auto copy = panels;
    double value = 0.0;
    double error = 0.0;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    return std::pair{value, error};
  };

  double error_sum = totals().second;

  while (error_sum > tol) {
    if (evaluations + 30 > options.max_evaluations) {
      std::ostringstream msg;
      msg << "budget of " << options.max_evaluations << " evaluations exhausted on [" << lo
          << ", " << hi << "] with error estimate " << error_sum << " > tol " << tol;
      throw Error(ErrorKind::QuadratureNoConvergence, msg.str());
    }
    const detail::Panel worst = panels.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) {
      std::ostringstream msg;
      msg << "panel at " << worst.lo << " cannot be bisected further; error estimate "
          << error_sum << " > tol " << tol;
      throw Error(ErrorKind::QuadratureNoConvergence, msg.str());
    }
    panels.pop();
    const detail::Panel left = detail::gauss_kronrod15(f, worst.lo, mid);
    const detail::Panel right = detail::gauss_kronrod15(f, mid, worst.hi);
    evaluations += 30;
    check_finite(left);
    check_finite(right);
    panels.push(left);
    panels.push(right);
    error_sum += left.error + right.error - worst.error;
    if (error_sum <= tol) {
      // Running sums drift; confirm against a fresh summation.
      error_sum = totals().second;
    }
  }

  const auto [value, error] = totals();
  return {value, error, evaluations};
}

/// Maximizes |f| over [lo, hi]: scan a uniform grid of grid_n points, then
/// golden-section refine between the neighbours of the best grid point until
/// the bracket is narrower than tol. Ties go to the smallest abscissa.
template <class F>
MaxResult maximize_abs(const F& f, double lo, double hi, std::size_t grid_n, double tol) {
  if (!(lo <= hi)) throw Error(ErrorKind::InvalidArgument, "maximize_abs: need lo <= hi");
  if (grid_n < 64) throw Error(ErrorKind::InvalidArgument, "maximize_abs: grid_n must be >= 64");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "maximize_abs: tol must be > 0");

  auto objective = [&f](double x) { return std::abs(static_cast<double>(f(x))); };

  if (lo == hi) return {lo, objective(lo), {lo, hi}};

  const double pitch = (hi - lo) / static_cast<double>(grid_n - 1);
  auto grid_point = [&](std::size_t i) {
    return i + 1 == grid_n ? hi : lo + static_cast<double>(i) * pitch;
  };

  std::size_t best_index = 0;
  double best_value = objective(lo);
  for (std::size_t i = 1; i < grid_n; ++i) {
    const double v = objective(grid_point(i));
    if (v > best_value) {
      best_value = v;
      best_index = i;
    }
  }

  double a = grid_point(best_index == 0 ? 0 : best_index - 1);
  double b = grid_point(std::min(best_index + 1, grid_n - 1));
  MaxResult result{grid_point(best_index), best_value, {a, b}};

  constexpr double inv_phi = std::numbers::phi - 1.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a >= tol) {
    // >= keeps the left sub-bracket on ties.
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  result.bracket = {a, b};

  const double x_best = fc >= fd ? c : d;
  const double f_best = std::max(fc, fd);
  if (f_best > result.max_abs) {
    result.argmax = x_best;
    result.max_abs = f_best;
  }
  return result;
}

// Above this |x| the Hankel asymptotic form is used for J0.
inline constexpr double kBesselSeriesLimit = 12.0;

namespace detail {

inline long double bessel_j0_series(long double x) {
  // sum_m (-x^2/4)^m / (m!)^2
  const long double q = -0.25L * x * x;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * m);
    sum += term;
    if (std::abs(term) < 1e-17L) break;
  }
  return sum;
}

inline long double bessel_j0_asymptotic(long double x) {
  // J0(x) ~ sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)], each series
  // truncated at its smallest term.
  long double a = 1.0L;
  long double p = 0.0L;
  long double q = 0.0L;
  long double previous = std::numeric_limits<long double>::infinity();
  long double x_pow = 1.0L;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const long double odd = 2.0L * k - 1.0L;
      a *= -(odd * odd) / (8.0L * k);
      x_pow *= x;
    }
    const long double term = a / x_pow;
    if (std::abs(term) > previous) break;
    previous = std::abs(term);
    const long double sign = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    if (previous < 1e-22L) break;
  }
  const long double chi = x - std::numbers::pi_v<long double> / 4.0L;
  return std::sqrt(2.0L / (std::numbers::pi_v<long double> * x)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// Bessel function of the first kind, order zero. Even in x.
inline double bessel_j0(double x) {
  const long double ax = std::abs(static_cast<long double>(x));
  if (ax < kBesselSeriesLimit) return static_cast<double>(detail::bessel_j0_series(ax));
  return static_cast<double>(detail::bessel_j0_asymptotic(ax));
}

/// J0 from its integral representation (1/pi) * int_{-pi/2}^{pi/2} cos(x sin t) dt.
/// Independent of bessel_j0; used to cross-check it.
inline double bessel_j0_oracle(double x, double tol) {
  auto integrand = [x](double t) { return std::cos(x * std::sin(t)) / std::numbers::pi; };
  return integrate(integrand, -std::numbers::pi / 2.0, std::numbers::pi / 2.0, tol).value;
}

}  // namespace mzi::numerics
