#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mzi/errors.hpp"
#include "mzi/numerics.hpp"
#include "oracle_values.hpp"

namespace mzi::numerics {
namespace {

using namespace mzi::testing;
constexpr double kPi = std::numbers::pi;

TEST(Integrate, Linear) {
  const auto q = integrate([](double x) { return x; }, 0.0, 1.0, 1e-12);
  EXPECT_NEAR(q.value, 0.5, 1e-12);
  EXPECT_LE(q.abs_error, 1e-12);
  EXPECT_GT(q.evaluations, 0u);
}

TEST(Integrate, CosineOverHalfPeriodVanishes) {
  const auto q = integrate([](double x) { return std::cos(x); }, 0.0, kPi, 1e-12);
  EXPECT_NEAR(q.value, 0.0, 1e-12);
}

TEST(Integrate, BesselIntegralForm) {
  const auto q = integrate([](double t) { return std::cos(3.0 * std::sin(t)) / kPi; }, -kPi / 2, kPi / 2, 1e-10);
  EXPECT_NEAR(q.value, kJ0At3, 1e-10);
}

TEST(Integrate, ErrorEstimateHoldsOnPeakedIntegrand) {
  // int_{-1}^{1} 1/(1e-4 + x^2) dx = 2e2 atan(1e2)
  const double exact = 2.0 / 1e-2 * std::atan(1.0 / 1e-2);
  const auto q = integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-9);
  EXPECT_NEAR(q.value, exact, 1e-9);
}

TEST(Integrate, AdditiveOverAdjacentIntervals) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double tol = 1e-11;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(gen);
    const double b = a + 0.1 + std::abs(u(gen));
    const double c = b + 0.1 + std::abs(u(gen));
    const double w = u(gen);
    auto f = [w](double x) { return std::exp(-x * x / 4.0) * std::cos(w * x) + 0.3 * x; };
    const double whole = integrate(f, a, c, tol).value;
    const double parts = integrate(f, a, b, tol).value + integrate(f, b, c, tol).value;
    EXPECT_NEAR(whole, parts, 2.0 * tol);
  }
}

TEST(Integrate, RejectsBadArguments) {
  auto f = [](double x) { return x; };
  EXPECT_THROW(integrate(f, 1.0, 0.0, 1e-8), Error);
  EXPECT_THROW(integrate(f, 0.0, 1.0, 0.0), Error);
}

TEST(Integrate, BudgetExhaustionIsReported) {
  QuadratureOptions opts;
  opts.max_evaluations = 200;
  try {
    integrate([](double x) { return std::sin(1e4 * x); }, 0.0, 10.0, 1e-12, opts);
    FAIL() << "expected QuadratureNoConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::QuadratureNoConvergence);
  }
}

TEST(Integrate, NonIntegrableSingularityFails) {
  try {
    integrate([](double x) { return 1.0 / (x * x); }, -1.0, 1.0, 1e-8);
    FAIL() << "expected QuadratureNoConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::QuadratureNoConvergence);
  }
}

TEST(MaximizeAbs, CosineTieGoesToSmallestAbscissa) {
  const auto r = maximize_abs([](double x) { return std::cos(x); }, 0.0, 2.0 * kPi, 256, 1e-10);
  EXPECT_DOUBLE_EQ(r.max_abs, 1.0);
  EXPECT_DOUBLE_EQ(r.argmax, 0.0);
  EXPECT_LE(r.bracket.first, r.argmax);
  EXPECT_GE(r.bracket.second, r.argmax);
}

TEST(MaximizeAbs, EnvelopeMaximalAtOrigin) {
  const auto r = maximize_abs([](double x) { return std::exp(-x * x / 8.0) * std::cos(x); }, 0.0, 4.0 * kPi, 1024,
                              1e-10);
  EXPECT_DOUBLE_EQ(r.max_abs, 1.0);
  EXPECT_DOUBLE_EQ(r.argmax, 0.0);
}

TEST(MaximizeAbs, PlaneWaveArcsineObjective) {
  const double k = 1.3;
  const double sigma = 0.7;
  const double amp = bessel_j0(2.0 * sigma * k);
  const auto r = maximize_abs([&](double x) { return amp * std::cos(k * x); }, 0.0, 30.0, 1024, 1e-10);
  EXPECT_NEAR(r.max_abs, std::abs(amp), 1e-15);
}

TEST(MaximizeAbs, RefinesOffGridPeak) {
  // Peak at x = 1.2345, not on the grid.
  auto f = [](double x) { return 2.0 * std::exp(-(x - 1.2345) * (x - 1.2345)); };
  const auto r = maximize_abs(f, 0.0, 10.0, 64, 1e-10);
  EXPECT_NEAR(r.argmax, 1.2345, 1e-6);
  EXPECT_NEAR(r.max_abs, 2.0, 1e-12);
  EXPECT_LT(r.bracket.second - r.bracket.first, 1e-10);
}

TEST(MaximizeAbs, NoGridPointBeatsReportedMax) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  const double tol = 1e-9;
  const std::size_t n = 257;
  for (int trial = 0; trial < 25; ++trial) {
    const double a = u(gen), b = u(gen), c = u(gen);
    auto f = [&](double x) { return std::sin(a * x) * std::exp(-x / b) + 0.2 * std::cos(c * x); };
    const auto r = maximize_abs(f, 0.0, 20.0, n, tol);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = 20.0 * static_cast<double>(i) / static_cast<double>(n - 1);
      EXPECT_GE(r.max_abs, std::abs(f(x)) - tol);
    }
    EXPECT_NEAR(r.max_abs, std::abs(f(r.argmax)), 1e-15);
  }
}

TEST(MaximizeAbs, RejectsSmallGrid) {
  EXPECT_THROW(maximize_abs([](double) { return 1.0; }, 0.0, 1.0, 63, 1e-8), Error);
}

TEST(BesselJ0, KnownValues) {
  EXPECT_EQ(bessel_j0(0.0), 1.0);
  EXPECT_NEAR(bessel_j0(1.0), 0.7651976866, 1e-10);
  EXPECT_NEAR(bessel_j0(2.404826), 0.0, 1e-6);
}

TEST(BesselJ0, MatchesHighPrecisionReference) {
  for (const auto& p : kJ0Table) {
    EXPECT_NEAR(bessel_j0(p.x), p.value, 1e-12) << "x = " << p.x;
  }
  // Either side of the branch switch and out to 50.
  const double more[][2] = {{11.999, 0.047465830573456671}, {12.0, 0.047689310796833537},
                            {12.001, 0.047912724710314494}, {30.0, -0.086367983581040211},
                            {45.5, 0.088176093155092095}};
  for (const auto& p : more) EXPECT_NEAR(bessel_j0(p[0]), p[1], 1e-12) << "x = " << p[0];
}

TEST(BesselJ0, EvenAndBounded) {
  for (double x = 0.0; x <= 50.0; x += 0.37) {
    EXPECT_EQ(bessel_j0(-x), bessel_j0(x));
    EXPECT_LE(std::abs(bessel_j0(x)), 1.0);
  }
}

TEST(BesselJ0Oracle, AgreesWithSeriesAndAsymptoticBranches) {
  EXPECT_NEAR(bessel_j0_oracle(0.0, 1e-12), 1.0, 1e-12);
  EXPECT_NEAR(bessel_j0_oracle(1.0, 1e-10), bessel_j0(1.0), 1e-9);
  EXPECT_NEAR(bessel_j0_oracle(20.0, 1e-10), bessel_j0(20.0), 1e-8);
  for (const auto& p : kJ0Table) {
    EXPECT_NEAR(bessel_j0(p.x), bessel_j0_oracle(p.x, 1e-11), 1e-8) << "x = " << p.x;
  }
}

TEST(BesselJ0Oracle, FirstZeroByBisection) {
  double lo = 2.0, hi = 3.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0_oracle(mid, 1e-13) > 0.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(0.5 * (lo + hi), kJ0FirstZero, 1e-6);
  EXPECT_NEAR(0.5 * (lo + hi), 2.404826, 1e-5);
}

}  // namespace
}  // namespace mzi::numerics
