#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "srp/dispersion.hpp"
#include "srp/thermo.hpp"
#include "srp/weights.hpp"

using namespace srp;
using std::numbers::pi;

namespace {

const auto kGauss3 = Dispersion::gaussian(3, 1.0);

// sum_n e^(mu n) n^(-s), summed until the terms are negligible
double polylog(double s, double mu) {
  double sum = 0.0;
  for (int n = 1; n < 100000; ++n) {
    const double t = std::exp(mu * n) * std::pow(n, -s);
    sum += t;
    if (t < 1e-20) break;
  }
  return sum;
}

// sum_n e^(-1/n^2) n^(-s) = sum_k (-1)^k zeta(2k + s) / k!
double damped_zeta(double s) {
  double sum = boost::math::zeta(s);
  double fact = 1.0;
  for (int k = 1; k < 40; ++k) {
    fact *= k;
    sum += (k % 2 ? -1.0 : 1.0) * boost::math::zeta(2.0 * k + s) / fact;
  }
  return sum;
}

Dispersion gaussian_as_table(int d, double beta, std::size_t knots) {
  const double a = 4.0 * pi * pi * beta;
  std::vector<double> k, e;
  for (std::size_t i = 0; i < knots; ++i) {
    const double x = 0.05 * static_cast<double>(i);
    k.push_back(x);
    e.push_back(a * x * x);
  }
  return Dispersion::tabulated(d, k, e, a, 1.0);
}

}  // namespace

TEST(Dispersion, GaussianBasics) {
  EXPECT_EQ(kGauss3(0.0), 0.0);
  EXPECT_NEAR(kGauss3(0.5), pi * pi, 1e-14);
  EXPECT_NEAR(kGauss3.mode_integral(2.0), std::pow(8.0 * pi, -1.5), 1e-16);
  EXPECT_THROW(Dispersion::gaussian(0, 1.0), ValidationError);
  EXPECT_THROW(Dispersion::gaussian(3, -1.0), ValidationError);
}

TEST(Dispersion, TabulatedValidation) {
  EXPECT_THROW(Dispersion::tabulated(3, {0.1, 1.0}, {0.0, 1.0}, 1.0, 1.0), ValidationError);
  EXPECT_THROW(Dispersion::tabulated(3, {0.0, 1.0, 0.5}, {0.0, 1.0, 2.0}, 0.5, 1.0), ValidationError);
  // declared bound violated at k = 1
  EXPECT_THROW(Dispersion::tabulated(3, {0.0, 1.0, 2.0}, {0.0, 0.5, 8.0}, 1.0, 1.5), ValidationError);
  // same table with a weaker declaration is accepted
  const auto ok = Dispersion::tabulated(3, {0.0, 1.0, 2.0}, {0.0, 0.5, 8.0}, 0.4, 1.5);
  EXPECT_NEAR(ok(0.5), 0.125, 1e-15);  // linear in |k|^2
  EXPECT_NEAR(ok(3.0), 8.0 + 2.5 * 5.0, 1e-12);
  EXPECT_NEAR(ok.global_quadratic_bound(), 0.5, 1e-15);
}

TEST(Dispersion, TabulatedModeIntegralMatchesQuadrature) {
  const auto disp = Dispersion::tabulated(3, {0.0, 0.3, 0.7, 1.0, 2.0}, {0.0, 0.5, 1.0, 3.0, 9.0}, 1.0, 1.0);
  for (double t : {0.5, 1.0, 3.0, 20.0}) {
    auto f = [&](double r) { return 4.0 * pi * r * r * std::exp(-t * disp(r)); };
    double total = 0.0;
    const std::vector<double> cuts = {0.0, 0.3, 0.7, 1.0, 2.0, 10.0, 40.0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-15);
    EXPECT_NEAR(disp.mode_integral(t) / total, 1.0, 1e-12) << "t=" << t;
    EXPECT_LE(disp.mode_integral(t), disp.mode_integral_constant() * std::pow(t, -1.5));
  }
}

TEST(CriticalDensity, GaussianClosedForm) {
  const auto rc = critical_density(kGauss3, WeightSequence::zero(), 1e-10);
  ASSERT_FALSE(rc.infinite);
  const double expected = boost::math::zeta(1.5) * std::pow(4.0 * pi, -1.5);
  EXPECT_NEAR(rc.value, expected, 1e-10);
  EXPECT_NEAR(rc.value, 0.0586437, 1e-7);
  EXPECT_LE(rc.error, 1e-10);
}

TEST(CriticalDensity, LowDimensionsDiverge) {
  EXPECT_TRUE(critical_density(Dispersion::gaussian(2, 1.0), WeightSequence::zero()).infinite);
  EXPECT_TRUE(critical_density(Dispersion::gaussian(1, 0.5), WeightSequence::power(1.0, 2.0)).infinite);
}

TEST(CriticalDensity, LinearWeightsAreAShift) {
  // alpha_n = n
  const auto rc = critical_density(kGauss3, WeightSequence::zero().shifted(1.0), 1e-14);
  const double expected = polylog(1.5, -1.0) * std::pow(4.0 * pi, -1.5);
  EXPECT_NEAR(rc.value, expected, 1e-12);
  EXPECT_NEAR(density(kGauss3, WeightSequence::zero(), -1.0, 1e-14).value, expected, 1e-13);
}

TEST(CriticalDensity, PowerWeights) {
  const auto rc = critical_density(kGauss3, WeightSequence::power(1.0, 2.0), 1e-10);
  EXPECT_NEAR(rc.value, damped_zeta(1.5) * std::pow(4.0 * pi, -1.5), 1e-9);
}

TEST(CriticalDensity, TableOfGaussianAgrees) {
  const auto table = gaussian_as_table(3, 1.0, 30);
  const auto rc = critical_density(table, WeightSequence::power(1.0, 2.0), 1e-10);
  EXPECT_NEAR(rc.value, damped_zeta(1.5) * std::pow(4.0 * pi, -1.5), 1e-9);
}

TEST(Pressure, PolylogValue) {
  const auto p = pressure(kGauss3, WeightSequence::zero(), -1.0, 1e-12);
  EXPECT_NEAR(p.value, polylog(2.5, -1.0) * std::pow(4.0 * pi, -1.5), 1e-13);
  const auto pb = pressure(kGauss3, WeightSequence::zero(), -1.0, 1e-12, SeriesRoute::bose);
  EXPECT_NEAR(pb.value, p.value, 1e-12);
}

TEST(Pressure, AtZeroInLowDimensions) {
  const auto p1 = pressure(Dispersion::gaussian(1, 1.0), WeightSequence::zero(), 0.0, 1e-10);
  EXPECT_NEAR(p1.value, boost::math::zeta(1.5) / std::sqrt(4.0 * pi), 1e-9);
  const auto p2 = pressure(Dispersion::gaussian(2, 1.0), WeightSequence::zero(), 0.0, 1e-10);
  EXPECT_NEAR(p2.value, boost::math::zeta(2.0) / (4.0 * pi), 1e-9);
  const auto p3 = pressure(kGauss3, WeightSequence::zero(), 0.0, 1e-10);
  EXPECT_NEAR(p3.value, boost::math::zeta(2.5) * std::pow(4.0 * pi, -1.5), 1e-10);
}

TEST(Pressure, PositiveMuIsInfinite) {
  EXPECT_TRUE(pressure(kGauss3, WeightSequence::zero(), 0.1).infinite);
  EXPECT_TRUE(pressure(Dispersion::gaussian(1, 2.0), WeightSequence::power(0.3, 1.0), 0.1).infinite);
  EXPECT_FALSE(pressure(kGauss3, WeightSequence::zero().shifted(0.2), 0.1).infinite);
}

TEST(Pressure, MonotoneConvexAndVanishing) {
  const auto w = WeightSequence::power(1.0, 2.0);
  std::vector<double> mu, p;
  for (double m = -20.0; m <= -0.01; m += 0.25) {
    mu.push_back(m);
    p.push_back(pressure(kGauss3, w, m).value);
  }
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_GT(p[i], p[i - 1]);
  for (std::size_t i = 1; i + 1 < p.size(); ++i)
    EXPECT_GE((p[i + 1] - p[i]) / (mu[i + 1] - mu[i]), (p[i] - p[i - 1]) / (mu[i] - mu[i - 1]) - 1e-12);
  EXPECT_LT(p.front(), 1e-9);
}

TEST(Pressure, DerivativeAtZeroIsCriticalDensity) {
  const auto w = WeightSequence::power(1.0, 2.0);
  const double hstep = 1e-8;
  const double slope = (pressure(kGauss3, w, 0.0, 1e-13).value - pressure(kGauss3, w, -hstep, 1e-13).value) / hstep;
  EXPECT_NEAR(slope, critical_density(kGauss3, w).value, 1e-3);
}

TEST(Pressure, TableOfGaussianAgrees) {
  const auto table = gaussian_as_table(2, 0.5, 40);
  const auto g = Dispersion::gaussian(2, 0.5);
  for (double mu : {-2.0, -0.3, -1e-3, 0.0}) {
    EXPECT_NEAR(pressure(table, WeightSequence::zero(), mu).value, pressure(g, WeightSequence::zero(), mu).value, 1e-9);
  }
}

TEST(PeriodicPressure, ConvergesWithVolume) {
  const auto g1 = Dispersion::gaussian(1, 1.0);
  const auto w = WeightSequence::zero();
  const double p = pressure(g1, w, -1.0, 1e-13).value;
  double prev = INFINITY;
  for (double L : {4.0, 8.0, 16.0}) {
    const double gap = std::abs(pressure_periodic_finite(g1, w, L, -1.0).value - p);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(PeriodicPressure, TruncationAndDominantTerm) {
  const auto g1 = Dispersion::gaussian(1, 1.0);
  const auto w = WeightSequence::power(0.5, 1.0);
  const double one = pressure_periodic_finite(g1, w, 4.0, -1.0, 1e-10, 1).value;
  const double full = pressure_periodic_finite(g1, w, 4.0, -1.0).value;
  EXPECT_LE(one, full);

  const auto z = WeightSequence::zero();
  const double mu = -10.0;
  const double L = 4.0;
  // first term e^mu (1/V) sum_k e^(-eps(k)), with the theta sum done here
  double theta = 0.0;
  for (int j = -50; j <= 50; ++j) theta += std::exp(-4.0 * pi * pi * j * j / (L * L));
  const double lead = std::exp(mu) * theta / L;
  EXPECT_NEAR(pressure_periodic_finite(g1, z, L, mu).value, lead, 10.0 * std::exp(2.0 * mu));
}

TEST(PeriodicPressure, TabulatedMatchesGaussian) {
  const auto table = gaussian_as_table(2, 1.0, 40);
  const auto g = Dispersion::gaussian(2, 1.0);
  const auto w = WeightSequence::power(1.0, 2.0);
  for (double L : {3.0, 6.0}) {
    const auto a = pressure_periodic_finite(table, w, L, -0.5);
    const auto b = pressure_periodic_finite(g, w, L, -0.5);
    EXPECT_NEAR(a.value, b.value, 1e-10);
  }
}

TEST(FreeEnergy, Examples) {
  const auto w = WeightSequence::zero();
  EXPECT_EQ(free_energy(kGauss3, w, 0.0).value, 0.0);
  const double rc = critical_density(kGauss3, w).value;
  const double p0 = pressure(kGauss3, w, 0.0).value;
  const auto sat = free_energy(kGauss3, w, 2.0 * rc);
  EXPECT_TRUE(sat.saturated);
  EXPECT_NEAR(sat.value, -p0, 1e-10);
  EXPECT_NEAR(free_energy(kGauss3, w, 3.0 * rc).value, sat.value, 1e-14);

  const auto half = free_energy(kGauss3, w, 0.5 * rc);
  EXPECT_FALSE(half.saturated);
  EXPECT_NEAR(density(kGauss3, w, half.mu_star).value, 0.5 * rc, 1e-10);
  EXPECT_NEAR(pressure(kGauss3, w, half.mu_star).value, 0.5 * rc * half.mu_star - half.value, 1e-10);
}

TEST(FreeEnergy, LowDimensionAlwaysFindsRoot) {
  const auto g2 = Dispersion::gaussian(2, 1.0);
  const auto q = free_energy(g2, WeightSequence::zero(), 1.0);
  EXPECT_FALSE(q.saturated);
  EXPECT_NEAR(density(g2, WeightSequence::zero(), q.mu_star).value, 1.0, 1e-8);
}

TEST(DualityShift, ZeroShiftExactAndDualityBound) {
  const auto w = WeightSequence::zero();
  const double rc = critical_density(kGauss3, w).value;
  std::vector<double> rho;
  for (int i = 0; i <= 120; ++i) rho.push_back(1.5 * rc * i / 120.0);
  const auto r = duality_and_shift_check(kGauss3, w, {-2.0, -0.5, -0.1}, rho, 0.0);
  EXPECT_TRUE(r.duality_within_bound);
  EXPECT_LT(r.max_pressure_shift_error, 1e-10);
  EXPECT_LT(r.max_free_energy_shift_error, 1e-14);
  EXPECT_TRUE(r.q_convex);
  EXPECT_TRUE(r.p_convex_nondecreasing);
  EXPECT_LT(r.max_flat_slope, 1e-9);
}

TEST(DualityShift, UnitShift) {
  const auto w = WeightSequence::power(1.0, 2.0);
  const auto moved = w.shifted(1.0);
  EXPECT_NEAR(pressure(kGauss3, moved, -0.5, 1e-12, SeriesRoute::direct).value,
              pressure(kGauss3, w, -1.5, 1e-12, SeriesRoute::bose).value, 1e-11);
  const double rc = critical_density(kGauss3, w).value;
  const auto r = duality_and_shift_check(kGauss3, w, {-1.0, -0.5}, {0.0, 0.3 * rc, rc, 1.2 * rc}, 1.0);
  EXPECT_LT(r.max_pressure_shift_error, 1e-10);
  EXPECT_LT(r.max_free_energy_shift_error, 1e-9);
}
