#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "srp/cycle_enumeration.hpp"
#include "srp/h_identities.hpp"
#include "srp/h_series.hpp"
#include "srp/permutation_sampler.hpp"
#include "srp/weights.hpp"

using namespace srp;

namespace {

// Brute force over S_n with std::next_permutation: h_n and E_n(l * r_l).
struct Brute {
  double h;
  std::vector<double> mean_points;
};

Brute brute_force(const WeightSequence& w, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double total = 0.0;
  std::vector<double> acc(n + 1, 0.0);
  double n_fact = 1.0;
  do {
    const auto lengths = cycle_type_of(perm);
    double e = 0.0;
    for (auto l : lengths) e += w.alpha(l);
    const double wt = std::exp(-e);
    total += wt;
    for (auto l : lengths) acc[l] += wt * static_cast<double>(l);
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t k = 2; k <= n; ++k) n_fact *= static_cast<double>(k);
  Brute b{total / n_fact, std::vector<double>(n + 1, 0.0)};
  for (std::size_t l = 1; l <= n; ++l) b.mean_points[l] = acc[l] / total;
  return b;
}

WeightSequence random_weights(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_int_distribution<int> kind(0, 2);
  std::vector<double> head(static_cast<std::size_t>(len(rng)));
  for (auto& a : head) a = u(rng);
  Tail t;
  switch (kind(rng)) {
    case 0: t = {TailKind::zero, 0.0, 0.0}; break;
    case 1: t = {TailKind::power, u(rng), 0.5 + std::abs(u(rng))}; break;
    default:
      if (head.empty()) head.push_back(u(rng));
      t = {TailKind::logdecay, u(rng), 1.5};
  }
  return WeightSequence(head, t);
}

const double kLn2 = std::log(2.0);

}  // namespace

TEST(WeightSequence, TailFamiliesAndShift) {
  const auto w = WeightSequence({0.3}, {TailKind::power, 2.0, 1.0});
  EXPECT_DOUBLE_EQ(w.alpha(1), 0.3);
  EXPECT_DOUBLE_EQ(w.alpha(4), 0.5);
  const auto s = w.shifted(0.25);
  EXPECT_DOUBLE_EQ(s.alpha(4), 0.5 + 1.0);
  EXPECT_FALSE(s.summable());
  EXPECT_TRUE(w.summable());
  EXPECT_FALSE(WeightSequence({1.0}, {TailKind::logdecay, 1.0, 1.0}).summable());
  EXPECT_TRUE(WeightSequence({1.0}, {TailKind::logdecay, 1.0, 2.0}).summable());
  EXPECT_FALSE(WeightSequence::power(1.0, -0.5).summable());
  EXPECT_THROW(WeightSequence({}, {TailKind::logdecay, 1.0, 2.0}), ValidationError);
  EXPECT_THROW(WeightSequence({std::nan("")}), ValidationError);
}

TEST(WeightSequence, InfimumAndTailBound) {
  const auto w = WeightSequence({0.5, -0.2}, {TailKind::power, -1.0, 2.0});
  // tail starts at l = 3: -1/9, increasing to 0
  EXPECT_DOUBLE_EQ(w.base_infimum(), -0.2);
  EXPECT_NEAR(w.tail_abs_bound(2), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(w.tail_abs_bound(9), 1.0 / 100.0, 1e-15);
  EXPECT_EQ(WeightSequence::power(-1.0, -1.0).base_infimum(), -INFINITY);
}

TEST(HSeries, UniformCaseIsAllOnes) {
  const auto h = h_series(WeightSequence::zero(), 5);
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_DOUBLE_EQ(h[n], 1.0);
  ASSERT_TRUE(h.h_inf().has_value());
  EXPECT_DOUBLE_EQ(*h.h_inf(), 1.0);
  EXPECT_DOUBLE_EQ(h.ratio_bound(), 1.0);
}

TEST(HSeries, FirstWeightLn2MatchesBruteForce) {
  const auto w = WeightSequence::first_only(kLn2);
  const auto h = h_series(w, 2);
  EXPECT_NEAR(h[1], 0.5, 1e-15);
  EXPECT_NEAR(h[2], 5.0 / 8.0, 1e-15);
  EXPECT_NEAR(brute_force(w, 2).h, 5.0 / 8.0, 1e-15);
}

TEST(HSeries, HInfinityAndConvergence) {
  const auto w = WeightSequence::power(1.0, 2.0);
  const auto h = h_series(w, 20);
  // sum_l (e^(-1/l^2) - 1)/l = sum_k (-1)^k zeta(2k+1) / k!
  double s = 0.0;
  double fact = 1.0;
  for (int k = 1; k < 30; ++k) {
    fact *= k;
    s += (k % 2 ? -1.0 : 1.0) * boost::math::zeta(2.0 * k + 1.0) / fact;
  }
  ASSERT_TRUE(h.h_inf().has_value());
  EXPECT_NEAR(*h.h_inf(), std::exp(s), 1e-14);
  EXPECT_LT(std::abs(h[20] - *h.h_inf()), std::abs(h[10] - *h.h_inf()));
}

TEST(HSeries, HInfinityLogDecayTail) {
  const double c = 0.5, p = 2.5;
  const auto w = WeightSequence({0.4}, {TailKind::logdecay, c, p});
  // compensated direct sum to 2e6 plus the first two orders of the integral tail
  long double s = std::expm1(-0.4L);
  long double comp = 0.0L;
  const std::size_t big = 2'000'000;
  for (std::size_t l = 2; l <= big; ++l) {
    const long double x = static_cast<long double>(l);
    const long double term = std::expm1(-c / std::pow(std::log(x), p)) / x - comp;
    const long double t = s + term;
    comp = (t - s) - term;
    s = t;
  }
  const double T = std::log(static_cast<double>(big) + 0.5);
  s += -c * std::pow(T, 1.0 - p) / (p - 1.0) + 0.5 * c * c * std::pow(T, 1.0 - 2.0 * p) / (2.0 * p - 1.0);
  const auto h = h_series(w, 3000);
  ASSERT_TRUE(h.h_inf().has_value());
  EXPECT_NEAR(*h.h_inf(), std::exp(static_cast<double>(s)), 1e-6);
  // the recursion converges slowly, but it does converge toward the same value
  EXPECT_LT(std::abs(h[3000] - *h.h_inf()), std::abs(h[300] - *h.h_inf()));
  EXPECT_LT(std::abs(h[3000] - *h.h_inf()), 1e-2);
}

TEST(HSeries, NonSummableHasNoLimit) {
  const auto h = h_series(WeightSequence({1.0}, {TailKind::logdecay, 1.0, 1.0}), 10);
  EXPECT_FALSE(h.h_inf().has_value());
}

TEST(HSeries, LargeShiftFallsBackToLogDomain) {
  const auto w = WeightSequence::power(1.0, 2.0);
  const auto h = h_series(w.shifted(20.0), 60);
  EXPECT_TRUE(h.log_domain());
  const auto base = h_series(w, 60);
  for (std::size_t n = 0; n <= 60; ++n) EXPECT_NEAR(h.log_h(n) + 20.0 * n, base.log_h(n), 1e-10);
}

TEST(CycleNumbers, SumRuleAndUniformCase) {
  const auto h = h_series(WeightSequence::power(1.0, 2.0), 50);
  for (std::size_t n = 1; n <= 50; ++n)
    EXPECT_NEAR(expected_cycle_numbers(h, n, 1, n), static_cast<double>(n), 1e-9 * n);
  const auto u = h_series(WeightSequence::zero(), 12);
  EXPECT_NEAR(expected_cycle_numbers(u, 12, 3, 7), 5.0, 1e-13);
}

TEST(CycleNumbers, FirstWeightLn2) {
  const auto h = h_series(WeightSequence::first_only(kLn2), 2);
  EXPECT_NEAR(expected_cycle_numbers(h, 2, 1, 1), 0.4, 1e-15);
  const auto p = first_cycle_length_dist(h, 2);
  EXPECT_NEAR(p[0], 0.2, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
}

TEST(CycleNumbers, RangeErrors) {
  const auto h = h_series(WeightSequence::zero(), 5);
  EXPECT_THROW(expected_cycle_numbers(h, 5, 1, 6), ValidationError);
  EXPECT_THROW(expected_cycle_numbers(h, 6, 1, 6), ValidationError);
  EXPECT_THROW(expected_cycle_numbers(h, 5, 0, 2), ValidationError);
  EXPECT_THROW(first_cycle_length_dist(h, 0), ValidationError);
}

TEST(FirstCycleDist, UniformAndSingleton) {
  const auto h = h_series(WeightSequence::zero(), 7);
  for (double p : first_cycle_length_dist(h, 7)) EXPECT_NEAR(p, 1.0 / 7.0, 1e-15);
  const auto one = first_cycle_length_dist(h_series(WeightSequence::power(1.0, 2.0), 1), 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0], 1.0);
}

TEST(FirstCycleDist, PropertyNormalized) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto w = random_weights(rng);
    const auto h = h_series(w, 60);
    for (std::size_t n : {1u, 2u, 17u, 60u}) {
      const auto p = first_cycle_length_dist(h, n);
      const double total = std::accumulate(p.begin(), p.end(), 0.0);
      EXPECT_NEAR(total, 1.0, 1e-12);
      for (double x : p) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(Oracle, BruteForceAgreesWithPartitionSum) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = random_weights(rng);
    for (std::size_t n = 1; n <= 7; ++n) {
      const auto brute = brute_force(w, n);
      const auto oracle = enumerate_oracle(w, n);
      EXPECT_NEAR(oracle.h_n / brute.h, 1.0, 1e-12);
      for (std::size_t l = 1; l <= n; ++l) EXPECT_NEAR(oracle.mean_points[l], brute.mean_points[l], 1e-12);
    }
  }
}

TEST(Oracle, ExamplesAndCap) {
  EXPECT_NEAR(enumerate_oracle(WeightSequence::zero(), 8).h_n, 1.0, 1e-14);
  EXPECT_NEAR(enumerate_oracle(WeightSequence::first_only(kLn2), 2).h_n, 5.0 / 8.0, 1e-15);
  const auto w = WeightSequence::power(1.0, 2.0);
  EXPECT_NEAR(enumerate_oracle(w, 10).h_n / h_series(w, 10)[10], 1.0, 1e-10);
  EXPECT_THROW(enumerate_oracle(w, 61), ValidationError);
}

TEST(Oracle, PropertyRecursionMatchesEnumeration) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    const auto w = random_weights(rng);
    const auto h = h_series(w, 22);
    for (std::size_t n : {5u, 13u, 22u}) {
      const auto o = enumerate_oracle(w, n);
      EXPECT_NEAR(o.h_n / h[n], 1.0, 1e-10);
      for (std::size_t a = 1; a <= n; a += 3)
        for (std::size_t b = a; b <= n; b += 2)
          EXPECT_NEAR(o.expected(a, b), expected_cycle_numbers(h, n, a, b), 1e-10 * n);
    }
  }
}

TEST(Monotonicity, IncreasingAnyWeightDoesNotIncreaseH) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> bump(0.01, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = random_weights(rng);
    const std::size_t n_max = 25;
    const auto base = h_series(w, n_max);
    std::vector<double> head(n_max);
    for (std::size_t l = 1; l <= n_max; ++l) head[l - 1] = w.alpha(l);
    const std::size_t which = 1 + static_cast<std::size_t>(rng() % n_max);
    head[which - 1] += bump(rng);
    const auto raised = h_series(WeightSequence(head, {}), n_max);
    for (std::size_t n = 0; n <= n_max; ++n) EXPECT_LE(raised[n], base[n] * (1.0 + 1e-13));
  }
}

TEST(Crosscheck, UniformCompositionSumIsOne) {
  const auto r = h_crosscheck(WeightSequence::zero(), 40, 0.5);
  for (std::size_t n = 1; n <= 40; ++n) EXPECT_NEAR(r.explicit_sum[n], 1.0, 1e-12);
  EXPECT_LT(r.uniform_max_abs, 1e-13);
  EXPECT_TRUE(r.bounds.subadditive);
  EXPECT_TRUE(r.bounds.superadditive);
  EXPECT_TRUE(r.bounds.all_hold());
}

TEST(Crosscheck, RoutesAgreeAndLaplaceHolds) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 15; ++trial) {
    const auto w = random_weights(rng);
    const auto r = h_crosscheck(w, 30, 0.5);
    EXPECT_LT(r.max_rel_explicit, 1e-10);
    EXPECT_LT(r.max_rel_increments, 1e-10);
    ASSERT_TRUE(r.laplace.applicable);
    EXPECT_LE(r.laplace.residual, r.laplace.truncation_bound + 1e-12 * r.laplace.rhs);
    EXPECT_TRUE(r.bounds.all_hold());
  }
}

TEST(Crosscheck, LaplaceIdentityPowerWeights) {
  const auto r = h_crosscheck(WeightSequence::power(1.0, 2.0), 30, 0.5);
  // independent right side
  double s = 0.0;
  for (int j = 1; j < 200; ++j) s += std::exp(-0.5 * j - 1.0 / (double(j) * j)) / j;
  EXPECT_NEAR(r.laplace.rhs, std::exp(s), 1e-13);
  EXPECT_LT(r.laplace.relative_residual, 1e-12);
}

TEST(Crosscheck, SubadditiveBound) {
  // alpha_l = sqrt(l) is subadditive
  std::vector<double> head(40);
  for (std::size_t l = 1; l <= 40; ++l) head[l - 1] = std::sqrt(static_cast<double>(l));
  const auto r = h_crosscheck(WeightSequence(head), 40, 1.0);
  EXPECT_TRUE(r.bounds.subadditive);
  EXPECT_FALSE(r.bounds.superadditive);
  EXPECT_TRUE(r.bounds.subadditive_bound);
  // alpha_l = l^2 / 10 is superadditive
  for (std::size_t l = 1; l <= 40; ++l) head[l - 1] = 0.1 * static_cast<double>(l * l);
  const auto q = h_crosscheck(WeightSequence(head), 40, 1.0);
  EXPECT_TRUE(q.bounds.superadditive);
  EXPECT_TRUE(q.bounds.superadditive_bound);
}

TEST(ShiftCovariance, Examples) {
  const auto zero_shift = shift_covariance_check(WeightSequence::power(1.0, 2.0), 0.0, 30);
  EXPECT_EQ(zero_shift.max_rel_h, 0.0);
  EXPECT_EQ(zero_shift.max_abs_dist, 0.0);

  const auto h = h_series(WeightSequence::zero().shifted(1.0), 20);
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_NEAR(h[n], std::exp(-double(n)), 1e-14 * std::exp(-double(n)));

  const auto r = shift_covariance_check(WeightSequence::power(1.0, 2.0), 0.3, 60);
  EXPECT_LT(r.max_rel_h, 1e-10);
  EXPECT_LT(r.max_abs_dist, 1e-12);
}

TEST(CycleFraction, EndpointsAndScan) {
  const auto h = h_series(WeightSequence::power(1.0, 2.0), 1000);
  const auto scan = cycle_fraction_scan(h, 1000, {0.0, 0.5, 1.0});
  EXPECT_TRUE(scan.within_hypothesis);
  EXPECT_EQ(scan.points[0].value, 0.0);
  EXPECT_EQ(scan.points[2].value, 1.0);
  EXPECT_NEAR(scan.points[1].value, 0.5, 0.05);
  const auto flagged = cycle_fraction_scan(h_series(WeightSequence({1.0}, {TailKind::logdecay, 1.0, 0.5}), 10), 10, {0.5});
  EXPECT_FALSE(flagged.within_hypothesis);
  EXPECT_THROW(cycle_fraction_scan(h, 1000, {1.5}), ValidationError);
}

TEST(Sampler, SingletonAndCycleTypeConsistency) {
  std::mt19937_64 rng(1);
  const auto h = h_series(WeightSequence::power(0.7, 1.0), 30);
  const auto one = sample_permutation(h, 1, rng, true);
  ASSERT_EQ(one.cycle_lengths.size(), 1u);
  EXPECT_EQ(one.cycle_lengths[0], 1u);
  for (int i = 0; i < 200; ++i) {
    const auto s = sample_permutation(h, 30, rng, true);
    EXPECT_EQ(std::accumulate(s.cycle_lengths.begin(), s.cycle_lengths.end(), std::size_t{0}), 30u);
    ASSERT_TRUE(s.permutation.has_value());
    EXPECT_EQ(cycle_type_of(*s.permutation), s.cycle_lengths);
  }
}

TEST(Sampler, UniformFirstCycleLength) {
  std::mt19937_64 rng(2024);
  const auto h = h_series(WeightSequence::zero(), 4);
  const int draws = 100000;
  std::vector<int> count(5, 0);
  for (int i = 0; i < draws; ++i) {
    const auto s = sample_permutation(h, 4, rng, true);
    const auto& p = *s.permutation;
    std::size_t len = 1;
    for (std::size_t j = p[0]; j != 0; j = p[j]) ++len;
    ++count[len];
  }
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (int j = 1; j <= 4; ++j) EXPECT_LT(std::abs(count[j] - draws * 0.25), 3.0 * sigma);
}

TEST(Sampler, FirstWeightLn2Frequencies) {
  std::mt19937_64 rng(99);
  const auto h = h_series(WeightSequence::first_only(kLn2), 2);
  const int draws = 100000;
  int transpositions = 0;
  for (int i = 0; i < draws; ++i) transpositions += sample_permutation(h, 2, rng).cycle_lengths.size() == 1;
  const double sigma = std::sqrt(draws * 0.8 * 0.2);
  EXPECT_LT(std::abs(transpositions - 0.8 * draws), 3.0 * sigma);
}

TEST(Sampler, ChiSquareAgainstOracle) {
  std::mt19937_64 rng(123456);
  const std::vector<WeightSequence> families = {WeightSequence::zero(), WeightSequence::power(1.0, 2.0),
                                                WeightSequence({0.5, -0.4, 1.2, 0.0, 2.0})};
  for (const auto& w : families) {
    for (std::size_t n = 2; n <= 6; ++n) {
      const auto exact = cycle_type_distribution(w, n);
      const auto h = h_series(w, n);
      std::map<std::vector<std::size_t>, int> freq;
      const int draws = 100000;
      for (int i = 0; i < draws; ++i) ++freq[sample_permutation(h, n, rng).cycle_lengths];
      double chi2 = 0.0;
      for (const auto& c : exact) {
        const double expected = c.probability * draws;
        const double d = freq[c.lengths] - expected;
        chi2 += d * d / expected;
      }
      const double df = static_cast<double>(exact.size() - 1);
      const double p_value = boost::math::gamma_q(df / 2.0, chi2 / 2.0);
      EXPECT_GT(p_value, 1e-3) << "n=" << n << " chi2=" << chi2;
    }
  }
}
