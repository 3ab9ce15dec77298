#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <vector>

#include "srp/dispersion.hpp"
#include "srp/error.hpp"
#include "srp/fourier.hpp"
#include "srp/h_series.hpp"
#include "srp/permutation_sampler.hpp"
#include "srp/spatial.hpp"

namespace srp {

/// Small one-dimensional instance compared across the two representations.
struct CrossValidateCase {
  double L = 4.0;
  double beta = 1.0;
  std::size_t N = 2;
  WeightSequence weights;
  std::size_t grid = 0;  ///< trapezoid points per axis; 0 picks one from the aliasing bound
  bool run_mc = true;
  MCParams mc;
};

/// For one permutation: the integral of prod_i e^(-xi_L(x_i - x_pi(i))) over
/// [0, L)^N against the lattice sum prod_cycles sum_k e^(-l eps(k)).
struct PermutationCheck {
  std::vector<std::size_t> perm;
  std::vector<std::size_t> lengths;
  double integral = 0.0;
  double lattice_sum = 0.0;
  double quadrature_bound = 0.0;
  double truncation_bound = 0.0;
  double difference = 0.0;
  bool agree = false;
  double certificate() const { return quadrature_bound + truncation_bound; }
};

struct McComparison {
  std::size_t a = 0, b = 0;
  double exact = 0.0;
  double mean = 0.0;
  double error = 0.0;
  double tau_int = 0.0;
  double z = 0.0;
  bool within_3sigma = false;
};

struct CrossValidateReport {
  std::size_t grid = 0;
  std::vector<PermutationCheck> permutations;
  double max_certificate = 0.0;
  bool integrals_agree = true;
  std::vector<McComparison> mc;
  bool mc_agree = true;
  double transposition_acceptance = 0.0;
  double displacement_acceptance = 0.0;
};

namespace detail {

/// sum_{|m| <= M} e^(-g m^2) with M large enough that the rest is below
/// 1e-17 of the sum; returns (sum, rest bound).
inline std::pair<double, double> theta_sum(double g) {
  long M = 0;
  for (;;) {
    const auto [box, rest] = theta_box(g, M);
    if (rest <= 1e-17 * box) return {box, rest};
    ++M;
  }
}

/// Bound on the trapezoid (n points per axis) error: some mode index needs
/// |m| >= n/2 for a nonzero alias.
inline double aliasing_bound(double g, std::size_t n, std::size_t N) {
  const auto [theta, rest] = theta_sum(g);
  const long half = static_cast<long>((n + 1) / 2);
  const auto [box, beyond] = theta_box(g, half - 1);
  (void)box;
  return static_cast<double>(N) * beyond * std::pow(theta + rest, static_cast<double>(N) - 1.0);
}

}  // namespace detail

inline CrossValidateReport cross_validate(const CrossValidateCase& c) {
  require(c.N >= 1 && c.N <= 3, "cross_validate: need 1 <= N <= 3");
  const XiPotential pot(1, c.beta, c.L);
  const double a = 4.0 * std::numbers::pi * std::numbers::pi * c.beta;
  const double g = a / (c.L * c.L);
  const auto [theta1, rest1] = detail::theta_sum(g);

  CrossValidateReport rep;
  std::size_t n = c.grid;
  if (n == 0) {
    n = 4;
    while (detail::aliasing_bound(g, n, c.N) > 1e-12 * std::pow(theta1, static_cast<double>(c.N)) && n < 4096) n *= 2;
  }
  require(std::pow(static_cast<double>(n), static_cast<double>(c.N)) <= 5e7, "cross_validate: quadrature grid too large");
  rep.grid = n;
  const double h = c.L / static_cast<double>(n);
  const double R = pot.axis_relative_remainder();

  std::vector<std::size_t> perm(c.N);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    PermutationCheck pc;
    pc.perm = perm;
    pc.lengths = cycle_type_of(perm);

    // trapezoid over the N-torus
    std::vector<std::size_t> idx(c.N, 0);
    std::vector<double> x(c.N);
    double sum = 0.0;
    for (;;) {
      for (std::size_t i = 0; i < c.N; ++i) x[i] = h * static_cast<double>(idx[i]);
      double e = 0.0;
      for (std::size_t i = 0; i < c.N; ++i) e += pot.difference(&x[i], &x[perm[i]]);
      sum += std::exp(-e);
      std::size_t k = 0;
      while (k < c.N && idx[k] == n - 1) idx[k++] = 0;
      if (k == c.N) break;
      ++idx[k];
    }
    pc.integral = sum * std::pow(h, static_cast<double>(c.N));

    double prod = 1.0, prod_hi = 1.0;
    for (auto l : pc.lengths) {
      const auto [th, rest] = detail::theta_sum(g * static_cast<double>(l));
      prod *= th;
      prod_hi *= th + rest;
    }
    pc.lattice_sum = prod;
    pc.truncation_bound = prod_hi - prod;
    pc.quadrature_bound = detail::aliasing_bound(g, n, c.N) +
                          pc.integral * std::expm1(static_cast<double>(c.N) * std::log1p(R)) +
                          1e-13 * pc.integral;
    pc.difference = std::abs(pc.integral - pc.lattice_sum);
    pc.agree = pc.difference <= pc.certificate();
    rep.max_certificate = std::max(rep.max_certificate, pc.certificate());
    rep.integrals_agree = rep.integrals_agree && pc.agree;
    rep.permutations.push_back(pc);
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (!c.run_mc) return rep;

  // exact Fourier values
  const auto lat = build_lattice(c.L, Dispersion::gaussian(1, c.beta), 60.0, 1e-14);
  const auto hs = h_series(c.weights, c.N);
  const PartitionTables t(lat, hs, c.N);
  const auto mm = mode_marginals(t);

  MCParams p = c.mc;
  p.ranges.clear();
  for (std::size_t lo = 1; lo <= c.N; ++lo)
    for (std::size_t hi = lo; hi <= c.N; ++hi) p.ranges.emplace_back(lo, hi);
  Rng init(p.seed ^ 0x9e3779b97f4a7c15ULL);
  auto state = SpatialState::random(pot, c.weights, c.N, init);
  const auto chain = run_chain(state, p);
  rep.transposition_acceptance = chain.transposition_acceptance;
  rep.displacement_acceptance = chain.displacement_acceptance;
  for (std::size_t r = 0; r < p.ranges.size(); ++r) {
    McComparison mc;
    mc.a = p.ranges[r].first;
    mc.b = p.ranges[r].second;
    mc.exact = cycle_density_expectation(t, mm, mc.a, mc.b);
    const auto& st = chain.summary.at(2 + r).stats;
    mc.mean = st.mean;
    mc.error = st.error;
    mc.tau_int = st.tau_int;
    const double diff = std::abs(mc.mean - mc.exact);
    // constant observables (e.g. a = 1, b = N) carry no noise
    mc.z = mc.error > 0.0 ? diff / mc.error : (diff <= 1e-9 * std::abs(mc.exact) ? 0.0 : INFINITY);
    mc.within_3sigma = mc.z <= 3.0;
    rep.mc_agree = rep.mc_agree && mc.within_3sigma;
    rep.mc.push_back(mc);
  }
  return rep;
}

}  // namespace srp
