#pragma once

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <random>

namespace srp {

/// Generator used throughout. The helpers below avoid the standard
/// distributions, whose output is implementation-defined, so a seed gives the
/// same stream on every platform.
using Rng = std::mt19937_64;

/// Uniform in [0, 1) with 53 random bits.
template <class G>
double uniform01(G& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform in [0, n) by rejection, n >= 1.
template <class G>
std::size_t uniform_index(G& g, std::size_t n) {
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x;
  do x = g();
  while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

/// Standard normal by Box-Muller.
template <class G>
double standard_normal(G& g) {
  double u = uniform01(g);
  while (u == 0.0) u = uniform01(g);
  const double v = uniform01(g);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

}  // namespace srp
