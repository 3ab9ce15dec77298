#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "srp/error.hpp"
#include "srp/weights.hpp"

namespace srp {

inline constexpr std::size_t kPartitionOracleCap = 60;

/// Visit every integer partition of n as a multiplicity vector r (r[l] = number
/// of parts equal to l, index 0 unused).
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> r(n + 1, 0);
  // parts chosen in non-increasing order
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t max_part) {
    if (left == 0) {
      visit(r);
      return;
    }
    for (std::size_t part = std::min(left, max_part); part >= 1; --part) {
      ++r[part];
      rec(left - part, part);
      --r[part];
    }
  };
  rec(n, n);
}

/// Exact statistics of p_n by summing over cycle types with multiplicities
/// n! / prod_l l^(r_l) r_l!, independent of the h_n recursion.
struct CycleOracle {
  std::size_t n = 0;
  double h_n = 1.0;
  /// mean_points[l] = E_n(l * r_l), l = 1..n
  std::vector<double> mean_points;

  /// E_n(N_{a,b})
  double expected(std::size_t a, std::size_t b) const {
    double s = 0.0;
    for (std::size_t l = std::max<std::size_t>(a, 1); l <= std::min(b, n); ++l) s += mean_points[l];
    return s;
  }
};

namespace detail {
inline double cycle_type_weight(const WeightSequence& w, const std::vector<std::size_t>& r) {
  double log_w = 0.0;
  for (std::size_t l = 1; l < r.size(); ++l) {
    if (r[l] == 0) continue;
    const double rl = static_cast<double>(r[l]);
    log_w += rl * (-w.alpha(l) - std::log(static_cast<double>(l))) - std::lgamma(rl + 1.0);
  }
  return std::exp(log_w);
}
}  // namespace detail

inline CycleOracle enumerate_oracle(const WeightSequence& weights, std::size_t n) {
  if (n > kPartitionOracleCap)
    throw ValidationError("enumerate_oracle: n = " + std::to_string(n) + " above partition cap " +
                          std::to_string(kPartitionOracleCap));
  CycleOracle out;
  out.n = n;
  out.mean_points.assign(n + 1, 0.0);
  if (n == 0) return out;
  double total = 0.0;
  std::vector<double> acc(n + 1, 0.0);
  for_each_partition(n, [&](const std::vector<std::size_t>& r) {
    const double wt = detail::cycle_type_weight(weights, r);
    total += wt;
    for (std::size_t l = 1; l <= n; ++l)
      if (r[l] != 0) acc[l] += wt * static_cast<double>(l * r[l]);
  });
  out.h_n = total;
  for (std::size_t l = 1; l <= n; ++l) out.mean_points[l] = acc[l] / total;
  return out;
}

struct CycleTypeProbability {
  std::vector<std::size_t> lengths;  ///< descending
  double probability;
};

/// Exact law of the cycle type under p_n.
inline std::vector<CycleTypeProbability> cycle_type_distribution(const WeightSequence& weights, std::size_t n) {
  if (n > kPartitionOracleCap) throw ValidationError("cycle_type_distribution: n above partition cap");
  std::vector<CycleTypeProbability> out;
  double total = 0.0;
  for_each_partition(n, [&](const std::vector<std::size_t>& r) {
    CycleTypeProbability c;
    for (std::size_t l = n; l >= 1; --l)
      for (std::size_t k = 0; k < r[l]; ++k) c.lengths.push_back(l);
    c.probability = detail::cycle_type_weight(weights, r);
    total += c.probability;
    out.push_back(std::move(c));
  });
  for (auto& c : out) c.probability /= total;
  return out;
}

}  // namespace srp
