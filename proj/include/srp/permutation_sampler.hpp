#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "srp/error.hpp"
#include "srp/h_series.hpp"
#include "srp/random.hpp"

namespace srp {

/// A cycle type (multiset of cycle lengths, sorted descending) with an optional
/// labeled permutation realizing it. perm[i] is the image of i.
struct CycleTypeSample {
  std::size_t n = 0;
  std::vector<std::size_t> cycle_lengths;
  std::optional<std::vector<std::size_t>> permutation;
};

/// Cycle lengths of a permutation, sorted descending.
inline std::vector<std::size_t> cycle_type_of(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> lengths;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  return lengths;
}

/// Exact draw from p_n. The cycle through the smallest unassigned element gets
/// length j with probability p_m(l_1 = j) (m unassigned elements); its j-1
/// companions are an ordered uniform selection from the other m-1 elements.
template <class G>
CycleTypeSample sample_permutation(const HSeries& h, std::size_t n, G& rng, bool labeled = false) {
  if (n > h.n_max()) throw ValidationError("sample_permutation: n exceeds h-series range");
  CycleTypeSample out;
  out.n = n;

  std::vector<std::size_t> remaining;
  std::vector<std::size_t> perm;
  if (labeled) {
    remaining.resize(n);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    perm.assign(n, 0);
  }

  std::size_t m = n;
  while (m > 0) {
    // inverse-CDF scan over j = 1..m
    const double u = uniform01(rng);
    const double inv_m = 1.0 / static_cast<double>(m);
    double acc = 0.0;
    std::size_t len = m;
    for (std::size_t j = 1; j <= m; ++j) {
      acc += std::exp(h.log_boltzmann(j) + h.log_h(m - j) - h.log_h(m)) * inv_m;
      if (u < acc) {
        len = j;
        break;
      }
    }
    out.cycle_lengths.push_back(len);

    if (labeled) {
      // remaining[0] is the smallest unassigned element; keep the rest ordered
      // by moving chosen companions to the front via partial Fisher-Yates.
      std::sort(remaining.begin(), remaining.end());
      const std::size_t head = remaining.front();
      for (std::size_t t = 1; t < len; ++t) {
        std::swap(remaining[t], remaining[t + uniform_index(rng, m - t)]);
      }
      std::size_t prev = head;
      for (std::size_t t = 1; t < len; ++t) {
        perm[prev] = remaining[t];
        prev = remaining[t];
      }
      perm[prev] = head;
      remaining.erase(remaining.begin(), remaining.begin() + static_cast<std::ptrdiff_t>(len));
    }
    m -= len;
  }
  std::sort(out.cycle_lengths.begin(), out.cycle_lengths.end(), std::greater<>());
  if (labeled) out.permutation = std::move(perm);
  return out;
}

}  // namespace srp
