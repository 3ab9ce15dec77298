#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace srp {

struct AutocorrEstimate {
  double mean = 0.0;
  double variance = 0.0;
  double tau_int = 0.5;
  std::size_t window = 0;
  double error = 0.0;  ///< sqrt(2 tau_int variance / n)
};

/// Integrated autocorrelation time with the self-consistent window
/// W >= c tau_int(W).
inline AutocorrEstimate integrated_autocorrelation(const std::vector<double>& x, double c = 6.0) {
  AutocorrEstimate out;
  const std::size_t n = x.size();
  if (n == 0) return out;
  double s = 0.0;
  for (double v : x) s += v;
  out.mean = s / static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - out.mean) * (v - out.mean);
  var /= static_cast<double>(n);
  out.variance = var;
  if (n < 2 || var == 0.0) return out;
  double tau = 0.5;
  std::size_t t = 1;
  for (; t < n / 2; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) acc += (x[i] - out.mean) * (x[i + t] - out.mean);
    tau += acc / (static_cast<double>(n - t) * var);
    if (static_cast<double>(t) >= c * tau) break;
  }
  out.tau_int = std::max(tau, 0.5);
  out.window = t;
  out.error = std::sqrt(2.0 * out.tau_int * var / static_cast<double>(n));
  return out;
}

}  // namespace srp
