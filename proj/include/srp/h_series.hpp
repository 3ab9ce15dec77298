#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "srp/error.hpp"
#include "srp/weights.hpp"

namespace srp {

/// Normalization h_0..h_{n_max} of the cycle-weighted permutation measure,
///   h_n = (1/n!) sum_{pi in S_n} exp(-sum_l alpha_l r_l(pi)),
/// computed by the recursion h_n = (1/n) sum_{l=1}^n e^(-alpha_l) h_{n-l}.
///
/// Values are kept in plain floating point. If any value leaves
/// [1e-300, 1e300] (large shifts do this) the whole series is recomputed in the
/// log domain and log_domain() reports true; ratios stay exact either way.
class HSeries {
 public:
  static constexpr double kLow = 1e-300;
  static constexpr double kHigh = 1e300;

  HSeries(WeightSequence weights, std::size_t n_max) : weights_(std::move(weights)) {
    log_boltz_.assign(n_max + 1, 0.0);
    boltz_.assign(n_max + 1, 0.0);
    for (std::size_t l = 1; l <= n_max; ++l) {
      log_boltz_[l] = -weights_.alpha(l);
      boltz_[l] = std::exp(log_boltz_[l]);
    }
    compute_plain(n_max);
    bool in_range = std::all_of(values_.begin(), values_.end(), [](double v) {
      return std::isfinite(v) && v >= kLow && v <= kHigh;
    });
    in_range = in_range && std::all_of(boltz_.begin() + 1, boltz_.end(), [](double b) {
      return std::isfinite(b) && b > 0.0;
    });
    if (in_range) {
      log_values_.resize(values_.size());
      std::transform(values_.begin(), values_.end(), log_values_.begin(), [](double v) { return std::log(v); });
    } else {
      log_domain_ = true;
      compute_log(n_max);
      values_.resize(log_values_.size());
      std::transform(log_values_.begin(), log_values_.end(), values_.begin(), [](double v) { return std::exp(v); });
    }

    const auto [lo, hi] = std::minmax_element(log_values_.begin(), log_values_.end());
    ratio_bound_ = std::exp(*hi - *lo);
    if (weights_.summable()) h_inf_ = std::exp(detail::log_h_infinity(weights_));
  }

  const WeightSequence& weights() const noexcept { return weights_; }
  std::size_t n_max() const noexcept { return values_.size() - 1; }
  bool log_domain() const noexcept { return log_domain_; }

  /// h_n (may be 0 or inf when log_domain(); use log_h or ratio then).
  double operator[](std::size_t n) const { return values_.at(n); }
  double log_h(std::size_t n) const { return log_values_.at(n); }
  const std::vector<double>& values() const noexcept { return values_; }

  /// h_m / h_n
  double ratio(std::size_t m, std::size_t n) const {
    if (!log_domain_) return values_.at(m) / values_.at(n);
    return std::exp(log_values_.at(m) - log_values_.at(n));
  }

  /// e^(-alpha_l), 1 <= l <= n_max
  double boltzmann(std::size_t l) const { return boltz_.at(l); }
  double log_boltzmann(std::size_t l) const { return log_boltz_.at(l); }

  /// lim h_n, present iff the weights are summable.
  const std::optional<double>& h_inf() const noexcept { return h_inf_; }

  /// max/min of h over the stored range; a lower bound on sup_{m,n} h_m/h_n.
  double ratio_bound() const noexcept { return ratio_bound_; }

  /// sup_{m,n <= n} h_m/h_n restricted to the first n+1 values.
  double ratio_bound_upto(std::size_t n) const {
    n = std::min(n, n_max());
    const auto [lo, hi] = std::minmax_element(log_values_.begin(), log_values_.begin() + n + 1);
    return std::exp(*hi - *lo);
  }

 private:
  void compute_plain(std::size_t n_max) {
    values_.assign(n_max + 1, 0.0);
    values_[0] = 1.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
      double s = 0.0;
      for (std::size_t l = 1; l <= n; ++l) s += boltz_[l] * values_[n - l];
      values_[n] = s / static_cast<double>(n);
    }
  }

  void compute_log(std::size_t n_max) {
    log_values_.assign(n_max + 1, 0.0);
    std::vector<double> terms;
    for (std::size_t n = 1; n <= n_max; ++n) {
      terms.resize(n);
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t l = 1; l <= n; ++l) {
        terms[l - 1] = log_boltz_[l] + log_values_[n - l];
        top = std::max(top, terms[l - 1]);
      }
      double s = 0.0;
      for (double t : terms) s += std::exp(t - top);
      log_values_[n] = top + std::log(s) - std::log(static_cast<double>(n));
    }
  }

  WeightSequence weights_;
  std::vector<double> values_;
  std::vector<double> log_values_;
  std::vector<double> boltz_;
  std::vector<double> log_boltz_;
  std::optional<double> h_inf_;
  double ratio_bound_ = 1.0;
  bool log_domain_ = false;
};

inline HSeries h_series(const WeightSequence& weights, std::size_t n_max) { return HSeries(weights, n_max); }

/// E_n(N_{a,b}) with b clamped to n and empty ranges giving 0. Internal helper
/// for callers that sweep ranges; expected_cycle_numbers is the checked entry.
inline double expected_points_in_lengths(const HSeries& h, std::size_t n, std::size_t a, std::size_t b) {
  b = std::min(b, n);
  if (n == 0 || a > b) return 0.0;
  a = std::max<std::size_t>(a, 1);
  double s = 0.0;
  if (!h.log_domain()) {
    const double hn = h[n];
    for (std::size_t j = a; j <= b; ++j) s += h.boltzmann(j) * h[n - j];
    return s / hn;
  }
  for (std::size_t j = a; j <= b; ++j) s += std::exp(h.log_boltzmann(j) + h.log_h(n - j) - h.log_h(n));
  return s;
}

/// Expected number of indices in cycles of length a..b under p_n:
///   E_n(N_{a,b}) = sum_{j=a}^b e^(-alpha_j) h_{n-j} / h_n.
inline double expected_cycle_numbers(const HSeries& h, std::size_t n, std::size_t a, std::size_t b) {
  if (n > h.n_max()) throw ValidationError("n = " + std::to_string(n) + " exceeds h-series range " + std::to_string(h.n_max()));
  if (a < 1) throw ValidationError("cycle length range must start at a >= 1");
  if (b > n) throw ValidationError("b = " + std::to_string(b) + " exceeds n = " + std::to_string(n));
  return expected_points_in_lengths(h, n, a, b);
}

/// Law of the length of the cycle containing index 1:
///   p_n(l_1 = j) = e^(-alpha_j) h_{n-j} / (n h_n),  j = 1..n (entry j-1).
inline std::vector<double> first_cycle_length_dist(const HSeries& h, std::size_t n) {
  if (n < 1 || n > h.n_max()) throw ValidationError("first_cycle_length_dist: need 1 <= n <= n_max");
  std::vector<double> p(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 1; j <= n; ++j)
    p[j - 1] = std::exp(h.log_boltzmann(j) + h.log_h(n - j) - h.log_h(n)) * inv_n;
  return p;
}

struct ScanPoint {
  double s;
  double value;  ///< E_n(N_{1, floor(s n)}) / n
};

struct CycleFractionScan {
  std::size_t n;
  bool within_hypothesis;  ///< weights summable
  std::vector<ScanPoint> points;
};

/// Fraction of indices in cycles no longer than s*n, for each s. Converges to
/// s as n grows when the weights are summable.
inline CycleFractionScan cycle_fraction_scan(const HSeries& h, std::size_t n, const std::vector<double>& s_grid) {
  if (n < 1 || n > h.n_max()) throw ValidationError("cycle scan: need 1 <= n <= n_max");
  CycleFractionScan out{n, h.weights().summable(), {}};
  for (double s : s_grid) {
    require(s >= 0.0 && s <= 1.0, "cycle scan: s must lie in [0, 1]");
    const auto b = static_cast<std::size_t>(std::floor(s * static_cast<double>(n) + 1e-9));
    const double value = b == n ? 1.0 : expected_points_in_lengths(h, n, 1, b) / static_cast<double>(n);
    out.points.push_back({s, value});
  }
  return out;
}

}  // namespace srp
