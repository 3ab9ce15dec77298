#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "srp/error.hpp"
#include "srp/h_series.hpp"
#include "srp/weights.hpp"

namespace srp {

/// Order-n coefficients of exp(A(s)) by literally summing A^k / k!, with
/// A(s) = sum_{m>=1} a_m s^m. This is the composition-sum form of h_n and is
/// O(n^3); it shares no arithmetic with the first-order recurrence.
inline std::vector<double> exp_series_by_powers(const std::vector<double>& a, std::size_t n_max) {
  std::vector<double> out(n_max + 1, 0.0);
  out[0] = 1.0;
  std::vector<double> q(n_max + 1, 0.0);  // A^k / k!
  std::vector<double> next(n_max + 1, 0.0);
  q[0] = 1.0;
  for (std::size_t k = 1; k <= n_max; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = k - 1; i <= n_max; ++i) {
      if (q[i] == 0.0) continue;
      for (std::size_t m = 1; i + m <= n_max; ++m) next[i + m] += q[i] * a[m];
    }
    const double inv_k = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i <= n_max; ++i) q[i] = next[i] * inv_k;
    for (std::size_t i = k; i <= n_max; ++i) out[i] += q[i];
  }
  return out;
}

/// Coefficients of exp(A(s)) from F' = A' F:  n f_n = sum_k k a_k f_{n-k}.
inline std::vector<double> exp_series_by_recurrence(const std::vector<double>& a, std::size_t n_max) {
  std::vector<double> f(n_max + 1, 0.0);
  f[0] = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += static_cast<double>(k) * a[k] * f[n - k];
    f[n] = s / static_cast<double>(n);
  }
  return f;
}

struct LaplaceCheck {
  double gamma = 0.0;
  std::size_t terms = 0;         ///< h_n summed for n <= terms
  double lhs = 0.0;              ///< truncated sum_n e^(-gamma n) h_n
  double rhs = 0.0;              ///< exp sum_j e^(-gamma j - alpha_j) / j
  double truncation_bound = 0.0; ///< bound on the omitted parts of both sides
  double residual = 0.0;         ///< |lhs - rhs|
  double relative_residual = 0.0;
  bool applicable = true;
};

struct BoundChecks {
  bool factorial_bound = true;   ///< h_n >= e^(-n alpha_1) / n!
  bool last_cycle_bound = true;  ///< h_n >= e^(-alpha_n) / n
  bool subadditive = false;      ///< alpha subadditive on the computed range
  bool superadditive = false;
  bool subadditive_bound = true;   ///< h_n <= e^(-alpha_n), checked when subadditive
  bool superadditive_bound = true; ///< h_n >= e^(-alpha_n), checked when superadditive
  bool all_hold() const {
    return factorial_bound && last_cycle_bound && subadditive_bound && superadditive_bound;
  }
};

struct HCrosscheckReport {
  std::size_t n_max = 0;
  std::size_t explicit_route_n = 0;  ///< composition sum evaluated for n <= this
  std::vector<double> recursion;     ///< first-order recursion
  std::vector<double> explicit_sum;  ///< composition sum
  std::vector<double> increments;    ///< cumulative sum of increments
  double max_abs_explicit = 0.0;
  double max_rel_explicit = 0.0;
  double max_abs_increments = 0.0;
  double max_rel_increments = 0.0;
  double uniform_max_abs = 0.0;      ///< max |h_n - 1| when alpha == 0
  LaplaceCheck laplace;
  BoundChecks bounds;
};

namespace detail {

/// Upper bound on h_n for weights with base alpha_l >= a_min for all l: by
/// monotonicity in alpha, h_n <= [s^n] (1-s)^(-theta) with theta = e^(-a_min).
inline double h_upper_log(std::size_t n, double theta) {
  const double nn = static_cast<double>(n);
  return std::lgamma(nn + theta) - std::lgamma(theta) - std::lgamma(nn + 1.0);
}

inline LaplaceCheck laplace_identity(const WeightSequence& w, double gamma) {
  LaplaceCheck out;
  out.gamma = gamma;
  const double g_eff = gamma + w.shift();
  const double a_min = w.base_infimum();
  if (!(g_eff > 0.0) || !std::isfinite(a_min)) {
    out.applicable = false;
    return out;
  }
  const double theta = std::exp(-a_min);
  const double target = 1e-16;

  // right side: sum_j e^(-gamma j - alpha_j) / j, tail <= theta e^(-g J)/(J (1-e^-g))
  double log_rhs = 0.0;
  double rhs_tail = 0.0;
  for (std::size_t j = 1;; ++j) {
    log_rhs += std::exp(-gamma * static_cast<double>(j) - w.alpha(j)) / static_cast<double>(j);
    const double jj = static_cast<double>(j + 1);
    rhs_tail = theta * std::exp(-g_eff * jj) / (jj * -std::expm1(-g_eff));
    if (j >= w.head_length() && rhs_tail < target) break;
    if (j > 50'000'000) throw CertificateError("laplace identity: right side did not converge");
  }
  out.rhs = std::exp(log_rhs);

  // left side: choose the number of terms from the a-priori bound on h_n.
  auto tail_term_log = [&](std::size_t n) { return -g_eff * static_cast<double>(n) + h_upper_log(n, theta); };
  std::size_t n_terms = 8;
  auto lhs_tail = [&](std::size_t n0) {
    // terms beyond n0 are eventually geometric with ratio <= e^-g (n+theta)/(n+1)
    double s = 0.0;
    for (std::size_t n = n0 + 1; n < n0 + 100000; ++n) {
      const double t = std::exp(tail_term_log(n));
      s += t;
      const double ratio = std::exp(-g_eff) * (static_cast<double>(n) + theta) / static_cast<double>(n + 1);
      if (ratio < 1.0 && t * ratio / (1.0 - ratio) < 1e-3 * s + 1e-300) {
        s += t * ratio / (1.0 - ratio);
        break;
      }
    }
    return s;
  };
  while (lhs_tail(n_terms) > target * out.rhs) n_terms *= 2;
  const HSeries h(w, n_terms);
  double lhs = 0.0;
  for (std::size_t n = 0; n <= n_terms; ++n) lhs += std::exp(-gamma * static_cast<double>(n) + h.log_h(n));
  out.terms = n_terms;
  out.lhs = lhs;
  out.truncation_bound = lhs_tail(n_terms) + out.rhs * std::expm1(rhs_tail);
  out.residual = std::abs(out.lhs - out.rhs);
  out.relative_residual = out.residual / out.rhs;
  return out;
}

}  // namespace detail

/// Recompute h_n through independent routes and check the exact identities
/// and inequalities relating them:
///   first-order recursion (HSeries)
///   sum over compositions, exp(sum e^(-alpha_m) s^m/m) expanded by powers
///   increments h_n - h_{n-1} from exp(sum (e^(-alpha_m)-1) s^m/m), summed
///   Laplace: sum_n e^(-gamma n) h_n = exp sum_j e^(-gamma j - alpha_j)/j
///   lower/upper bounds on h_n from the recursion and sub/superadditivity.
/// The composition sum is cubic in n and is evaluated up to n = min(n_max, 400).
inline HCrosscheckReport h_crosscheck(const WeightSequence& weights, std::size_t n_max, double gamma) {
  require(n_max >= 1, "h_crosscheck: n_max must be >= 1");
  require(gamma > 0.0, "h_crosscheck: gamma must be positive");
  HCrosscheckReport r;
  r.n_max = n_max;
  const HSeries h(weights, n_max);
  r.recursion = h.values();

  const std::size_t nb = std::min<std::size_t>(n_max, 400);
  r.explicit_route_n = nb;
  std::vector<double> a(nb + 1, 0.0);
  for (std::size_t m = 1; m <= nb; ++m) a[m] = weights.boltzmann(m) / static_cast<double>(m);
  r.explicit_sum = exp_series_by_powers(a, nb);

  std::vector<double> a_inc(n_max + 1, 0.0);
  for (std::size_t m = 1; m <= n_max; ++m) a_inc[m] = std::expm1(-weights.alpha(m)) / static_cast<double>(m);
  const auto delta = exp_series_by_recurrence(a_inc, n_max);
  r.increments.assign(n_max + 1, 0.0);
  double cum = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    cum += delta[n];
    r.increments[n] = cum;
  }

  for (std::size_t n = 0; n <= n_max; ++n) {
    const double ref = r.recursion[n];
    if (n <= nb) {
      const double d = std::abs(r.explicit_sum[n] - ref);
      r.max_abs_explicit = std::max(r.max_abs_explicit, d);
      r.max_rel_explicit = std::max(r.max_rel_explicit, d / std::abs(ref));
    }
    const double d = std::abs(r.increments[n] - ref);
    r.max_abs_increments = std::max(r.max_abs_increments, d);
    r.max_rel_increments = std::max(r.max_rel_increments, d / std::abs(ref));
    if (weights.identically_zero()) r.uniform_max_abs = std::max(r.uniform_max_abs, std::abs(ref - 1.0));
  }

  r.laplace = detail::laplace_identity(weights, gamma);

  // inequalities, compared in the log domain with a relative slack of 1e-12
  const double slack = 1e-12;
  const double a1 = weights.alpha(1);
  bool sub = true;
  bool super = true;
  for (std::size_t i = 1; i <= n_max; ++i)
    for (std::size_t j = i; i + j <= n_max; ++j) {
      const double lhs = weights.alpha(i + j);
      const double rhs = weights.alpha(i) + weights.alpha(j);
      const double tol = 1e-14 * (1.0 + std::abs(rhs));
      if (lhs > rhs + tol) sub = false;
      if (lhs < rhs - tol) super = false;
    }
  r.bounds.subadditive = sub;
  r.bounds.superadditive = super;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double lh = h.log_h(n);
    const double nn = static_cast<double>(n);
    if (lh < -nn * a1 - std::lgamma(nn + 1.0) - slack) r.bounds.factorial_bound = false;
    if (lh < -weights.alpha(n) - std::log(nn) - slack) r.bounds.last_cycle_bound = false;
    if (sub && lh > -weights.alpha(n) + slack) r.bounds.subadditive_bound = false;
    if (super && lh < -weights.alpha(n) - slack) r.bounds.superadditive_bound = false;
  }
  return r;
}

struct ShiftCovarianceReport {
  double c = 0.0;
  std::size_t n_max = 0;
  double max_rel_h = 0.0;     ///< max_n |h_n(shifted) e^(cn) / h_n - 1|
  double max_abs_dist = 0.0;  ///< max over n, j of |p_n(l_1=j) shifted - original|
};

/// h_n(alpha + c l) = e^(-cn) h_n(alpha), and the first-cycle law is unchanged.
inline ShiftCovarianceReport shift_covariance_check(const WeightSequence& weights, double c, std::size_t n_max) {
  require(n_max >= 1, "shift_covariance_check: n_max must be >= 1");
  ShiftCovarianceReport r{c, n_max, 0.0, 0.0};
  const HSeries base(weights, n_max);
  const HSeries moved(weights.shifted(c), n_max);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double rel = std::expm1(moved.log_h(n) + c * static_cast<double>(n) - base.log_h(n));
    r.max_rel_h = std::max(r.max_rel_h, std::abs(rel));
  }
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto p = first_cycle_length_dist(base, n);
    const auto q = first_cycle_length_dist(moved, n);
    for (std::size_t j = 0; j < n; ++j) r.max_abs_dist = std::max(r.max_abs_dist, std::abs(p[j] - q[j]));
  }
  return r;
}

}  // namespace srp
