#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "srp/error.hpp"

namespace srp {

enum class TailKind { zero, power, logdecay };

inline const char* to_string(TailKind kind) {
  switch (kind) {
    case TailKind::zero: return "zero";
    case TailKind::power: return "power";
    case TailKind::logdecay: return "logdecay";
  }
  return "zero";
}

inline TailKind tail_kind_from_string(const std::string& name) {
  if (name == "zero") return TailKind::zero;
  if (name == "power") return TailKind::power;
  if (name == "logdecay") return TailKind::logdecay;
  throw ValidationError("unknown tail kind '" + name + "'");
}

/// Rule for cycle weights beyond the explicit list:
///   zero         alpha_l = 0
///   power(c,p)   alpha_l = c * l^(-p)
///   logdecay(c,p) alpha_l = c / (log l)^p
struct Tail {
  TailKind kind = TailKind::zero;
  double c = 0.0;
  double p = 0.0;
};

/// Cycle weights alpha_1, alpha_2, ... : an explicit head, a tail rule, and an
/// optional linear shift alpha_l -> alpha_l + shift * l. Immutable.
class WeightSequence {
 public:
  WeightSequence() = default;

  explicit WeightSequence(std::vector<double> explicit_values, Tail tail = {}, double shift = 0.0)
      : explicit_(std::move(explicit_values)), tail_(tail), shift_(shift) {
    for (double a : explicit_) require(std::isfinite(a), "cycle weights must be finite");
    require(std::isfinite(tail_.c) && std::isfinite(tail_.p), "tail parameters must be finite");
    require(std::isfinite(shift_), "shift must be finite");
    if (tail_.kind == TailKind::logdecay && tail_.c != 0.0)
      require(!explicit_.empty(), "logdecay tail is undefined at l = 1; give alpha_1 explicitly");
  }

  static WeightSequence zero() { return WeightSequence{}; }
  static WeightSequence power(double c, double p) { return WeightSequence({}, {TailKind::power, c, p}); }
  static WeightSequence first_only(double alpha1) { return WeightSequence({alpha1}); }

  const std::vector<double>& explicit_values() const noexcept { return explicit_; }
  const Tail& tail() const noexcept { return tail_; }
  double shift() const noexcept { return shift_; }
  std::size_t head_length() const noexcept { return explicit_.size(); }

  /// alpha_l without the linear shift.
  double base_alpha(std::size_t ell) const {
    if (ell == 0) throw ValidationError("cycle lengths start at 1");
    if (ell <= explicit_.size()) return explicit_[ell - 1];
    return tail_value(static_cast<double>(ell));
  }

  double alpha(std::size_t ell) const { return base_alpha(ell) + shift_ * static_cast<double>(ell); }

  /// e^(-alpha_l)
  double boltzmann(std::size_t ell) const { return std::exp(-alpha(ell)); }

  WeightSequence shifted(double c) const { return WeightSequence(explicit_, tail_, shift_ + c); }

  WeightSequence unshifted() const { return WeightSequence(explicit_, tail_, 0.0); }

  bool identically_zero() const {
    if (shift_ != 0.0) return false;
    if (std::any_of(explicit_.begin(), explicit_.end(), [](double a) { return a != 0.0; })) return false;
    return tail_.kind == TailKind::zero || tail_.c == 0.0;
  }

  /// Whether base alpha_l -> 0, so that e^(-alpha_l) - 1 is eventually small.
  bool tail_vanishing() const {
    switch (tail_.kind) {
      case TailKind::zero: return true;
      case TailKind::power: return tail_.c == 0.0 || tail_.p > 0.0;
      case TailKind::logdecay: return tail_.c == 0.0 || tail_.p > 0.0;
    }
    return false;
  }

  /// Truth of sum_l |1 - e^(-alpha_l)| / l < infinity, decided from the tail rule.
  bool summable() const {
    if (shift_ != 0.0) return false;
    if (tail_.c == 0.0) return true;
    switch (tail_.kind) {
      case TailKind::zero: return true;
      case TailKind::power: return tail_.p > 0.0;
      case TailKind::logdecay: return tail_.p > 1.0;
    }
    return false;
  }

  /// inf_l base_alpha(l); may be -infinity.
  double base_infimum() const {
    double lo = explicit_.empty() ? std::numeric_limits<double>::infinity()
                                  : *std::min_element(explicit_.begin(), explicit_.end());
    const auto [first, limit] = tail_first_and_limit();
    return std::min({lo, first, limit});
  }

  /// sup over l > n of |base_alpha(l)|, valid for n >= head_length(). The tail
  /// families are monotone in l, so the supremum sits at l = n+1 or at infinity.
  double tail_abs_bound(std::size_t n) const {
    n = std::max(n, explicit_.size());
    if (tail_.kind == TailKind::zero || tail_.c == 0.0) return 0.0;
    const double first = std::abs(tail_value(static_cast<double>(n + 1)));
    return std::max(first, std::abs(tail_limit()));
  }

 private:
  double tail_value(double ell) const {
    switch (tail_.kind) {
      case TailKind::zero: return 0.0;
      case TailKind::power: return tail_.c == 0.0 ? 0.0 : tail_.c * std::pow(ell, -tail_.p);
      case TailKind::logdecay:
        if (tail_.c == 0.0) return 0.0;
        return tail_.c / std::pow(std::log(ell), tail_.p);
    }
    return 0.0;
  }

  double tail_limit() const {
    if (tail_.kind == TailKind::zero || tail_.c == 0.0) return 0.0;
    if (tail_.p > 0.0) return 0.0;
    if (tail_.p == 0.0) return tail_.c;
    return tail_.c > 0.0 ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  }

  std::pair<double, double> tail_first_and_limit() const {
    const double first = tail_value(static_cast<double>(explicit_.size() + 1));
    return {first, tail_limit()};
  }

  std::vector<double> explicit_;
  Tail tail_;
  double shift_ = 0.0;
};

namespace detail {

/// sum_{l >= 1} (e^(-alpha_l) - 1) / l for summable weights, i.e. log h_inf.
/// Head summed exactly; tail by direct summation to M, then Euler-Maclaurin
/// with the integral in closed form (series in powers of c).
inline double log_h_infinity(const WeightSequence& w) {
  const Tail& t = w.tail();
  const std::size_t head = w.head_length();
  double sum = 0.0;
  for (std::size_t l = 1; l <= head; ++l) sum += std::expm1(-w.base_alpha(l)) / static_cast<double>(l);
  if (t.kind == TailKind::zero || t.c == 0.0) return sum;

  auto f = [&](double x) { return std::expm1(-w.base_alpha(static_cast<std::size_t>(x))) / x; };
  // g(x) = log-weight exponent, f(x) = (e^(-a(x)) - 1)/x with a(x) smooth in x.
  auto a_of = [&](double x) {
    return t.kind == TailKind::power ? t.c * std::pow(x, -t.p) : t.c / std::pow(std::log(x), t.p);
  };
  auto a_prime = [&](double x) {
    return t.kind == TailKind::power ? -t.p * t.c * std::pow(x, -t.p - 1.0)
                                     : -t.p * t.c * std::pow(std::log(x), -t.p - 1.0) / x;
  };
  auto f_prime = [&](double x) {
    const double a = a_of(x);
    return -std::exp(-a) * a_prime(x) / x - std::expm1(-a) / (x * x);
  };

  // Pick M so that |c| * scale^(-p) <= 1/2 keeps the integral series tame.
  double m_real = 1000.0;
  if (t.kind == TailKind::power) {
    m_real = std::max(m_real, std::pow(2.0 * std::abs(t.c), 1.0 / t.p));
  } else {
    m_real = std::max(m_real, std::exp(std::pow(2.0 * std::abs(t.c), 1.0 / t.p)));
  }
  m_real = std::max(m_real, static_cast<double>(head + 2));
  if (m_real > 5.0e7)
    throw CertificateError("h_inf: tail summation cutoff exceeds 5e7 terms");
  const auto m = static_cast<std::size_t>(std::ceil(m_real));

  for (std::size_t l = head + 1; l < m; ++l) sum += f(static_cast<double>(l));

  // integral_M^inf f(x) dx = sum_k (-c)^k / k! * J_k
  //   power:    J_k = M^(-pk) / (pk)
  //   logdecay: J_k = T^(1-pk) / (pk - 1), T = log M
  const double M = static_cast<double>(m);
  double integral = 0.0;
  double coeff = 1.0;
  for (int k = 1; k < 200; ++k) {
    coeff *= -t.c / k;
    double term = 0.0;
    if (t.kind == TailKind::power) {
      term = coeff * std::pow(M, -t.p * k) / (t.p * k);
    } else {
      const double T = std::log(M);
      term = coeff * std::pow(T, 1.0 - t.p * k) / (t.p * k - 1.0);
    }
    integral += term;
    if (std::abs(term) < 1e-18 * (std::abs(integral) + 1e-300)) break;
  }
  sum += integral + 0.5 * f(M) - f_prime(M) / 12.0;
  return sum;
}

}  // namespace detail

}  // namespace srp
