#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "srp/error.hpp"

namespace srp {

enum class DispersionKind { gaussian, tabulated };

inline const char* to_string(DispersionKind kind) {
  return kind == DispersionKind::gaussian ? "gaussian" : "tabulated";
}

/// Radial dispersion relation eps(k) on R^d.
///
/// gaussian:  eps(k) = 4 pi^2 beta |k|^2.
/// tabulated: knots (k_i, eps_i) with k_0 = 0, eps_0 = 0, interpolated linearly
///            in |k|^2 and continued past the last knot with the last slope.
///            The user declares (a, radius) with eps(k) >= a |k|^2 for
///            |k| <= radius; the knots inside the radius are checked.
class Dispersion {
 public:
  static Dispersion gaussian(int d, double beta) {
    require(d >= 1, "dispersion: dimension must be >= 1");
    require(std::isfinite(beta) && beta > 0.0, "dispersion: beta must be positive");
    Dispersion out;
    out.kind_ = DispersionKind::gaussian;
    out.d_ = d;
    out.beta_ = beta;
    out.a_decl_ = 4.0 * std::numbers::pi * std::numbers::pi * beta;
    out.radius_ = std::numeric_limits<double>::infinity();
    out.a_glob_ = out.a_decl_;
    return out;
  }

  static Dispersion tabulated(int d, std::vector<double> k, std::vector<double> eps, double a, double radius) {
    require(d >= 1, "dispersion: dimension must be >= 1");
    require(k.size() == eps.size() && k.size() >= 2, "tabulated dispersion needs at least two knots of equal length");
    require(k[0] == 0.0 && eps[0] == 0.0, "tabulated dispersion must start at (0, 0)");
    require(std::isfinite(a) && a > 0.0, "tabulated dispersion: quadratic coefficient a must be positive");
    require(radius > 0.0, "tabulated dispersion: radius must be positive");
    for (std::size_t i = 1; i < k.size(); ++i) {
      require(std::isfinite(k[i]) && std::isfinite(eps[i]), "tabulated dispersion: knots must be finite");
      require(k[i] > k[i - 1], "tabulated dispersion: |k| knots must be strictly increasing");
      require(eps[i] >= eps[i - 1], "tabulated dispersion: eps must be nondecreasing in |k|");
    }
    Dispersion out;
    out.kind_ = DispersionKind::tabulated;
    out.d_ = d;
    out.a_decl_ = a;
    out.radius_ = radius;
    out.k_ = std::move(k);
    out.eps_ = std::move(eps);
    const std::size_t m = out.k_.size();
    out.u_.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.u_[i] = out.k_[i] * out.k_[i];
    out.slope_.resize(m);
    for (std::size_t i = 0; i + 1 < m; ++i) out.slope_[i] = (out.eps_[i + 1] - out.eps_[i]) / (out.u_[i + 1] - out.u_[i]);
    out.slope_[m - 1] = out.slope_[m - 2];
    require(out.slope_[m - 1] > 0.0, "tabulated dispersion: last segment must be increasing so eps grows at large |k|");

    for (std::size_t i = 1; i < m; ++i)
      if (out.k_[i] <= radius && out.eps_[i] < a * out.u_[i] * (1.0 - 1e-12))
        throw ValidationError("tabulated dispersion: eps(" + num(out.k_[i]) + ") = " +
                              num(out.eps_[i]) + " violates declared bound a|k|^2");
    // eps and a*u are both linear in u between knots, so the knots decide the
    // best global quadratic minorant.
    double g = out.slope_[m - 1];
    for (std::size_t i = 1; i < m; ++i) g = std::min(g, out.eps_[i] / out.u_[i]);
    require(g > 0.0, "tabulated dispersion: eps must be positive away from k = 0");
    out.a_glob_ = g;
    return out;
  }

  DispersionKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return d_; }
  double beta() const noexcept { return beta_; }
  double declared_a() const noexcept { return a_decl_; }
  double declared_radius() const noexcept { return radius_; }
  const std::vector<double>& knots_k() const noexcept { return k_; }
  const std::vector<double>& knots_eps() const noexcept { return eps_; }

  /// a > 0 with eps(k) >= a |k|^2 for every k.
  double global_quadratic_bound() const noexcept { return a_glob_; }

  /// eps as a function of u = |k|^2.
  double eps_of_k2(double u) const {
    if (kind_ == DispersionKind::gaussian) return a_decl_ * u;
    const std::size_t i = segment(u);
    return eps_[i] + slope_[i] * (u - u_[i]);
  }

  double operator()(double k_abs) const { return eps_of_k2(k_abs * k_abs); }

  /// Knot radii strictly inside (0, inf); empty for the gaussian kind.
  std::vector<double> breakpoints() const {
    if (k_.size() <= 1) return {};
    return std::vector<double>(k_.begin() + 1, k_.end());
  }

  /// |S^(d-1)| = 2 pi^(d/2) / Gamma(d/2)
  double sphere_area() const {
    const double h = 0.5 * d_;
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
  }

  /// I(t) = int_{R^d} e^(-t eps(k)) dk for t > 0.
  ///
  /// Exact for both kinds: on each segment eps is affine in u = |k|^2, and
  /// |S^(d-1)| r^(d-1) dr = |S^(d-1)|/2 u^(d/2-1) du, which integrates to
  /// incomplete gamma functions.
  double mode_integral(double t) const {
    require(t > 0.0, "mode_integral: t must be positive");
    const double h = 0.5 * d_;
    if (kind_ == DispersionKind::gaussian) return std::pow(4.0 * std::numbers::pi * beta_ * t, -h);
    const double pref = 0.5 * sphere_area() * std::tgamma(h);
    double total = 0.0;
    const std::size_t m = u_.size();
    for (std::size_t i = 0; i < m; ++i) {
      const double lam = t * slope_[i];
      const double lo = u_[i];
      const double hi = i + 1 < m ? u_[i + 1] : std::numeric_limits<double>::infinity();
      if (lam == 0.0) {
        // flat segment: eps = eps_i
        total += std::exp(-t * eps_[i]) * (std::pow(hi, h) - std::pow(lo, h)) / (h * std::tgamma(h));
        continue;
      }
      // e^(-t (eps_i - s_i u_i)) lam^(-h) [Gamma-fraction between lam*lo and lam*hi]
      const double x0 = lam * lo;
      const double x1 = lam * hi;
      double frac;
      if (x0 > h) {
        const double q0 = boost::math::gamma_q(h, x0);
        const double q1 = std::isinf(x1) ? 0.0 : boost::math::gamma_q(h, x1);
        frac = q0 - q1;
      } else {
        const double p1 = std::isinf(x1) ? 1.0 : boost::math::gamma_p(h, x1);
        frac = p1 - boost::math::gamma_p(h, x0);
      }
      if (frac <= 0.0) continue;
      total += std::exp(-t * (eps_[i] - slope_[i] * lo) + std::log(frac) - h * std::log(lam));
    }
    return pref * total;
  }

  /// C with I(t) <= C t^(-d/2) for all t > 0.
  double mode_integral_constant() const {
    const double h = 0.5 * d_;
    if (kind_ == DispersionKind::gaussian) return std::pow(4.0 * std::numbers::pi * beta_, -h);
    return std::pow(std::numbers::pi / a_glob_, h);
  }

 private:
  std::size_t segment(double u) const {
    const auto it = std::upper_bound(u_.begin(), u_.end(), u);
    const auto idx = static_cast<std::size_t>(it - u_.begin());
    return idx == 0 ? 0 : idx - 1;
  }

  DispersionKind kind_ = DispersionKind::gaussian;
  int d_ = 1;
  double beta_ = 0.0;
  double a_decl_ = 0.0;
  double radius_ = 0.0;
  double a_glob_ = 0.0;
  std::vector<double> k_, eps_, u_, slope_;
};

}  // namespace srp
