#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "srp/dispersion.hpp"
#include "srp/error.hpp"
#include "srp/weights.hpp"

namespace srp {

/// A thermodynamic quantity with an error bound; infinite marks +infinity.
struct ThermoValue {
  double value = 0.0;
  double error = 0.0;
  bool infinite = false;
  std::size_t terms = 0;  ///< series terms summed explicitly
};

/// How S_m(mu) = sum_n e^(mu n - alpha_n) I_n n^(-m) is evaluated.
///   direct: truncated series with a geometric tail bound (needs mu_eff < 0)
///   bose:   the alpha = 0 part as one radial integral of the Bose kernel,
///           plus the series of (e^(-alpha_n) - 1) corrections
enum class SeriesRoute { automatic, direct, bose };

namespace detail {

inline constexpr std::size_t kMaxSeriesTerms = 10'000'000;

/// sum_{n>=1} e^(-x n) n^(-m), x >= 0, for m = 0 (Bose) and m = 1 (log).
inline double bose_kernel(int m, double x) {
  if (m == 0) return 1.0 / std::expm1(x);
  return -std::log(-std::expm1(-x));
}

inline void require_thermo_weights(const WeightSequence& w) {
  require(w.tail_vanishing(), "thermodynamics needs cycle weights whose tail tends to 0");
}

/// Bound on sum_{n > N} e^(mu n) |e^(-beta_n) - 1| C n^(-q), beta the unshifted
/// weights, N >= head length, mu <= 0. Infinite when no bound applies.
inline double correction_tail_bound(const WeightSequence& w, std::size_t N, double mu, double C, double q) {
  const Tail& t = w.tail();
  if (t.kind == TailKind::zero || t.c == 0.0) return 0.0;
  const double A = w.tail_abs_bound(N);
  const double growth = std::exp(A);
  const double n1 = static_cast<double>(N + 1);
  double best = std::numeric_limits<double>::infinity();
  if (mu < 0.0) best = A * growth * C * std::pow(n1, -q) * std::exp(mu * n1) / -std::expm1(mu);
  const double nn = static_cast<double>(N);
  if (t.kind == TailKind::power && t.p + q > 1.0)
    best = std::min(best, growth * std::abs(t.c) * C * std::pow(nn, 1.0 - t.p - q) / (t.p + q - 1.0));
  if (q > 1.0) best = std::min(best, A * growth * C * std::pow(nn, 1.0 - q) / (q - 1.0));
  return best;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive bisection over the 31-point Gauss-Kronrod rule until each piece's
/// |K - G| is below its share of abs_tol. The fixed rule is called directly:
/// Boost 1.74's own recursion leaves subinterval errors unscaled.
template <class F>
QuadResult adaptive_gauss_kronrod(const F& f, double a, double b, double abs_tol, int depth = 30) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  double l1 = 0.0;
  const double v = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  err *= 0.5 * (b - a);
  if (err <= abs_tol || err <= 4e-16 * l1 || depth == 0) return {v, err};
  const double mid = 0.5 * (a + b);
  const auto left = adaptive_gauss_kronrod(f, a, mid, 0.5 * abs_tol, depth - 1);
  const auto right = adaptive_gauss_kronrod(f, mid, b, 0.5 * abs_tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

/// int_{R^d} sum_n e^((mu - eps) n) n^(-m) dk by radial quadrature, mu <= 0.
inline ThermoValue bose_integral(const Dispersion& disp, int m, double mu, double tol) {
  const int d = disp.dimension();
  const double h = 0.5 * d;
  const double S = disp.sphere_area();
  const double a = disp.global_quadratic_bound();

  // for r >= R: eps - mu >= a r^2, kernel <= e^(-a r^2) / (1 - e^(-a R^2))
  double R2 = 1.0 / a;
  auto tail_at = [&](double r2) {
    return S / -std::expm1(-a * r2) * 0.5 * std::pow(a, -h) * boost::math::tgamma(h, a * r2);
  };
  while (tail_at(R2) > 0.25 * tol) R2 *= 2.0;
  const double R = std::sqrt(R2);
  ThermoValue out;
  out.error = tail_at(R2);

  auto f = [&](double r) {
    // below r = 1e-150 the integrand is at most logarithmic in r
    if (r < 1e-150) return 0.0;
    const double x = disp(r) - mu;
    if (!(x > 0.0)) return 0.0;
    return S * std::pow(r, d - 1) * bose_kernel(m, x);
  };

  std::vector<double> cuts;
  for (double s = 1.0 / 64.0; s * s / a < R2; s *= 2.0) cuts.push_back(s / std::sqrt(a));
  for (double k : disp.breakpoints())
    if (k < R) cuts.push_back(k);
  cuts.push_back(R);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // at mu = 0 the first piece may carry an endpoint singularity at k = 0
  const double piece_tol = 0.25 * tol / static_cast<double>(cuts.size());
  if (mu == 0.0) {
    boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    double l1 = 0.0;
    out.value = ts.integrate(f, 0.0, cuts.front(), 1e-14, &err, &l1);
    out.error += err + 1e-15 * l1;
  } else {
    const auto q = adaptive_gauss_kronrod(f, 0.0, cuts.front(), piece_tol);
    out.value = q.value;
    out.error += q.error;
  }
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto q = adaptive_gauss_kronrod(f, cuts[i], cuts[i + 1], piece_tol);
    out.value += q.value;
    out.error += q.error;
  }
  if (!(out.error <= tol))
    throw CertificateError("radial quadrature did not reach tolerance: error " + num(out.error) +
                           " > " + num(tol) + " (m = " + std::to_string(m) + ", mu = " +
                           num(mu) + ")");
  return out;
}

/// Number of direct-series terms needed for the geometric tail to drop below tol.
inline double direct_terms_estimate(const Dispersion& disp, double mu_eff, double tol) {
  if (!(mu_eff < 0.0)) return std::numeric_limits<double>::infinity();
  const double C = disp.mode_integral_constant();
  return std::max(1.0, std::log(tol * -std::expm1(mu_eff) / C) / mu_eff);
}

inline ThermoValue series_direct(const Dispersion& disp, const WeightSequence& w, int m, double mu_eff, double tol) {
  require(mu_eff < 0.0, "direct series needs mu below the shift");
  const double h = 0.5 * disp.dimension();
  const double C = disp.mode_integral_constant();
  ThermoValue out;
  double s = 0.0;
  for (std::size_t n = 1;; ++n) {
    const double nn = static_cast<double>(n);
    s += std::exp(mu_eff * nn - w.base_alpha(n)) * disp.mode_integral(nn) * std::pow(nn, -m);
    if (n >= w.head_length() && (n % 16 == 0 || n < 16)) {
      const double n1 = nn + 1.0;
      const double tail = std::exp(w.tail_abs_bound(n)) * C * std::pow(n1, -h - m) * std::exp(mu_eff * n1) /
                          -std::expm1(mu_eff);
      if (tail < 0.5 * tol) {
        out.value = s;
        out.error = tail + 1e-15 * s * std::sqrt(nn);
        out.terms = n;
        return out;
      }
    }
    if (n > kMaxSeriesTerms) throw CertificateError("direct series: tail bound not met within term cap");
  }
}

inline ThermoValue series_bose(const Dispersion& disp, const WeightSequence& w, int m, double mu_eff, double tol) {
  const double h = 0.5 * disp.dimension();
  const double C = disp.mode_integral_constant();
  ThermoValue out = bose_integral(disp, m, mu_eff, 0.5 * tol);
  if (w.unshifted().identically_zero()) return out;
  double s = 0.0;
  std::size_t n = 1;
  for (;; ++n) {
    const double nn = static_cast<double>(n);
    s += std::exp(mu_eff * nn) * std::expm1(-w.base_alpha(n)) * disp.mode_integral(nn) * std::pow(nn, -m);
    if (n >= w.head_length() && (n < 64 || n % 64 == 0)) {
      const double tail = correction_tail_bound(w, n, mu_eff, C, h + m);
      if (tail < 0.25 * tol) {
        out.error += tail + 1e-15 * std::abs(s) * std::sqrt(nn);
        break;
      }
    }
    if (n > kMaxSeriesTerms)
      throw CertificateError("weight-correction series: tail bound not met within " +
                             std::to_string(kMaxSeriesTerms) + " terms");
  }
  out.value += s;
  out.terms = n;
  return out;
}

/// S_m(mu) = sum_n e^(mu n - alpha_n) I_n n^(-m); m = 0 density, m = 1 pressure.
inline ThermoValue series_value(const Dispersion& disp, const WeightSequence& w, int m, double mu, double tol,
                                SeriesRoute route) {
  require(tol > 0.0, "tolerance must be positive");
  require(std::isfinite(mu), "mu must be finite");
  require_thermo_weights(w);
  const double mu_eff = mu - w.shift();
  ThermoValue out;
  if (mu_eff > 0.0 || (mu_eff == 0.0 && m == 0 && disp.dimension() <= 2)) {
    out.infinite = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  if (route == SeriesRoute::automatic)
    route = direct_terms_estimate(disp, mu_eff, tol) <= 5000.0 ? SeriesRoute::direct : SeriesRoute::bose;
  if (route == SeriesRoute::direct) return series_direct(disp, w, m, mu_eff, tol);
  return series_bose(disp, w, m, mu_eff, tol);
}

}  // namespace detail

/// Largest mu with finite pressure: the weight shift (0 for unshifted weights).
inline double mu_max(const WeightSequence& w) { return w.shift(); }

/// rho_c = sum_n e^(-alpha_n) int e^(-n eps(k)) dk, or infinite.
inline ThermoValue critical_density(const Dispersion& disp, const WeightSequence& w, double tol = 1e-10) {
  return detail::series_value(disp, w, 0, 0.0, tol, w.shift() == 0.0 ? SeriesRoute::bose : SeriesRoute::automatic);
}

/// Density at the top of the pressure domain, sum_n e^(-beta_n) int e^(-n eps)
/// with beta the unshifted weights. Above it the free energy is linear in rho.
/// Equal to critical_density for unshifted weights.
inline ThermoValue saturation_density(const Dispersion& disp, const WeightSequence& w, double tol = 1e-10) {
  return detail::series_value(disp, w, 0, mu_max(w), tol, SeriesRoute::bose);
}

/// p(mu) = sum_n e^(mu n - alpha_n)/n int e^(-n eps(k)) dk. Infinite above the
/// shift; at mu = shift the value is the increasing limit.
inline ThermoValue pressure(const Dispersion& disp, const WeightSequence& w, double mu, double tol = 1e-10,
                            SeriesRoute route = SeriesRoute::automatic) {
  return detail::series_value(disp, w, 1, mu, tol, route);
}

/// rho(mu) = dp/dmu = sum_n e^(mu n - alpha_n) int e^(-n eps(k)) dk.
inline ThermoValue density(const Dispersion& disp, const WeightSequence& w, double mu, double tol = 1e-10,
                           SeriesRoute route = SeriesRoute::automatic) {
  return detail::series_value(disp, w, 0, mu, tol, route);
}

struct FreeEnergyValue {
  double rho = 0.0;
  double value = 0.0;    ///< q(rho)
  double error = 0.0;
  double mu_star = 0.0;  ///< maximizer; -infinity at rho = 0
  bool saturated = false;  ///< rho >= rho_c, maximizer at the top of the domain
};

namespace detail {

inline FreeEnergyValue free_energy_given(const Dispersion& disp, const WeightSequence& w, double rho, double tol,
                                         const ThermoValue& rc) {
  require(std::isfinite(rho) && rho >= 0.0, "free energy: rho must be a nonnegative real");
  FreeEnergyValue out;
  out.rho = rho;
  if (rho == 0.0) {
    out.mu_star = -std::numeric_limits<double>::infinity();
    return out;
  }
  const double top = mu_max(w);
  if (!rc.infinite && rho >= rc.value) {
    const ThermoValue p = pressure(disp, w, top, tol);
    out.value = rho * top - p.value;
    out.error = p.error;
    out.mu_star = top;
    out.saturated = true;
    return out;
  }

  auto g = [&](double mu) { return density(disp, w, mu, tol).value - rho; };
  double hi = top;
  double g_hi = rc.infinite ? std::numeric_limits<double>::infinity() : rc.value - rho;
  if (rc.infinite) {
    for (int k = 0;; ++k) {
      hi = top - std::ldexp(1.0, -k);
      g_hi = g(hi);
      if (g_hi > 0.0) break;
      if (k > 60)
        throw CertificateError("free energy: unbounded mu search, density below " + num(rho) +
                               " at mu = shift - 2^-60");
    }
  }
  double lo = hi - 1.0;
  double g_lo = g(lo);
  for (double step = 2.0; g_lo > 0.0; step *= 2.0) {
    hi = lo;
    g_hi = g_lo;
    lo = top - step;
    g_lo = g(lo);
    if (step > 1e6) throw CertificateError("free energy: could not bracket mu for rho = " + num(rho));
  }
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi,
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
  const double mu = 0.5 * (a + b);
  const ThermoValue p = pressure(disp, w, mu, tol);
  out.mu_star = mu;
  out.value = rho * mu - p.value;
  // q is stationary in mu at the maximizer, so the root error enters only
  // through the residual slope times the bracket width
  out.error = p.error + std::abs(g(mu)) * (b - a + 1e-15 * std::abs(mu));
  return out;
}

}  // namespace detail

/// q(rho) = sup_{mu <= shift} [rho mu - p(mu)]. For rho >= saturation_density the supremum
/// sits at mu = shift and q continues linearly (flat for unshifted weights).
inline FreeEnergyValue free_energy(const Dispersion& disp, const WeightSequence& w, double rho, double tol = 1e-10) {
  return detail::free_energy_given(disp, w, rho, tol, saturation_density(disp, w, tol));
}

struct CurvePoint {
  double x = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool infinite = false;
};

inline std::vector<CurvePoint> pressure_curve(const Dispersion& disp, const WeightSequence& w,
                                              const std::vector<double>& mu_grid, double tol = 1e-10) {
  std::vector<CurvePoint> out;
  out.reserve(mu_grid.size());
  for (double mu : mu_grid) {
    const auto v = pressure(disp, w, mu, tol);
    out.push_back({mu, v.value, v.error, v.infinite});
  }
  return out;
}

inline std::vector<FreeEnergyValue> free_energy_curve(const Dispersion& disp, const WeightSequence& w,
                                                      const std::vector<double>& rho_grid, double tol = 1e-10) {
  std::vector<FreeEnergyValue> out;
  out.reserve(rho_grid.size());
  const auto rc = saturation_density(disp, w, tol);
  for (double rho : rho_grid) out.push_back(detail::free_energy_given(disp, w, rho, tol, rc));
  return out;
}

struct DualityPoint {
  double mu = 0.0;
  double pressure = 0.0;  ///< p(mu)
  double dual = 0.0;      ///< max_j [rho_j mu - q(rho_j)]
  double residual = 0.0;  ///< |p - dual|
  double bound = 0.0;     ///< grid-resolution plus numerical bound
};

struct DualityShiftReport {
  double rho_c = 0.0;
  bool rho_c_infinite = false;
  std::vector<DualityPoint> duality;
  std::vector<FreeEnergyValue> free_energy;
  double max_residual = 0.0;
  bool duality_within_bound = true;
  double max_flat_slope = 0.0;  ///< max |finite-difference slope of q| on rho > rho_c
  bool q_convex = true;
  bool p_convex_nondecreasing = true;

  double c = 0.0;
  double max_pressure_shift_error = 0.0;     ///< max |p(mu; alpha + c l) - p(mu - c; alpha)|
  double max_free_energy_shift_error = 0.0;  ///< max |q(rho; alpha + c l) - q(rho; alpha) - c rho|
};

namespace detail {
inline bool convex_on_grid(const std::vector<double>& x, const std::vector<double>& y, double slack) {
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double left = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    const double right = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (right < left - slack) return false;
  }
  return true;
}
}  // namespace detail

/// Two-sided Legendre check p(mu) = max_rho [rho mu - q(rho)] on the grids, and
/// the shift covariances q(rho; alpha + c l) = q(rho; alpha) + c rho,
/// p(mu; alpha + c l) = p(mu - c; alpha). The shifted pressure is evaluated by
/// the direct series and the unshifted one by the Bose split, so the two
/// sides share no arithmetic.
inline DualityShiftReport duality_and_shift_check(const Dispersion& disp, const WeightSequence& w,
                                                  const std::vector<double>& mu_grid,
                                                  const std::vector<double>& rho_grid, double c,
                                                  double tol = 1e-10) {
  require(!mu_grid.empty() && !rho_grid.empty(), "duality check: grids must be nonempty");
  require(std::is_sorted(mu_grid.begin(), mu_grid.end()) && std::is_sorted(rho_grid.begin(), rho_grid.end()),
          "duality check: grids must be increasing");
  for (double mu : mu_grid) require(mu < mu_max(w), "duality check: mu grid must lie below the shift");
  for (double rho : rho_grid) require(rho >= 0.0, "duality check: rho grid must be nonnegative");

  DualityShiftReport r;
  const auto rc = saturation_density(disp, w, tol);
  r.rho_c = rc.value;
  r.rho_c_infinite = rc.infinite;
  r.free_energy = free_energy_curve(disp, w, rho_grid, tol);
  double q_err = 0.0;
  for (const auto& q : r.free_energy) q_err = std::max(q_err, q.error);

  std::vector<double> p_vals;
  for (double mu : mu_grid) {
    const auto p = pressure(disp, w, mu, tol);
    const auto rho_star = density(disp, w, mu, tol).value;
    DualityPoint pt;
    pt.mu = mu;
    pt.pressure = p.value;
    pt.dual = -std::numeric_limits<double>::infinity();
    for (const auto& q : r.free_energy) pt.dual = std::max(pt.dual, q.rho * mu - q.value);
    pt.residual = std::abs(pt.pressure - pt.dual);
    const auto it = std::upper_bound(rho_grid.begin(), rho_grid.end(), rho_star);
    if (it == rho_grid.begin() || it == rho_grid.end()) {
      pt.bound = std::numeric_limits<double>::infinity();
    } else {
      const auto j = static_cast<std::size_t>(it - rho_grid.begin()) - 1;
      const double dmu = r.free_energy[j + 1].mu_star - r.free_energy[j].mu_star;
      pt.bound = 0.25 * (rho_grid[j + 1] - rho_grid[j]) * dmu + p.error + q_err;
    }
    r.max_residual = std::max(r.max_residual, pt.residual);
    if (!(pt.residual <= pt.bound)) r.duality_within_bound = false;
    p_vals.push_back(p.value);
    r.duality.push_back(pt);
  }
  for (std::size_t i = 1; i < p_vals.size(); ++i)
    if (p_vals[i] < p_vals[i - 1]) r.p_convex_nondecreasing = false;
  if (!detail::convex_on_grid(mu_grid, p_vals, 1e-9)) r.p_convex_nondecreasing = false;

  std::vector<double> q_vals;
  for (const auto& q : r.free_energy) q_vals.push_back(q.value);
  r.q_convex = detail::convex_on_grid(rho_grid, q_vals, 1e-6);
  if (!rc.infinite)
    for (std::size_t i = 1; i < rho_grid.size(); ++i)
      if (rho_grid[i - 1] > rc.value)
        r.max_flat_slope = std::max(r.max_flat_slope, std::abs((q_vals[i] - q_vals[i - 1]) / (rho_grid[i] - rho_grid[i - 1])));

  r.c = c;
  const WeightSequence moved = w.shifted(c);
  for (double mu : mu_grid) {
    const bool below = mu < mu_max(moved);
    const auto lhs = pressure(disp, moved, mu, tol, below ? SeriesRoute::direct : SeriesRoute::automatic);
    const auto rhs = pressure(disp, w, mu - c, tol, SeriesRoute::bose);
    if (lhs.infinite != rhs.infinite)
      r.max_pressure_shift_error = std::numeric_limits<double>::infinity();
    else if (!lhs.infinite)
      r.max_pressure_shift_error = std::max(r.max_pressure_shift_error, std::abs(lhs.value - rhs.value));
  }
  const auto rc_moved = saturation_density(disp, moved, tol);
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    const auto q_moved = detail::free_energy_given(disp, moved, rho_grid[i], tol, rc_moved);
    r.max_free_energy_shift_error =
        std::max(r.max_free_energy_shift_error, std::abs(q_moved.value - q_vals[i] - c * rho_grid[i]));
  }
  return r;
}

namespace detail {

/// sum over the dual lattice (1/L) Z^d of e^(-t eps(k)), with an error bound.
class LatticeModeSum {
 public:
  LatticeModeSum(const Dispersion& disp, double L) : disp_(disp), L_(L) {
    require(L > 0.0, "lattice sum: L must be positive");
    a_ = disp.global_quadratic_bound();
    if (disp.kind() == DispersionKind::tabulated) build_shells();
  }

  /// Valid for t >= 1.
  std::pair<double, double> operator()(double t) const {
    const int d = disp_.dimension();
    const double g = a_ * t / (L_ * L_);
    if (disp_.kind() == DispersionKind::gaussian) {
      // theta(g) = 1 + 2 sum_{j>=1} e^(-g j^2), summed to a geometric remainder
      double s = 1.0;
      double rem = 0.0;
      for (std::size_t j = 1;; ++j) {
        const double jj = static_cast<double>(j);
        const double term = std::exp(-g * jj * jj);
        s += 2.0 * term;
        const double next = std::exp(-g * (jj + 1) * (jj + 1));
        rem = 2.0 * next / -std::expm1(-g * (2.0 * jj + 3.0));
        if (rem < 1e-17 * s) break;
      }
      const double v = std::pow(s, d);
      return {v, std::pow(s + rem, d) - v + 1e-15 * v};
    }
    double v = 0.0;
    for (const auto& [k2, count] : shells_)
      v += static_cast<double>(count) * std::exp(-t * disp_.eps_of_k2(static_cast<double>(k2) / (L_ * L_)));
    // outside the cube the minorant a|k|^2 bounds everything
    double box = 0.0;
    for (long j = -box_; j <= box_; ++j) box += std::exp(-g * static_cast<double>(j * j));
    const double mm = static_cast<double>(box_ + 1);
    const double rem = 2.0 * std::exp(-g * mm * mm) / -std::expm1(-g * (2.0 * mm + 1.0));
    return {v, std::pow(box + rem, d) - std::pow(box, d) + 1e-15 * v};
  }

 private:
  void build_shells() {
    const int d = disp_.dimension();
    const double g = a_ / (L_ * L_);
    box_ = 1;
    while (2.0 * std::exp(-g * static_cast<double>((box_ + 1) * (box_ + 1))) > 1e-18) ++box_;
    const double points = std::pow(2.0 * static_cast<double>(box_) + 1.0, d);
    require(points <= 5e7, "lattice sum: too many dual lattice points for the tabulated dispersion");
    std::map<std::int64_t, std::int64_t> shells;
    std::vector<long> m(static_cast<std::size_t>(d), -box_);
    for (;;) {
      std::int64_t k2 = 0;
      for (long x : m) k2 += x * x;
      ++shells[k2];
      std::size_t i = 0;
      while (i < m.size() && m[i] == box_) m[i++] = -box_;
      if (i == m.size()) break;
      ++m[i];
    }
    shells_.assign(shells.begin(), shells.end());
  }

  const Dispersion& disp_;
  double L_;
  double a_ = 0.0;
  long box_ = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> shells_;
};

}  // namespace detail

/// Periodic finite-volume pressure
///   p_L(mu) = (1/V) sum_n e^(mu n - alpha_n)/n sum_{k in (1/L) Z^d} e^(-n eps(k)).
/// max_terms > 0 truncates the n-series (the error then covers only the lattice sums).
inline ThermoValue pressure_periodic_finite(const Dispersion& disp, const WeightSequence& w, double L, double mu,
                                            double tol = 1e-10, std::size_t max_terms = 0) {
  require(tol > 0.0, "tolerance must be positive");
  require(L > 0.0, "periodic pressure: L must be positive");
  detail::require_thermo_weights(w);
  const double mu_eff = mu - w.shift();
  require(mu_eff < 0.0, "periodic pressure: mu must lie below the shift");
  const double V = std::pow(L, disp.dimension());
  const detail::LatticeModeSum lattice(disp, L);
  const double theta1 = lattice(1.0).first;
  ThermoValue out;
  double s = 0.0;
  double err = 0.0;
  for (std::size_t n = 1;; ++n) {
    const double nn = static_cast<double>(n);
    const auto [v, e] = lattice(nn);
    const double pref = std::exp(mu_eff * nn - w.base_alpha(n)) / nn;
    s += pref * v;
    err += pref * e;
    if (max_terms != 0 && n >= max_terms) {
      out.terms = n;
      break;
    }
    if (max_terms == 0 && n >= w.head_length()) {
      const double n1 = nn + 1.0;
      const double tail = std::exp(w.tail_abs_bound(n)) * theta1 * std::exp(mu_eff * n1) / (n1 * -std::expm1(mu_eff));
      if (tail / V < 0.5 * tol) {
        err += tail;
        out.terms = n;
        break;
      }
    }
    if (n > detail::kMaxSeriesTerms) throw CertificateError("periodic pressure: tail bound not met");
  }
  out.value = s / V;
  out.error = err / V;
  return out;
}

}  // namespace srp
