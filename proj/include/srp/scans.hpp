#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "srp/dispersion.hpp"
#include "srp/error.hpp"
#include "srp/fourier.hpp"
#include "srp/h_series.hpp"
#include "srp/thermo.hpp"
#include "srp/weights.hpp"

namespace srp {

struct LatticeConfig {
  double eps_cut = 30.0;
  double delta_trunc = 1e-8;
};

/// One row of the cycle-length decomposition at a single volume.
///   micro       lengths [1, ceil(eta) - 1]
///   meso        lengths [ceil(eta), floor(V/eta)]
///   macro_tail  lengths above floor(V/eta)   (micro + meso + macro_tail = N/V)
///   macro       lengths [ceil(eta), floor(sV)] for the requested s
struct MacroRow {
  double L = 0.0;
  double V = 0.0;
  std::size_t N = 0;
  std::string kind;
  double s = 0.0;  ///< only for kind == "macro"
  std::size_t a = 0, b = 0;
  double value = 0.0;
  double target = 0.0;
};

struct MacroScan {
  double rho = 0.0;
  double rho_c = 0.0;
  bool rho_c_infinite = false;
  double eta_exponent = 0.5;
  std::vector<MacroRow> rows;
};

namespace detail {
/// Condensate density max(0, rho - rho_c) at fixed particle number. Canonical
/// statistics do not see the weight shift, so rho_c is the saturation density.
inline ThermoValue canonical_critical_density(const Dispersion& disp, const WeightSequence& w, double tol) {
  return saturation_density(disp, w, tol);
}

inline std::size_t particle_number(double rho, double V) {
  return static_cast<std::size_t>(std::floor(rho * V + 1e-9));
}

inline double range_density(const PartitionTables& t, const std::vector<ModeMarginal>& mm, std::size_t a, std::size_t b) {
  b = std::min(b, t.N());
  if (t.N() == 0 || a > b) return 0.0;
  return cycle_density_expectation(t, mm, a, b);
}
}  // namespace detail

inline MacroScan macroscopic_scan(const Dispersion& disp, const WeightSequence& w, double rho,
                                  const std::vector<double>& L_list, double eta_exponent,
                                  const std::vector<double>& s_grid, const LatticeConfig& lc = {}) {
  require(rho >= 0.0 && std::isfinite(rho), "macroscopic scan: rho must be nonnegative");
  require(eta_exponent > 0.0 && eta_exponent < 1.0, "macroscopic scan: eta exponent must lie in (0, 1)");
  MacroScan out;
  out.rho = rho;
  out.eta_exponent = eta_exponent;
  const auto rc = detail::canonical_critical_density(disp, w, 1e-10);
  out.rho_c = rc.value;
  out.rho_c_infinite = rc.infinite;
  const double excess = rc.infinite ? 0.0 : std::max(0.0, rho - rc.value);
  const double micro_target = rc.infinite ? rho : std::min(rho, rc.value);

  for (double L : L_list) {
    const auto lat = build_lattice(L, disp, lc.eps_cut, lc.delta_trunc);
    const double V = lat.volume();
    const std::size_t N = detail::particle_number(rho, V);
    const auto h = h_series(w, std::max<std::size_t>(N, 1));
    const PartitionTables t(lat, h, N);
    const auto mm = mode_marginals(t);
    const double eta = std::pow(V, eta_exponent);
    const auto lo = static_cast<std::size_t>(std::ceil(eta));
    const auto hi = static_cast<std::size_t>(std::floor(V / eta));
    auto add = [&](std::string kind, double s, std::size_t a, std::size_t b, double target) {
      out.rows.push_back({L, V, N, std::move(kind), s, a, std::min(b, N), detail::range_density(t, mm, a, b), target});
    };
    add("micro", 0.0, 1, lo - 1, micro_target);
    add("meso", 0.0, lo, hi, 0.0);
    add("macro_tail", 0.0, std::max(lo, hi + 1), N, excess);
    for (double s : s_grid) {
      require(s >= 0.0, "macroscopic scan: s must be nonnegative");
      add("macro", s, lo, static_cast<std::size_t>(std::floor(s * V)), std::min(s, excess));
    }
  }
  return out;
}

struct N0Row {
  double L = 0.0;
  double V = 0.0;
  std::size_t N = 0;
  double lambda = 0.0;
  double mgf = 0.0;
  double target = 0.0;             ///< e^(lambda rho_0)
  double concentration = 0.0;      ///< P(|n_0/V - rho_0| < window * rho_0)
};

struct N0Scan {
  double rho = 0.0;
  double rho_c = 0.0;
  bool rho_c_infinite = false;
  double rho0 = 0.0;
  double window = 0.25;
  std::vector<N0Row> rows;
};

/// Exact finite-volume n_0 statistics along a sequence of boxes.
inline N0Scan n0_mgf_scan(const Dispersion& disp, const WeightSequence& w, double rho, const std::vector<double>& L_list,
                          const std::vector<double>& lambda_grid, double window = 0.25, const LatticeConfig& lc = {}) {
  require(rho >= 0.0 && std::isfinite(rho), "n0 scan: rho must be nonnegative");
  require(window > 0.0, "n0 scan: window must be positive");
  N0Scan out;
  out.rho = rho;
  out.window = window;
  const auto rc = detail::canonical_critical_density(disp, w, 1e-10);
  out.rho_c = rc.value;
  out.rho_c_infinite = rc.infinite;
  out.rho0 = rc.infinite ? 0.0 : std::max(0.0, rho - rc.value);
  for (double L : L_list) {
    const auto lat = build_lattice(L, disp, lc.eps_cut, lc.delta_trunc);
    const double V = lat.volume();
    const std::size_t N = detail::particle_number(rho, V);
    const auto h = h_series(w, std::max<std::size_t>(N, 1));
    const PartitionTables t(lat, h, N);
    const auto law = n0_law_and_mgf(t, lambda_grid);
    // with rho0 = 0 the window is taken as absolute
    const double half = out.rho0 > 0.0 ? window * out.rho0 : window;
    double conc = 0.0;
    for (std::size_t j = 0; j < law.law.size(); ++j)
      if (std::abs(static_cast<double>(j) / V - out.rho0) < half) conc += law.law[j];
    for (std::size_t i = 0; i < lambda_grid.size(); ++i)
      out.rows.push_back({L, V, N, lambda_grid[i], law.mgf[i], std::exp(lambda_grid[i] * out.rho0), conc});
  }
  return out;
}

}  // namespace srp
