#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "srp/dispersion.hpp"
#include "srp/error.hpp"
#include "srp/h_series.hpp"
#include "srp/random.hpp"

namespace srp {

/// One dual-lattice mode k = m / L.
struct Mode {
  std::vector<long> m;
  double k_abs = 0.0;
  double eps = 0.0;
};

/// Consecutive modes sharing |k| (hence eps).
struct ModeGroup {
  std::size_t first = 0;
  std::size_t count = 0;
  double k_abs = 0.0;
  double eps = 0.0;
};

/// Dual lattice (1/L) Z^d cut to eps(k) <= eps_cut, sorted by |k| (so by eps
/// ascending, k = 0 first), with the discarded single-mode mass
/// sum_{eps(k) > eps_cut} e^(-eps(k)) bounded from above.
struct ModeLattice {
  double L = 1.0;
  int d = 1;
  double eps_cut = 0.0;
  double delta_trunc = 0.0;
  double discarded_mass = 0.0;  ///< upper bound
  std::vector<Mode> modes;
  std::vector<ModeGroup> groups;

  double volume() const { return std::pow(L, d); }
  std::size_t size() const { return modes.size(); }

  /// Explicit instance: eps[0] must be 0; equal eps values form one group.
  /// Mode i gets |k| = i / L.
  static ModeLattice from_modes(std::vector<double> eps, double L = 1.0) {
    require(!eps.empty() && eps[0] == 0.0, "mode list must start with eps = 0");
    require(L > 0.0, "L must be positive");
    for (double e : eps) require(std::isfinite(e) && e >= 0.0, "mode energies must be finite and nonnegative");
    std::sort(eps.begin() + 1, eps.end());
    ModeLattice lat;
    lat.L = L;
    lat.d = 1;
    lat.eps_cut = eps.back();
    for (std::size_t i = 0; i < eps.size(); ++i)
      lat.modes.push_back({{static_cast<long>(i)}, static_cast<double>(i) / L, eps[i]});
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (i >= 2 && eps[i] == eps[i - 1]) {
        ++lat.groups.back().count;
        continue;
      }
      lat.groups.push_back({i, 1, lat.modes[i].k_abs, eps[i]});
    }
    return lat;
  }
};

namespace detail {

/// sum_{j in Z, |j| <= M} e^(-g j^2) and the bound on the rest.
inline std::pair<double, double> theta_box(double g, long M) {
  double box = 0.0;
  for (long j = -M; j <= M; ++j) box += std::exp(-g * static_cast<double>(j * j));
  const double mm = static_cast<double>(M + 1);
  const double rest = 2.0 * std::exp(-g * mm * mm) / -std::expm1(-g * (2.0 * mm + 1.0));
  return {box, rest};
}

/// Bound on sum_{m outside [-M, M]^d} e^(-g |m|^2) = (B + T)^d - B^d, expanded
/// to avoid cancellation.
inline double outside_box_bound(double g, long M, int d) {
  const auto [B, T] = theta_box(g, M);
  double total = 0.0;
  double binom = 1.0;
  for (int i = 1; i <= d; ++i) {
    binom = binom * static_cast<double>(d - i + 1) / static_cast<double>(i);
    total += binom * std::pow(B, d - i) * std::pow(T, i);
  }
  return total;
}

template <class F>
void for_each_in_box(int d, long M, F&& visit) {
  std::vector<long> m(static_cast<std::size_t>(d), -M);
  for (;;) {
    visit(m);
    std::size_t i = 0;
    while (i < m.size() && m[i] == M) m[i++] = -M;
    if (i == m.size()) return;
    ++m[i];
  }
}

}  // namespace detail

/// Modes of (1/L) Z^d with eps(k) <= eps_cut. Refuses with CertificateError if
/// the discarded mass bound exceeds delta_trunc.
inline ModeLattice build_lattice(double L, const Dispersion& disp, double eps_cut, double delta_trunc) {
  require(std::isfinite(L) && L > 0.0, "lattice: L must be positive");
  require(eps_cut > 0.0, "lattice: eps_cut must be positive");
  require(delta_trunc > 0.0, "lattice: delta_trunc must be positive");
  const int d = disp.dimension();
  const double a = disp.global_quadratic_bound();
  const double g = a / (L * L);
  const long m_in = static_cast<long>(std::floor(L * std::sqrt(eps_cut / a))) + 1;
  long m_out = m_in;
  while (detail::outside_box_bound(g, m_out, d) > 1e-3 * delta_trunc && m_out < 100000) ++m_out;
  require(std::pow(2.0 * static_cast<double>(m_out) + 1.0, d) <= 5e7, "lattice: box too large, lower L or eps_cut");

  ModeLattice lat;
  lat.L = L;
  lat.d = d;
  lat.eps_cut = eps_cut;
  lat.delta_trunc = delta_trunc;

  std::map<std::int64_t, std::int64_t> discarded_shells;
  std::vector<std::pair<std::int64_t, std::vector<long>>> kept;
  detail::for_each_in_box(d, m_out, [&](const std::vector<long>& m) {
    std::int64_t k2 = 0;
    for (long x : m) k2 += static_cast<std::int64_t>(x) * x;
    const double eps = disp.eps_of_k2(static_cast<double>(k2) / (L * L));
    if (eps <= eps_cut)
      kept.emplace_back(k2, m);
    else
      ++discarded_shells[k2];
  });
  double inner = 0.0;
  for (const auto& [k2, count] : discarded_shells)
    inner += static_cast<double>(count) * std::exp(-disp.eps_of_k2(static_cast<double>(k2) / (L * L)));
  lat.discarded_mass = inner + detail::outside_box_bound(g, m_out, d);
  if (lat.discarded_mass > delta_trunc)
    throw CertificateError("lattice truncation: discarded mass " + num(lat.discarded_mass) +
                           " exceeds delta_trunc " + num(delta_trunc));

  std::sort(kept.begin(), kept.end());
  for (const auto& [k2, m] : kept) {
    const double k2d = static_cast<double>(k2) / (L * L);
    lat.modes.push_back({m, std::sqrt(k2d), disp.eps_of_k2(k2d)});
    if (lat.groups.empty() || kept[lat.groups.back().first].first != k2)
      lat.groups.push_back({lat.modes.size() - 1, 1, lat.modes.back().k_abs, lat.modes.back().eps});
    else
      ++lat.groups.back().count;
  }
  return lat;
}

/// Occupation numbers n_k per mode (lattice order).
struct OccupationState {
  std::vector<std::size_t> n;
  std::size_t total() const { return std::accumulate(n.begin(), n.end(), std::size_t{0}); }
};

/// Exact partition functions of the occupation-number law
///   p(n) = (1/Y) prod_k e^(-n_k eps_k) h_{n_k}
/// by convolution over modes in lattice order. prefix(j) holds the partition
/// over modes [0, j), suffix(j) over [j, J), each for totals 0..N.
class PartitionTables {
 public:
  static constexpr double kFloor = 1e-300;

  PartitionTables(const ModeLattice& lattice, const HSeries& h, std::size_t N)
      : lattice_(lattice), h_(h), N_(N) {
    require(N <= h.n_max(), "partition tables: h-series shorter than N");
    const std::size_t J = lattice.size();
    require(static_cast<double>(J + 1) * static_cast<double>(N + 1) <= 2e7,
            "partition tables: modes x N too large");
    // per-group weight sequences
    for (const auto& g : lattice.groups) {
      std::vector<double> w;
      double top = 0.0;
      for (std::size_t n = 0; n <= N; ++n) {
        const double v = std::exp(-static_cast<double>(n) * g.eps + h.log_h(n));
        top = std::max(top, v);
        if (v < kFloor * top) {
          underflow_ = true;
          break;
        }
        w.push_back(v);
      }
      weights_.push_back(std::move(w));
    }
    for (std::size_t gi = 0; gi < lattice.groups.size(); ++gi)
      for (std::size_t c = 0; c < lattice.groups[gi].count; ++c) group_of_.push_back(gi);

    const std::size_t W = N + 1;
    prefix_.assign((J + 1) * W, 0.0);
    suffix_.assign((J + 1) * W, 0.0);
    prefix_[0] = 1.0;
    for (std::size_t j = 0; j < J; ++j) convolve(&prefix_[j * W], &prefix_[(j + 1) * W], weights_[group_of_[j]]);
    suffix_[J * W] = 1.0;
    for (std::size_t j = J; j-- > 0;) convolve(&suffix_[(j + 1) * W], &suffix_[j * W], weights_[group_of_[j]]);

    const double y = prefix_[J * W + N];
    if (!std::isfinite(y) || y > 1e300)
      throw CertificateError("partition function outside floating-point range; reduce L or N");
    double hmax = 0.0;
    for (std::size_t n = 0; n <= N; ++n) hmax = std::max(hmax, h[n]);
    const double cut = lattice.eps_cut;
    truncation_bound_ = h.ratio_bound_upto(N) * std::expm1(hmax * lattice.discarded_mass / -std::expm1(-cut));
  }

  const ModeLattice& lattice() const noexcept { return lattice_; }
  const HSeries& h() const noexcept { return h_; }
  std::size_t N() const noexcept { return N_; }
  std::size_t modes() const noexcept { return lattice_.size(); }

  /// Y(Lambda, M) for 0 <= M <= N.
  double Y(std::size_t M) const { return prefix_.at(lattice_.size() * (N_ + 1) + M); }
  double Y() const { return Y(N_); }

  /// Partition over modes [0, j) with total m.
  double prefix(std::size_t j, std::size_t m) const { return prefix_.at(j * (N_ + 1) + m); }
  /// Partition over modes [j, J) with total m.
  double suffix(std::size_t j, std::size_t m) const { return suffix_.at(j * (N_ + 1) + m); }

  /// e^(-n eps_k) h_n for mode k; 0 beyond the underflow floor.
  double weight(std::size_t mode, std::size_t n) const {
    const auto& w = weights_[group_of_.at(mode)];
    return n < w.size() ? w[n] : 0.0;
  }
  std::size_t group_of(std::size_t mode) const { return group_of_.at(mode); }

  /// A per-mode weight sequence was cut at the 1e-300 relative floor.
  bool underflow() const noexcept { return underflow_; }

  /// Bound on |Y_full(N) / Y(N) - 1| from the discarded modes.
  double truncation_bound() const noexcept { return truncation_bound_; }

 private:
  void convolve(const double* in, double* out, const std::vector<double>& w) const {
    for (std::size_t m = 0; m <= N_; ++m) {
      double s = 0.0;
      const std::size_t top = std::min(m, w.size() - 1);
      for (std::size_t n = 0; n <= top; ++n) s += w[n] * in[m - n];
      out[m] = s;
    }
  }

  const ModeLattice& lattice_;
  const HSeries& h_;
  std::size_t N_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::size_t> group_of_;
  std::vector<double> prefix_;
  std::vector<double> suffix_;
  bool underflow_ = false;
  double truncation_bound_ = 0.0;
};

inline PartitionTables partition_dp(const ModeLattice& lattice, const HSeries& h, std::size_t N) {
  return PartitionTables(lattice, h, N);
}

/// Law of n_k for one representative mode of each group.
struct ModeMarginal {
  std::size_t group = 0;
  std::size_t multiplicity = 0;
  double eps = 0.0;
  double k_abs = 0.0;
  std::vector<double> law;  ///< P(n_k = m), m = 0..N
  double mean = 0.0;
};

/// P(n_k = m) = w_k(m) Y_{-k}(N - m) / Y(N), with Y_{-k} the convolution of the
/// prefix before k and the suffix after k.
inline ModeMarginal mode_marginal(const PartitionTables& t, std::size_t group) {
  const auto& lat = t.lattice();
  const auto& g = lat.groups.at(group);
  const std::size_t k = g.first;
  const std::size_t N = t.N();
  ModeMarginal out{group, g.count, g.eps, g.k_abs, std::vector<double>(N + 1, 0.0), 0.0};
  const double Y = t.Y();
  for (std::size_t m = 0; m <= N; ++m) {
    const double w = t.weight(k, m);
    if (w == 0.0) continue;
    const std::size_t M = N - m;
    double loo = 0.0;
    for (std::size_t i = 0; i <= M; ++i) loo += t.prefix(k, i) * t.suffix(k + 1, M - i);
    out.law[m] = w * loo / Y;
    out.mean += static_cast<double>(m) * out.law[m];
  }
  return out;
}

inline std::vector<ModeMarginal> mode_marginals(const PartitionTables& t) {
  std::vector<ModeMarginal> out;
  for (std::size_t g = 0; g < t.lattice().groups.size(); ++g) out.push_back(mode_marginal(t, g));
  return out;
}

struct N0Law {
  double V = 1.0;
  std::size_t N = 0;
  std::vector<double> law;  ///< P(n_0 = j)
  std::vector<double> lambda;
  std::vector<double> mgf;  ///< E e^(lambda n_0 / V)
};

inline N0Law n0_law_and_mgf(const PartitionTables& t, const std::vector<double>& lambda_grid) {
  N0Law out;
  out.V = t.lattice().volume();
  out.N = t.N();
  out.law = mode_marginal(t, 0).law;
  out.lambda = lambda_grid;
  for (double lam : lambda_grid) {
    double s = 0.0;
    for (std::size_t j = 0; j < out.law.size(); ++j) s += out.law[j] * std::exp(lam * static_cast<double>(j) / out.V);
    out.mgf.push_back(s);
  }
  return out;
}

/// Exact draw from p(n): walk the modes downward, drawing n_j with probability
/// w_j(n) prefix_j(m - n) / prefix_{j+1}(m).
template <class G>
OccupationState sample_occupations(const PartitionTables& t, G& rng) {
  const std::size_t J = t.modes();
  OccupationState s;
  s.n.assign(J, 0);
  std::size_t m = t.N();
  for (std::size_t j = J; j-- > 0 && m > 0;) {
    const double total = t.prefix(j + 1, m);
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t pick = 0;
    std::size_t last_positive = 0;
    bool found = false;
    for (std::size_t n = 0; n <= m; ++n) {
      const double term = t.weight(j, n) * t.prefix(j, m - n);
      if (term > 0.0) last_positive = n;
      acc += term;
      if (u < acc) {
        pick = n;
        found = true;
        break;
      }
    }
    if (!found) pick = last_positive;  // rounding at the top end
    s.n[j] = pick;
    m -= pick;
  }
  return s;
}

namespace detail {
/// E_m(N_{a,b}) for m = 0..N (b clamped to m).
inline std::vector<double> cycle_points_table(const HSeries& h, std::size_t N, std::size_t a, std::size_t b) {
  std::vector<double> e(N + 1, 0.0);
  for (std::size_t m = 1; m <= N; ++m) e[m] = expected_points_in_lengths(h, m, a, b);
  return e;
}
}  // namespace detail

/// E(rho_{a,b}) = (1/V) sum_k sum_m P(n_k = m) E_m(N_{a,b}).
inline double cycle_density_expectation(const PartitionTables& t, const std::vector<ModeMarginal>& marginals,
                                        std::size_t a, std::size_t b) {
  const std::size_t N = t.N();
  if (N == 0) return 0.0;
  require(a >= 1 && a <= b && b <= N, "cycle density: need 1 <= a <= b <= N");
  const auto e = detail::cycle_points_table(t.h(), N, a, b);
  double s = 0.0;
  for (const auto& mm : marginals) {
    double per = 0.0;
    for (std::size_t m = 1; m <= N; ++m) per += mm.law[m] * e[m];
    s += static_cast<double>(mm.multiplicity) * per;
  }
  return s / t.lattice().volume();
}

inline double cycle_density_expectation(const PartitionTables& t, std::size_t a, std::size_t b) {
  if (t.N() == 0) return 0.0;
  return cycle_density_expectation(t, mode_marginals(t), a, b);
}

/// The three typicality events for occupation numbers:
///   A: |n_0/V - rho_0| < eps
///   B: sum_{0<|k|<delta} n_k < eps V
///   C: sum_{|k|>=delta, n_k > M} n_k < eps V
struct TypicalityParams {
  double eps = 0.1;
  double delta = 0.5;
  std::size_t M = 1;
  double rho0 = 0.0;
};

struct TypicalityResult {
  double p_a = 0.0, p_b = 0.0, p_c = 0.0;
  /// 95% Wilson intervals when estimated from samples (equal to the value when exact)
  double a_lo = 0.0, a_hi = 0.0, b_lo = 0.0, b_hi = 0.0, c_lo = 0.0, c_hi = 0.0;
  std::size_t samples = 0;  ///< 0 for exact values
};

namespace detail {
inline std::size_t eps_volume_cap(double eps, double V) {
  // sums are integers, so "< eps V" means "<= ceil(eps V) - 1"
  return static_cast<std::size_t>(std::ceil(eps * V - 1e-12));
}

inline std::size_t first_mode_at_or_beyond(const ModeLattice& lat, double delta) {
  std::size_t j = 1;
  while (j < lat.size() && lat.modes[j].k_abs < delta) ++j;
  return std::max<std::size_t>(j, 1);
}
}  // namespace detail

/// Exact event probabilities from the partition tables.
inline TypicalityResult typicality_exact(const PartitionTables& t, const TypicalityParams& p) {
  require(p.eps > 0.0 && p.delta > 0.0, "typicality: eps and delta must be positive");
  const auto& lat = t.lattice();
  const double V = lat.volume();
  const std::size_t N = t.N();
  const std::size_t J = lat.size();
  const std::size_t W = N + 1;
  const double Y = t.Y();
  TypicalityResult r;

  const auto law0 = mode_marginal(t, 0).law;
  for (std::size_t j = 0; j <= N; ++j)
    if (std::abs(static_cast<double>(j) / V - p.rho0) < p.eps) r.p_a += law0[j];

  const std::size_t cap = detail::eps_volume_cap(p.eps, V);
  const std::size_t s_end = detail::first_mode_at_or_beyond(lat, p.delta);  // small modes are [1, s_end)

  // B: partition of the small modes alone, against mode 0 times the large modes
  {
    std::vector<double> zs(W, 0.0), next(W);
    zs[0] = 1.0;
    for (std::size_t j = 1; j < s_end; ++j) {
      for (std::size_t m = 0; m <= N; ++m) {
        double s = 0.0;
        for (std::size_t n = 0; n <= m; ++n) s += t.weight(j, n) * zs[m - n];
        next[m] = s;
      }
      zs.swap(next);
    }
    for (std::size_t tt = 0; tt < cap && tt <= N; ++tt) {
      const std::size_t M = N - tt;
      double rest = 0.0;
      for (std::size_t i = 0; i <= M; ++i) rest += t.weight(0, i) * t.suffix(s_end, M - i);
      r.p_b += zs[tt] * rest / Y;
    }
  }

  // C: joint table over (total, constrained sum) for the large modes
  {
    const std::size_t T = cap;  // index T collects sums >= cap
    std::vector<double> D(W * (T + 1), 0.0), next(W * (T + 1));
    D[0] = 1.0;
    for (std::size_t j = s_end; j < J; ++j) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t m = 0; m <= N; ++m)
        for (std::size_t s = 0; s <= T; ++s) {
          const double base = D[m * (T + 1) + s];
          if (base == 0.0) continue;
          for (std::size_t n = 0; m + n <= N; ++n) {
            const double w = t.weight(j, n);
            if (w == 0.0) break;
            const std::size_t add = n > p.M ? n : 0;
            const std::size_t s2 = std::min(T, s + add);
            next[(m + n) * (T + 1) + s2] += w * base;
          }
        }
      D.swap(next);
    }
    for (std::size_t m = 0; m <= N; ++m)
      for (std::size_t s = 0; s < T; ++s) r.p_c += t.prefix(s_end, N - m) * D[m * (T + 1) + s] / Y;
  }
  r.a_lo = r.a_hi = r.p_a;
  r.b_lo = r.b_hi = r.p_b;
  r.c_lo = r.c_hi = r.p_c;
  return r;
}

inline std::pair<double, double> wilson_interval(std::size_t hits, std::size_t n, double z = 1.959963984540054) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(hits) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (ph + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Event frequencies over exact occupation samples, with Wilson intervals.
template <class G>
TypicalityResult typicality_sampled(const PartitionTables& t, const TypicalityParams& p, std::size_t samples, G& rng) {
  require(samples > 0, "typicality: need at least one sample");
  const auto& lat = t.lattice();
  const double V = lat.volume();
  const std::size_t cap = detail::eps_volume_cap(p.eps, V);
  const std::size_t s_end = detail::first_mode_at_or_beyond(lat, p.delta);
  std::size_t ha = 0, hb = 0, hc = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto s = sample_occupations(t, rng);
    if (std::abs(static_cast<double>(s.n[0]) / V - p.rho0) < p.eps) ++ha;
    std::size_t small = 0, large = 0;
    for (std::size_t j = 1; j < s_end; ++j) small += s.n[j];
    for (std::size_t j = s_end; j < s.n.size(); ++j)
      if (s.n[j] > p.M) large += s.n[j];
    if (small < cap) ++hb;
    if (large < cap) ++hc;
  }
  TypicalityResult r;
  r.samples = samples;
  const double n = static_cast<double>(samples);
  r.p_a = static_cast<double>(ha) / n;
  r.p_b = static_cast<double>(hb) / n;
  r.p_c = static_cast<double>(hc) / n;
  std::tie(r.a_lo, r.a_hi) = wilson_interval(ha, samples);
  std::tie(r.b_lo, r.b_hi) = wilson_interval(hb, samples);
  std::tie(r.c_lo, r.c_hi) = wilson_interval(hc, samples);
  return r;
}

/// Full enumeration of (k-vector, permutation) pairs for tiny instances: each
/// permutation contributes |modes|^(number of cycles) compatible k-vectors.
struct SmallEnumeration {
  double Y = 0.0;
  std::map<std::vector<std::size_t>, double> occupation_law;  ///< n (per mode) -> probability
  std::map<std::vector<std::size_t>, double> permutation_law; ///< pi (images) -> probability
  std::vector<double> mean_occupation;                        ///< per mode
  std::vector<std::vector<double>> marginals;                 ///< per mode, P(n_k = m)
  /// E(N_{a,b}) / V indexed [a][b]
  std::vector<std::vector<double>> cycle_density;
  double total_mass = 0.0;
};

inline constexpr double kSmallEnumerationCap = 1e6;

inline SmallEnumeration enumerate_small(const ModeLattice& lat, const WeightSequence& w, std::size_t N) {
  const std::size_t K = lat.size();
  require(K <= 5, "enumerate_small: at most 5 modes");
  require(N <= 6, "enumerate_small: N at most 6");
  double states = 1.0;
  for (std::size_t i = 0; i < N; ++i) states *= static_cast<double>(K + i);
  if (states > kSmallEnumerationCap) throw ValidationError("enumerate_small: state space above 1e6");

  SmallEnumeration out;
  out.mean_occupation.assign(K, 0.0);
  out.marginals.assign(K, std::vector<double>(N + 1, 0.0));
  out.cycle_density.assign(N + 1, std::vector<double>(N + 1, 0.0));
  std::vector<std::size_t> perm(N);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double n_fact = 1.0;
  for (std::size_t i = 2; i <= N; ++i) n_fact *= static_cast<double>(i);

  struct Acc {
    std::vector<std::size_t> n;
    double weight;
    std::vector<std::size_t> perm;
    std::vector<std::size_t> lengths;
  };
  std::vector<Acc> all;
  do {
    // cycles of perm
    std::vector<std::vector<std::size_t>> cycles;
    std::vector<bool> seen(N, false);
    for (std::size_t i = 0; i < N; ++i) {
      if (seen[i]) continue;
      cycles.emplace_back();
      for (std::size_t j = i; !seen[j]; j = perm[j]) {
        seen[j] = true;
        cycles.back().push_back(j);
      }
    }
    double cycle_energy = 0.0;
    std::vector<std::size_t> lengths;
    for (const auto& c : cycles) {
      cycle_energy += w.alpha(c.size());
      lengths.push_back(c.size());
    }
    // k constant on cycles: one mode per cycle
    std::vector<std::size_t> choice(cycles.size(), 0);
    for (;;) {
      std::vector<std::size_t> n(K, 0);
      double e = cycle_energy;
      for (std::size_t c = 0; c < cycles.size(); ++c) {
        n[choice[c]] += cycles[c].size();
        e += static_cast<double>(cycles[c].size()) * lat.modes[choice[c]].eps;
      }
      all.push_back({n, std::exp(-e), perm, lengths});
      std::size_t c = 0;
      while (c < choice.size() && choice[c] == K - 1) choice[c++] = 0;
      if (c == choice.size()) break;
      ++choice[c];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  double Z = 0.0;
  for (const auto& a : all) Z += a.weight;
  out.Y = Z / n_fact;
  const double V = lat.volume();
  for (const auto& a : all) {
    const double p = a.weight / Z;
    out.total_mass += p;
    out.occupation_law[a.n] += p;
    out.permutation_law[a.perm] += p;
    for (std::size_t k = 0; k < K; ++k) {
      out.mean_occupation[k] += p * static_cast<double>(a.n[k]);
      out.marginals[k][a.n[k]] += p;
    }
    for (std::size_t lo = 1; lo <= N; ++lo)
      for (std::size_t hi = lo; hi <= N; ++hi) {
        std::size_t pts = 0;
        for (auto l : a.lengths)
          if (l >= lo && l <= hi) pts += l;
        out.cycle_density[lo][hi] += p * static_cast<double>(pts) / V;
      }
  }
  return out;
}

}  // namespace srp
