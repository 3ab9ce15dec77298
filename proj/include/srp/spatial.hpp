#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "srp/autocorr.hpp"
#include "srp/error.hpp"
#include "srp/random.hpp"
#include "srp/weights.hpp"

namespace srp {

/// Gaussian jump density e^(-xi(x)) = (4 pi beta)^(-d/2) e^(-|x|^2 / 4beta),
/// periodized on the box [0, L)^d with images |y_i| <= m_img per axis.
class XiPotential {
 public:
  static constexpr double kTargetRemainder = 1e-12;

  XiPotential(int d, double beta, double L) : d_(d), beta_(beta), L_(L) {
    require(d >= 1, "xi: dimension must be >= 1");
    require(std::isfinite(beta) && beta > 0.0, "xi: beta must be positive");
    require(std::isfinite(L) && L > 0.0, "xi: L must be positive");
    m_img_ = 0;
    while (axis_remainder(m_img_) > kTargetRemainder) {
      ++m_img_;
      if (m_img_ > 100000) throw CertificateError("xi: image sum does not reach the remainder target");
    }
    remainder_ = axis_remainder(m_img_);
  }

  int dimension() const noexcept { return d_; }
  double beta() const noexcept { return beta_; }
  double L() const noexcept { return L_; }
  int images() const noexcept { return m_img_; }

  /// Bound on |e^(-xi_L) truncated / e^(-xi_L) - 1| per axis.
  double axis_relative_remainder() const noexcept { return remainder_; }
  /// Bound on the absolute error of xi_L.
  double remainder_bound() const noexcept { return d_ * std::log1p(remainder_); }

  /// xi(0) for the unperiodized potential.
  double xi0() const { return 0.5 * d_ * std::log(4.0 * std::numbers::pi * beta_); }

  /// xi_L(x) for any x (reduced internally).
  double operator()(const double* x) const {
    double v = 0.0;
    for (int i = 0; i < d_; ++i) v -= log_axis(x[i]);
    return v;
  }
  double operator()(const std::vector<double>& x) const {
    require(static_cast<int>(x.size()) == d_, "xi: dimension mismatch");
    return (*this)(x.data());
  }

  /// xi_L(x - y)
  double difference(const double* x, const double* y) const {
    double v = 0.0;
    for (int i = 0; i < d_; ++i) v -= log_axis(x[i] - y[i]);
    return v;
  }

 private:
  // log of (4 pi beta)^(-1/2) sum_j e^(-(t - L j)^2 / 4beta)
  double log_axis(double t) const {
    t -= L_ * std::round(t / L_);  // t in [-L/2, L/2]
    const double inv = 1.0 / (4.0 * beta_);
    const double top = -t * t * inv;  // j = 0 dominates
    double s = 0.0;
    for (int j = -m_img_; j <= m_img_; ++j) {
      const double u = t - L_ * j;
      s += std::exp(-u * u * inv - top);
    }
    return top + std::log(s) - 0.5 * std::log(4.0 * std::numbers::pi * beta_);
  }

  // relative size of images beyond m against the smallest in-cell value
  double axis_remainder(int m) const {
    const double inv = 1.0 / (4.0 * beta_);
    const double far = (m + 0.5) * L_;
    const double ratio = std::exp(-(static_cast<double>(m) + 1.0) * L_ * L_ * 2.0 * inv);
    const double tail = 2.0 * std::exp(-far * far * inv) / (1.0 - ratio);
    const double floor_value = std::exp(-0.25 * L_ * L_ * inv);
    return tail / floor_value;
  }

  int d_;
  double beta_;
  double L_;
  int m_img_ = 0;
  double remainder_ = 0.0;
};

inline double periodized_xi(const XiPotential& pot, const std::vector<double>& x) { return pot(x); }

/// Positions, permutation and cached energy terms.
///   H = sum_i xi_L(x_i - x_pi(i)) + sum_l alpha_l r_l(pi)
class SpatialState {
 public:
  SpatialState(const XiPotential& pot, const WeightSequence& w, std::vector<double> positions)
      : pot_(&pot), w_(&w), d_(pot.dimension()), x_(std::move(positions)) {
    require(x_.size() % static_cast<std::size_t>(d_) == 0, "state: positions must have N*d entries");
    N_ = x_.size() / static_cast<std::size_t>(d_);
    for (auto& v : x_) v = wrap(v);
    pi_.resize(N_);
    std::iota(pi_.begin(), pi_.end(), std::size_t{0});
    inv_ = pi_;
    rebuild();
  }

  template <class G>
  static SpatialState random(const XiPotential& pot, const WeightSequence& w, std::size_t N, G& rng) {
    std::vector<double> x(N * static_cast<std::size_t>(pot.dimension()));
    for (auto& v : x) v = uniform01(rng) * pot.L();
    return SpatialState(pot, w, std::move(x));
  }

  std::size_t N() const noexcept { return N_; }
  int dimension() const noexcept { return d_; }
  double L() const noexcept { return pot_->L(); }
  const std::vector<double>& positions() const noexcept { return x_; }
  const std::vector<std::size_t>& permutation() const noexcept { return pi_; }
  const double* position(std::size_t i) const { return &x_[i * static_cast<std::size_t>(d_)]; }

  /// r_l for l = 0..N (entry 0 unused).
  const std::vector<std::size_t>& cycle_tally() const noexcept { return tally_; }
  std::size_t cycle_count() const {
    return std::accumulate(tally_.begin(), tally_.end(), std::size_t{0});
  }
  /// Number of indices in cycles of length a..b.
  std::size_t points_in_lengths(std::size_t a, std::size_t b) const {
    std::size_t s = 0;
    for (std::size_t l = std::max<std::size_t>(a, 1); l <= std::min(b, N_); ++l) s += l * tally_[l];
    return s;
  }

  double energy() const noexcept { return energy_; }

  /// Full recomputation of H.
  double hamiltonian() const {
    double h = 0.0;
    for (std::size_t i = 0; i < N_; ++i) h += pot_->difference(position(i), position(pi_[i]));
    const auto t = tally_from_scratch();
    for (std::size_t l = 1; l <= N_; ++l) h += static_cast<double>(t[l]) * w_->alpha(l);
    return h;
  }

  void set_permutation(std::vector<std::size_t> pi) {
    require(pi.size() == N_, "state: permutation size mismatch");
    std::vector<bool> seen(N_, false);
    for (auto v : pi) {
      require(v < N_ && !seen[v], "state: not a permutation");
      seen[v] = true;
    }
    pi_ = std::move(pi);
    for (std::size_t i = 0; i < N_; ++i) inv_[pi_[i]] = i;
    rebuild();
  }

  void set_position(std::size_t i, const double* y) {
    for (int c = 0; c < d_; ++c) x_[i * d_ + c] = wrap(y[c]);
    rebuild();
  }

  /// Energy change of moving x_i to y (y already wrapped).
  double delta_displacement(std::size_t i, const double* y) const {
    const std::size_t f = pi_[i];
    if (f == i) return 0.0;
    const std::size_t b = inv_[i];
    const double old_e = jump_[i] + jump_[b];
    const double new_e = pot_->difference(y, position(f)) + pot_->difference(position(b), y);
    return new_e - old_e;
  }

  /// Effect of pi <- pi o (i j) on the cycle type.
  struct TranspositionEffect {
    bool split = false;
    std::size_t l1 = 0, l2 = 0;  ///< split: the two new lengths; merge: the two old lengths
  };

  TranspositionEffect transposition_effect(std::size_t i, std::size_t j) const {
    std::size_t steps = 0;
    std::size_t k = i;
    bool same = false;
    std::size_t len_i = 0;
    do {
      if (k == j) {
        same = true;
        steps = len_i;
      }
      k = pi_[k];
      ++len_i;
    } while (k != i);
    if (same) return {true, steps, len_i - steps};
    std::size_t len_j = 0;
    k = j;
    do {
      k = pi_[k];
      ++len_j;
    } while (k != j);
    return {false, len_i, len_j};
  }

  double delta_transposition(std::size_t i, std::size_t j) const {
    const double old_e = jump_[i] + jump_[j];
    const double new_e = pot_->difference(position(i), position(pi_[j])) + pot_->difference(position(j), position(pi_[i]));
    const auto eff = transposition_effect(i, j);
    const double merged = w_->alpha(eff.l1 + eff.l2) - w_->alpha(eff.l1) - w_->alpha(eff.l2);
    return new_e - old_e + (eff.split ? -merged : merged);
  }

  void apply_displacement(std::size_t i, const double* y, double delta) {
    for (int c = 0; c < d_; ++c) x_[i * d_ + c] = y[c];
    const std::size_t b = inv_[i];
    jump_[i] = pot_->difference(position(i), position(pi_[i]));
    jump_[b] = pot_->difference(position(b), position(i));
    energy_ += delta;
  }

  void apply_transposition(std::size_t i, std::size_t j, double delta) {
    const auto eff = transposition_effect(i, j);
    if (eff.split) {
      --tally_[eff.l1 + eff.l2];
      ++tally_[eff.l1];
      ++tally_[eff.l2];
    } else {
      --tally_[eff.l1];
      --tally_[eff.l2];
      ++tally_[eff.l1 + eff.l2];
    }
    std::swap(pi_[i], pi_[j]);
    inv_[pi_[i]] = i;
    inv_[pi_[j]] = j;
    jump_[i] = pot_->difference(position(i), position(pi_[i]));
    jump_[j] = pot_->difference(position(j), position(pi_[j]));
    energy_ += delta;
  }

  double wrap(double v) const {
    const double L = pot_->L();
    v = std::fmod(v, L);
    if (v < 0.0) v += L;
    if (v >= L) v = 0.0;
    return v;
  }

 private:
  std::vector<std::size_t> tally_from_scratch() const {
    std::vector<std::size_t> t(N_ + 1, 0);
    std::vector<bool> seen(N_, false);
    for (std::size_t i = 0; i < N_; ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (std::size_t k = i; !seen[k]; k = pi_[k]) {
        seen[k] = true;
        ++len;
      }
      ++t[len];
    }
    return t;
  }

  void rebuild() {
    jump_.assign(N_, 0.0);
    for (std::size_t i = 0; i < N_; ++i) jump_[i] = pot_->difference(position(i), position(pi_[i]));
    tally_ = tally_from_scratch();
    energy_ = hamiltonian();
  }

  const XiPotential* pot_;
  const WeightSequence* w_;
  int d_;
  std::size_t N_ = 0;
  std::vector<double> x_;
  std::vector<std::size_t> pi_, inv_;
  std::vector<double> jump_;
  std::vector<std::size_t> tally_;
  double energy_ = 0.0;
};

struct MCParams {
  std::size_t burn_in = 10000;
  std::size_t samples = 100000;  ///< steps after burn-in
  std::size_t thinning = 1;
  double sigma_x = 0.0;          ///< 0 means L/10
  double p_displacement = 0.5;
  std::uint64_t seed = 1;
  bool tune = true;              ///< adapt sigma_x toward 30-50% acceptance during burn-in only
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  ///< (a, b) for N_{a,b}

  void validate() const {
    require(p_displacement >= 0.0 && p_displacement <= 1.0, "mc: move probability must lie in [0, 1]");
    require(sigma_x >= 0.0 && std::isfinite(sigma_x), "mc: sigma_x must be nonnegative");
    require(thinning >= 1, "mc: thinning must be >= 1");
    for (const auto& [a, b] : ranges) require(a >= 1 && a <= b, "mc: ranges need 1 <= a <= b");
  }
};

enum class MoveKind { displacement, transposition };

struct StepResult {
  MoveKind move = MoveKind::displacement;
  bool accepted = false;
  double delta = 0.0;
};

/// One Metropolis step: a Gaussian displacement of a uniform index, or a
/// transposition pi <- pi o (i j) for uniform i != j.
template <class G>
StepResult mc_step(SpatialState& s, double sigma_x, double p_displacement, G& rng) {
  StepResult r;
  const std::size_t N = s.N();
  if (N == 0) return r;
  const bool disp = N < 2 || uniform01(rng) < p_displacement;
  if (disp) {
    r.move = MoveKind::displacement;
    const std::size_t i = uniform_index(rng, N);
    const int d = s.dimension();
    std::vector<double> y(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) y[c] = s.wrap(s.position(i)[c] + sigma_x * standard_normal(rng));
    r.delta = s.delta_displacement(i, y.data());
    const double u = uniform01(rng);
    if (r.delta <= 0.0 || u < std::exp(-r.delta)) {
      s.apply_displacement(i, y.data(), r.delta);
      r.accepted = true;
    }
  } else {
    r.move = MoveKind::transposition;
    const std::size_t i = uniform_index(rng, N);
    std::size_t j = uniform_index(rng, N - 1);
    if (j >= i) ++j;
    r.delta = s.delta_transposition(i, j);
    const double u = uniform01(rng);
    if (r.delta <= 0.0 || u < std::exp(-r.delta)) {
      s.apply_transposition(i, j, r.delta);
      r.accepted = true;
    }
  }
  return r;
}

struct ObservableSummary {
  std::string name;
  AutocorrEstimate stats;
};

/// Recorded chain: one entry per kept step, columns as flat arrays.
struct ChainOutput {
  std::vector<std::size_t> step;
  std::vector<double> energy;
  std::vector<double> cycles;
  std::vector<std::vector<double>> counts;  ///< counts[r][i] = N_{a,b} for range r at record i
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  double sigma_x = 0.0;
  double displacement_acceptance = 0.0;
  double transposition_acceptance = 0.0;
  double energy_drift = 0.0;  ///< |cached - recomputed| at the end
  std::vector<ObservableSummary> summary;

  std::size_t size() const noexcept { return step.size(); }
};

inline ChainOutput run_chain(SpatialState& s, const MCParams& p) {
  p.validate();
  Rng rng(p.seed);
  ChainOutput out;
  out.ranges = p.ranges;
  out.counts.assign(p.ranges.size(), {});
  double sigma = p.sigma_x > 0.0 ? p.sigma_x : s.L() / 10.0;

  std::size_t tried = 0, accepted = 0;
  for (std::size_t t = 0; t < p.burn_in; ++t) {
    const auto r = mc_step(s, sigma, p.p_displacement, rng);
    if (!p.tune || r.move != MoveKind::displacement) continue;
    ++tried;
    accepted += r.accepted;
    if (tried == 200) {
      const double rate = static_cast<double>(accepted) / 200.0;
      if (rate < 0.3) sigma *= 0.8;
      if (rate > 0.5) sigma *= 1.25;
      sigma = std::clamp(sigma, 1e-3 * s.L(), s.L());
      tried = accepted = 0;
    }
  }
  out.sigma_x = sigma;

  std::size_t d_try = 0, d_acc = 0, t_try = 0, t_acc = 0;
  const double V = std::pow(s.L(), s.dimension());
  for (std::size_t t = 1; t <= p.samples; ++t) {
    const auto r = mc_step(s, sigma, p.p_displacement, rng);
    if (r.move == MoveKind::displacement) {
      ++d_try;
      d_acc += r.accepted;
    } else {
      ++t_try;
      t_acc += r.accepted;
    }
    if (t % p.thinning != 0) continue;
    out.step.push_back(t);
    out.energy.push_back(s.energy());
    out.cycles.push_back(static_cast<double>(s.cycle_count()));
    for (std::size_t k = 0; k < p.ranges.size(); ++k)
      out.counts[k].push_back(static_cast<double>(s.points_in_lengths(p.ranges[k].first, p.ranges[k].second)));
  }
  out.displacement_acceptance = d_try ? static_cast<double>(d_acc) / d_try : 0.0;
  out.transposition_acceptance = t_try ? static_cast<double>(t_acc) / t_try : 0.0;
  out.energy_drift = std::abs(s.energy() - s.hamiltonian());

  if (out.size() > 0) {
    out.summary.push_back({"energy", integrated_autocorrelation(out.energy)});
    out.summary.push_back({"cycles", integrated_autocorrelation(out.cycles)});
    for (std::size_t k = 0; k < p.ranges.size(); ++k) {
      std::vector<double> rho(out.counts[k].size());
      for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = out.counts[k][i] / V;
      out.summary.push_back({"rho_" + std::to_string(p.ranges[k].first) + "_" + std::to_string(p.ranges[k].second),
                             integrated_autocorrelation(rho)});
    }
  }
  return out;
}

}  // namespace srp
