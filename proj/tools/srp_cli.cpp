// srp: command-line runner. Each subcommand reads a JSON config (plus
// --set overrides), writes <out>/<subcommand>.csv and a manifest next to it.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srp/config.hpp"
#include "srp/srp.hpp"

namespace fs = std::filesystem;
using namespace srp;
using config::get;

namespace {

struct Check {
  std::string name;
  double value;
  double target;
  double tolerance;
  bool pass;
};

struct Outcome {
  CsvTable table;
  Json summary = Json::object();
  std::vector<Check> checks;
};

void check_le(Outcome& o, std::string name, double value, double bound) {
  o.checks.push_back({std::move(name), value, 0.0, bound, value <= bound});
}

void check_near(Outcome& o, std::string name, double value, double target, double tol) {
  o.checks.push_back({std::move(name), value, target, tol, std::abs(value - target) <= tol});
}

void check_true(Outcome& o, std::string name, bool ok) { o.checks.push_back({std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, ok}); }

std::uint64_t seed_of(const Json& cfg) { return get<std::uint64_t>(cfg, "seed", 1); }

// --- nonspatial ---------------------------------------------------------

Outcome run_h_series(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto n_max = get<std::size_t>(cfg, "n_max", 10);
  const auto h = h_series(w, n_max);
  Outcome o{CsvTable({"n", "h_n", "log_h_n"})};
  for (std::size_t n = 0; n <= n_max; ++n) o.table.row() << n << h[n] << h.log_h(n);
  o.summary["log_domain"] = h.log_domain();
  o.summary["ratio_bound"] = h.ratio_bound();
  if (h.h_inf()) o.summary["h_inf"] = *h.h_inf();
  return o;
}

Outcome run_h_crosscheck(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto n_max = get<std::size_t>(cfg, "n_max", 30);
  const double gamma = get<double>(cfg, "gamma", 0.5);
  const double tol = get<double>(cfg, "tolerance", 1e-10);
  const auto r = h_crosscheck(w, n_max, gamma);
  Outcome o{CsvTable({"n", "recursion", "explicit", "increments"})};
  for (std::size_t n = 0; n <= n_max; ++n)
    o.table.row() << n << r.recursion[n] << (n <= r.explicit_route_n ? r.explicit_sum[n] : NAN) << r.increments[n];
  check_le(o, "max_rel_explicit", r.max_rel_explicit, tol);
  check_le(o, "max_rel_increments", r.max_rel_increments, tol);
  if (r.laplace.applicable)
    check_le(o, "laplace_residual", r.laplace.residual, r.laplace.truncation_bound + tol * r.laplace.rhs);
  check_true(o, "bounds_hold", r.bounds.all_hold());
  o.summary["laplace_lhs"] = r.laplace.lhs;
  o.summary["laplace_rhs"] = r.laplace.rhs;
  o.summary["explicit_route_n"] = r.explicit_route_n;
  return o;
}

Outcome run_cycle_scan(const Json& cfg) {
  const auto w = config::weights(cfg);
  auto ns = get<std::vector<std::size_t>>(cfg, "n", {1000, 10000});
  require(!ns.empty(), "cycle-scan: n list is empty");
  std::sort(ns.begin(), ns.end());
  const auto s_grid = config::grid(cfg, "s", {0.25, 0.5, 0.75});
  const double tol = get<double>(cfg, "tolerance", 0.05);
  const auto h = h_series(w, ns.back());
  Outcome o{CsvTable({"n", "s", "value", "gap"})};
  std::map<double, std::vector<double>> gaps;
  bool within = true;
  for (auto n : ns) {
    const auto scan = cycle_fraction_scan(h, n, s_grid);
    within = scan.within_hypothesis;
    for (const auto& p : scan.points) {
      o.table.row() << n << p.s << p.value << std::abs(p.value - p.s);
      gaps[p.s].push_back(std::abs(p.value - p.s));
    }
  }
  o.summary["within_hypothesis"] = within;
  if (within)
    for (const auto& [s, g] : gaps) {
      check_le(o, "gap_s=" + format_number(s), g.back(), tol);
      if (g.size() > 1) check_true(o, "gap_shrinks_s=" + format_number(s), g.back() < g[g.size() - 2] || g.back() == 0.0);
    }
  return o;
}

// --- thermo ---------------------------------------------------------------

Outcome run_rho_c(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto disp = config::dispersion(cfg);
  const double tol = get<double>(cfg, "tol", 1e-10);
  const auto rc = critical_density(disp, w, tol);
  const auto rs = saturation_density(disp, w, tol);
  Outcome o{CsvTable({"quantity", "value", "error", "infinite"})};
  o.table.row() << "rho_c" << rc.value << rc.error << rc.infinite;
  o.table.row() << "saturation_density" << rs.value << rs.error << rs.infinite;
  if (cfg.contains("expect"))
    check_near(o, "rho_c", rc.value, cfg.at("expect").get<double>(), get<double>(cfg, "expect_tol", 1e-6));
  o.summary["rho_c_infinite"] = rc.infinite;
  return o;
}

Outcome run_pressure(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto disp = config::dispersion(cfg);
  const double tol = get<double>(cfg, "tol", 1e-10);
  const auto mus = config::grid(cfg, "mu", {-3.0, -2.0, -1.0, -0.5, -0.1, 0.0});
  const double L = get<double>(cfg, "L", 0.0);
  std::vector<std::string> header{"mu", "pressure", "pressure_error", "density", "density_error", "infinite"};
  if (L > 0.0) {
    header.push_back("periodic_pressure");
    header.push_back("periodic_error");
  }
  Outcome o{CsvTable(header)};
  for (double mu : mus) {
    const auto p = pressure(disp, w, mu, tol);
    const auto r = density(disp, w, mu, tol);
    auto row = o.table.row();
    row << mu << p.value << p.error << r.value << r.error << (p.infinite || r.infinite);
    if (L > 0.0) {
      if (mu < mu_max(w)) {
        const auto pl = pressure_periodic_finite(disp, w, L, mu, tol);
        row << pl.value << pl.error;
      } else {
        row << NAN << NAN;
      }
    }
  }
  return o;
}

Outcome run_free_energy(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto disp = config::dispersion(cfg);
  const double tol = get<double>(cfg, "tol", 1e-10);
  const auto rhos = config::grid(cfg, "rho", {0.0, 0.01, 0.02, 0.05, 0.1});
  Outcome o{CsvTable({"rho", "free_energy", "error", "mu_star", "saturated"})};
  for (const auto& q : free_energy_curve(disp, w, rhos, tol))
    o.table.row() << q.rho << q.value << q.error << q.mu_star << q.saturated;
  return o;
}

Outcome run_duality_check(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto disp = config::dispersion(cfg);
  const double tol = get<double>(cfg, "tol", 1e-10);
  const double c = get<double>(cfg, "c", 0.7);
  Json grid_cfg = cfg;
  if (!cfg.contains("rho")) {
    const auto rc = saturation_density(disp, w, tol);
    require(!rc.infinite, "duality-check: give an explicit rho grid when rho_c is infinite");
    grid_cfg["rho"] = {{"from", 0.0}, {"to", 1.5 * rc.value}, {"count", 151}};
  }
  const auto mus = config::grid(grid_cfg, "mu", {});
  const auto mu_grid = mus.empty() ? config::grid(Json{{"mu", {{"from", -3.0}, {"to", -0.05}, {"count", 60}}}}, "mu", {}) : mus;
  const auto rho_grid = config::grid(grid_cfg, "rho", {});
  const auto r = duality_and_shift_check(disp, w, mu_grid, rho_grid, c, tol);
  Outcome o{CsvTable({"mu", "pressure", "dual", "residual", "bound"})};
  for (const auto& p : r.duality) o.table.row() << p.mu << p.pressure << p.dual << p.residual << p.bound;
  o.summary["rho_c"] = r.rho_c;
  o.summary["rho_c_infinite"] = r.rho_c_infinite;
  o.summary["max_residual"] = r.max_residual;
  check_le(o, "max_residual", r.max_residual, get<double>(cfg, "residual_tol", 1e-4));
  check_true(o, "residual_within_bound", r.duality_within_bound);
  if (!r.rho_c_infinite) check_le(o, "flat_slope", r.max_flat_slope, get<double>(cfg, "slope_tol", 1e-3));
  check_true(o, "q_convex", r.q_convex);
  check_true(o, "p_convex_nondecreasing", r.p_convex_nondecreasing);
  check_le(o, "pressure_shift_error", r.max_pressure_shift_error, get<double>(cfg, "shift_tol", 1e-8));
  check_le(o, "free_energy_shift_error", r.max_free_energy_shift_error, get<double>(cfg, "shift_tol", 1e-8));
  return o;
}

// --- fourier --------------------------------------------------------------

std::size_t particle_number(const Json& cfg, double V) {
  if (cfg.contains("N")) return cfg.at("N").get<std::size_t>();
  require(cfg.contains("rho"), "give N or rho");
  return static_cast<std::size_t>(std::floor(cfg.at("rho").get<double>() * V + 1e-9));
}

double side_length(const Json& cfg) {
  const auto& l = config::section(cfg, "lattice");
  return config::need<double>(l, "L");
}

Outcome run_fourier_exact(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto disp = config::dispersion(cfg);
  const auto lc = config::lattice(cfg);
  const auto lat = build_lattice(side_length(cfg), disp, lc.eps_cut, lc.delta_trunc);
  const std::size_t N = particle_number(cfg, lat.volume());
  const auto h = h_series(w, std::max<std::size_t>(N, 1));
  const PartitionTables t(lat, h, N);
  const auto mm = mode_marginals(t);
  Outcome o{CsvTable({"quantity", "i", "j", "value"})};
  o.table.row() << "Y" << 0 << 0 << t.Y();
  o.table.row() << "discarded_mass" << 0 << 0 << lat.discarded_mass;
  o.table.row() << "truncation_bound" << 0 << 0 << t.truncation_bound();
  double total = 0.0;
  for (const auto& g : mm) {
    o.table.row() << "mean_occupation" << g.group << g.multiplicity << g.mean;
    total += static_cast<double>(g.multiplicity) * g.mean;
  }
  for (std::size_t m = 0; m <= N; ++m) o.table.row() << "p_n0" << m << 0 << mm[0].law[m];
  for (std::size_t a = 1; a <= N; ++a)
    for (std::size_t b = a; b <= N; ++b) o.table.row() << "rho_ab" << a << b << cycle_density_expectation(t, mm, a, b);
  o.summary["modes"] = lat.size();
  o.summary["N"] = N;
  o.summary["V"] = lat.volume();
  o.summary["underflow"] = t.underflow();
  if (N > 0) check_near(o, "occupation_sum", total, static_cast<double>(N), 1e-8 * static_cast<double>(N));
  return o;
}

Outcome run_fourier_scan(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto disp = config::dispersion(cfg);
  const auto lc = config::lattice(cfg);
  const double rho = config::need<double>(cfg, "rho");
  const auto Ls = get<std::vector<double>>(cfg, "L_list", {4.0, 6.0, 8.0});
  const double gamma = get<double>(cfg, "eta_exponent", 0.5);
  const auto s_grid = config::grid(cfg, "s", {1.0});
  const auto scan = macroscopic_scan(disp, w, rho, Ls, gamma, s_grid, lc);
  Outcome o{CsvTable({"L", "V", "N", "row_kind", "a", "b", "value", "target", "s"})};
  std::map<double, double> sums;
  std::map<double, double> nv;
  for (const auto& r : scan.rows) {
    o.table.row() << r.L << r.V << r.N << r.kind << r.a << r.b << r.value << r.target << r.s;
    if (r.kind != "macro") sums[r.L] += r.value;
    nv[r.L] = static_cast<double>(r.N) / r.V;
  }
  o.summary["rho_c"] = scan.rho_c;
  o.summary["rho_c_infinite"] = scan.rho_c_infinite;
  double worst = 0.0;
  for (const auto& [L, s] : sums) worst = std::max(worst, std::abs(s - nv[L]));
  check_le(o, "rows_sum_to_density", worst, 1e-8);
  return o;
}

Outcome run_n0_mgf(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto disp = config::dispersion(cfg);
  const auto lc = config::lattice(cfg);
  const double rho = config::need<double>(cfg, "rho");
  const auto Ls = get<std::vector<double>>(cfg, "L_list", {4.0, 6.0, 8.0});
  const auto lambdas = config::grid(cfg, "lambda", {0.0, 0.5, 1.0});
  const double window = get<double>(cfg, "window", 0.25);
  const auto scan = n0_mgf_scan(disp, w, rho, Ls, lambdas, window, lc);
  Outcome o{CsvTable({"L", "V", "N", "lambda", "mgf", "target", "concentration"})};
  for (const auto& r : scan.rows) o.table.row() << r.L << r.V << r.N << r.lambda << r.mgf << r.target << r.concentration;
  o.summary["rho_c"] = scan.rho_c;
  o.summary["rho_c_infinite"] = scan.rho_c_infinite;
  o.summary["rho0"] = scan.rho0;
  return o;
}

Outcome run_typicality(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto disp = config::dispersion(cfg);
  const auto lc = config::lattice(cfg);
  const auto lat = build_lattice(side_length(cfg), disp, lc.eps_cut, lc.delta_trunc);
  const double V = lat.volume();
  const std::size_t N = particle_number(cfg, V);
  const auto h = h_series(w, std::max<std::size_t>(N, 1));
  const PartitionTables t(lat, h, N);
  const auto rc = saturation_density(disp, w);
  TypicalityParams p;
  p.eps = get<double>(cfg, "eps", p.eps);
  p.delta = get<double>(cfg, "delta", p.delta);
  p.M = get<std::size_t>(cfg, "M", p.M);
  p.rho0 = rc.infinite ? 0.0 : std::max(0.0, static_cast<double>(N) / V - rc.value);
  const auto samples = get<std::size_t>(cfg, "samples", 0);
  TypicalityResult r;
  if (samples == 0) {
    r = typicality_exact(t, p);
  } else {
    Rng rng(seed_of(cfg));
    r = typicality_sampled(t, p, samples, rng);
  }
  Outcome o{CsvTable({"L", "V", "N", "event", "probability", "lo", "hi", "samples"})};
  o.table.row() << lat.L << V << N << "A" << r.p_a << r.a_lo << r.a_hi << r.samples;
  o.table.row() << lat.L << V << N << "B" << r.p_b << r.b_lo << r.b_hi << r.samples;
  o.table.row() << lat.L << V << N << "C" << r.p_c << r.c_lo << r.c_hi << r.samples;
  o.summary["rho0"] = p.rho0;
  o.summary["rho_c"] = rc.value;
  o.summary["rho_c_infinite"] = rc.infinite;
  return o;
}

// --- spatial --------------------------------------------------------------

Outcome run_spatial_mc(const Json& cfg) {
  const auto w = config::weights(cfg);
  const auto& sp = config::section(cfg, "spatial");
  const int d = get<int>(sp, "d", 1);
  const double beta = get<double>(sp, "beta", 1.0);
  const double L = get<double>(sp, "L", 4.0);
  const auto N = get<std::size_t>(sp, "N", 2);
  auto p = config::mc(cfg, seed_of(cfg));
  if (p.ranges.empty())
    for (std::size_t a = 1; a <= N; ++a) p.ranges.emplace_back(a, a);
  const XiPotential pot(d, beta, L);
  Rng init(p.seed ^ 0x9e3779b97f4a7c15ULL);
  auto state = SpatialState::random(pot, w, N, init);
  const auto chain = run_chain(state, p);
  std::vector<std::string> header{"step", "energy", "cycles"};
  for (const auto& [a, b] : p.ranges) header.push_back("N_" + std::to_string(a) + "_" + std::to_string(b));
  Outcome o{CsvTable(header)};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto row = o.table.row();
    row << chain.step[i] << chain.energy[i] << chain.cycles[i];
    for (const auto& c : chain.counts) row << c[i];
  }
  Json obs = Json::array();
  for (const auto& s : chain.summary)
    obs.push_back({{"name", s.name}, {"mean", s.stats.mean}, {"error", s.stats.error}, {"tau_int", s.stats.tau_int}});
  o.summary["observables"] = obs;
  o.summary["sigma_x"] = chain.sigma_x;
  o.summary["displacement_acceptance"] = chain.displacement_acceptance;
  o.summary["transposition_acceptance"] = chain.transposition_acceptance;
  check_le(o, "energy_cache_drift", chain.energy_drift, 1e-6);
  return o;
}

Outcome run_cross_validate(const Json& cfg) {
  CrossValidateCase c;
  c.weights = config::weights(cfg);
  const auto& sp = config::section(cfg, "spatial");
  c.L = get<double>(sp, "L", c.L);
  c.beta = get<double>(sp, "beta", c.beta);
  c.N = get<std::size_t>(sp, "N", c.N);
  c.grid = get<std::size_t>(sp, "grid", 0);
  c.run_mc = get<bool>(cfg, "run_mc", true);
  c.mc = config::mc(cfg, seed_of(cfg));
  const auto r = cross_validate(c);
  Outcome o{CsvTable({"kind", "label", "reference", "estimate", "difference", "bound", "pass"})};
  for (const auto& p : r.permutations) {
    std::string label;
    for (auto v : p.perm) label += std::to_string(v);
    o.table.row() << "integral" << label << p.lattice_sum << p.integral << p.difference << p.certificate() << p.agree;
  }
  for (const auto& m : r.mc)
    o.table.row() << "mc" << ("rho_" + std::to_string(m.a) + "_" + std::to_string(m.b)) << m.exact << m.mean
                  << std::abs(m.mean - m.exact) << 3.0 * m.error << m.within_3sigma;
  check_true(o, "integrals_agree", r.integrals_agree);
  check_le(o, "certificate", r.max_certificate, 1e-6);
  if (c.run_mc) check_true(o, "mc_within_3sigma", r.mc_agree);
  o.summary["grid"] = r.grid;
  return o;
}

// --- driver ---------------------------------------------------------------

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SRP_OUT_DIR"); env && *env) return env;
  return ".";
}

void write_outputs(const std::string& name, const Json& cfg, const Outcome& o, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  const auto data = dir / (name + ".csv");
  o.table.write(data);
  Json checks = Json::array();
  for (const auto& c : o.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"target", c.target}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  const Json manifest = {{"subcommand", name}, {"config", cfg},         {"data_file", data.filename().string()},
                         {"created", timestamp()}, {"summary", o.summary}, {"checks", checks}};
  write_atomic(dir / (name + ".manifest.json"), manifest.dump(2) + "\n");
}

int fail(ErrorKind kind, const std::string& message) {
  const Json rec = {{"error", to_string(kind)}, {"exit_code", static_cast<int>(kind)}, {"message", message}};
  std::cerr << rec.dump() << std::endl;
  return static_cast<int>(kind);
}

// report: per-file summary of the checks recorded in manifests
int run_report(const std::vector<std::string>& files) {
  for (const auto& f : files) {
    fs::path path(f);
    if (!fs::exists(path)) throw IoError("missing file " + f);
    fs::path manifest = path;
    if (path.extension() == ".csv") manifest = path.parent_path() / (path.stem().string() + ".manifest.json");
    Json m = Json::object();
    if (fs::exists(manifest)) m = config::load_file(manifest.string());
    const std::string name = m.value("subcommand", path.stem().string());
    std::cout << "== " << f << " (" << name << ")\n";
    if (path.extension() == ".csv") {
      const auto rows = read_csv(path);
      if (name == "cycle-scan" && !rows.empty()) {
        std::cout << "  n s value |value-s|\n";
        for (std::size_t i = 1; i < rows.size(); ++i)
          std::cout << "  " << rows[i][0] << " " << rows[i][1] << " " << rows[i][2] << " " << rows[i][3] << "\n";
      }
      if (name == "duality-check" && rows.size() > 1) {
        double worst = 0.0;
        for (std::size_t i = 1; i < rows.size(); ++i) worst = std::max(worst, std::stod(rows[i][3]));
        std::cout << "  max residual " << format_number(worst) << "\n";
      }
    }
    if (m.contains("checks"))
      for (const auto& c : m.at("checks"))
        std::cout << "  " << (c.at("pass").get<bool>() ? "PASS" : "FAIL") << " " << c.at("name").get<std::string>()
                  << " value=" << format_number(c.at("value").get<double>())
                  << " tol=" << format_number(c.at("tolerance").get<double>()) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome(const Json&)>>> commands = {
      {"h-series", run_h_series},         {"h-crosscheck", run_h_crosscheck},   {"cycle-scan", run_cycle_scan},
      {"rho-c", run_rho_c},               {"pressure", run_pressure},           {"free-energy", run_free_energy},
      {"duality-check", run_duality_check}, {"fourier-exact", run_fourier_exact}, {"fourier-scan", run_fourier_scan},
      {"n0-mgf", run_n0_mgf},             {"typicality", run_typicality},       {"spatial-mc", run_spatial_mc},
      {"cross-validate", run_cross_validate},
  };

  CLI::App app{"Cycle-weighted and spatial random permutations: experiment runner"};
  app.require_subcommand(1);
  std::string config_path, out_flag;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<std::string> report_files;

  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "JSON config file");
    sub->add_option("-s,--set", overrides, "override, key.path=value (repeatable)");
    sub->add_option("-o,--out", out_flag, "output directory (default $SRP_OUT_DIR or .)");
    sub->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) { seed = v, seed_given = true; }, "RNG seed");
  }
  auto* report = app.add_subcommand("report", "summarize artifact files");
  report->add_option("files", report_files, "CSV or manifest files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(ErrorKind::validation, e.what());
  }

  try {
    if (report->parsed()) return run_report(report_files);
    for (const auto& [name, fn] : commands) {
      if (!app.got_subcommand(name)) continue;
      Json cfg = config_path.empty() ? Json::object() : config::load_file(config_path);
      require(cfg.is_object(), "config must be a JSON object");
      for (const auto& s : overrides) config::apply_override(cfg, s);
      if (seed_given) cfg["seed"] = seed;
      const Outcome o = fn(cfg);
      write_outputs(name, cfg, o, output_dir(out_flag));
      bool ok = true;
      for (const auto& c : o.checks) ok = ok && c.pass;
      std::cout << name << ": " << o.table.size() << " rows, " << o.checks.size() << " checks, "
                << (ok ? "all pass" : "some fail") << "\n";
      return 0;
    }
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  } catch (const Json::exception& e) {
    return fail(ErrorKind::validation, e.what());
  } catch (const std::exception& e) {
    return fail(ErrorKind::validation, e.what());
  }
  return 0;
}
