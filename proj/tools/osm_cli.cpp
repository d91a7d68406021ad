// Command-line front end: generate and inspect instances, solve the matching
// LPs, simulate the online algorithms, run the exact oracles, evaluate tail
// bounds, and reproduce the grid certificates.
//
// Exit codes: 0 success, 1 input error, 2 numeric failure, 3 failed
// certificate.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "osm/bounds.hpp"
#include "osm/certify.hpp"
#include "osm/engine.hpp"
#include "osm/instance.hpp"
#include "osm/json_io.hpp"
#include "osm/lp.hpp"
#include "osm/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitCertificate = 3;

struct CliError : std::runtime_error {
  int code;
  CliError(int code_, const std::string& what_) : std::runtime_error(what_), code(code_) {}
};

osm::AnyInstance load_instance(const std::string& path) {
  std::string text;
  try {
    text = osm::read_text_file(path);
  } catch (const std::exception& e) {
    throw CliError(kExitInput, e.what());
  }
  try {
    return osm::read_instance_json(text);
  } catch (const std::exception& e) {
    throw CliError(kExitInput, std::string("bad instance '") + path + "': " + e.what());
  }
}

void maybe_write(const std::string& out, const std::string& content) {
  if (out.empty())
    std::cout << content;
  else
    osm::write_text_file(out, content);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

int cmd_gen(const std::string& shape, int n, int T, double W, double density, double wlo,
            double whi, bool vertex_weighted, std::uint64_t seed, bool has_seed,
            const std::string& formula_path, double p, const std::string& out) {
  osm::BernoulliInstance inst;
  if (shape == "rescale") {
    inst = osm::gen_rescale_example(n, W);
  } else if (shape == "star") {
    inst = osm::gen_uniform_star(n);
  } else if (shape == "random") {
    if (!has_seed) throw CliError(kExitInput, "gen random requires --seed");
    osm::RandomInstanceConfig cfg;
    cfg.n = n;
    cfg.T = T;
    cfg.density = density;
    cfg.w_lo = wlo;
    cfg.w_hi = whi;
    cfg.vertex_weighted = vertex_weighted;
    cfg.seed = seed;
    inst = osm::gen_random(cfg);
  } else if (shape == "3sat") {
    if (formula_path.empty()) throw CliError(kExitInput, "gen 3sat requires --formula");
    const auto formula = osm::read_formula_json(osm::read_text_file(formula_path));
    inst = osm::build_from_3sat(formula, p);
  } else {
    throw CliError(kExitInput, "unknown generator '" + shape + "'");
  }
  maybe_write(out, osm::write_json(inst));
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, const std::string& out) {
  const osm::AnyInstance any = load_instance(instance_path);
  if (any.is_general) {
    const osm::GeneralLpSolution sol = osm::solve_lp_general(any.general);
    std::printf("objective=%.6f\n", sol.objective);
    if (!out.empty()) osm::write_text_file(out, osm::write_json(sol));
    return kExitOk;
  }
  const osm::LpSolution sol = osm::solve_lp(any.bernoulli);
  const osm::FeasibilityReport feas = osm::check_feasibility(sol.x, any.bernoulli, 1e-7);
  std::printf("objective=%.6f\n", sol.objective);
  std::printf("feasibility_violations=%zu\n", feas.violations.size());
  std::printf("fractional_rates=%d (near-binary budget %d)\n",
              osm::fractional_rate_count(sol), sol.T);
  if (!out.empty()) osm::write_text_file(out, osm::write_json(sol));
  return feas.ok() ? kExitOk : kExitNumeric;
}

osm::SimReport run_simulation(const osm::AnyInstance& any, const std::string& alg,
                              std::int64_t reps, std::uint64_t seed, int workers) {
  const osm::AlgorithmSpec spec = osm::AlgorithmSpec::parse(alg);
  if (any.is_general) return osm::simulate_general(any.general, spec, reps, seed, workers);
  return osm::simulate(any.bernoulli, spec, reps, seed, workers);
}

int cmd_simulate(const std::string& instance_path, const std::string& alg, std::int64_t reps,
                 std::uint64_t seed, int workers, const std::string& out) {
  const osm::AnyInstance any = load_instance(instance_path);
  const osm::SimReport report = run_simulation(any, alg, reps, seed, workers);
  std::printf("mean=%.9f stderr=%.9f reps=%lld seed=%llu\n", report.mean_weight,
              report.std_error, static_cast<long long>(report.replications),
              static_cast<unsigned long long>(report.seed));
  if (!out.empty()) osm::write_text_file(out, osm::write_json(report));
  return kExitOk;
}

int cmd_ratio(const std::string& instance_path, const std::string& alg, std::int64_t reps,
              std::uint64_t seed, int workers, const std::string& out) {
  const osm::AnyInstance any = load_instance(instance_path);
  const osm::SimReport report = run_simulation(any, alg, reps, seed, workers);

  double lp = 0.0;
  std::string opt_cell, ratio_opt_cell;
  if (any.is_general) {
    lp = osm::solve_lp_general(any.general).objective;
    if (any.general.n <= 20) {
      const double opt = osm::opt_online_general(any.general).value;
      opt_cell = std::to_string(opt);
      if (opt > 0.0) ratio_opt_cell = std::to_string(report.mean_weight / opt);
    }
  } else {
    lp = osm::solve_lp(any.bernoulli).objective;
    if (any.bernoulli.n <= 20) {
      const double opt = osm::opt_online(any.bernoulli).value;
      opt_cell = std::to_string(opt);
      if (opt > 0.0) ratio_opt_cell = std::to_string(report.mean_weight / opt);
    }
  }
  std::ostringstream csv;
  csv << "instance,algorithm,reps,seed,mean,stderr,lp,opt_on,ratio_lp,ratio_opt\n";
  csv << csv_escape(instance_path) << ',' << csv_escape(alg) << ',' << reps << ',' << seed << ','
      << report.mean_weight << ',' << report.std_error << ',' << lp << ',' << opt_cell << ',';
  if (lp > 0.0) csv << report.mean_weight / lp;
  csv << ',' << ratio_opt_cell << '\n';
  maybe_write(out, csv.str());
  return kExitOk;
}

int cmd_oracle(const std::string& instance_path, const std::string& sat_path, double reduce_p,
               bool prophet, std::int64_t reps, std::uint64_t seed, bool has_seed) {
  if (!sat_path.empty()) {
    const auto formula = osm::read_formula_json(osm::read_text_file(sat_path));
    const double opt = osm::opt_stochastic_3sat(formula);
    std::printf("opt_sat=%.9f\n", opt);
    if (reduce_p > 0.0) {
      const osm::SandwichReport report = osm::hardness_sandwich(formula, reduce_p);
      std::printf("reduction_p=%g dp_value=%.9f interval=[%.9f, %.9f] C_k=%g inside=%s\n",
                  reduce_p, report.dp_value, report.lower, report.upper, report.c_k,
                  report.inside ? "yes" : "no");
    }
    return kExitOk;
  }
  if (instance_path.empty())
    throw CliError(kExitInput, "oracle requires --instance or --3sat");
  const osm::AnyInstance any = load_instance(instance_path);
  if (any.is_general) {
    std::printf("opt_online=%.9f\n", osm::opt_online_general(any.general).value);
  } else {
    std::printf("opt_online=%.9f\n", osm::opt_online(any.bernoulli).value);
    if (prophet) {
      if (!has_seed) throw CliError(kExitInput, "oracle --prophet requires --seed");
      const osm::McEstimate est = osm::prophet_value_mc(any.bernoulli, reps, seed);
      std::printf("prophet_mean=%.9f prophet_stderr=%.9f reps=%lld\n", est.mean, est.std_error,
                  static_cast<long long>(reps));
    }
  }
  return kExitOk;
}

int cmd_bounds(const std::string& system_path, double theta, const std::string& out) {
  const auto sys = osm::read_system_json(osm::read_text_file(system_path));
  const double mean = osm::mean_of(sys);
  const double var = osm::variance_of(sys);
  std::optional<double> exact;
  if (sys.dist || sys.size() <= 20) exact = osm::exact_min1(sys);

  std::vector<osm::BoundReport> reports;
  reports.push_back({"independent_coin", osm::independent_coin_bound(sys), "", exact});
  std::vector<std::vector<int>> singletons;
  for (int i = 0; i < sys.size(); ++i) singletons.push_back({i});
  reports.push_back({"bucketing", osm::bucketing_bound(sys, singletons), "singletons", exact});
  reports.push_back({"fractional_bucketing", osm::fractional_bucketing_bound(sys, theta),
                     "theta=" + std::to_string(theta), exact});
  if (mean <= 1.0)
    reports.push_back({"variance", osm::variance_bound(mean, var),
                       "mean=" + std::to_string(mean) + " var=" + std::to_string(var), exact});

  std::ostringstream text;
  text << "mean=" << mean << " variance=" << var << "\n";
  for (const auto& report : reports) {
    text << report.name;
    if (!report.params.empty()) text << '(' << report.params << ')';
    text << '=' << report.value << "\n";
  }
  if (mean > 1.0) text << "variance=unavailable (mean > 1)\n";
  if (exact) text << "exact=" << *exact << "\n";
  maybe_write(out, text.str());
  return kExitOk;
}

int cmd_certify(const std::string& what, double eps, double delta, double spacing, double tau,
                const std::string& constants, int workers, const std::string& out) {
  std::vector<osm::CertificateReport> reports;
  if (what == "k" || what == "all") {
    std::vector<std::pair<double, double>> curve;
    const double h = spacing > 0.0 ? spacing : 1e-4;
    reports.push_back(
        osm::certify_k(eps, delta, h, tau > 0.0 ? tau : 0.678, &curve, workers));
    if (!out.empty()) {
      std::ostringstream csv;
      csv << "z,k\n";
      for (const auto& [z, k] : curve) csv << z << ',' << k << '\n';
      osm::write_text_file(out, csv.str());
    }
  }
  if (what == "vertex" || what == "all") {
    const double h = spacing > 0.0 ? spacing : 1e-4;
    reports.push_back(osm::certify_vertex_bound(h, tau > 0.0 ? tau : 0.685, workers));
    if (!out.empty() && what == "vertex") {
      std::ostringstream csv;
      csv << "x,y,value\n";
      const long nx = std::lround(0.5 / h), ny = std::lround(0.25 / h);
      for (long jx = 0; jx <= nx; ++jx)
        for (long jy = 0; jy <= ny; ++jy) {
          const double x = std::min(jx * h, 0.5), y = std::min(0.25 + jy * h, 0.5);
          csv << x << ',' << y << ',' << osm::vertex_B(x, y) << '\n';
        }
      osm::write_text_file(out, csv.str());
    }
  }
  if (what == "linear" || what == "all") {
    const double h = spacing > 0.0 ? spacing : 1e-3;
    if (constants == "d4" || constants == "both")
      reports.push_back(osm::certify_linear_lb(h, {0.614, 0.122, 0.197}, workers));
    if (constants == "d3" || constants == "both")
      reports.push_back(osm::certify_linear_lb(h, {0.613, 0.122, 0.21}, workers));
    if (!out.empty() && what == "linear") {
      std::ostringstream csv;
      csv << "x,y,value\n";
      const long nx = std::lround(std::ceil(1.0 / h)) - 1;
      for (long jx = 0; jx <= nx; ++jx) {
        const double x = jx * h;
        if (x >= 1.0) break;
        const long ny = static_cast<long>(std::floor((1.0 - x) * (1.0 - x) / h + 1e-9));
        for (long jy = 1; jy <= ny; ++jy)
          csv << x << ',' << jy * h << ',' << osm::conv_raw(0.5, x, jy * h) << '\n';
      }
      osm::write_text_file(out, csv.str());
    }
  }
  if (reports.empty()) throw CliError(kExitInput, "unknown certificate '" + what + "'");
  bool all_pass = true;
  for (const auto& report : reports) {
    std::cout << osm::write_json(report);
    all_pass = all_pass && report.pass;
  }
  return all_pass ? kExitOk : kExitCertificate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online stochastic bipartite matching toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string gen_shape;
  gen->add_option("shape", gen_shape, "rescale | star | random | 3sat")->required();
  int gen_n = 1, gen_T = 1;
  double gen_W = 1000.0, gen_density = 0.5, gen_wlo = 0.0, gen_whi = 1.0, gen_p = 0.05;
  bool gen_vw = false;
  std::uint64_t gen_seed = 0;
  std::string gen_formula, gen_out;
  gen->add_option("--n", gen_n, "offline nodes");
  gen->add_option("--T", gen_T, "time steps (random only)");
  gen->add_option("--W", gen_W, "final-arrival weight (rescale only)");
  gen->add_option("--density", gen_density, "edge probability (random only)");
  gen->add_option("--wlo", gen_wlo, "weight range low");
  gen->add_option("--whi", gen_whi, "weight range high");
  gen->add_flag("--vertex-weighted", gen_vw, "draw per-node weights");
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "rng seed (random only)");
  gen->add_option("--formula", gen_formula, "formula JSON path (3sat only)");
  gen->add_option("--p", gen_p, "clause arrival probability (3sat only)");
  gen->add_option("--out", gen_out, "output path (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve the matching LP");
  std::string solve_instance, solve_out;
  solve->add_option("--instance", solve_instance, "instance JSON path")->required();
  solve->add_option("--out", solve_out, "solution JSON path");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo run of an algorithm");
  std::string sim_instance, sim_alg = "core", sim_out;
  std::int64_t sim_reps = 0;
  std::uint64_t sim_seed = 0;
  int sim_workers = 1;
  sim->add_option("--instance", sim_instance, "instance JSON path")->required();
  sim->add_option("--alg", sim_alg,
                  "core | core-independent | edge-weighted[:eps,delta] | vertex-weighted | "
                  "general[:eps,delta]");
  sim->add_option("--reps", sim_reps, "replications")->required();
  sim->add_option("--seed", sim_seed, "rng seed")->required();
  sim->add_option("--workers", sim_workers, "worker threads");
  sim->add_option("--out", sim_out, "report JSON path");

  // ratio
  auto* ratio = app.add_subcommand("ratio", "algorithm value vs LP and optimum online");
  std::string ratio_instance, ratio_alg = "core", ratio_out;
  std::int64_t ratio_reps = 0;
  std::uint64_t ratio_seed = 0;
  int ratio_workers = 1;
  ratio->add_option("--instance", ratio_instance, "instance JSON path")->required();
  ratio->add_option("--alg", ratio_alg, "algorithm spec");
  ratio->add_option("--reps", ratio_reps, "replications")->required();
  ratio->add_option("--seed", ratio_seed, "rng seed")->required();
  ratio->add_option("--workers", ratio_workers, "worker threads");
  ratio->add_option("--out", ratio_out, "CSV path (default stdout)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact benchmarks");
  std::string oracle_instance, oracle_sat;
  double oracle_reduce_p = 0.0;
  bool oracle_prophet = false;
  std::int64_t oracle_reps = 10000;
  std::uint64_t oracle_seed = 0;
  oracle->add_option("--instance", oracle_instance, "instance JSON path");
  oracle->add_option("--3sat", oracle_sat, "formula JSON path");
  oracle->add_option("--reduce-p", oracle_reduce_p,
                     "build the matching reduction with this clause probability");
  oracle->add_flag("--prophet", oracle_prophet, "also report the offline optimum (Monte Carlo)");
  oracle->add_option("--reps", oracle_reps, "prophet replications");
  auto* oracle_seed_opt = oracle->add_option("--seed", oracle_seed, "prophet rng seed");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "tail-expectation bounds for a system");
  std::string bounds_system, bounds_out;
  double bounds_theta = 0.5;
  bounds->add_option("--system", bounds_system, "system JSON path")->required();
  bounds->add_option("--theta", bounds_theta, "fractional bucketing threshold");
  bounds->add_option("--out", bounds_out, "output path (default stdout)");

  // certify
  auto* certify = app.add_subcommand("certify", "grid certificates");
  std::string certify_what, certify_constants = "d4", certify_out;
  double certify_eps = 0.11, certify_delta = 0.18, certify_spacing = 0.0, certify_tau = 0.0;
  int certify_workers = 1;
  certify->add_option("what", certify_what, "k | vertex | linear | all")->required();
  certify->add_option("--eps", certify_eps, "k-curve eps");
  certify->add_option("--delta", certify_delta, "k-curve delta");
  certify->add_option("--spacing", certify_spacing, "grid spacing h");
  certify->add_option("--tau", certify_tau, "threshold override");
  certify->add_option("--constants", certify_constants, "linear constants: d4 | d3 | both");
  certify->add_option("--workers", certify_workers, "worker threads");
  certify->add_option("--out", certify_out, "CSV path: z,k curve or x,y,value grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInput;
  }

  try {
    if (gen->parsed())
      return cmd_gen(gen_shape, gen_n, gen_T, gen_W, gen_density, gen_wlo, gen_whi, gen_vw,
                     gen_seed, gen_seed_opt->count() > 0, gen_formula, gen_p, gen_out);
    if (solve->parsed()) return cmd_solve(solve_instance, solve_out);
    if (sim->parsed()) {
      if (sim_reps < 1) throw CliError(kExitInput, "--reps must be >= 1");
      return cmd_simulate(sim_instance, sim_alg, sim_reps, sim_seed, sim_workers, sim_out);
    }
    if (ratio->parsed()) {
      if (ratio_reps < 1) throw CliError(kExitInput, "--reps must be >= 1");
      return cmd_ratio(ratio_instance, ratio_alg, ratio_reps, ratio_seed, ratio_workers,
                       ratio_out);
    }
    if (oracle->parsed())
      return cmd_oracle(oracle_instance, oracle_sat, oracle_reduce_p, oracle_prophet, oracle_reps,
                        oracle_seed, oracle_seed_opt->count() > 0);
    if (bounds->parsed()) return cmd_bounds(bounds_system, bounds_theta, bounds_out);
    if (certify->parsed())
      return cmd_certify(certify_what, certify_eps, certify_delta, certify_spacing, certify_tau,
                         certify_constants, certify_workers, certify_out);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
