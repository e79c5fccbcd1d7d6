// sparsebench: generate benchmark instances, run the solvers, and emit
// plot-ready CSV traces plus JSON summaries. Subcommands: cs, blur, sweep,
// replay.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "sparsereg/diagnostics.hpp"
#include "sparsereg/problems.hpp"
#include "sparsereg/selection.hpp"
#include "sparsereg/serialize.hpp"
#include "sparsereg/solvers.hpp"

using namespace sparsereg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct CommonOpts {
  std::string solver = "pg-gcgm";
  double eta = 1.0;
  double lambda = 1.0;
  double alpha = 0.02;
  double tau1 = 1.01;
  double tau2 = 1.2;
  double radius = 16.0;
  bool do_search_radius = false;
  double r0 = 10.0;
  double c = 1.0;
  bool two_sided = false;
  bool do_search_alpha = false;
  double alpha0 = 1.0;
  int max_outer = 5000;
  int max_inner = 200;
  bool force_unit_step = false;
  bool strict = false;
  std::string out = ".";
};

struct CsOpts {
  int n = 200, m = 80, s = 16;
  double snr_db = 50.0;
  std::uint64_t seed = 1;
  bool no_rescale = false;
};

struct BlurOpts {
  int n = 64, band = 3;
  double tau = 0.7;
  double snr_db = 50.0;
  std::uint64_t seed = 1;
  bool stats_only = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--solver", o.solver, "ista | st | pg-gcgm | pg-sf");
  cmd->add_option("--eta", o.eta, "beta/alpha ratio in [0,1]");
  cmd->add_option("--lambda", o.lambda, "surrogate weight");
  cmd->add_option("--alpha", o.alpha, "l1 weight");
  cmd->add_option("--tau1", o.tau1, "discrepancy band lower factor");
  cmd->add_option("--tau2", o.tau2, "discrepancy band upper factor");
  cmd->add_option("--radius", o.radius, "l1-ball radius R");
  cmd->add_flag("--search-radius", o.do_search_radius,
                "pick R by the discrepancy principle");
  cmd->add_option("--r0", o.r0, "radius search start");
  cmd->add_option("--c", o.c, "radius search increment");
  cmd->add_flag("--two-sided", o.two_sided,
                "require the discrepancy inside [tau1 d, tau2 d] during the "
                "radius search (default: one-sided tau1 d <= ||Ax-y||)");
  cmd->add_flag("--search-alpha", o.do_search_alpha,
                "pick alpha by geometric halving from --alpha0");
  cmd->add_option("--alpha0", o.alpha0, "alpha search start");
  cmd->add_option("--max-outer", o.max_outer, "outer iteration budget");
  cmd->add_option("--max-inner", o.max_inner, "inner iteration budget");
  cmd->add_flag("--unit-step", o.force_unit_step, "skip the line search");
  cmd->add_flag("--strict", o.strict,
                "exit 2 when the budget runs out before convergence");
  cmd->add_option("--out", o.out, "output directory")
      ->envname("SPARSEBENCH_OUT");
}

json common_to_json(const CommonOpts& o) {
  return json{{"solver", o.solver},
              {"eta", o.eta},
              {"lambda", o.lambda},
              {"alpha", o.alpha},
              {"tau1", o.tau1},
              {"tau2", o.tau2},
              {"radius", o.radius},
              {"search_radius", o.do_search_radius},
              {"r0", o.r0},
              {"c", o.c},
              {"two_sided", o.two_sided},
              {"search_alpha", o.do_search_alpha},
              {"alpha0", o.alpha0},
              {"max_outer", o.max_outer},
              {"max_inner", o.max_inner},
              {"unit_step", o.force_unit_step},
              {"strict", o.strict}};
}

void common_from_json(const json& j, CommonOpts& o) {
  o.solver = j.at("solver");
  o.eta = j.at("eta");
  o.lambda = j.at("lambda");
  o.alpha = j.at("alpha");
  o.tau1 = j.at("tau1");
  o.tau2 = j.at("tau2");
  o.radius = j.at("radius");
  o.do_search_radius = j.at("search_radius");
  o.r0 = j.at("r0");
  o.c = j.at("c");
  o.two_sided = j.at("two_sided");
  o.do_search_alpha = j.at("search_alpha");
  o.alpha0 = j.at("alpha0");
  o.max_outer = j.at("max_outer");
  o.max_inner = j.at("max_inner");
  o.force_unit_step = j.at("unit_step");
  o.strict = j.at("strict");
}

SolverConfig build_config(const CommonOpts& o) {
  SolverConfig cfg = SolverConfig::make(o.alpha, o.eta);
  cfg.lambda = o.lambda;
  cfg.radius = o.radius;
  cfg.tau1 = o.tau1;
  cfg.tau2 = o.tau2;
  cfg.max_outer_iters = o.max_outer;
  cfg.max_inner_iters = o.max_inner;
  cfg.force_unit_step = o.force_unit_step;
  if (o.solver == "ista" || o.solver == "st")
    cfg.variant = ObjectiveVariant::L1L2_PENALIZED;
  else
    cfg.variant = ObjectiveVariant::L1BALL_CONSTRAINED;
  return cfg;
}

std::string csv_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const fs::path& path, const IterationTrace& trace) {
  std::ofstream out(path);
  out << "iter,seconds,objective,discrepancy,rerror,l1norm\n";
  for (const TraceRecord& r : trace) {
    out << r.iteration << ',' << csv_double(r.seconds) << ','
        << csv_double(r.objective) << ',' << csv_double(r.discrepancy) << ','
        << (r.rel_error ? csv_double(*r.rel_error) : std::string()) << ','
        << csv_double(r.l1_norm) << '\n';
  }
}

void write_probes_csv(const fs::path& path,
                      const std::vector<ProbeRecord>& probes) {
  std::ofstream out(path);
  out << "j,parameter,discrepancy,rerror,iterations,seconds\n";
  for (const ProbeRecord& p : probes) {
    out << p.index << ',' << csv_double(p.parameter) << ','
        << csv_double(p.discrepancy) << ','
        << (p.rel_error ? csv_double(*p.rel_error) : std::string()) << ','
        << p.iterations << ',' << csv_double(p.seconds) << '\n';
  }
}

json report_to_json(const AssumptionReport& r) {
  return json{{"r_estimate", r.r_estimate},   {"a1_holds", r.a1_holds},
              {"a1_analytic", r.a1_analytic}, {"a2_holds", r.a2_holds},
              {"max_eig_seen", r.max_eig_seen}, {"samples", r.samples}};
}

void write_manifest(const fs::path& dir, const std::string& subcommand,
                    const json& options) {
  json manifest{{"subcommand", subcommand},
                {"options", options},
                {"version", kVersion},
                {"created", std::chrono::duration_cast<std::chrono::seconds>(
                                std::chrono::system_clock::now()
                                    .time_since_epoch())
                                .count()}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
}

// Solves one instance per the common options, writing trace.csv,
// summary.json, and probe logs into o.out. Returns the process exit code.
int run_instance(const ProblemInstance& p, const CommonOpts& o,
                 json extra_summary) {
  const auto kind = parse_solver(o.solver);
  if (!kind) {
    std::cerr << "unknown solver: " << o.solver << '\n';
    return kExitUsage;
  }
  SolverConfig cfg = build_config(o);
  const fs::path dir(o.out);
  fs::create_directories(dir);

  json summary = std::move(extra_summary);
  summary["solver"] = o.solver;
  summary["delta"] = p.delta;

  try {
    if (o.do_search_alpha) {
      AlphaSearchResult res = search_alpha(p, cfg, o.alpha0);
      cfg.alpha = res.chosen_alpha;
      cfg.beta = cfg.alpha * cfg.eta;
      summary["chosen_alpha"] = res.chosen_alpha;
      write_probes_csv(dir / "alpha_probes.csv", res.probes);
    }
    if (o.do_search_radius) {
      if (*kind != SolverKind::PG_GCGM && *kind != SolverKind::PG_SF) {
        std::cerr << "--search-radius needs pg-gcgm or pg-sf\n";
        return kExitUsage;
      }
      RadiusSearchOptions opts;
      opts.r0 = o.r0;
      opts.increment = o.c;
      opts.one_sided = !o.two_sided;
      RadiusSearchResult res = search_radius(p, cfg, *kind, opts);
      write_probes_csv(dir / "radius_probes.csv", res.probes);
      if (!res.satisfied) {
        std::cerr << "radius search never entered the discrepancy band\n";
        return kExitNumerical;
      }
      cfg.radius = res.chosen_radius;
      summary["chosen_radius"] = res.chosen_radius;
    }
  } catch (const BandNotFound& e) {
    write_probes_csv(dir / "alpha_probes.csv", e.probes);
    std::cerr << e.what() << '\n';
    return kExitNumerical;
  }

  cfg.record_iterates = true;
  const SolveOutcome out = run_solver(*kind, p, cfg);
  write_trace_csv(dir / "trace.csv", out.trace);

  summary["alpha"] = cfg.alpha;
  summary["radius"] = cfg.radius;
  summary["termination"] = to_string(out.termination);
  summary["outer_iterations"] = out.outer_iterations;
  summary["inner_iterations"] = out.total_inner_iterations;
  summary["final_discrepancy"] = discrepancy(out.x_final, p);
  if (p.x_true)
    summary["final_rerror"] = relative_error(out.x_final, *p.x_true);
  summary["assumptions"] =
      report_to_json(check_assumptions(p, cfg, out.iterate_history));
  std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';

  if (o.strict && out.termination == Termination::BUDGET_EXHAUSTED) {
    std::cerr << "iteration budget exhausted before convergence\n";
    return kExitNumerical;
  }
  return 0;
}

int run_cs(const CsOpts& g, const CommonOpts& o) {
  CsSpec spec;
  spec.n = g.n;
  spec.m = g.m;
  spec.s = g.s;
  spec.snr_db = g.snr_db;
  spec.seed = g.seed;
  spec.rescale_to_unit_norm = !g.no_rescale;
  ProblemInstance p = generate_cs(spec);

  json options = common_to_json(o);
  options["family"] = json{{"kind", "cs"},     {"n", g.n},
                           {"m", g.m},         {"s", g.s},
                           {"snr_db", g.snr_db}, {"seed", g.seed},
                           {"no_rescale", g.no_rescale}};
  fs::create_directories(o.out);
  write_manifest(o.out, "cs", options);
  return run_instance(p, o, json::object());
}

int run_blur(const BlurOpts& g, const CommonOpts& o) {
  BlurSpec spec;
  spec.n = g.n;
  spec.band = g.band;
  spec.tau = g.tau;
  spec.snr_db = g.snr_db;
  spec.seed = g.seed;
  ProblemInstance p = generate_blur(spec);

  // exact operator stats from the Kronecker eigenstructure
  Eigen::SelfAdjointEigenSolver<Matrix> eig(p.op.kron_factor());
  const Vector abs_eigs = eig.eigenvalues().cwiseAbs();
  const double scale = std::abs(p.op.kron_scale());
  const double max_e = abs_eigs.maxCoeff(), min_e = abs_eigs.minCoeff();
  json stats{{"operator_norm", scale * max_e * max_e},
             {"condition", (max_e / min_e) * (max_e / min_e)},
             {"x_true_l1", p.x_true->lpNorm<1>()}};

  json options = common_to_json(o);
  options["family"] = json{{"kind", "blur"},   {"n", g.n},
                           {"band", g.band},   {"tau", g.tau},
                           {"snr_db", g.snr_db}, {"seed", g.seed},
                           {"stats_only", g.stats_only}};
  fs::create_directories(o.out);
  write_manifest(o.out, "blur", options);

  if (g.stats_only) {
    json summary{{"delta", p.delta}, {"operator", stats}};
    std::ofstream(fs::path(o.out) / "summary.json") << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
    return 0;
  }
  return run_instance(p, o, json{{"operator", stats}});
}

struct SweepOpts {
  std::string family = "cs";
  std::vector<std::string> solvers{"st", "pg-gcgm", "pg-sf"};
  std::vector<double> etas{0.0, 0.5, 1.0};
  std::vector<double> radii;  // non-empty switches to a radius sweep
  int seeds = 20;
  int jobs = 0;
};

struct SweepCell {
  std::string solver;
  double eta = 0.0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  double rerror = 0.0;
  double discrepancy = 0.0;
};

int run_sweep(const SweepOpts& s, const CsOpts& g, const CommonOpts& o) {
  const bool radius_mode = !s.radii.empty();
  std::vector<SweepCell> cells;
  for (const std::string& solver : s.solvers) {
    if (!parse_solver(solver)) {
      std::cerr << "unknown solver: " << solver << '\n';
      return kExitUsage;
    }
    if (radius_mode) {
      for (double r : s.radii)
        for (int seed = 1; seed <= s.seeds; ++seed)
          cells.push_back({solver, o.eta, r, std::uint64_t(seed), 0, 0});
    } else {
      for (double eta : s.etas)
        for (int seed = 1; seed <= s.seeds; ++seed)
          cells.push_back({solver, eta, o.radius, std::uint64_t(seed), 0, 0});
    }
  }

  auto run_cell = [&](SweepCell& cell) {
    CsSpec spec;
    spec.n = g.n;
    spec.m = g.m;
    spec.s = g.s;
    spec.snr_db = g.snr_db;
    spec.seed = cell.seed;
    spec.rescale_to_unit_norm = !g.no_rescale;
    ProblemInstance p = generate_cs(spec);
    CommonOpts local = o;
    local.solver = cell.solver;
    local.eta = cell.eta;
    local.radius = cell.radius;
    SolverConfig cfg = build_config(local);
    SolveOutcome out = run_solver(*parse_solver(cell.solver), p, cfg);
    cell.rerror = relative_error(out.x_final, *p.x_true);
    cell.discrepancy = discrepancy(out.x_final, p);
  };

  const int jobs = s.jobs > 0
                       ? s.jobs
                       : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++)
        run_cell(cells[i]);
    });
  for (std::thread& t : pool) t.join();

  const fs::path dir(o.out);
  fs::create_directories(dir);
  json options = common_to_json(o);
  options["family"] = json{{"kind", "cs"},     {"n", g.n},
                           {"m", g.m},         {"s", g.s},
                           {"snr_db", g.snr_db}, {"no_rescale", g.no_rescale}};
  options["sweep"] = json{{"solvers", s.solvers}, {"etas", s.etas},
                          {"radii", s.radii},     {"seeds", s.seeds}};
  write_manifest(dir, "sweep", options);

  std::ofstream cells_csv(dir / "cells.csv");
  cells_csv << "solver,eta,radius,seed,rerror,discrepancy\n";
  for (const SweepCell& c : cells)
    cells_csv << c.solver << ',' << csv_double(c.eta) << ','
              << csv_double(c.radius) << ',' << c.seed << ','
              << csv_double(c.rerror) << ',' << csv_double(c.discrepancy)
              << '\n';

  // per-(solver, parameter) medians, in deterministic declaration order
  std::ofstream table(dir / "table.csv");
  table << (radius_mode ? "solver,radius,median_rerror,median_discrepancy\n"
                        : "solver,eta,median_rerror,median_discrepancy\n");
  const std::vector<double>& params = radius_mode ? s.radii : s.etas;
  for (const std::string& solver : s.solvers)
    for (double param : params) {
      std::vector<double> errs, discs;
      for (const SweepCell& c : cells)
        if (c.solver == solver &&
            (radius_mode ? c.radius : c.eta) == param) {
          errs.push_back(c.rerror);
          discs.push_back(c.discrepancy);
        }
      std::sort(errs.begin(), errs.end());
      std::sort(discs.begin(), discs.end());
      auto med = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
      };
      table << solver << ',' << csv_double(param) << ','
            << csv_double(med(errs)) << ',' << csv_double(med(discs)) << '\n';
    }
  return 0;
}

int run_replay(const std::string& manifest_path, const std::string& out);

int dispatch_manifest(const json& manifest, const std::string& out_override) {
  const std::string sub = manifest.at("subcommand");
  const json& options = manifest.at("options");
  CommonOpts o;
  common_from_json(options, o);
  if (!out_override.empty()) o.out = out_override;
  const json& fam = options.at("family");

  if (sub == "cs" || (sub == "sweep" && fam.at("kind") == "cs")) {
    CsOpts g;
    g.n = fam.at("n");
    g.m = fam.at("m");
    g.s = fam.at("s");
    g.snr_db = fam.at("snr_db");
    g.no_rescale = fam.at("no_rescale");
    if (sub == "cs") {
      g.seed = fam.at("seed");
      return run_cs(g, o);
    }
    SweepOpts s;
    const json& sw = options.at("sweep");
    s.solvers = sw.at("solvers").get<std::vector<std::string>>();
    s.etas = sw.at("etas").get<std::vector<double>>();
    s.radii = sw.at("radii").get<std::vector<double>>();
    s.seeds = sw.at("seeds");
    return run_sweep(s, g, o);
  }
  if (sub == "blur") {
    BlurOpts g;
    g.n = fam.at("n");
    g.band = fam.at("band");
    g.tau = fam.at("tau");
    g.snr_db = fam.at("snr_db");
    g.seed = fam.at("seed");
    g.stats_only = fam.at("stats_only");
    return run_blur(g, o);
  }
  std::cerr << "manifest has unknown subcommand: " << sub << '\n';
  return kExitUsage;
}

int run_replay(const std::string& manifest_path, const std::string& out) {
  std::ifstream in(manifest_path);
  if (!in) {
    std::cerr << "cannot open " << manifest_path << '\n';
    return kExitUsage;
  }
  return dispatch_manifest(json::parse(in), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse-recovery benchmark harness"};
  app.require_subcommand(1);

  CommonOpts cs_common, blur_common, sweep_common;
  CsOpts cs_opts, sweep_family;
  BlurOpts blur_opts;
  SweepOpts sweep_opts;
  std::string manifest_path, replay_out;

  CLI::App* cs = app.add_subcommand("cs", "random Gaussian sensing instance");
  cs->add_option("--n", cs_opts.n, "signal length");
  cs->add_option("--m", cs_opts.m, "measurement count");
  cs->add_option("--s", cs_opts.s, "sparsity");
  cs->add_option("--snr-db", cs_opts.snr_db, "noise level in dB");
  cs->add_option("--seed", cs_opts.seed, "RNG seed");
  cs->add_flag("--no-rescale", cs_opts.no_rescale,
               "skip the operator-norm rescale");
  add_common_flags(cs, cs_common);

  CLI::App* blur = app.add_subcommand("blur", "Gaussian-PSF deblurring");
  blur->add_option("--n", blur_opts.n, "image side length");
  blur->add_option("--band", blur_opts.band, "Toeplitz bandwidth");
  blur->add_option("--tau", blur_opts.tau, "PSF width");
  blur->add_option("--snr-db", blur_opts.snr_db, "noise level in dB");
  blur->add_option("--seed", blur_opts.seed, "RNG seed");
  blur->add_flag("--stats-only", blur_opts.stats_only,
                 "report operator stats without solving");
  add_common_flags(blur, blur_common);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "solver x eta (or x radius) grid over seeds");
  sweep->add_option("--n", sweep_family.n, "signal length");
  sweep->add_option("--m", sweep_family.m, "measurement count");
  sweep->add_option("--s", sweep_family.s, "sparsity");
  sweep->add_option("--snr-db", sweep_family.snr_db, "noise level in dB");
  sweep->add_flag("--no-rescale", sweep_family.no_rescale,
                  "skip the operator-norm rescale");
  sweep->add_option("--solvers", sweep_opts.solvers, "solvers to compare");
  sweep->add_option("--etas", sweep_opts.etas, "eta grid");
  sweep->add_option("--radii", sweep_opts.radii,
                    "radius grid (switches to a radius sweep)");
  sweep->add_option("--seeds", sweep_opts.seeds, "number of seeds");
  sweep->add_option("--jobs", sweep_opts.jobs, "worker threads");
  add_common_flags(sweep, sweep_common);

  CLI::App* replay = app.add_subcommand("replay", "re-run a manifest");
  replay->add_option("manifest", manifest_path, "manifest.json path")
      ->required();
  replay->add_option("--out", replay_out, "output directory override")
      ->envname("SPARSEBENCH_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cs->parsed()) return run_cs(cs_opts, cs_common);
    if (blur->parsed()) return run_blur(blur_opts, blur_common);
    if (sweep->parsed())
      return run_sweep(sweep_opts, sweep_family, sweep_common);
    if (replay->parsed()) return run_replay(manifest_path, replay_out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
