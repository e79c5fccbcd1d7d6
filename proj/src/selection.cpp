#include "sparsereg/selection.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace sparsereg {

namespace {

using Clock = std::chrono::steady_clock;

ProbeRecord make_probe(int index, double parameter, double d,
                       const SolveOutcome& outcome, double seconds) {
  ProbeRecord rec;
  rec.index = index;
  rec.parameter = parameter;
  rec.discrepancy = d;
  if (!outcome.trace.empty()) rec.rel_error = outcome.trace.back().rel_error;
  rec.iterations = outcome.outer_iterations;
  rec.seconds = seconds;
  return rec;
}

}  // namespace

double discrepancy(const Vector& x, const ProblemInstance& p) {
  if (x.size() != p.n())
    throw ContractViolation("discrepancy: dimension mismatch");
  return (p.op.apply(x) - p.y_noisy).norm();
}

RadiusSearchResult search_radius(const ProblemInstance& p,
                                 const SolverConfig& cfg, SolverKind solver,
                                 const RadiusSearchOptions& opts) {
  if (solver != SolverKind::PG_GCGM && solver != SolverKind::PG_SF)
    throw ContractViolation("search_radius requires PG-GCGM or PG-SF");
  if (!(opts.r0 > 0.0))
    throw ContractViolation("search_radius: R0 must be > 0");
  if (!(opts.increment >= 1.0))
    throw ContractViolation("search_radius: c must be >= 1");

  DiscrepancyBand band{cfg.tau1,
                       opts.one_sided
                           ? std::numeric_limits<double>::infinity()
                           : cfg.tau2,
                       p.delta};

  RadiusSearchResult result;
  std::optional<Vector> warm;
  double radius = opts.r0;

  auto probe = [&](double r) {
    SolverConfig probe_cfg = cfg;
    probe_cfg.radius = r;
    const auto t0 = Clock::now();
    SolveOutcome outcome =
        run_solver(solver, p, probe_cfg,
                   opts.warm_start ? warm : std::optional<Vector>{});
    const double secs =
        std::chrono::duration<double>(Clock::now() - t0).count();
    const double d = discrepancy(outcome.x_final, p);
    result.probes.push_back(make_probe(
        static_cast<int>(result.probes.size()), r, d, outcome, secs));
    if (opts.warm_start) warm = outcome.x_final;
    return std::pair<double, SolveOutcome>(d, std::move(outcome));
  };

  auto [d, outcome] = probe(radius);
  if (band.below(d)) {
    // R0 overshoots: reduce until the band is entered from below
    for (int j = 1; j < opts.probe_budget; ++j) {
      radius -= opts.increment;
      if (radius <= 0.0) break;
      std::tie(d, outcome) = probe(radius);
      if (!band.below(d)) {
        result.satisfied = band.in_band(d);
        result.chosen_radius = radius;
        result.best_outcome = std::move(outcome);
        return result;
      }
    }
    result.satisfied = false;
    result.chosen_radius = radius;
    result.best_outcome = std::move(outcome);
    return result;
  }

  // grow R while the band holds; the last in-band radius wins
  double chosen = radius;
  SolveOutcome chosen_outcome = outcome;
  bool found = band.in_band(d);
  for (int j = 1; j < opts.probe_budget; ++j) {
    radius += opts.increment;
    std::tie(d, outcome) = probe(radius);
    if (band.below(d)) break;
    if (band.in_band(d)) {
      found = true;
      chosen = radius;
      chosen_outcome = outcome;
    } else if (!found) {
      // still above the band: remember the closest candidate so far
      chosen = radius;
      chosen_outcome = outcome;
    }
  }
  result.satisfied = found;
  result.chosen_radius = chosen;
  result.best_outcome = std::move(chosen_outcome);
  return result;
}

AlphaSearchResult search_alpha(const ProblemInstance& p,
                               const SolverConfig& cfg, double alpha0,
                               int probe_budget) {
  if (!(alpha0 > 0.0))
    throw ContractViolation("search_alpha: alpha0 must be > 0");
  DiscrepancyBand band{cfg.tau1, cfg.tau2, p.delta};
  std::vector<ProbeRecord> probes;
  for (int j = 0; j < probe_budget; ++j) {
    const double alpha_j = alpha0 * std::pow(2.0, -j);
    SolverConfig probe_cfg = cfg;
    probe_cfg.alpha = alpha_j;
    probe_cfg.beta = alpha_j * cfg.eta;
    const auto t0 = Clock::now();
    SolveOutcome outcome = solve_st_l1l2(p, probe_cfg);
    const double secs =
        std::chrono::duration<double>(Clock::now() - t0).count();
    const double d = discrepancy(outcome.x_final, p);
    probes.push_back(make_probe(j, alpha_j, d, outcome, secs));
    if (band.in_band(d)) {
      AlphaSearchResult result;
      result.chosen_alpha = alpha_j;
      result.probes = std::move(probes);
      result.outcome = std::move(outcome);
      return result;
    }
  }
  throw BandNotFound(
      "search_alpha: discrepancy band never entered within probe budget",
      std::move(probes));
}

}  // namespace sparsereg
