#ifndef SPARSEREG_SELECTION_HPP
#define SPARSEREG_SELECTION_HPP

#include <vector>

#include "sparsereg/core.hpp"
#include "sparsereg/solvers.hpp"

namespace sparsereg {

// Morozov band [tau1 * delta, tau2 * delta]. tau2 may be +infinity for the
// one-sided criterion delta <= ||Ax - y|| used by the experiments.
struct DiscrepancyBand {
  double tau1 = 1.01;
  double tau2 = 1.2;
  double delta = 0.0;

  bool in_band(double d) const {
    return d >= tau1 * delta && d <= tau2 * delta;
  }
  bool below(double d) const { return d < tau1 * delta; }
};

double discrepancy(const Vector& x, const ProblemInstance& p);

struct ProbeRecord {
  int index = 0;
  double parameter = 0.0;  // R or alpha
  double discrepancy = 0.0;
  std::optional<double> rel_error;
  int iterations = 0;
  double seconds = 0.0;
};

struct RadiusSearchResult {
  double chosen_radius = 0.0;
  std::vector<ProbeRecord> probes;
  bool satisfied = false;
  SolveOutcome best_outcome;  // solve at chosen_radius
};

struct RadiusSearchOptions {
  double r0 = 1.0;
  double increment = 1.0;  // c
  int probe_budget = 200;
  bool warm_start = true;
  bool one_sided = false;  // tau2 treated as +infinity
};

// Probes radii R0, R0 + c, ... while the solution's discrepancy satisfies
// the band, returning the largest in-band radius; searches downward by c
// when R0 already overshoots (discrepancy below the band). The chosen
// solver must be PG-GCGM or PG-SF.
RadiusSearchResult search_radius(const ProblemInstance& p,
                                 const SolverConfig& cfg, SolverKind solver,
                                 const RadiusSearchOptions& opts);

struct AlphaSearchResult {
  double chosen_alpha = 0.0;
  std::vector<ProbeRecord> probes;
  SolveOutcome outcome;
};

// Thrown when the geometric alpha sweep exhausts its budget without the
// discrepancy entering the band (e.g. exact data, delta = 0).
class BandNotFound : public std::runtime_error {
 public:
  BandNotFound(std::string msg, std::vector<ProbeRecord> probes)
      : std::runtime_error(std::move(msg)), probes(std::move(probes)) {}
  std::vector<ProbeRecord> probes;
};

// Solves the penalized problem at alpha_j = alpha0 * 2^-j (beta = eta *
// alpha_j) until the discrepancy enters the band.
AlphaSearchResult search_alpha(const ProblemInstance& p,
                               const SolverConfig& cfg, double alpha0,
                               int probe_budget = 200);

}  // namespace sparsereg

#endif
