#ifndef SPARSEREG_SOLVERS_HPP
#define SPARSEREG_SOLVERS_HPP

#include <optional>

#include "sparsereg/core.hpp"

namespace sparsereg {

// Evaluates the two objectives driving every solver:
//   J(x) = 1/2 ||Ax - y||^2 + alpha ||x||_1 - beta ||x||_2   (penalized)
//   D(x) = 1/2 ||Ax - y||^2 - beta ||x||_2                   (constrained)
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const ProblemInstance& p, const SolverConfig& cfg)
      : p_(p), cfg_(cfg) {}

  double eval_J(const Vector& x) const;
  double eval_D(const Vector& x) const;

  // J from a precomputed residual Ax - y; avoids the matvec.
  double eval_J_with_residual(const Vector& x, const Vector& residual) const;
  double eval_D_with_residual(const Vector& x, const Vector& residual) const;

  const ProblemInstance& problem() const { return p_; }
  const SolverConfig& config() const { return cfg_; }

 private:
  const ProblemInstance& p_;
  const SolverConfig& cfg_;
};

struct FixedPointReport {
  int iterations_used = 0;
  double final_residual = 0.0;
  bool converged = false;
  bool zero_iterate_hit = false;
};

// Step size s in [0,1] approximately minimizing J(x + s(z-x)), guaranteed
// no worse than either endpoint. 33-point grid plus golden-section refine.
double line_search(const Vector& x, const Vector& z, const ProblemInstance& p,
                   const SolverConfig& cfg);

// Budgeted ISTA from x = 0 with threshold alpha; the "if x^k = 0" branch
// shared by the ST and PG-GCGM loops.
Vector zero_iterate_fallback(const ProblemInstance& p,
                             const SolverConfig& cfg);

// Classical ISTA x^{k+1} = S_alpha(x^k - A*(Ax^k - y)). Requires
// ||A*A|| < 1; throws ConfigError telling the caller to rescale otherwise.
SolveOutcome solve_ista(const ProblemInstance& p, const SolverConfig& cfg,
                        std::optional<Vector> x0 = std::nullopt);

// Soft-thresholding scheme for the penalized l1-l2 objective, with a
// 1-D line search on J per step.
SolveOutcome solve_st_l1l2(const ProblemInstance& p, const SolverConfig& cfg,
                           std::optional<Vector> x0 = std::nullopt);

// Projected-gradient scheme via the generalized conditional gradient
// method: descend along z^k = P_R(x^k + beta x^k/(lambda ||x^k||) -
// A*(Ax^k - y)/lambda) with the same line search.
SolveOutcome solve_pg_gcgm(const ProblemInstance& p, const SolverConfig& cfg,
                           std::optional<Vector> x0 = std::nullopt);

// Projected-gradient scheme via the surrogate-function majorizer; each
// outer step solves an implicit projection equation by fixed-point
// iteration started from the all-ones vector.
SolveOutcome solve_pg_sf(const ProblemInstance& p, const SolverConfig& cfg,
                         std::optional<Vector> x0 = std::nullopt);

// max over the 2n vertices w = +-R e_i of <beta x/||x|| - A*(Ax-y), w - x>.
// Nonpositive (up to tolerance) certifies approximate stationarity on B_R.
double stationarity_residual(const Vector& x, const ProblemInstance& p,
                             const SolverConfig& cfg);

enum class SolverKind { ISTA, ST_L1L2, PG_GCGM, PG_SF };

SolveOutcome run_solver(SolverKind kind, const ProblemInstance& p,
                        const SolverConfig& cfg,
                        std::optional<Vector> x0 = std::nullopt);

std::optional<SolverKind> parse_solver(const std::string& name);
const char* to_string(SolverKind kind);

}  // namespace sparsereg

#endif
