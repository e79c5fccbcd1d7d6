#ifndef SPARSEREG_DIAGNOSTICS_HPP
#define SPARSEREG_DIAGNOSTICS_HPP

#include <vector>

#include "sparsereg/core.hpp"

namespace sparsereg {

// ||x - x_true|| / ||x_true||.
double relative_error(const Vector& x, const Vector& x_true);

// Largest eigenvalue of the Hessian of w -> ||w||_2, the matrix
// (I - w w^T / ||w||^2) / ||w||: 1/||w|| for n >= 2, 0 for n = 1.
double max_eig_norm_hessian(const Vector& w);

struct AssumptionReport {
  double r_estimate = 0.0;   // ||A*A|| estimate
  bool a1_holds = false;     // ||Ax||^2 <= (lambda r / 2) ||x||^2, sampled
  bool a1_analytic = false;  // sufficient condition lambda >= 2 with r < 1
  bool a2_holds = false;     // lambda >= beta * max eig over the iterates
  double max_eig_seen = 0.0;
  int samples = 0;
};

// Samples >= 100 random unit vectors for the operator bound and scans the
// iterate trace for the norm-Hessian eigenvalue bound.
AssumptionReport check_assumptions(const ProblemInstance& p,
                                   const SolverConfig& cfg,
                                   const std::vector<Vector>& trace_iterates,
                                   int samples = 200,
                                   std::uint64_t seed = 99);

// Phi_lambda(w, x) = 1/2 ||Aw-y||^2 - beta ||w||_2
//                    - 1/2 ||A(w-x)||^2 + lambda/2 ||w-x||^2.
double eval_surrogate(const Vector& w, const Vector& x,
                      const ProblemInstance& p, const SolverConfig& cfg);

}  // namespace sparsereg

#endif
