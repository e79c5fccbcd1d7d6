#include "sparsereg/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "sparsereg/rng.hpp"

namespace sparsereg {

double relative_error(const Vector& x, const Vector& x_true) {
  const double ref = x_true.norm();
  if (ref == 0.0)
    throw ContractViolation("relative_error: x_true must be nonzero");
  return (x - x_true).norm() / ref;
}

double max_eig_norm_hessian(const Vector& w) {
  const double norm = w.norm();
  if (norm == 0.0)
    throw ContractViolation("max_eig_norm_hessian: w must be nonzero");
  return w.size() >= 2 ? 1.0 / norm : 0.0;
}

AssumptionReport check_assumptions(const ProblemInstance& p,
                                   const SolverConfig& cfg,
                                   const std::vector<Vector>& trace_iterates,
                                   int samples, std::uint64_t seed) {
  if (!(cfg.lambda > 0.0))
    throw ContractViolation("check_assumptions: lambda must be > 0");
  AssumptionReport report;
  report.r_estimate = p.op.operator_norm_sq();
  report.a1_analytic = report.r_estimate < 1.0 && cfg.lambda >= 2.0;

  samples = std::max(samples, 100);
  report.samples = samples;
  const double bound = cfg.lambda * report.r_estimate / 2.0;
  Rng rng(seed);
  report.a1_holds = true;
  Vector x(p.n());
  for (int k = 0; k < samples; ++k) {
    for (Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    x /= x.norm();
    if (p.op.apply(x).squaredNorm() > bound * x.squaredNorm())
      report.a1_holds = false;
  }

  for (const Vector& w : trace_iterates) {
    if (w.norm() == 0.0) continue;
    report.max_eig_seen = std::max(report.max_eig_seen,
                                   max_eig_norm_hessian(w));
  }
  report.a2_holds = cfg.lambda >= cfg.beta * report.max_eig_seen;
  return report;
}

double eval_surrogate(const Vector& w, const Vector& x,
                      const ProblemInstance& p, const SolverConfig& cfg) {
  if (w.size() != p.n() || x.size() != p.n())
    throw ContractViolation("eval_surrogate: dimension mismatch");
  const double fit = 0.5 * (p.op.apply(w) - p.y_noisy).squaredNorm();
  const double corr = 0.5 * p.op.apply(w - x).squaredNorm();
  return fit - cfg.beta * w.norm() - corr +
         0.5 * cfg.lambda * (w - x).squaredNorm();
}

}  // namespace sparsereg
