#include "sparsereg/solvers.hpp"

#include <chrono>
#include <cmath>

#include "sparsereg/prox.hpp"

namespace sparsereg {

namespace {

constexpr double kZeroNormGuard = 1e-14;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vector default_start(const ProblemInstance& p) {
  return Vector::Constant(p.n(), 0.01);
}

void push_record(SolveOutcome& out, const ProblemInstance& p, int k,
                 double objective, double discrepancy, const Vector& x,
                 Clock::time_point t0) {
  TraceRecord rec;
  rec.iteration = k;
  rec.objective = objective;
  rec.discrepancy = discrepancy;
  if (p.x_true && p.x_true->norm() > 0.0)
    rec.rel_error = (x - *p.x_true).norm() / p.x_true->norm();
  rec.l1_norm = x.lpNorm<1>();
  rec.seconds = seconds_since(t0);
  out.trace.push_back(rec);
}

// g(s) = J(x + s(z-x)) with the residual interpolated from cached Ax, Az.
struct SegmentObjective {
  const Vector& x;
  const Vector& z;
  const Vector& rx;  // Ax - y
  const Vector& rz;  // Az - y
  double alpha, beta;

  double operator()(double s) const {
    const Vector xv = x + s * (z - x);
    const Vector rv = (1.0 - s) * rx + s * rz;
    return 0.5 * rv.squaredNorm() + alpha * xv.lpNorm<1>() -
           beta * xv.norm();
  }
};

// g(s) = D(x + s(z-x)): without the piecewise-linear l1 term both pieces
// are quadratics in s, so the whole line search runs on six scalars.
struct ConstrainedSegmentObjective {
  double r0, r1, r2;  // ||(1-s)rx + s rz||^2 coefficients
  double x0, x1, x2;  // ||x + s(z-x)||^2 coefficients
  double beta;

  ConstrainedSegmentObjective(const Vector& x, const Vector& z,
                              const Vector& rx, const Vector& rz, double b)
      : beta(b) {
    const Vector dr = rz - rx;
    const Vector dx = z - x;
    r0 = rx.squaredNorm();
    r1 = 2.0 * rx.dot(dr);
    r2 = dr.squaredNorm();
    x0 = x.squaredNorm();
    x1 = 2.0 * x.dot(dx);
    x2 = dx.squaredNorm();
  }

  double operator()(double s) const {
    const double nsq = std::max(0.0, x0 + s * (x1 + s * x2));
    return 0.5 * (r0 + s * (r1 + s * r2)) - beta * std::sqrt(nsq);
  }
};

template <typename F>
double minimize_segment(const F& g) {
  constexpr int kGridPoints = 33;
  double best_s = 0.0;
  double best_g = g(0.0);
  int best_i = 0;
  for (int i = 1; i < kGridPoints; ++i) {
    const double s = static_cast<double>(i) / (kGridPoints - 1);
    const double v = g(s);
    if (v < best_g) {
      best_g = v;
      best_s = s;
      best_i = i;
    }
  }
  // golden-section refine the bracket around the best grid point
  const double h = 1.0 / (kGridPoints - 1);
  double lo = std::max(0.0, best_s - h);
  double hi = std::min(1.0, best_s + h);
  constexpr double kGolden = 0.6180339887498949;
  double c1 = hi - kGolden * (hi - lo);
  double c2 = lo + kGolden * (hi - lo);
  double f1 = g(c1), f2 = g(c2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - kGolden * (hi - lo);
      f1 = g(c1);
    } else {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + kGolden * (hi - lo);
      f2 = g(c2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  // endpoint dominance: never worse than s = 0, s = 1, or the grid winner
  double s_star = mid;
  double g_star = g(mid);
  for (double cand : {0.0, 1.0, best_s}) {
    const double v = g(cand);
    if (v < g_star) {
      g_star = v;
      s_star = cand;
    }
  }
  (void)best_i;
  return s_star;
}

}  // namespace

double ObjectiveEvaluator::eval_J(const Vector& x) const {
  return eval_J_with_residual(x, p_.op.apply(x) - p_.y_noisy);
}

double ObjectiveEvaluator::eval_D(const Vector& x) const {
  return eval_D_with_residual(x, p_.op.apply(x) - p_.y_noisy);
}

double ObjectiveEvaluator::eval_J_with_residual(const Vector& x,
                                                const Vector& residual) const {
  return 0.5 * residual.squaredNorm() + cfg_.alpha * x.lpNorm<1>() -
         cfg_.beta * x.norm();
}

double ObjectiveEvaluator::eval_D_with_residual(const Vector& x,
                                                const Vector& residual) const {
  return 0.5 * residual.squaredNorm() - cfg_.beta * x.norm();
}

double line_search(const Vector& x, const Vector& z, const ProblemInstance& p,
                   const SolverConfig& cfg) {
  if (x.size() != p.n() || z.size() != p.n())
    throw ContractViolation("line_search: dimension mismatch");
  const Vector rx = p.op.apply(x) - p.y_noisy;
  const Vector rz = p.op.apply(z) - p.y_noisy;
  return minimize_segment(SegmentObjective{x, z, rx, rz, cfg.alpha, cfg.beta});
}

Vector zero_iterate_fallback(const ProblemInstance& p,
                             const SolverConfig& cfg) {
  Vector x = Vector::Zero(p.n());
  for (int k = 0; k < cfg.max_inner_iters; ++k) {
    const Vector grad = p.op.apply_adjoint(p.op.apply(x) - p.y_noisy);
    const Vector next = soft_threshold(x - grad, cfg.alpha);
    const double step = (next - x).norm();
    x = next;
    if (step <= cfg.step_tol) break;
  }
  return x;
}

SolveOutcome solve_ista(const ProblemInstance& p, const SolverConfig& cfg,
                        std::optional<Vector> x0) {
  cfg.validate();
  if (p.op.operator_norm_sq() >= 1.0)
    throw ConfigError(
        "solve_ista requires ||A*A|| < 1; rescale the problem first");
  const auto t0 = Clock::now();
  ObjectiveEvaluator eval(p, cfg);
  SolveOutcome out;
  Vector x = x0 ? std::move(*x0) : Vector::Zero(p.n());

  Vector residual = p.op.apply(x) - p.y_noisy;
  push_record(out, p, 0, eval.eval_J_with_residual(x, residual),
              residual.norm(), x, t0);
  if (cfg.record_iterates) out.iterate_history.push_back(x);

  out.termination = Termination::BUDGET_EXHAUSTED;
  for (int k = 0; k < cfg.max_outer_iters; ++k) {
    const Vector next = soft_threshold(x - p.op.apply_adjoint(residual),
                                       cfg.alpha);
    const double step = (next - x).norm();
    x = next;
    residual = p.op.apply(x) - p.y_noisy;
    push_record(out, p, k + 1, eval.eval_J_with_residual(x, residual),
                residual.norm(), x, t0);
    if (cfg.record_iterates) out.iterate_history.push_back(x);
    out.outer_iterations = k + 1;
    if (step <= cfg.step_tol) {
      out.termination = Termination::CONVERGED;
      break;
    }
  }
  out.x_final = std::move(x);
  return out;
}

namespace {

// Shared loop for ST and PG-GCGM; they differ in the direction map and in
// the objective the line search minimizes: ST works on the penalized J,
// while PG-GCGM replaces the l1 penalty by the ball constraint and so
// line-searches (and traces) the constrained objective D.
template <typename DirectionFn>
SolveOutcome run_gcgm_style(const ProblemInstance& p, const SolverConfig& cfg,
                            bool constrained, std::optional<Vector> x0,
                            DirectionFn direction) {
  cfg.validate();
  const auto t0 = Clock::now();
  ObjectiveEvaluator eval(p, cfg);
  const auto objective = [&](const Vector& v, const Vector& rv) {
    return constrained ? eval.eval_D_with_residual(v, rv)
                       : eval.eval_J_with_residual(v, rv);
  };
  SolveOutcome out;
  Vector x = x0 ? std::move(*x0) : default_start(p);

  Vector rx = p.op.apply(x) - p.y_noisy;
  push_record(out, p, 0, objective(x, rx), rx.norm(), x, t0);
  if (cfg.record_iterates) out.iterate_history.push_back(x);

  out.termination = Termination::BUDGET_EXHAUSTED;
  for (int k = 0; k < cfg.max_outer_iters; ++k) {
    double step = 0.0;
    if (x.norm() < kZeroNormGuard) {
      const Vector next = zero_iterate_fallback(p, cfg);
      out.zero_fallback_used = true;
      step = (next - x).norm();
      x = next;
      rx = p.op.apply(x) - p.y_noisy;
      if (x.norm() < kZeroNormGuard) {
        // 0 = x^k = x^{k+1}: zero is the iterative solution
        push_record(out, p, k + 1, objective(x, rx), rx.norm(), x, t0);
        if (cfg.record_iterates) out.iterate_history.push_back(x);
        out.outer_iterations = k + 1;
        out.termination = Termination::ZERO_ITERATE_HANDLED;
        break;
      }
    } else {
      const Vector grad = p.op.apply_adjoint(rx);
      const Vector z = direction(x, grad);
      const Vector rz = p.op.apply(z) - p.y_noisy;
      double s = 1.0;
      if (!cfg.force_unit_step)
        s = constrained
                ? minimize_segment(
                      ConstrainedSegmentObjective(x, z, rx, rz, cfg.beta))
                : minimize_segment(
                      SegmentObjective{x, z, rx, rz, cfg.alpha, cfg.beta});
      const Vector next = x + s * (z - x);
      step = (next - x).norm();
      x = next;
      rx = (1.0 - s) * rx + s * rz;
    }
    push_record(out, p, k + 1, objective(x, rx), rx.norm(), x, t0);
    if (cfg.record_iterates) out.iterate_history.push_back(x);
    out.outer_iterations = k + 1;
    if (step <= cfg.step_tol) {
      out.termination = Termination::CONVERGED;
      break;
    }
  }
  out.x_final = std::move(x);
  return out;
}

}  // namespace

SolveOutcome solve_st_l1l2(const ProblemInstance& p, const SolverConfig& cfg,
                           std::optional<Vector> x0) {
  return run_gcgm_style(
      p, cfg, /*constrained=*/false, std::move(x0),
      [&](const Vector& x, const Vector& grad) {
        const double xn = x.norm();
        const Vector arg =
            (cfg.beta / (cfg.lambda * xn) + 1.0) * x - grad / cfg.lambda;
        return soft_threshold(arg, cfg.alpha / cfg.lambda);
      });
}

SolveOutcome solve_pg_gcgm(const ProblemInstance& p, const SolverConfig& cfg,
                           std::optional<Vector> x0) {
  return run_gcgm_style(
      p, cfg, /*constrained=*/true, std::move(x0),
      [&](const Vector& x, const Vector& grad) {
        const double xn = x.norm();
        const Vector arg =
            x + cfg.beta * x / (cfg.lambda * xn) - grad / cfg.lambda;
        return project_l1_ball(arg, cfg.radius);
      });
}

SolveOutcome solve_pg_sf(const ProblemInstance& p, const SolverConfig& cfg,
                         std::optional<Vector> x0) {
  cfg.validate();
  const auto t0 = Clock::now();
  ObjectiveEvaluator eval(p, cfg);
  SolveOutcome out;
  Vector x = x0 ? std::move(*x0) : default_start(p);

  Vector rx = p.op.apply(x) - p.y_noisy;
  push_record(out, p, 0, eval.eval_D_with_residual(x, rx), rx.norm(), x, t0);
  if (cfg.record_iterates) out.iterate_history.push_back(x);

  out.termination = Termination::BUDGET_EXHAUSTED;
  for (int k = 0; k < cfg.max_outer_iters; ++k) {
    const Vector b = x - p.op.apply_adjoint(rx) / cfg.lambda;
    Vector next;
    if (cfg.beta == 0.0) {
      // constant inner map: one application reaches the fixed point
      next = project_l1_ball(b, cfg.radius);
      out.total_inner_iterations += 1;
    } else {
      // w^{l+1} = P_R(b + (beta/lambda) w^l / ||w^l||) from the all-ones
      // start vector
      Vector w = Vector::Ones(p.n());
      bool converged = false;
      for (int l = 0; l < cfg.max_inner_iters; ++l) {
        const double wn = w.norm();
        out.total_inner_iterations += 1;
        if (wn < kZeroNormGuard) {
          // inner iterate collapsed to zero: fall back to the beta = 0 step
          w = project_l1_ball(b, cfg.radius);
          out.zero_fallback_used = true;
          converged = true;
          break;
        }
        Vector wn1 = project_l1_ball(b + (cfg.beta / cfg.lambda) * w / wn,
                                     cfg.radius);
        const double inner_step = (wn1 - w).norm();
        w = std::move(wn1);
        if (inner_step <= cfg.inner_tol) {
          converged = true;
          break;
        }
      }
      if (!converged) out.inner_budget_hit = true;
      next = std::move(w);
    }
    const double step = (next - x).norm();
    x = std::move(next);
    rx = p.op.apply(x) - p.y_noisy;
    push_record(out, p, k + 1, eval.eval_D_with_residual(x, rx), rx.norm(),
                x, t0);
    if (cfg.record_iterates) out.iterate_history.push_back(x);
    out.outer_iterations = k + 1;
    if (step <= cfg.step_tol) {
      out.termination = Termination::CONVERGED;
      break;
    }
  }
  out.x_final = std::move(x);
  return out;
}

double stationarity_residual(const Vector& x, const ProblemInstance& p,
                             const SolverConfig& cfg) {
  if (x.size() != p.n())
    throw ContractViolation("stationarity_residual: dimension mismatch");
  if (x.norm() < kZeroNormGuard)
    throw ContractViolation("stationarity_residual: x must be nonzero");
  if (!(cfg.radius > 0.0))
    throw ContractViolation("stationarity_residual: R must be > 0");
  const Vector g =
      cfg.beta * x / x.norm() - p.op.apply_adjoint(p.op.apply(x) - p.y_noisy);
  // the linear functional w -> <g, w - x> attains its max over B_R at a
  // vertex +-R e_i
  return cfg.radius * g.lpNorm<Eigen::Infinity>() - g.dot(x);
}

SolveOutcome run_solver(SolverKind kind, const ProblemInstance& p,
                        const SolverConfig& cfg, std::optional<Vector> x0) {
  switch (kind) {
    case SolverKind::ISTA: return solve_ista(p, cfg, std::move(x0));
    case SolverKind::ST_L1L2: return solve_st_l1l2(p, cfg, std::move(x0));
    case SolverKind::PG_GCGM: return solve_pg_gcgm(p, cfg, std::move(x0));
    case SolverKind::PG_SF: return solve_pg_sf(p, cfg, std::move(x0));
  }
  throw ConfigError("unknown solver kind");
}

std::optional<SolverKind> parse_solver(const std::string& name) {
  if (name == "ista") return SolverKind::ISTA;
  if (name == "st") return SolverKind::ST_L1L2;
  if (name == "pg-gcgm") return SolverKind::PG_GCGM;
  if (name == "pg-sf") return SolverKind::PG_SF;
  return std::nullopt;
}

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::ISTA: return "ista";
    case SolverKind::ST_L1L2: return "st";
    case SolverKind::PG_GCGM: return "pg-gcgm";
    case SolverKind::PG_SF: return "pg-sf";
  }
  return "unknown";
}

}  // namespace sparsereg
