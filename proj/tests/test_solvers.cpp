#include <doctest.h>

#include "sparsereg/diagnostics.hpp"
#include "sparsereg/problems.hpp"
#include "sparsereg/prox.hpp"
#include "sparsereg/solvers.hpp"

using namespace sparsereg;

namespace {

ProblemInstance small_instance(std::uint64_t seed = 1) {
  CsSpec spec;
  spec.n = 60;
  spec.m = 24;
  spec.s = 5;
  spec.seed = seed;
  return generate_cs(spec);
}

}  // namespace

TEST_CASE("line search never loses to an endpoint") {
  ProblemInstance p = small_instance();
  SolverConfig cfg = SolverConfig::make(0.02, 1.0);
  ObjectiveEvaluator eval(p, cfg);
  Vector x = Vector::Constant(p.n(), 0.01);
  const Vector grad = p.op.apply_adjoint(p.op.apply(x) - p.y_noisy);
  const Vector z = soft_threshold(x - grad, cfg.alpha);
  const double s = line_search(x, z, p, cfg);
  CHECK(s >= 0.0);
  CHECK(s <= 1.0);
  const double at_s = eval.eval_J(x + s * (z - x));
  CHECK(at_s <= eval.eval_J(x) + 1e-12);
  CHECK(at_s <= eval.eval_J(z) + 1e-12);
}

TEST_CASE("ista rejects an unscaled operator and recovers a noiseless toy") {
  CsSpec spec;
  spec.n = 40;
  spec.m = 40;
  spec.s = 1;
  spec.snr_db = 300.0;
  spec.identity_operator = true;
  spec.rescale_to_unit_norm = false;
  // identity has norm exactly 1, which the solver must refuse
  ProblemInstance p = generate_cs(spec);
  SolverConfig cfg = SolverConfig::make(1e-8, 0.0);
  CHECK_THROWS_AS(solve_ista(p, cfg), ConfigError);

  ProblemInstance scaled = rescale_problem(p, 1.05);
  SolveOutcome out = solve_ista(scaled, cfg);
  CHECK(out.termination == Termination::CONVERGED);
  CHECK(relative_error(out.x_final, *scaled.x_true) < 1e-3);
}

TEST_CASE("penalized solvers descend their objective") {
  ProblemInstance p = small_instance(7);
  SolverConfig cfg = SolverConfig::make(0.02, 1.0);
  cfg.max_outer_iters = 300;
  for (auto solve : {solve_st_l1l2, solve_pg_gcgm}) {
    cfg.radius = 5.0;
    SolveOutcome out = solve(p, cfg, std::nullopt);
    for (std::size_t k = 1; k < out.trace.size(); ++k)
      CHECK(out.trace[k].objective <= out.trace[k - 1].objective + 1e-12);
  }
}

TEST_CASE("surrogate solver descends D and certifies stationarity") {
  ProblemInstance p = small_instance(13);
  SolverConfig cfg = SolverConfig::make(0.02, 1.0);
  cfg.radius = 5.0;
  cfg.max_outer_iters = 2000;
  SolveOutcome out = solve_pg_sf(p, cfg);
  for (std::size_t k = 1; k < out.trace.size(); ++k)
    CHECK(out.trace[k].objective <= out.trace[k - 1].objective + 1e-12);
  CHECK(out.termination == Termination::CONVERGED);
  const Vector g = cfg.beta * out.x_final / out.x_final.norm() -
                   p.op.apply_adjoint(p.op.apply(out.x_final) - p.y_noisy);
  const double res = stationarity_residual(out.x_final, p, cfg);
  CHECK(res <= 1e-6 * (1.0 + g.norm()));
}

TEST_CASE("zero start routes through the fallback") {
  ProblemInstance p = small_instance(19);
  // threshold far above any gradient entry keeps the iterate at zero
  SolverConfig cfg = SolverConfig::make(1e6, 1.0);
  SolveOutcome out = solve_st_l1l2(p, cfg, Vector::Zero(p.n()));
  CHECK(out.zero_fallback_used);
  CHECK(out.termination == Termination::ZERO_ITERATE_HANDLED);
  CHECK(out.x_final.isZero(0.0));
}

TEST_CASE("with beta = 0 and unit steps both schemes reduce to classical PG") {
  ProblemInstance p = small_instance(3);
  SolverConfig cfg = SolverConfig::make(0.01, 0.0);
  cfg.radius = 4.0;
  cfg.force_unit_step = true;
  cfg.record_iterates = true;
  cfg.max_outer_iters = 30;
  cfg.step_tol = 1e-300;  // run the full budget

  const Vector x0 = Vector::Constant(p.n(), 0.01);
  SolveOutcome gcgm = solve_pg_gcgm(p, cfg, x0);
  SolveOutcome sf = solve_pg_sf(p, cfg, x0);

  Vector x = x0;
  for (int k = 1; k <= 30; ++k) {
    x = project_l1_ball(x - p.op.apply_adjoint(p.op.apply(x) - p.y_noisy),
                        cfg.radius);
    CHECK((gcgm.iterate_history[k] - x).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((sf.iterate_history[k] - x).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("solver names round-trip") {
  for (auto kind : {SolverKind::ISTA, SolverKind::ST_L1L2, SolverKind::PG_GCGM,
                    SolverKind::PG_SF})
    CHECK(parse_solver(to_string(kind)) == kind);
  CHECK(!parse_solver("nope").has_value());
}
