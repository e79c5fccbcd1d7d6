#include <doctest.h>

#include "sparsereg/problems.hpp"
#include "sparsereg/selection.hpp"

using namespace sparsereg;

namespace {

ProblemInstance example_instance(std::uint64_t seed = 1) {
  CsSpec spec;
  spec.n = 100;
  spec.m = 40;
  spec.s = 8;
  spec.seed = seed;
  return generate_cs(spec);
}

}  // namespace

TEST_CASE("discrepancy is the residual norm") {
  ProblemInstance p = example_instance();
  CHECK(discrepancy(*p.x_true, p) == doctest::Approx(p.delta));
  CHECK(discrepancy(Vector::Zero(p.n()), p) ==
        doctest::Approx(p.y_noisy.norm()));
  CHECK_THROWS_AS(discrepancy(Vector::Zero(3), p), ContractViolation);
}

TEST_CASE("radius search walks into the discrepancy band") {
  ProblemInstance p = example_instance(4);
  SolverConfig cfg = SolverConfig::make(p.delta, 1.0);
  cfg.max_outer_iters = 3000;

  RadiusSearchOptions opts;
  opts.r0 = 4.0;
  opts.increment = 1.0;
  opts.one_sided = true;

  RadiusSearchResult up = search_radius(p, cfg, SolverKind::PG_GCGM, opts);
  CHECK(up.satisfied);
  // true support has 8 unit-magnitude entries
  CHECK(up.chosen_radius >= 6.0);
  CHECK(up.chosen_radius <= 9.0);
  CHECK(up.probes.front().parameter == 4.0);
  for (std::size_t j = 1; j < up.probes.size(); ++j)
    CHECK(up.probes[j].discrepancy <=
          up.probes[j - 1].discrepancy * (1.0 + 1e-6));

  CHECK_THROWS_AS(search_radius(p, cfg, SolverKind::ISTA, opts),
                  ContractViolation);
}

TEST_CASE("an overshooting start walks back down into the band") {
  // identity sensing: the discrepancy-vs-radius curve is explicit and the
  // solvers converge fast at every probed radius
  CsSpec spec;
  spec.n = 30;
  spec.m = 30;
  spec.s = 4;
  spec.seed = 8;
  spec.identity_operator = true;
  ProblemInstance p = generate_cs(spec);
  // keep alpha and beta well under delta: an invertible operator has a
  // residual floor near them, which must sit below the band for the
  // search to stop growing R
  SolverConfig cfg = SolverConfig::make(p.delta / 10.0, 1.0);
  cfg.max_outer_iters = 3000;

  RadiusSearchOptions opts;
  opts.increment = 1.0;
  opts.one_sided = true;

  opts.r0 = 2.0;
  RadiusSearchResult up = search_radius(p, cfg, SolverKind::PG_GCGM, opts);
  opts.r0 = 8.0;
  RadiusSearchResult down = search_radius(p, cfg, SolverKind::PG_SF, opts);
  CHECK(up.satisfied);
  CHECK(down.satisfied);
  // ||x_true||_1 = 4; both directions should stop near it
  CHECK(std::abs(up.chosen_radius - 4.0) <= 1.0);
  CHECK(std::abs(down.chosen_radius - up.chosen_radius) <= opts.increment);
  CHECK(down.probes.front().parameter == 8.0);
  for (std::size_t j = 1; j < down.probes.size(); ++j)
    CHECK(down.probes[j].parameter < down.probes[j - 1].parameter);
}

TEST_CASE("radius search is deterministic given a fixed start") {
  ProblemInstance p = example_instance(6);
  SolverConfig cfg = SolverConfig::make(p.delta, 1.0);
  cfg.max_outer_iters = 2000;
  RadiusSearchOptions opts;
  opts.r0 = 5.0;
  opts.one_sided = true;
  RadiusSearchResult a = search_radius(p, cfg, SolverKind::PG_GCGM, opts);
  RadiusSearchResult b = search_radius(p, cfg, SolverKind::PG_GCGM, opts);
  REQUIRE(a.probes.size() == b.probes.size());
  for (std::size_t j = 0; j < a.probes.size(); ++j)
    CHECK(a.probes[j].discrepancy == b.probes[j].discrepancy);
  CHECK(a.chosen_radius == b.chosen_radius);
}

TEST_CASE("alpha search halves until the band is entered") {
  ProblemInstance p = example_instance(2);
  SolverConfig cfg = SolverConfig::make(1.0, 1.0);
  cfg.max_outer_iters = 3000;
  // a geometric sweep can step over a band narrower than a factor of 2
  cfg.tau2 = 4.0;
  AlphaSearchResult res = search_alpha(p, cfg, /*alpha0=*/1.0);
  CHECK(res.chosen_alpha <= 1.0);
  const double d = discrepancy(res.outcome.x_final, p);
  CHECK(d >= cfg.tau1 * p.delta);
  CHECK(d <= cfg.tau2 * p.delta);
  CHECK(res.probes.back().parameter == res.chosen_alpha);

  // an exhausted budget reports the probes it made
  CHECK_THROWS_AS(search_alpha(p, cfg, 1.0, 1), BandNotFound);
  try {
    search_alpha(p, cfg, 1.0, 2);
  } catch (const BandNotFound& e) {
    CHECK(e.probes.size() == 2);
  }
}
