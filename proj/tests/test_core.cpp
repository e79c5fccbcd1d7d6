#include <doctest.h>

#include "sparsereg/core.hpp"
#include "sparsereg/problems.hpp"
#include "sparsereg/rng.hpp"

using namespace sparsereg;

TEST_CASE("dense operator apply and adjoint") {
  DenseOperator id(Matrix::Identity(2, 2));
  Vector x(2);
  x << 3.0, -1.0;
  CHECK(id.apply(x) == x);
  CHECK(id.apply_adjoint(x) == x);

  Matrix a(2, 3);
  a << 1, 2, 3, 4, 5, 6;
  DenseOperator op(a);
  Vector v(3);
  v << 1, 0, -1;
  CHECK(op.apply(v).isApprox(a * v));
  Vector r(2);
  r << 1, 2;
  CHECK(op.apply_adjoint(r).isApprox(a.transpose() * r));
  CHECK_THROWS_AS(op.apply(r), ContractViolation);
}

TEST_CASE("operator norm estimate") {
  DenseOperator two(2.0 * Matrix::Identity(4, 4));
  CHECK(two.operator_norm_sq() == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(two.has_norm_estimate());

  // monotone convergence from below on a PSD quadratic form
  Matrix m(3, 3);
  m << 2, 1, 0, 1, 3, 1, 0, 1, 1;
  DenseOperator op(m);
  double prev = 0.0;
  for (int iters : {1, 3, 10, 50}) {
    DenseOperator fresh(m);
    const double est = fresh.operator_norm_sq(iters);
    CHECK(est >= prev - 1e-12);
    prev = est;
  }
}

TEST_CASE("kronecker structure matches the dense path") {
  const Matrix t = blur_toeplitz(8, 3, 0.7);
  DenseOperator op = DenseOperator::kronecker(0.5, t);
  CHECK(op.is_kronecker());
  CHECK(op.rows() == 64);

  Rng rng(3);
  Vector x(64);
  for (Index i = 0; i < 64; ++i) x[i] = rng.normal();
  const Vector fast = op.apply(x);
  const Vector dense = op.entries() * x;
  CHECK((fast - dense).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((op.entries() - op.entries().transpose()).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK(op.apply_adjoint(x).isApprox(fast));
}

TEST_CASE("rescaling divides the operator, data, and delta") {
  CsSpec spec;
  spec.rescale_to_unit_norm = false;
  ProblemInstance p = generate_cs(spec);
  const double before = p.op.operator_norm_sq();
  ProblemInstance q = rescale_problem(p, 3.0);
  CHECK(q.op.operator_norm_sq() == doctest::Approx(before / 9.0));
  CHECK(q.y_noisy.isApprox(p.y_noisy / 3.0));
  CHECK(q.delta == doctest::Approx(p.delta / 3.0));
  CHECK(q.x_true->isApprox(*p.x_true));

  // relative error of any candidate is invariant under rescaling
  Rng rng(9);
  Vector cand(p.n());
  for (Index i = 0; i < cand.size(); ++i) cand[i] = rng.normal();
  const double re_p = (cand - *p.x_true).norm() / p.x_true->norm();
  const double re_q = (cand - *q.x_true).norm() / q.x_true->norm();
  CHECK(re_p == re_q);

  CHECK_THROWS_AS(rescale_problem(p, 1.0), ContractViolation);
}

TEST_CASE("problem instance validates the realized noise norm") {
  DenseOperator id(Matrix::Identity(2, 2));
  Vector x(2), y(2);
  x << 1, 0;
  y << 1.5, 0;
  CHECK_NOTHROW(ProblemInstance(id, y, x, 0.5));
  CHECK_THROWS_AS(ProblemInstance(id, y, x, 0.4), ContractViolation);
}

TEST_CASE("solver config invariants") {
  SolverConfig cfg = SolverConfig::make(0.1, 0.5);
  CHECK(cfg.beta == doctest::Approx(0.05));
  CHECK_NOTHROW(cfg.validate());
  cfg.beta = 0.2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(SolverConfig::make(0.0, 0.5), ConfigError);
  CHECK_THROWS_AS(SolverConfig::make(0.1, 1.5), ConfigError);
  SolverConfig bad = SolverConfig::make(0.1, 1.0);
  bad.lambda = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
