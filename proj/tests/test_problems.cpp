#include <doctest.h>

#include <cmath>

#include "sparsereg/problems.hpp"

using namespace sparsereg;

TEST_CASE("cs generator shape, sparsity, and determinism") {
  CsSpec spec;
  ProblemInstance p = generate_cs(spec);
  CHECK(p.n() == 200);
  CHECK(p.m() == 80);
  REQUIRE(p.x_true.has_value());
  int nonzeros = 0;
  for (Index i = 0; i < p.x_true->size(); ++i) {
    const double v = (*p.x_true)[i];
    if (v != 0.0) {
      ++nonzeros;
      CHECK(std::abs(v) == doctest::Approx(p.x_true->cwiseAbs().maxCoeff()));
    }
  }
  CHECK(nonzeros == 16);
  CHECK(p.op.operator_norm_sq() < 1.0);  // rescaled by default

  ProblemInstance q = generate_cs(spec);
  CHECK(p.op.entries() == q.op.entries());
  CHECK(p.y_noisy == q.y_noisy);
  CHECK(p.delta == q.delta);

  spec.seed = 2;
  ProblemInstance r = generate_cs(spec);
  CHECK(p.y_noisy != r.y_noisy);

  spec.s = 100;
  CHECK_THROWS_AS(generate_cs(spec), ContractViolation);
}

TEST_CASE("identity sensing hook") {
  CsSpec spec;
  spec.n = 30;
  spec.m = 30;
  spec.s = 4;
  spec.identity_operator = true;
  spec.rescale_to_unit_norm = false;
  ProblemInstance p = generate_cs(spec);
  CHECK((p.y_noisy - *p.x_true).norm() == doctest::Approx(p.delta));

  spec.m = 20;
  spec.n = 25;
  CHECK_THROWS_AS(generate_cs(spec), ContractViolation);
}

TEST_CASE("awgn power convention") {
  Vector y = Vector::Constant(50, 2.0);

  auto [quiet, tiny] = add_awgn(y, 300.0, 5);
  CHECK(tiny <= 1e-10 * y.norm());
  CHECK((quiet - y).norm() == doctest::Approx(tiny));

  // E[delta^2] = m * p with p = (||y||^2/m) 10^(-snr/10)
  const double snr = 20.0;
  const double expected = y.squaredNorm() * std::pow(10.0, -snr / 10.0);
  double mean_sq = 0.0;
  for (int seed = 0; seed < 200; ++seed) {
    auto [noisy, delta] = add_awgn(y, snr, seed);
    mean_sq += delta * delta;
  }
  mean_sq /= 200.0;
  CHECK(mean_sq == doctest::Approx(expected).epsilon(0.10));

  CHECK_THROWS_AS(add_awgn(Vector::Zero(5), 20.0, 1), ContractViolation);
}

TEST_CASE("blur toeplitz factor") {
  const Matrix t = blur_toeplitz(4, 2, 0.7);
  CHECK(t(0, 0) == 1.0);
  CHECK(t(0, 1) == doctest::Approx(std::exp(-1.0 / 0.98)));
  CHECK(t(0, 2) == 0.0);
  CHECK((t - t.transpose()).cwiseAbs().maxCoeff() == 0.0);

  CHECK(blur_toeplitz(6, 1, 0.7).isApprox(Matrix::Identity(6, 6)));
}

TEST_CASE("blur instance structure") {
  BlurSpec spec;
  spec.n = 8;
  ProblemInstance p = generate_blur(spec);
  CHECK(p.n() == 64);
  CHECK(p.op.is_kronecker());
  const double scale =
      1.0 / (2.0 * 3.14159265358979323846 * spec.tau * spec.tau);
  CHECK(p.op.kron_scale() == doctest::Approx(scale));
  CHECK((p.op.entries() - p.op.entries().transpose()).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK((p.op.apply(*p.x_true) - p.y_noisy).norm() == doctest::Approx(p.delta));

  spec.band = 0;
  CHECK_THROWS_AS(generate_blur(spec), ContractViolation);
}

TEST_CASE("blur test image") {
  const Vector img64 = blur_test_image(64);
  CHECK(img64.lpNorm<1>() == doctest::Approx(2111.0));
  const Vector img8 = blur_test_image(8);
  // two 2x2 blocks with amplitudes c and 2c
  const double c = 2111.0 / 768.0;
  CHECK(img8.lpNorm<1>() == doctest::Approx(12.0 * c));
  CHECK(img8.maxCoeff() == doctest::Approx(2.0 * c));
  CHECK_THROWS_AS(blur_test_image(3), ContractViolation);
}
