#include "sparsereg/problems.hpp"

#include <cmath>

#include "sparsereg/rng.hpp"

namespace sparsereg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

ProblemInstance finalize(DenseOperator op, const Vector& x_true,
                         double snr_db, std::uint64_t noise_seed,
                         bool rescale) {
  Vector y_clean = op.apply(x_true);
  auto [y_noisy, delta] = add_awgn(y_clean, snr_db, noise_seed);
  ProblemInstance p(std::move(op), std::move(y_noisy), x_true, delta);
  if (rescale) {
    const double nsq = p.op.operator_norm_sq();
    if (nsq >= 1.0) p = rescale_problem(p, 1.05 * std::sqrt(nsq));
  }
  return p;
}

}  // namespace

void CsSpec::validate() const {
  if (!(0 < s && s <= m && m <= n))
    throw ContractViolation("CsSpec requires 0 < s <= m <= n");
  if (identity_operator && m != n)
    throw ContractViolation("identity operator requires m == n");
}

void BlurSpec::validate() const {
  if (!(1 <= band && band <= n))
    throw ContractViolation("BlurSpec requires 1 <= band <= n");
  if (!(tau > 0.0)) throw ContractViolation("BlurSpec requires tau > 0");
}

std::pair<Vector, double> add_awgn(const Vector& y_clean, double snr_db,
                                   std::uint64_t seed) {
  const double signal_sq = y_clean.squaredNorm();
  if (signal_sq == 0.0)
    throw ContractViolation("add_awgn: clean signal must be nonzero");
  const double power = signal_sq / static_cast<double>(y_clean.size()) *
                       std::pow(10.0, -snr_db / 10.0);
  const double sigma = std::sqrt(power);
  Rng rng(seed);
  Vector e(y_clean.size());
  for (Index i = 0; i < e.size(); ++i) e[i] = sigma * rng.normal();
  return {y_clean + e, e.norm()};
}

ProblemInstance generate_cs(const CsSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  Matrix a;
  if (spec.identity_operator) {
    a = Matrix::Identity(spec.m, spec.n);
  } else {
    a.resize(spec.m, spec.n);
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) a(i, j) = rng.normal();
  }

  // Unit-magnitude nonzeros keep ||x_true||_1 = s, pinning the radius
  // regime the discrepancy search is expected to recover.
  Vector x = Vector::Zero(spec.n);
  for (std::size_t idx : rng.sample_indices(spec.n, spec.s))
    x[static_cast<Index>(idx)] = rng.normal() >= 0.0 ? 1.0 : -1.0;

  return finalize(DenseOperator(std::move(a)), x, spec.snr_db, spec.seed + 1,
                  spec.rescale_to_unit_norm);
}

Matrix blur_toeplitz(int n, int band, double tau) {
  Matrix t = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = std::abs(i - j);
      if (k < band) t(i, j) = std::exp(-(double(k) * k) / (2.0 * tau * tau));
    }
  return t;
}

Vector blur_test_image(int n) {
  const int q = n / 4;
  if (q < 1)
    throw ContractViolation("blur_test_image requires n >= 4");
  // ||x||_1 of the raw {1, 2} blocks is 3 q^2; 2111/768 makes it 2111
  // exactly at n = 64.
  const double scale = 2111.0 / 768.0;
  Matrix img = Matrix::Zero(n, n);
  img.block(q, q, q, q).setConstant(scale);
  img.block(2 * q, 2 * q, q, q).setConstant(2.0 * scale);
  return Eigen::Map<Vector>(img.data(), n * n);
}

ProblemInstance generate_blur(const BlurSpec& spec) {
  spec.validate();
  DenseOperator op = DenseOperator::kronecker(
      1.0 / (kTwoPi * spec.tau * spec.tau), blur_toeplitz(spec.n, spec.band, spec.tau));
  return finalize(std::move(op), blur_test_image(spec.n), spec.snr_db,
                  spec.seed + 1, /*rescale=*/true);
}

}  // namespace sparsereg
