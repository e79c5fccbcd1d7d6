#ifndef SPARSEREG_PROBLEMS_HPP
#define SPARSEREG_PROBLEMS_HPP

#include <cstdint>
#include <utility>

#include "sparsereg/core.hpp"

namespace sparsereg {

// Random Gaussian compressive-sensing instance: y = A x_true + e with an
// s-sparse x_true on a uniformly random support.
struct CsSpec {
  int n = 200;
  int m = 80;
  int s = 16;
  double snr_db = 50.0;
  std::uint64_t seed = 1;
  bool rescale_to_unit_norm = true;
  bool identity_operator = false;  // test hook: A = I, requires m == n

  void validate() const;
};

// Separable Gaussian blur A = (2 pi tau^2)^{-1} (T (x) T) acting on
// vectorized n x n images, T symmetric banded Toeplitz.
struct BlurSpec {
  int n = 64;
  int band = 3;
  double tau = 0.7;
  double snr_db = 50.0;
  std::uint64_t seed = 1;

  void validate() const;
};

// Adds e ~ N(0, p I) with noise power p = (||y||^2 / len) * 10^(-snr/10).
// Returns the noisy vector and the realized delta = ||e||_2.
std::pair<Vector, double> add_awgn(const Vector& y_clean, double snr_db,
                                   std::uint64_t seed);

ProblemInstance generate_cs(const CsSpec& spec);
ProblemInstance generate_blur(const BlurSpec& spec);

// The n x n Toeplitz blur factor: symmetric, banded, first row
// z_i = exp(-i^2 / (2 tau^2)) for i < band, zero beyond.
Matrix blur_toeplitz(int n, int band, double tau);

// Deterministic piecewise-constant test image (vectorized column-major):
// amplitude-1 and amplitude-2 square blocks on a zero background, scaled
// so that ||x||_1 = 2111 at n = 64.
Vector blur_test_image(int n);

}  // namespace sparsereg

#endif
