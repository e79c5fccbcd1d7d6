#ifndef SPARSEREG_PROX_HPP
#define SPARSEREG_PROX_HPP

#include "sparsereg/core.hpp"

namespace sparsereg {

// Threshold/radius correspondence for one vector: project_l1_ball(a, R)
// equals soft_threshold(a, threshold).
struct ThresholdRadiusPair {
  double threshold = 0.0;
  double radius = 0.0;
  double source_vector_l1 = 0.0;
};

// Componentwise shrink-toward-zero by alpha >= 0.
Vector soft_threshold(const Vector& a, double alpha);

// ||S_alpha(a)||_1 without materializing the thresholded vector.
double threshold_l1_norm(const Vector& a, double alpha);

// The threshold alpha with ||S_alpha(a)||_1 = R (0 when ||a||_1 <= R),
// found exactly by the sort-and-cumulative-sum breakpoint scan.
ThresholdRadiusPair find_threshold_for_radius(const Vector& a, double radius);

// Euclidean projection onto {x : ||x||_1 <= R}.
Vector project_l1_ball(const Vector& a, double radius);

}  // namespace sparsereg

#endif
