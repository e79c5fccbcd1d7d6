#include "sparsereg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sparsereg {

Vector soft_threshold(const Vector& a, double alpha) {
  if (!(alpha >= 0.0))
    throw ContractViolation("soft_threshold: alpha must be >= 0");
  Vector out(a.size());
  for (Index i = 0; i < a.size(); ++i) {
    const double t = a[i];
    if (t >= alpha) out[i] = t - alpha;
    else if (t <= -alpha) out[i] = t + alpha;
    else out[i] = 0.0;
  }
  return out;
}

double threshold_l1_norm(const Vector& a, double alpha) {
  if (!(alpha >= 0.0))
    throw ContractViolation("threshold_l1_norm: alpha must be >= 0");
  double sum = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double m = std::abs(a[i]);
    if (m > alpha) sum += m - alpha;
  }
  return sum;
}

ThresholdRadiusPair find_threshold_for_radius(const Vector& a, double radius) {
  if (!(radius > 0.0))
    throw ContractViolation("find_threshold_for_radius: R must be > 0");
  const double l1 = a.lpNorm<1>();
  if (l1 <= radius) return {0.0, radius, l1};

  // sort |a| descending, scan partial sums for the segment where
  // ||S_alpha(a)||_1 = sum_{i<=k}(u_i - alpha) crosses R
  std::vector<double> u(a.data(), a.data() + a.size());
  for (double& v : u) v = std::abs(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double csum = 0.0;
  double alpha = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    csum += u[k];
    const double candidate = (csum - radius) / static_cast<double>(k + 1);
    const double next = (k + 1 < u.size()) ? u[k + 1] : 0.0;
    if (candidate >= next) {
      alpha = candidate;
      break;
    }
  }
  return {alpha, radius, l1};
}

Vector project_l1_ball(const Vector& a, double radius) {
  const ThresholdRadiusPair pair = find_threshold_for_radius(a, radius);
  if (pair.threshold == 0.0) return a;
  return soft_threshold(a, pair.threshold);
}

}  // namespace sparsereg
