#ifndef SPARSEREG_CORE_HPP
#define SPARSEREG_CORE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsereg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Thrown when an operation precondition is violated.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown for invalid solver/problem configurations (e.g. unscaled operator
// handed to a solver that requires ||A*A|| < 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense forward map A with adjoint access and a cached estimate of ||A*A||.
// Optionally backed by a Kronecker factorization A = scale * (T (x) T) with
// symmetric T; the structured form applies in O(n^1.5) per matvec instead of
// O(n^2) and is what makes the deblurring experiments tractable.
class DenseOperator {
 public:
  explicit DenseOperator(Matrix entries);

  DenseOperator(const DenseOperator& other);
  DenseOperator& operator=(const DenseOperator& other);
  DenseOperator(DenseOperator&&) noexcept;
  DenseOperator& operator=(DenseOperator&&) noexcept;

  // A = scale * (T (x) T), T square symmetric. rows = cols = T.rows()^2.
  static DenseOperator kronecker(double scale, Matrix t);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& r) const;

  // Materialized m x n matrix (built on demand for Kronecker operators).
  const Matrix& entries() const;

  bool is_kronecker() const { return kron_.has_value(); }
  double kron_scale() const;
  const Matrix& kron_factor() const;

  // Power-iteration estimate of ||A*A|| = lambda_max(A*A) with a seeded
  // start vector. Rayleigh quotients of power iteration on a PSD matrix are
  // non-decreasing in the iteration count. Result is cached.
  double operator_norm_sq(int iters = 100, std::uint64_t seed = 7) const;
  bool has_norm_estimate() const;

  // Entrywise division by c (Kronecker scale absorbs it when structured).
  DenseOperator divided_by(double c) const;

 private:
  DenseOperator() = default;
  Index rows_ = 0, cols_ = 0;
  mutable std::optional<Matrix> dense_;  // entries() materializes on demand
  struct Kron {
    double scale;
    Matrix t;
  };
  std::optional<Kron> kron_;
  mutable std::optional<double> norm_sq_;
  mutable std::mutex cache_mutex_;
};

// One experiment: forward map, noisy data, optional ground truth, and the
// realized noise norm delta = ||A x_true - y_noisy||_2 when known.
struct ProblemInstance {
  DenseOperator op;
  Vector y_noisy;
  std::optional<Vector> x_true;
  double delta = 0.0;

  ProblemInstance(DenseOperator op_, Vector y_noisy_,
                  std::optional<Vector> x_true_, double delta_);

  Index n() const { return op.cols(); }
  Index m() const { return op.rows(); }
};

// A -> A/c, y -> y/c, delta -> delta/c. The solution set is unchanged.
ProblemInstance rescale_problem(const ProblemInstance& p, double c);

enum class ObjectiveVariant { L1L2_PENALIZED, L1BALL_CONSTRAINED };

struct SolverConfig {
  double alpha = 0.1;   // l1 weight
  double eta = 1.0;     // beta/alpha, in [0,1]
  double beta = 0.1;    // derived, alpha * eta
  double lambda = 1.0;  // surrogate weight
  double radius = 1.0;  // l1-ball radius R
  double tau1 = 1.01;   // discrepancy band lower factor
  double tau2 = 1.2;    // discrepancy band upper factor (may be +inf)
  int max_outer_iters = 5000;
  int max_inner_iters = 200;
  double step_tol = 1e-8;
  double inner_tol = 1e-10;
  ObjectiveVariant variant = ObjectiveVariant::L1L2_PENALIZED;
  bool force_unit_step = false;  // skip the line search, use s^k = 1
  bool record_iterates = false;  // keep the full iterate history

  static SolverConfig make(double alpha, double eta);
  void validate() const;
};

struct TraceRecord {
  int iteration = 0;
  double objective = 0.0;    // J for penalized runs, D for constrained ones
  double discrepancy = 0.0;  // ||A x^k - y^delta||_2
  std::optional<double> rel_error;
  double l1_norm = 0.0;
  double seconds = 0.0;  // elapsed wall time since solver start
};

using IterationTrace = std::vector<TraceRecord>;

enum class Termination { CONVERGED, BUDGET_EXHAUSTED, ZERO_ITERATE_HANDLED };

struct SolveOutcome {
  Vector x_final;
  IterationTrace trace;
  Termination termination = Termination::BUDGET_EXHAUSTED;
  int outer_iterations = 0;
  int total_inner_iterations = 0;
  bool zero_fallback_used = false;
  bool inner_budget_hit = false;
  std::vector<Vector> iterate_history;  // filled when record_iterates is set
};

const char* to_string(Termination t);

}  // namespace sparsereg

#endif
