#include "sparsereg/core.hpp"

#include <cmath>

#include "sparsereg/rng.hpp"

namespace sparsereg {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

void check_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite())
    throw ContractViolation(std::string(what) + " contains NaN/Inf");
}

}  // namespace

DenseOperator::DenseOperator(Matrix entries) {
  check_finite(entries, "operator matrix");
  rows_ = entries.rows();
  cols_ = entries.cols();
  dense_ = std::move(entries);
}

DenseOperator::DenseOperator(const DenseOperator& other) {
  std::lock_guard<std::mutex> lock(other.cache_mutex_);
  rows_ = other.rows_;
  cols_ = other.cols_;
  dense_ = other.dense_;
  kron_ = other.kron_;
  norm_sq_ = other.norm_sq_;
}

DenseOperator& DenseOperator::operator=(const DenseOperator& other) {
  if (this != &other) {
    std::scoped_lock lock(cache_mutex_, other.cache_mutex_);
    rows_ = other.rows_;
    cols_ = other.cols_;
    dense_ = other.dense_;
    kron_ = other.kron_;
    norm_sq_ = other.norm_sq_;
  }
  return *this;
}

DenseOperator::DenseOperator(DenseOperator&& other) noexcept {
  rows_ = other.rows_;
  cols_ = other.cols_;
  dense_ = std::move(other.dense_);
  kron_ = std::move(other.kron_);
  norm_sq_ = other.norm_sq_;
}

DenseOperator& DenseOperator::operator=(DenseOperator&& other) noexcept {
  if (this != &other) {
    rows_ = other.rows_;
    cols_ = other.cols_;
    dense_ = std::move(other.dense_);
    kron_ = std::move(other.kron_);
    norm_sq_ = other.norm_sq_;
  }
  return *this;
}

DenseOperator DenseOperator::kronecker(double scale, Matrix t) {
  require(t.rows() == t.cols(), "Kronecker factor must be square");
  require((t - t.transpose()).cwiseAbs().maxCoeff() == 0.0,
          "Kronecker factor must be symmetric");
  check_finite(t, "Kronecker factor");
  DenseOperator op;
  op.rows_ = op.cols_ = t.rows() * t.rows();
  op.kron_ = Kron{scale, std::move(t)};
  return op;
}

Vector DenseOperator::apply(const Vector& x) const {
  require(x.size() == cols_, "apply: dimension mismatch");
  if (kron_) {
    const Index n = kron_->t.rows();
    Eigen::Map<const Matrix> img(x.data(), n, n);
    // vec is column-major here; T symmetric makes (T (x) T) vec(X) = vec(T X T)
    Matrix out = kron_->scale * (kron_->t * img * kron_->t);
    return Eigen::Map<Vector>(out.data(), rows_);
  }
  return *dense_ * x;
}

Vector DenseOperator::apply_adjoint(const Vector& r) const {
  require(r.size() == rows_, "apply_adjoint: dimension mismatch");
  if (kron_) return apply(r);  // symmetric
  return dense_->transpose() * r;
}

const Matrix& DenseOperator::entries() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!dense_) {
    const Matrix& t = kron_->t;
    const Index n = t.rows();
    Matrix a(n * n, n * n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        a.block(i * n, j * n, n, n) = kron_->scale * t(i, j) * t;
    // column-major vec convention matches apply() above for symmetric T
    dense_ = std::move(a);
  }
  return *dense_;
}

double DenseOperator::kron_scale() const {
  require(kron_.has_value(), "operator has no Kronecker structure");
  return kron_->scale;
}

const Matrix& DenseOperator::kron_factor() const {
  require(kron_.has_value(), "operator has no Kronecker structure");
  return kron_->t;
}

double DenseOperator::operator_norm_sq(int iters, std::uint64_t seed) const {
  require(iters >= 1, "operator_norm_sq: iters must be >= 1");
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (norm_sq_) return *norm_sq_;
  }
  Rng rng(seed);
  Vector v(cols_);
  for (Index i = 0; i < cols_; ++i) v[i] = rng.normal();
  double vn = v.norm();
  if (vn == 0.0) v.setOnes(), vn = v.norm();
  v /= vn;
  double rayleigh = 0.0;
  for (int k = 0; k < iters; ++k) {
    Vector w = apply_adjoint(apply(v));
    rayleigh = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) {
      rayleigh = 0.0;
      break;
    }
    v = w / wn;
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  norm_sq_ = rayleigh;
  return rayleigh;
}

bool DenseOperator::has_norm_estimate() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return norm_sq_.has_value();
}

DenseOperator DenseOperator::divided_by(double c) const {
  require(c != 0.0, "divided_by: zero divisor");
  DenseOperator out;
  out.rows_ = rows_;
  out.cols_ = cols_;
  if (kron_) out.kron_ = Kron{kron_->scale / c, kron_->t};
  else out.dense_ = *dense_ / c;
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (norm_sq_) out.norm_sq_ = *norm_sq_ / (c * c);
  return out;
}

ProblemInstance::ProblemInstance(DenseOperator op_, Vector y_noisy_,
                                 std::optional<Vector> x_true_, double delta_)
    : op(std::move(op_)),
      y_noisy(std::move(y_noisy_)),
      x_true(std::move(x_true_)),
      delta(delta_) {
  require(y_noisy.size() == op.rows(), "y_noisy length must equal rows");
  require(delta >= 0.0, "delta must be nonnegative");
  check_finite(y_noisy, "y_noisy");
  if (x_true) {
    require(x_true->size() == op.cols(), "x_true length must equal cols");
    const double realized = (op.apply(*x_true) - y_noisy).norm();
    require(std::abs(realized - delta) <= 1e-9,
            "delta must equal the realized noise norm ||A x_true - y_noisy||");
  }
}

ProblemInstance rescale_problem(const ProblemInstance& p, double c) {
  if (!(c > 1.0)) throw ContractViolation("rescale_problem: c must be > 1");
  return ProblemInstance(p.op.divided_by(c), p.y_noisy / c, p.x_true,
                         p.delta / c);
}

SolverConfig SolverConfig::make(double alpha, double eta) {
  SolverConfig cfg;
  cfg.alpha = alpha;
  cfg.eta = eta;
  cfg.beta = alpha * eta;
  cfg.validate();
  return cfg;
}

void SolverConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must be in [0,1]");
  if (beta != alpha * eta) throw ConfigError("beta must equal alpha * eta");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (!(radius > 0.0)) throw ConfigError("radius must be > 0");
  if (!(tau1 > 1.0)) throw ConfigError("tau1 must be > 1");
  if (!(tau2 >= tau1)) throw ConfigError("tau2 must be >= tau1");
  if (!(step_tol > 0.0)) throw ConfigError("step_tol must be > 0");
  if (!(inner_tol > 0.0)) throw ConfigError("inner_tol must be > 0");
  if (max_outer_iters < 1 || max_inner_iters < 1)
    throw ConfigError("iteration budgets must be >= 1");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::CONVERGED: return "converged";
    case Termination::BUDGET_EXHAUSTED: return "budget_exhausted";
    case Termination::ZERO_ITERATE_HANDLED: return "zero_iterate_handled";
  }
  return "unknown";
}

}  // namespace sparsereg
