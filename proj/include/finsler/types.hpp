// finslerlab - shared value types and error taxonomy.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsler {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error category raised when a sample leaves an evaluator's validity domain
// (slit-bundle violation, |x| >= 1 for ball metrics, ...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed or inconsistent declarative specs (non-SPD g, Randers norm >= 1, ...).
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Operation called outside its contract (wrong family, missing precondition).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Non-finite intermediates or otherwise failed numeric evaluation.
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Rank/definiteness assumptions violated where an operation requires them.
struct RegularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Coordinate-change machinery failures (near-singular Jacobian, ...).
struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Degenerate geometric measurements (zero-length chord, too few nodes).
struct MeasurementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense rank-3 array with uniform extent n, used for third-order derivative
// blocks. Indices follow the derivative-variable order documented at each
// field of Jet.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<size_t>(n) * n * n, 0.0) {}

  int extent() const { return n_; }

  double& operator()(int i, int j, int k) {
    return data_[(static_cast<size_t>(i) * n_ + j) * n_ + k];
  }
  double operator()(int i, int j, int k) const {
    return data_[(static_cast<size_t>(i) * n_ + j) * n_ + k];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  const std::vector<double>& data() const { return data_; }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

inline double sup_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
inline double sup_norm(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace finsler
