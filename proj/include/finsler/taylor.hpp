// finslerlab - truncated multivariate Taylor arithmetic (forward-mode jets).
//
// A TaylorScalar carries the coefficients of a polynomial truncated at a fixed
// total degree (<= 3) in a fixed set of seeded variables. Propagating one
// evaluation of a metric through this arithmetic yields every mixed partial
// derivative up to the truncation order in a single pass; the Leibniz and
// chain rules are applied coefficient-wise and hold to machine precision.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "finsler/types.hpp"

namespace finsler {

// Index bookkeeping for one (nvars, order) truncation: the monomial basis,
// the pairwise product table, and exponent lookup. Instances are immutable
// and shared through a process-wide registry.
class TaylorAlgebra {
 public:
  static constexpr int kMaxOrder = 3;

  TaylorAlgebra(int nvars, int order);

  static std::shared_ptr<const TaylorAlgebra> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int nterms() const { return nterms_; }

  // Index of the monomial with the given exponents, or -1 when its total
  // degree exceeds the truncation order.
  int term_index(std::span<const int> exps) const;

  const int* exponents(int term) const { return exps_.data() + static_cast<size_t>(term) * nvars_; }
  int degree(int term) const { return degs_[term]; }

  // prod_pairs(t) lists all ordered coefficient pairs (i,j) whose monomial
  // product lands on term t.
  std::span<const std::pair<int, int>> prod_pairs(int t) const {
    return {prod_pairs_.data() + prod_offset_[t],
            prod_pairs_.data() + prod_offset_[t + 1]};
  }

  // alpha! for the term's exponent multi-index (converts a Taylor coefficient
  // into a partial derivative).
  double factorial_weight(int term) const { return fact_[term]; }

 private:
  uint64_t pack(std::span<const int> exps) const;

  int nvars_;
  int order_;
  int nterms_;
  std::vector<int> exps_;  // nterms * nvars
  std::vector<int> degs_;
  std::vector<double> fact_;
  std::vector<int> prod_offset_;
  std::vector<std::pair<int, int>> prod_pairs_;
  std::vector<int> lookup_;  // packed exponent key -> term index
};

class TaylorScalar {
 public:
  // Constants carry no algebra; they promote on demand when combined with a
  // seeded operand. This lets generic code write S(2.0) without a context.
  TaylorScalar() : alg_(nullptr), c_(1, 0.0) {}
  TaylorScalar(double v) : alg_(nullptr), c_(1, v) {}

  static TaylorScalar constant(const TaylorAlgebra* alg, double v);
  static TaylorScalar variable(const TaylorAlgebra* alg, double v, int var);

  bool is_constant() const { return alg_ == nullptr; }
  const TaylorAlgebra* algebra() const { return alg_; }
  double value() const { return c_[0]; }

  double coefficient(std::span<const int> exps) const;
  // Mixed partial derivative for the exponent multi-index (coefficient times
  // alpha!). Zero when the requested degree exceeds the truncation order.
  double partial(std::span<const int> exps) const;

  TaylorScalar operator-() const;
  TaylorScalar& operator+=(const TaylorScalar& o);
  TaylorScalar& operator-=(const TaylorScalar& o);
  TaylorScalar& operator*=(const TaylorScalar& o);
  TaylorScalar& operator/=(const TaylorScalar& o);

  friend TaylorScalar operator+(TaylorScalar a, const TaylorScalar& b) { return a += b; }
  friend TaylorScalar operator-(TaylorScalar a, const TaylorScalar& b) { return a -= b; }
  friend TaylorScalar operator*(const TaylorScalar& a, const TaylorScalar& b);
  friend TaylorScalar operator/(const TaylorScalar& a, const TaylorScalar& b);

  friend bool operator<(const TaylorScalar& a, const TaylorScalar& b) { return a.value() < b.value(); }
  friend bool operator>(const TaylorScalar& a, const TaylorScalar& b) { return a.value() > b.value(); }
  friend bool operator<=(const TaylorScalar& a, const TaylorScalar& b) { return a.value() <= b.value(); }
  friend bool operator>=(const TaylorScalar& a, const TaylorScalar& b) { return a.value() >= b.value(); }

  // Applies the univariate Taylor expansion of f around the value of u:
  // derivs = {f(u0), f'(u0), f''(u0), f'''(u0)} (orders beyond the algebra's
  // truncation are ignored).
  static TaylorScalar compose(const TaylorScalar& u, std::span<const double> derivs);

  friend TaylorScalar sqrt(const TaylorScalar& u);
  friend TaylorScalar exp(const TaylorScalar& u);
  friend TaylorScalar log(const TaylorScalar& u);
  friend TaylorScalar pow(const TaylorScalar& u, double p);
  friend TaylorScalar abs(const TaylorScalar& u);

  friend TaylorScalar ipow(TaylorScalar base, int k);

 private:
  void promote(const TaylorAlgebra* alg);

  const TaylorAlgebra* alg_;
  std::vector<double> c_;  // size 1 (constant) or alg_->nterms()
};

inline double scalar_value(double v) { return v; }
inline double scalar_value(const TaylorScalar& v) { return v.value(); }

}  // namespace finsler
