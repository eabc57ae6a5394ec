// finslerlab - generic scalar evaluator interface for metric functions.
#pragma once

#include <span>

#include "finsler/taylor.hpp"
#include "finsler/types.hpp"

namespace finsler {

// A Finsler function F(x, y) evaluated over an abstract scalar type, so the
// same formula runs on plain doubles (values, finite differences) and on
// TaylorScalar (exact jets). Implementations must be stateless and safe to
// call from multiple threads.
class ScalarEvaluator {
 public:
  virtual ~ScalarEvaluator() = default;

  virtual int dimension() const = 0;
  virtual double operator()(std::span<const double> x, std::span<const double> y) const = 0;
  virtual TaylorScalar operator()(std::span<const TaylorScalar> x,
                                  std::span<const TaylorScalar> y) const = 0;
};

// CRTP adapter: derive and provide
//   template <class S> S eval_impl(std::span<const S> x, std::span<const S> y) const;
// to get both scalar instantiations.
template <class Derived>
class EvaluatorBase : public ScalarEvaluator {
 public:
  double operator()(std::span<const double> x, std::span<const double> y) const final {
    return derived().template eval_impl<double>(x, y);
  }
  TaylorScalar operator()(std::span<const TaylorScalar> x,
                          std::span<const TaylorScalar> y) const final {
    return derived().template eval_impl<TaylorScalar>(x, y);
  }

 private:
  const Derived& derived() const { return static_cast<const Derived&>(*this); }
};

}  // namespace finsler
