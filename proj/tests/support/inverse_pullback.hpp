// Test fixture: a metric expressed in the chart that a fixed polynomial
// diffeomorphism tau maps onto the metric's own chart. Evaluating it pulls
// the sample back through tau^{-1} (Newton iteration, valid in any scalar
// arithmetic), so pullback(disguised, tau) recovers the base metric exactly
// and a degree-matching rectilinear search has an exact target.
#pragma once

#include "finsler/evaluator.hpp"
#include "finsler/metrics.hpp"
#include "finsler/polynomial.hpp"
#include "support/zoo.hpp"

namespace finsler::testing {

// Solves M z = b for n = 2 or 3 by Cramer's rule in the scalar type S.
template <class S>
std::vector<S> small_solve(const std::vector<std::vector<S>>& M, const std::vector<S>& b) {
  const int n = static_cast<int>(b.size());
  if (n == 2) {
    S det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    return {(b[0] * M[1][1] - M[0][1] * b[1]) / det, (M[0][0] * b[1] - b[0] * M[1][0]) / det};
  }
  if (n == 3) {
    auto det3 = [](const S& a, const S& b_, const S& c, const S& d, const S& e, const S& f,
                   const S& g, const S& h, const S& i) {
      return a * (e * i - f * h) - b_ * (d * i - f * g) + c * (d * h - e * g);
    };
    S det = det3(M[0][0], M[0][1], M[0][2], M[1][0], M[1][1], M[1][2], M[2][0], M[2][1], M[2][2]);
    std::vector<S> z;
    z.reserve(3);
    for (int col = 0; col < 3; ++col) {
      std::vector<std::vector<S>> Mc = M;
      for (int r = 0; r < 3; ++r) Mc[r][col] = b[r];
      z.push_back(det3(Mc[0][0], Mc[0][1], Mc[0][2], Mc[1][0], Mc[1][1], Mc[1][2], Mc[2][0],
                       Mc[2][1], Mc[2][2]) /
                  det);
    }
    return z;
  }
  throw UsageError("small_solve: only n = 2 or 3 supported");
}

class InverseMapPullbackEval : public EvaluatorBase<InverseMapPullbackEval> {
 public:
  InverseMapPullbackEval(std::shared_ptr<const ScalarEvaluator> base, PolyMap tau)
      : base_(std::move(base)), tau_(std::move(tau)) {
    n_ = tau_.ncomps();
    jac_.resize(n_);
    for (int l = 0; l < n_; ++l) {
      jac_[l].resize(n_);
      for (int k = 0; k < n_; ++k) jac_[l][k] = tau_.component(l).derivative(k);
    }
  }

  int dimension() const override { return n_; }

  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> y) const {
    // Newton for w with tau(w) = x. Double-precision iterations converge the
    // value; two extra iterations in S converge the derivative coefficients
    // (Newton doubles the correct jet order per step).
    std::vector<double> xv(n_), wv(n_);
    for (int i = 0; i < n_; ++i) wv[i] = xv[i] = scalar_value(x[i]);
    for (int it = 0; it < 50; ++it) {
      std::vector<double> r = tau_.eval(std::span<const double>(wv));
      double err = 0.0;
      for (int i = 0; i < n_; ++i) {
        r[i] -= xv[i];
        err = std::max(err, std::abs(r[i]));
      }
      std::vector<std::vector<double>> J(n_, std::vector<double>(n_));
      for (int l = 0; l < n_; ++l)
        for (int k = 0; k < n_; ++k) J[l][k] = jac_[l][k].eval(std::span<const double>(wv));
      std::vector<double> dw = small_solve(J, r);
      for (int i = 0; i < n_; ++i) wv[i] -= dw[i];
      if (err < 1e-14) break;
    }

    std::vector<S> w(n_);
    for (int i = 0; i < n_; ++i) w[i] = S(wv[i]);
    for (int it = 0; it < 3; ++it) {
      std::vector<S> r = tau_.eval(std::span<const S>(w));
      for (int i = 0; i < n_; ++i) r[i] -= x[i];
      std::vector<std::vector<S>> J(n_, std::vector<S>(n_));
      for (int l = 0; l < n_; ++l)
        for (int k = 0; k < n_; ++k) J[l][k] = jac_[l][k].eval(std::span<const S>(w));
      std::vector<S> dw = small_solve(J, r);
      for (int i = 0; i < n_; ++i) w[i] -= dw[i];
    }

    std::vector<std::vector<S>> J(n_, std::vector<S>(n_));
    for (int l = 0; l < n_; ++l)
      for (int k = 0; k < n_; ++k) J[l][k] = jac_[l][k].eval(std::span<const S>(w));
    std::vector<S> z = small_solve(J, std::vector<S>(y.begin(), y.end()));
    return (*base_)(std::span<const S>(w), std::span<const S>(z));
  }

 private:
  std::shared_ptr<const ScalarEvaluator> base_;
  PolyMap tau_;
  std::vector<std::vector<Polynomial>> jac_;
  int n_ = 0;
};

// Klein seen through the chart where `tau` (identity linear part, cubic
// tail) is the transition back to the Klein ball: rectilinearized exactly by
// pulling back through tau.
inline Metric disguised_klein(double coef = 0.12) {
  PolyMap tau({Polynomial::monomial({1, 0}, 1.0) + Polynomial::monomial({3, 0}, coef) +
                   Polynomial::monomial({1, 2}, 0.5 * coef),
               Polynomial::monomial({0, 1}, 1.0) + Polynomial::monomial({0, 3}, coef) +
                   Polynomial::monomial({2, 1}, -0.4 * coef)});
  Metric klein = build_metric(klein_spec(2));
  MetricSpec spec = euclidean_spec(2);  // placeholder family; evaluator is bespoke
  spec.domain = {DomainSpec::Kind::ball, 0.7, 0.5};
  return Metric(spec, std::make_shared<InverseMapPullbackEval>(klein.evaluator_ptr(), tau));
}

}  // namespace finsler::testing
