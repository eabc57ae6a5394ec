#include "finsler/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace finsler {

namespace {

void enumerate_terms(int nvars, int order, std::vector<std::vector<int>>& out) {
  // All exponent multi-indices with total degree <= order, sorted by
  // (degree, lexicographic) so the constant term sits at index 0.
  std::vector<int> cur(nvars, 0);
  std::vector<std::vector<int>> all;
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == nvars) {
      all.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[var] = e;
      self(self, var + 1, left - e);
    }
    cur[var] = 0;
  };
  rec(rec, 0, order);
  std::sort(all.begin(), all.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    int da = 0, db = 0;
    for (int v : a) da += v;
    for (int v : b) db += v;
    if (da != db) return da < db;
    return a < b;
  });
  out = std::move(all);
}

}  // namespace

TaylorAlgebra::TaylorAlgebra(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1 || nvars > 15) throw UsageError("taylor algebra: unsupported variable count");
  if (order < 1 || order > kMaxOrder) throw UsageError("taylor algebra: unsupported order");

  std::vector<std::vector<int>> terms;
  enumerate_terms(nvars, order, terms);
  nterms_ = static_cast<int>(terms.size());
  exps_.resize(static_cast<size_t>(nterms_) * nvars_);
  degs_.resize(nterms_);
  fact_.resize(nterms_);
  for (int t = 0; t < nterms_; ++t) {
    int deg = 0;
    double fact = 1.0;
    for (int v = 0; v < nvars_; ++v) {
      int e = terms[t][v];
      exps_[static_cast<size_t>(t) * nvars_ + v] = e;
      deg += e;
      for (int k = 2; k <= e; ++k) fact *= k;
    }
    degs_[t] = deg;
    fact_[t] = fact;
  }

  // Exponents are <= 3, so 2 bits per variable pack into a 32-bit key.
  lookup_.assign(static_cast<size_t>(1) << (2 * nvars_), -1);
  for (int t = 0; t < nterms_; ++t)
    lookup_[pack({exponents(t), static_cast<size_t>(nvars_)})] = t;

  // Group ordered coefficient pairs by their product term.
  std::vector<std::vector<std::pair<int, int>>> groups(nterms_);
  std::vector<int> sum(nvars_);
  for (int i = 0; i < nterms_; ++i) {
    for (int j = 0; j < nterms_; ++j) {
      if (degs_[i] + degs_[j] > order_) continue;
      for (int v = 0; v < nvars_; ++v) sum[v] = exponents(i)[v] + exponents(j)[v];
      groups[term_index(sum)].emplace_back(i, j);
    }
  }
  prod_offset_.assign(nterms_ + 1, 0);
  for (int t = 0; t < nterms_; ++t) prod_offset_[t + 1] = prod_offset_[t] + static_cast<int>(groups[t].size());
  prod_pairs_.reserve(prod_offset_[nterms_]);
  for (auto& g : groups)
    for (auto& p : g) prod_pairs_.push_back(p);
}

uint64_t TaylorAlgebra::pack(std::span<const int> exps) const {
  uint64_t key = 0;
  for (int v = 0; v < nvars_; ++v) key |= static_cast<uint64_t>(exps[v]) << (2 * v);
  return key;
}

int TaylorAlgebra::term_index(std::span<const int> exps) const {
  int deg = 0;
  for (int v = 0; v < nvars_; ++v) {
    if (exps[v] < 0) return -1;
    deg += exps[v];
  }
  if (deg > order_) return -1;
  return lookup_[pack(exps)];
}

std::shared_ptr<const TaylorAlgebra> TaylorAlgebra::get(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const TaylorAlgebra>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::make_shared<TaylorAlgebra>(nvars, order);
  return slot;
}

TaylorScalar TaylorScalar::constant(const TaylorAlgebra* alg, double v) {
  TaylorScalar s;
  s.alg_ = alg;
  s.c_.assign(alg->nterms(), 0.0);
  s.c_[0] = v;
  return s;
}

TaylorScalar TaylorScalar::variable(const TaylorAlgebra* alg, double v, int var) {
  TaylorScalar s = constant(alg, v);
  std::vector<int> e(alg->nvars(), 0);
  e[var] = 1;
  s.c_[alg->term_index(e)] = 1.0;
  return s;
}

void TaylorScalar::promote(const TaylorAlgebra* alg) {
  double v = c_[0];
  alg_ = alg;
  c_.assign(alg->nterms(), 0.0);
  c_[0] = v;
}

double TaylorScalar::coefficient(std::span<const int> exps) const {
  if (is_constant()) {
    for (int e : exps)
      if (e != 0) return 0.0;
    return c_[0];
  }
  int t = alg_->term_index(exps);
  return t < 0 ? 0.0 : c_[t];
}

double TaylorScalar::partial(std::span<const int> exps) const {
  if (is_constant()) return coefficient(exps);
  int t = alg_->term_index(exps);
  return t < 0 ? 0.0 : c_[t] * alg_->factorial_weight(t);
}

TaylorScalar TaylorScalar::operator-() const {
  TaylorScalar r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

TaylorScalar& TaylorScalar::operator+=(const TaylorScalar& o) {
  if (o.is_constant()) {
    c_[0] += o.c_[0];
    return *this;
  }
  if (is_constant()) promote(o.alg_);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

TaylorScalar& TaylorScalar::operator-=(const TaylorScalar& o) {
  if (o.is_constant()) {
    c_[0] -= o.c_[0];
    return *this;
  }
  if (is_constant()) promote(o.alg_);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

TaylorScalar operator*(const TaylorScalar& a, const TaylorScalar& b) {
  if (a.is_constant()) {
    TaylorScalar r = b;
    for (double& v : r.c_) v *= a.c_[0];
    return r;
  }
  if (b.is_constant()) {
    TaylorScalar r = a;
    for (double& v : r.c_) v *= b.c_[0];
    return r;
  }
  const TaylorAlgebra* alg = a.alg_;
  TaylorScalar r = TaylorScalar::constant(alg, 0.0);
  for (int t = 0; t < alg->nterms(); ++t) {
    double acc = 0.0;
    for (auto [i, j] : alg->prod_pairs(t)) acc += a.c_[i] * b.c_[j];
    r.c_[t] = acc;
  }
  return r;
}

TaylorScalar& TaylorScalar::operator*=(const TaylorScalar& o) {
  *this = *this * o;
  return *this;
}

TaylorScalar operator/(const TaylorScalar& a, const TaylorScalar& b) {
  if (b.is_constant()) {
    if (b.c_[0] == 0.0) throw EvaluationError("taylor: division by zero");
    TaylorScalar r = a;
    for (double& v : r.c_) v /= b.c_[0];
    return r;
  }
  double v = b.value();
  if (v == 0.0) throw EvaluationError("taylor: division by zero value");
  double iv = 1.0 / v;
  double d[4] = {iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv};
  return a * TaylorScalar::compose(b, d);
}

TaylorScalar& TaylorScalar::operator/=(const TaylorScalar& o) {
  *this = *this / o;
  return *this;
}

TaylorScalar TaylorScalar::compose(const TaylorScalar& u, std::span<const double> derivs) {
  if (u.is_constant()) return TaylorScalar(derivs[0]);
  const TaylorAlgebra* alg = u.alg_;
  TaylorScalar h = u;
  h.c_[0] = 0.0;
  TaylorScalar r = constant(alg, derivs[0]);
  if (derivs.size() > 1 && alg->order() >= 1) r += TaylorScalar(derivs[1]) * h;
  if (derivs.size() > 2 && alg->order() >= 2) {
    TaylorScalar h2 = h * h;
    r += TaylorScalar(derivs[2] / 2.0) * h2;
    if (derivs.size() > 3 && alg->order() >= 3) r += TaylorScalar(derivs[3] / 6.0) * (h2 * h);
  }
  return r;
}

TaylorScalar sqrt(const TaylorScalar& u) {
  double v = u.value();
  if (v <= 0.0) {
    if (u.is_constant() && v == 0.0) return TaylorScalar(0.0);
    throw EvaluationError("taylor: sqrt of non-positive value");
  }
  double s = std::sqrt(v);
  double d[4] = {s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)};
  return TaylorScalar::compose(u, d);
}

TaylorScalar exp(const TaylorScalar& u) {
  double e = std::exp(u.value());
  double d[4] = {e, e, e, e};
  return TaylorScalar::compose(u, d);
}

TaylorScalar log(const TaylorScalar& u) {
  double v = u.value();
  if (v <= 0.0) throw EvaluationError("taylor: log of non-positive value");
  double iv = 1.0 / v;
  double d[4] = {std::log(v), iv, -iv * iv, 2.0 * iv * iv * iv};
  return TaylorScalar::compose(u, d);
}

TaylorScalar ipow(TaylorScalar base, int k) {
  if (k < 0) return TaylorScalar(1.0) / ipow(std::move(base), -k);
  TaylorScalar r(1.0);
  while (k > 0) {
    if (k & 1) r *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return r;
}

TaylorScalar pow(const TaylorScalar& u, double p) {
  double ip = std::nearbyint(p);
  if (std::abs(p - ip) < 1e-12 && std::abs(ip) <= 64) return ipow(u, static_cast<int>(ip));
  double v = u.value();
  if (v <= 0.0) throw EvaluationError("taylor: pow with non-positive base");
  double f0 = std::pow(v, p);
  double d[4] = {f0, p * f0 / v, p * (p - 1.0) * f0 / (v * v), p * (p - 1.0) * (p - 2.0) * f0 / (v * v * v)};
  return TaylorScalar::compose(u, d);
}

TaylorScalar abs(const TaylorScalar& u) {
  double v = u.value();
  if (v > 0.0) return u;
  if (v < 0.0) return -u;
  if (u.is_constant()) return TaylorScalar(0.0);
  throw EvaluationError("taylor: abs is not differentiable at zero");
}

}  // namespace finsler
