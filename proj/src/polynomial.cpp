#include "finsler/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "finsler/taylor.hpp"

namespace finsler {

Polynomial::Polynomial(int nvars, std::vector<PolyTerm> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
  for (auto& t : terms_)
    if (static_cast<int>(t.exps.size()) != nvars_)
      throw SpecError("polynomial: exponent tuple length mismatch");
  canonicalize();
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  std::vector<int> e(nvars, 0);
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::monomial(std::vector<int> exps, double c) {
  Polynomial p(static_cast<int>(exps.size()));
  p.add_term(exps, c);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int td = 0;
    for (int e : t.exps) td += e;
    d = std::max(d, td);
  }
  return d;
}

void Polynomial::add_term(std::span<const int> exps, double c) {
  if (static_cast<int>(exps.size()) != nvars_)
    throw SpecError("polynomial: exponent tuple length mismatch");
  for (int e : exps)
    if (e < 0) throw SpecError("polynomial: negative exponent");
  terms_.push_back({std::vector<int>(exps.begin(), exps.end()), c});
  canonicalize();
}

void Polynomial::canonicalize() {
  std::map<std::vector<int>, double> merged;
  for (auto& t : terms_) merged[t.exps] += t.coef;
  terms_.clear();
  for (auto& [e, c] : merged)
    if (c != 0.0) terms_.push_back({e, c});
}

template <class S>
S Polynomial::eval(std::span<const S> z) const {
  if (static_cast<int>(z.size()) != nvars_) throw UsageError("polynomial: evaluation arity mismatch");
  S acc(0.0);
  for (const auto& t : terms_) {
    S term(t.coef);
    for (int v = 0; v < nvars_; ++v)
      for (int e = 0; e < t.exps[v]; ++e) term *= z[v];
    acc += term;
  }
  return acc;
}

template double Polynomial::eval<double>(std::span<const double>) const;
template TaylorScalar Polynomial::eval<TaylorScalar>(std::span<const TaylorScalar>) const;

Polynomial Polynomial::derivative(int var) const {
  Polynomial d(nvars_);
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    PolyTerm dt = t;
    dt.coef *= dt.exps[var];
    dt.exps[var] -= 1;
    d.terms_.push_back(std::move(dt));
  }
  d.canonicalize();
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  r.canonicalize();
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(-1.0); }

Polynomial Polynomial::scaled(double c) const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  r.canonicalize();
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(nvars_);
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      PolyTerm t;
      t.exps.resize(nvars_);
      for (int v = 0; v < nvars_; ++v) t.exps[v] = a.exps[v] + b.exps[v];
      t.coef = a.coef * b.coef;
      r.terms_.push_back(std::move(t));
    }
  r.canonicalize();
  return r;
}

Polynomial Polynomial::compose(std::span<const Polynomial> subs) const {
  if (static_cast<int>(subs.size()) != nvars_) throw UsageError("polynomial: compose arity mismatch");
  int m = subs.empty() ? 0 : subs[0].nvars();
  Polynomial acc(m);
  for (const auto& t : terms_) {
    Polynomial term = Polynomial::constant(m, t.coef);
    for (int v = 0; v < nvars_; ++v)
      for (int e = 0; e < t.exps[v]; ++e) term = term * subs[v];
    acc = acc + term;
  }
  return acc;
}

Polynomial Polynomial::from_json(const nlohmann::json& j, int nvars) {
  if (!j.is_array()) throw SpecError("polynomial: expected an array of [exponents, coefficient] pairs");
  Polynomial p(nvars);
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_array())
      throw SpecError("polynomial: each term must be [[e1,...,en], coefficient]");
    std::vector<int> exps = pair[0].get<std::vector<int>>();
    if (static_cast<int>(exps.size()) != nvars)
      throw SpecError("polynomial: exponent tuple length must equal dimension");
    p.add_term(exps, pair[1].get<double>());
  }
  return p;
}

nlohmann::json Polynomial::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : terms_) j.push_back({t.exps, t.coef});
  return j;
}

PolyMap::PolyMap(std::vector<Polynomial> components) : components_(std::move(components)) {
  for (const auto& c : components_)
    if (c.nvars() != nvars()) throw SpecError("polymap: mixed variable counts");
}

PolyMap PolyMap::identity(int n) {
  std::vector<Polynomial> comps;
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    comps.push_back(Polynomial::monomial(e, 1.0));
  }
  return PolyMap(std::move(comps));
}

PolyMap PolyMap::compose(const PolyMap& inner) const {
  if (nvars() != inner.ncomps()) throw UsageError("polymap: compose arity mismatch");
  std::vector<Polynomial> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) comps.push_back(c.compose(inner.components()));
  return PolyMap(std::move(comps));
}

PolyMap PolyMap::from_json(const nlohmann::json& j, int nvars) {
  if (!j.is_array()) throw SpecError("polymap: expected an array of polynomials");
  std::vector<Polynomial> comps;
  for (const auto& c : j) comps.push_back(Polynomial::from_json(c, nvars));
  return PolyMap(std::move(comps));
}

nlohmann::json PolyMap::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : components_) j.push_back(c.to_json());
  return j;
}

}  // namespace finsler
