// finslerlab - multivariate polynomials with explicit coefficient lists.
//
// Coefficient fields (metric coefficients, 1-forms, coordinate maps, vector
// fields) are polynomials so they differentiate exactly to any order and
// serialize as nested [exponent-multi-index, coefficient] pairs.
#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "finsler/types.hpp"

namespace finsler {

struct PolyTerm {
  std::vector<int> exps;
  double coef = 0.0;
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}
  Polynomial(int nvars, std::vector<PolyTerm> terms);

  static Polynomial constant(int nvars, double c);
  // The monomial c * prod_i z_i^exps[i].
  static Polynomial monomial(std::vector<int> exps, double c);

  int nvars() const { return nvars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::vector<PolyTerm>& terms() const { return terms_; }

  void add_term(std::span<const int> exps, double c);

  template <class S>
  S eval(std::span<const S> z) const;

  Polynomial derivative(int var) const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(double c) const;

  // Substitution z_i -> subs[i]; used for composing with affine maps.
  Polynomial compose(std::span<const Polynomial> subs) const;

  static Polynomial from_json(const nlohmann::json& j, int nvars);
  nlohmann::json to_json() const;

 private:
  void canonicalize();

  int nvars_ = 0;
  std::vector<PolyTerm> terms_;
};

// A polynomial map between coordinate vectors (all components share nvars).
class PolyMap {
 public:
  PolyMap() = default;
  explicit PolyMap(std::vector<Polynomial> components);

  int nvars() const { return components_.empty() ? 0 : components_[0].nvars(); }
  int ncomps() const { return static_cast<int>(components_.size()); }
  const Polynomial& component(int i) const { return components_[i]; }
  const std::vector<Polynomial>& components() const { return components_; }

  template <class S>
  std::vector<S> eval(std::span<const S> z) const {
    std::vector<S> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c.eval(z));
    return out;
  }

  static PolyMap identity(int n);
  PolyMap compose(const PolyMap& inner) const;

  static PolyMap from_json(const nlohmann::json& j, int nvars);
  nlohmann::json to_json() const;

 private:
  std::vector<Polynomial> components_;
};

}  // namespace finsler
