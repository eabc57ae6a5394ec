// finslerlab - smooth polynomial chart maps with derived first and second
// derivatives.
#pragma once

#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "finsler/polynomial.hpp"
#include "finsler/types.hpp"

namespace finsler {

class CoordinateChange {
 public:
  CoordinateChange() = default;
  explicit CoordinateChange(PolyMap forward, std::optional<PolyMap> inverse = std::nullopt);

  int dimension() const { return forward_.ncomps(); }
  const PolyMap& forward() const { return forward_; }
  const std::optional<PolyMap>& inverse() const { return inverse_; }

  template <class S>
  std::vector<S> map_point(std::span<const S> x) const {
    return forward_.eval(x);
  }

  // Pushes a tangent sample through the map: out_x = phi(x),
  // out_y = Dphi(x) . y.
  template <class S>
  void map_tangent(std::span<const S> x, std::span<const S> y, std::vector<S>& out_x,
                   std::vector<S>& out_y) const {
    const int n = dimension();
    out_x = forward_.eval(x);
    out_y.assign(n, S(0.0));
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) out_y[l] += jac_[l][k].eval(x) * y[k];
  }

  Mat jacobian_at(const Vec& x) const;
  // (l, s, k) = d^2 phi^l / du^s du^k.
  Tensor3 hessian_at(const Vec& x) const;
  double hessian_sup_at(const Vec& x) const;
  bool is_affine() const;

  // Smallest |det Dphi| over the given probe points.
  double min_jacobian_det(const std::vector<Vec>& probes) const;

  static CoordinateChange from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  PolyMap forward_;
  std::optional<PolyMap> inverse_;
  std::vector<std::vector<Polynomial>> jac_;                 // [l][k]
  std::vector<std::vector<std::vector<Polynomial>>> hess_;   // [l][s][k]
};

}  // namespace finsler
