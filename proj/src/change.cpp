#include "finsler/change.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace finsler {

CoordinateChange::CoordinateChange(PolyMap forward, std::optional<PolyMap> inverse)
    : forward_(std::move(forward)), inverse_(std::move(inverse)) {
  const int n = forward_.ncomps();
  if (n < 2) throw SpecError("coordinate change: dimension must be >= 2");
  if (forward_.nvars() != n) throw SpecError("coordinate change: map must be square");
  if (inverse_ && (inverse_->ncomps() != n || inverse_->nvars() != n))
    throw SpecError("coordinate change: inverse shape mismatch");
  jac_.resize(n);
  hess_.resize(n);
  for (int l = 0; l < n; ++l) {
    jac_[l].resize(n);
    hess_[l].assign(n, std::vector<Polynomial>(n));
    for (int k = 0; k < n; ++k) jac_[l][k] = forward_.component(l).derivative(k);
    for (int s = 0; s < n; ++s)
      for (int k = 0; k < n; ++k) hess_[l][s][k] = jac_[l][s].derivative(k);
  }
}

Mat CoordinateChange::jacobian_at(const Vec& x) const {
  const int n = dimension();
  Mat J(n, n);
  std::span<const double> xs(x.data(), n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) J(l, k) = jac_[l][k].eval(xs);
  return J;
}

Tensor3 CoordinateChange::hessian_at(const Vec& x) const {
  const int n = dimension();
  Tensor3 H(n);
  std::span<const double> xs(x.data(), n);
  for (int l = 0; l < n; ++l)
    for (int s = 0; s < n; ++s)
      for (int k = 0; k < n; ++k) H(l, s, k) = hess_[l][s][k].eval(xs);
  return H;
}

double CoordinateChange::hessian_sup_at(const Vec& x) const { return hessian_at(x).max_abs(); }

bool CoordinateChange::is_affine() const {
  for (const auto& comp : forward_.components())
    if (comp.degree() > 1) return false;
  return true;
}

double CoordinateChange::min_jacobian_det(const std::vector<Vec>& probes) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : probes) m = std::min(m, std::abs(jacobian_at(p).determinant()));
  return m;
}

CoordinateChange CoordinateChange::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dimension") || !j.contains("forward"))
    throw SpecError("coordinate change: expected {\"dimension\", \"forward\"[, \"inverse\"]}");
  int n = j.at("dimension").get<int>();
  PolyMap fwd = PolyMap::from_json(j.at("forward"), n);
  if (fwd.ncomps() != n) throw SpecError("coordinate change: component count must equal dimension");
  std::optional<PolyMap> inv;
  if (j.contains("inverse") && !j.at("inverse").is_null()) {
    inv = PolyMap::from_json(j.at("inverse"), n);
    if (inv->ncomps() != n) throw SpecError("coordinate change: inverse component count mismatch");
  }
  return CoordinateChange(std::move(fwd), std::move(inv));
}

nlohmann::json CoordinateChange::to_json() const {
  nlohmann::json j;
  j["dimension"] = dimension();
  j["forward"] = forward_.to_json();
  if (inverse_) j["inverse"] = inverse_->to_json();
  return j;
}

}  // namespace finsler
