// finslerlab - Killing-type residual for infinitesimal geodesic maps, with a
// flow-advection oracle.
#pragma once

#include <nlohmann/json_fwd.hpp>

#include "finsler/geodesics.hpp"
#include "finsler/metrics.hpp"
#include "finsler/polynomial.hpp"

namespace finsler {

class VectorFieldSpec {
 public:
  VectorFieldSpec() = default;
  explicit VectorFieldSpec(PolyMap components, int max_degree = 4);

  int dimension() const { return components_.ncomps(); }
  const PolyMap& components() const { return components_; }

  Vec value_at(const Vec& x) const;
  Mat jacobian_at(const Vec& x) const;   // (s, r) = dX^s / du^r
  Tensor3 hessian_at(const Vec& x) const;  // (s, m, r) = d2X^s / du^m du^r

  static VectorFieldSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  PolyMap components_;
  std::vector<std::vector<Polynomial>> jac_;
  std::vector<std::vector<std::vector<Polynomial>>> hess_;
};

struct SprayGauge {
  Vec C;                    // minimal-norm solution of d2F/dydy . C = dF/dx - (d2F/dxdy)^T y
  double solve_residual;    // ||lhs - rhs|| / ||rhs||
  double rhs_orthogonality; // |rhs . y| after unit normalization (exact zero analytically)
  double kernel_component;  // coefficient of C along y (zero for minimal norm)
};

SprayGauge spray_gauge(const Metric& m, const TangentSample& s);

// Residual of the second-order PDE satisfied by generators of flows that map
// geodesics to geodesics as point sets, assembled from an order-3 jet, the
// field's lifted derivatives and the spray gauge.
Vec killing_residual(const Metric& m, const VectorFieldSpec& X, const TangentSample& s);

// Same residual with a caller-supplied gauge vector in place of the
// minimal-norm solution (for measuring sensitivity to C -> C + t y).
Vec killing_residual_with_gauge(const Metric& m, const VectorFieldSpec& X, const TangentSample& s,
                                const Vec& C);

struct FlowOracleResult {
  double geodesy_defect = 0.0;      // distance of advected points to the re-integrated geodesic
  double image_straightness = 0.0;  // point-to-chord measure of the advected curve
  bool truncated = false;
};

struct FlowOracleOptions {
  double T = 1.0;
  int geodesic_steps = 64;
  int flow_steps = 32;
  int reference_steps = 256;
};

// Integrates a geodesic from s0, advects it by the flow of X for time
// epsilon, and measures how far the image is from the geodesic re-integrated
// from the advected initial data.
FlowOracleResult flow_oracle(const Metric& m, const VectorFieldSpec& X, const TangentSample& s0,
                             double epsilon, const FlowOracleOptions& options = {});

}  // namespace finsler
