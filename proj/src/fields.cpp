#include "finsler/fields.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "finsler/deriv.hpp"

namespace finsler {

VectorFieldSpec::VectorFieldSpec(PolyMap components, int max_degree)
    : components_(std::move(components)) {
  const int n = components_.ncomps();
  if (n < 2) throw SpecError("vector field: dimension must be >= 2");
  if (components_.nvars() != n) throw SpecError("vector field: component arity mismatch");
  for (const auto& c : components_.components())
    if (c.degree() > max_degree)
      throw SpecError("vector field: polynomial degree exceeds the configured bound");
  jac_.resize(n);
  hess_.resize(n);
  for (int s = 0; s < n; ++s) {
    jac_[s].resize(n);
    hess_[s].assign(n, std::vector<Polynomial>(n));
    for (int r = 0; r < n; ++r) jac_[s][r] = components_.component(s).derivative(r);
    for (int mdx = 0; mdx < n; ++mdx)
      for (int r = 0; r < n; ++r) hess_[s][mdx][r] = jac_[s][mdx].derivative(r);
  }
}

Vec VectorFieldSpec::value_at(const Vec& x) const {
  std::span<const double> xs(x.data(), x.size());
  std::vector<double> v = components_.eval(xs);
  return Eigen::Map<const Vec>(v.data(), v.size());
}

Mat VectorFieldSpec::jacobian_at(const Vec& x) const {
  const int n = dimension();
  Mat J(n, n);
  std::span<const double> xs(x.data(), x.size());
  for (int s = 0; s < n; ++s)
    for (int r = 0; r < n; ++r) J(s, r) = jac_[s][r].eval(xs);
  return J;
}

Tensor3 VectorFieldSpec::hessian_at(const Vec& x) const {
  const int n = dimension();
  Tensor3 H(n);
  std::span<const double> xs(x.data(), x.size());
  for (int s = 0; s < n; ++s)
    for (int mdx = 0; mdx < n; ++mdx)
      for (int r = 0; r < n; ++r) H(s, mdx, r) = hess_[s][mdx][r].eval(xs);
  return H;
}

VectorFieldSpec VectorFieldSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dimension") || !j.contains("components"))
    throw SpecError("vector field: expected {\"dimension\", \"components\"}");
  int n = j.at("dimension").get<int>();
  return VectorFieldSpec(PolyMap::from_json(j.at("components"), n));
}

nlohmann::json VectorFieldSpec::to_json() const {
  nlohmann::json j;
  j["dimension"] = dimension();
  j["components"] = components_.to_json();
  return j;
}

SprayGauge spray_gauge(const Metric& m, const TangentSample& s) {
  if (s.n() != m.dimension()) throw UsageError("spray_gauge: dimension mismatch");
  Jet jet = jet_at(m.evaluator(), s, 2);
  Vec rhs = jet.dF_dx - jet.d2F_dxdy.transpose() * s.y;

  Eigen::JacobiSVD<Mat> svd(jet.d2F_dydy, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * sv[0]) ++rank;
  if (rank < m.dimension() - 1)
    throw RegularityError("spray_gauge: y-Hessian rank below n-1 at the sample");

  svd.setThreshold(1e-10);
  SprayGauge g;
  g.C = svd.solve(rhs);
  g.solve_residual = (jet.d2F_dydy * g.C - rhs).norm() / (1.0 + rhs.norm());
  g.rhs_orthogonality = std::abs(rhs.dot(s.y)) / s.y.squaredNorm();
  g.kernel_component = g.C.dot(s.y) / s.y.squaredNorm();
  return g;
}

Vec killing_residual(const Metric& m, const VectorFieldSpec& X, const TangentSample& s) {
  if (X.dimension() != m.dimension() || s.n() != m.dimension())
    throw UsageError("killing_residual: dimension mismatch");
  return killing_residual_with_gauge(m, X, s, spray_gauge(m, s).C);
}

Vec killing_residual_with_gauge(const Metric& m, const VectorFieldSpec& X, const TangentSample& s,
                                const Vec& C) {
  if (X.dimension() != m.dimension()) throw UsageError("killing_residual: dimension mismatch");
  validate_sample(s);
  const int n = m.dimension();

  Jet jet = jet_at(m.evaluator(), s, 3);
  Vec Xv = X.value_at(s.x);
  Mat dX = X.jacobian_at(s.x);    // (s, r)
  Tensor3 d2X = X.hessian_at(s.x);  // (s, m, r)

  const Vec& y = s.y;
  Vec res = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;

    // [ d2F/dx^s dx^i - d3F/dx^s dx^k dy^i y^k - d3F/dx^s dy^k dy^i C^k ] X^s
    for (int a = 0; a < n; ++a) {
      double bracket = jet.d2F_dxdx(a, i);
      for (int k = 0; k < n; ++k) {
        bracket -= jet.d3F_dxdxdy(a, k, i) * y[k];
        bracket -= jet.d3F_dxdydy(a, k, i) * C[k];
      }
      acc += bracket * Xv[a];
    }

    // [ (d2F/dy^s dx^i - d2F/dy^i dx^s) y^r - d2F/dy^s dy^i C^r
    //   - (d3F/dy^s dx^k dy^i y^k + d3F/dy^s dy^k dy^i C^k) y^r ] dX^s/du^r
    for (int a = 0; a < n; ++a) {
      double third = 0.0;
      for (int k = 0; k < n; ++k) {
        third += jet.d3F_dxdydy(k, a, i) * y[k];
        third += jet.d3F_dydydy(a, k, i) * C[k];
      }
      double skew = jet.d2F_dxdy(i, a) - jet.d2F_dxdy(a, i);
      for (int r = 0; r < n; ++r)
        acc += ((skew - third) * y[r] - jet.d2F_dydy(a, i) * C[r]) * dX(a, r);
    }

    // - [ d2F/dy^s dy^i y^m y^r ] d2X^s/du^m du^r
    for (int a = 0; a < n; ++a) {
      double quad = 0.0;
      for (int mdx = 0; mdx < n; ++mdx)
        for (int r = 0; r < n; ++r) quad += d2X(a, mdx, r) * y[mdx] * y[r];
      acc -= jet.d2F_dydy(a, i) * quad;
    }

    res[i] = acc;
  }
  return res;
}

namespace {

Vec rk4_flow(const VectorFieldSpec& X, Vec u, double time, int steps) {
  const double h = time / steps;
  for (int k = 0; k < steps; ++k) {
    Vec k1 = X.value_at(u);
    Vec k2 = X.value_at(u + 0.5 * h * k1);
    Vec k3 = X.value_at(u + 0.5 * h * k2);
    Vec k4 = X.value_at(u + h * k3);
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

// Advects a point together with a tangent vector through the flow (the
// variational equation delta' = DX(u) delta).
std::pair<Vec, Vec> rk4_tangent_flow(const VectorFieldSpec& X, Vec u, Vec d, double time,
                                     int steps) {
  const double h = time / steps;
  auto f = [&](const Vec& uu, const Vec& dd) {
    return std::make_pair(X.value_at(uu), Vec(X.jacobian_at(uu) * dd));
  };
  for (int k = 0; k < steps; ++k) {
    auto [k1u, k1d] = f(u, d);
    auto [k2u, k2d] = f(u + 0.5 * h * k1u, d + 0.5 * h * k1d);
    auto [k3u, k3d] = f(u + 0.5 * h * k2u, d + 0.5 * h * k2d);
    auto [k4u, k4d] = f(u + h * k3u, d + h * k3d);
    u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    d += (h / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
  }
  return {u, d};
}

double point_to_polyline(const Vec& p, const std::vector<Vec>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < poly.size(); ++k) {
    Vec seg = poly[k + 1] - poly[k];
    double len2 = seg.squaredNorm();
    double t = len2 == 0.0 ? 0.0 : std::clamp((p - poly[k]).dot(seg) / len2, 0.0, 1.0);
    best = std::min(best, (p - (poly[k] + t * seg)).norm());
  }
  return best;
}

}  // namespace

FlowOracleResult flow_oracle(const Metric& m, const VectorFieldSpec& X, const TangentSample& s0,
                             double epsilon, const FlowOracleOptions& options) {
  if (X.dimension() != m.dimension()) throw UsageError("flow_oracle: dimension mismatch");

  GeodesicTrace base = integrate_geodesic(m, s0, options.T, options.geodesic_steps);
  FlowOracleResult out;
  out.truncated = base.domain_exit;
  if (base.nodes() < 3) {
    out.truncated = true;
    return out;
  }

  std::vector<Vec> advected;
  advected.reserve(base.nodes());
  for (const auto& p : base.points) {
    Vec q = rk4_flow(X, p, epsilon, options.flow_steps);
    if (!m.in_domain(q)) {
      out.truncated = true;
      break;
    }
    advected.push_back(q);
  }
  if (advected.size() < 3) {
    out.truncated = true;
    return out;
  }

  auto [p0, v0] = rk4_tangent_flow(X, base.points.front(), base.velocities.front(), epsilon,
                                   options.flow_steps);

  // Re-integrate from the advected initial data until the reference arc
  // length covers the advected point set, then compare as point sets.
  double euclid_len = 0.0;
  for (size_t k = 0; k + 1 < advected.size(); ++k) euclid_len += (advected[k + 1] - advected[k]).norm();
  double v0n = v0.norm();
  if (v0n < kEpsilonMin) throw EvaluationError("flow_oracle: advected velocity degenerated");

  GeodesicTrace ref;
  double T_ref = 1.5 * euclid_len / v0n + 1e-9;
  for (int attempt = 0; attempt < 4; ++attempt) {
    ref = integrate_geodesic(m, TangentSample(p0, v0), T_ref, options.reference_steps);
    double ref_len = 0.0;
    for (size_t k = 0; k + 1 < ref.points.size(); ++k)
      ref_len += (ref.points[k + 1] - ref.points[k]).norm();
    if (ref_len >= 1.05 * euclid_len || ref.domain_exit) break;
    T_ref *= 2.0;
  }
  out.truncated = out.truncated || ref.domain_exit;

  double L = (advected.back() - advected.front()).norm();
  if (L == 0.0) throw MeasurementError("flow_oracle: degenerate advected chord");
  for (const auto& p : advected)
    out.geodesy_defect = std::max(out.geodesy_defect, point_to_polyline(p, ref.points) / L);

  Vec chord = advected.back() - advected.front();
  Vec u = chord / L;
  double worst = 0.0;
  for (const auto& p : advected) {
    Vec d = p - advected.front();
    worst = std::max(worst, (d - d.dot(u) * u).norm());
  }
  out.image_straightness = worst / L;
  return out;
}

}  // namespace finsler
