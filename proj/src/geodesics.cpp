#include "finsler/geodesics.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/SVD>

#include "finsler/deriv.hpp"
#include "finsler/flatness.hpp"

namespace finsler {

SprayAcceleration el_acceleration(const Metric& m, const TangentSample& s) {
  Jet jet = jet_at(m.evaluator(), s, 2);
  Mat H = jet.d2E_dydy;
  Vec rhs = jet.dE_dx - jet.d2E_dxdy.transpose() * s.y;
  Eigen::LDLT<Mat> ldlt(H);
  Vec D = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || D.minCoeff() <= 1e-12 * D.cwiseAbs().maxCoeff())
    throw RegularityError("el_acceleration: singular energy Hessian at the sample");
  SprayAcceleration a;
  a.gamma_dd = ldlt.solve(rhs);
  a.solve_residual = (H * a.gamma_dd - rhs).norm() / (1.0 + rhs.norm());
  if (!(a.solve_residual <= 1e-8) || !a.gamma_dd.allFinite())
    throw RegularityError("el_acceleration: singular energy Hessian at the sample");
  return a;
}

Vec el_acceleration_from_F(const Metric& m, const TangentSample& s) {
  Jet jet = jet_at(m.evaluator(), s, 2);
  // F-based system: d2F/dydy . a = -(Hamel residual); rank n-1 with kernel
  // span(y). Min-norm solve, then shift along y so that dF/dt = 0.
  Vec rhs = -hamel_residual(jet, s);
  Eigen::JacobiSVD<Mat> svd(jet.d2F_dydy, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  Vec a0 = svd.solve(rhs);
  double c = -(jet.dF_dx.dot(s.y) + jet.dF_dy.dot(a0)) / jet.F;
  return a0 + c * s.y;
}

GeodesicTrace integrate_geodesic(const Metric& m, const TangentSample& s0, double T, int steps) {
  if (steps < 16) throw UsageError("integrate_geodesic: need at least 16 steps");
  if (T <= 0.0) throw UsageError("integrate_geodesic: horizon must be positive");
  validate_sample(s0);

  auto accel = [&](const Vec& x, const Vec& v) -> Vec {
    return el_acceleration(m, TangentSample(x, v)).gamma_dd;
  };

  GeodesicTrace trace;
  const double h = T / steps;
  Vec x = s0.x, v = s0.y;
  trace.times.push_back(0.0);
  trace.points.push_back(x);
  trace.velocities.push_back(v);
  trace.speeds.push_back(m(TangentSample(x, v)));

  for (int k = 0; k < steps; ++k) {
    Vec k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    try {
      k1x = v;
      k1v = accel(x, v);
      k2x = v + 0.5 * h * k1v;
      k2v = accel(x + 0.5 * h * k1x, k2x);
      k3x = v + 0.5 * h * k2v;
      k3v = accel(x + 0.5 * h * k2x, k3x);
      k4x = v + h * k3v;
      k4v = accel(x + h * k3x, k4x);
    } catch (const DomainError&) {
      trace.domain_exit = true;
      break;
    }
    Vec xn = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    Vec vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!m.in_domain(xn)) {
      trace.domain_exit = true;
      break;
    }
    x = xn;
    v = vn;
    trace.times.push_back((k + 1) * h);
    trace.points.push_back(x);
    trace.velocities.push_back(v);
    trace.speeds.push_back(m(TangentSample(x, v)));
  }

  if (trace.nodes() >= 3) {
    trace.straightness = straightness_of(trace);
    trace.affine_defect = affine_defect_of(trace);
  }
  double s_ref = trace.speeds.front();
  for (double sp : trace.speeds)
    trace.speed_drift = std::max(trace.speed_drift, std::abs(sp - s_ref) / s_ref);
  return trace;
}

double straightness_of(const GeodesicTrace& trace) {
  if (trace.nodes() < 3) throw MeasurementError("straightness: need at least 3 nodes");
  const Vec& a = trace.points.front();
  const Vec& b = trace.points.back();
  Vec chord = b - a;
  double L = chord.norm();
  if (L == 0.0) throw MeasurementError("straightness: degenerate chord");
  Vec u = chord / L;
  double worst = 0.0;
  for (const auto& p : trace.points) {
    Vec d = p - a;
    worst = std::max(worst, (d - d.dot(u) * u).norm());
  }
  return worst / L;
}

double affine_defect_of(const GeodesicTrace& trace) {
  if (trace.nodes() < 3) throw MeasurementError("affine defect: need at least 3 nodes");
  double L = (trace.points.back() - trace.points.front()).norm();
  if (L == 0.0) throw MeasurementError("affine defect: degenerate chord");
  double T = trace.times.back() - trace.times.front();
  double worst = 0.0;
  for (int k = 1; k + 1 < trace.nodes(); ++k) {
    double h = trace.times[k] - trace.times[k - 1];
    Vec dd = trace.points[k + 1] - 2.0 * trace.points[k] + trace.points[k - 1];
    worst = std::max(worst, dd.norm() / (h * h));
  }
  return worst * T * T / L;
}

std::string trace_to_csv(const GeodesicTrace& trace) {
  const int n = trace.points.empty() ? 0 : static_cast<int>(trace.points.front().size());
  std::string out = "t";
  for (int i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  for (int i = 1; i <= n; ++i) out += ",y" + std::to_string(i);
  out += ",F\n";
  char buf[64];
  auto append = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  };
  for (int k = 0; k < trace.nodes(); ++k) {
    append(trace.times[k]);
    for (int i = 0; i < n; ++i) {
      out += ',';
      append(trace.points[k][i]);
    }
    for (int i = 0; i < n; ++i) {
      out += ',';
      append(trace.velocities[k][i]);
    }
    out += ',';
    append(trace.speeds[k]);
    out += '\n';
  }
  return out;
}

}  // namespace finsler
