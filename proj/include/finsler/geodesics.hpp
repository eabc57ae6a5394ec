// finslerlab - geodesic integration from the Euler-Lagrange equations of
// F^2, with straightness and affine-parametrization diagnostics.
#pragma once

#include <string>
#include <vector>

#include "finsler/metrics.hpp"

namespace finsler {

struct SprayAcceleration {
  Vec gamma_dd;           // solves d2E/dydy . a = dE/dx - (d2E/dxdy)^T . y
  double solve_residual;  // ||lhs - rhs|| relative to ||rhs||
};

struct GeodesicTrace {
  std::vector<double> times;
  std::vector<Vec> points;
  std::vector<Vec> velocities;
  std::vector<double> speeds;  // F along the trace
  double straightness = 0.0;   // max point-to-chord distance / chord length
  double affine_defect = 0.0;  // sup |second difference| * T^2 / (h^2 * chord)
  double speed_drift = 0.0;    // max |speed - speed0| / speed0
  bool domain_exit = false;    // trace truncated at the domain boundary

  int nodes() const { return static_cast<int>(times.size()); }
};

// Acceleration of the unique constant-speed extremal through s, from the
// F^2 Euler-Lagrange system (invertible since the fundamental tensor is).
SprayAcceleration el_acceleration(const Metric& m, const TangentSample& s);

// Acceleration recovered from the F-based Euler-Lagrange system instead:
// the rank-(n-1) Hessian is solved in the least-squares sense and the
// kernel direction fixed by speed preservation. Cross-check route only.
Vec el_acceleration_from_F(const Metric& m, const TangentSample& s);

// Classical fixed-step 4th-order integration of (x' = v, v' = a(x, v)).
// Exits cleanly (truncated trace, flag set) when the trajectory reaches the
// domain boundary.
GeodesicTrace integrate_geodesic(const Metric& m, const TangentSample& s0, double T, int steps);

double straightness_of(const GeodesicTrace& trace);
double affine_defect_of(const GeodesicTrace& trace);

// CSV export with header exactly t,x1..xn,y1..yn,F.
std::string trace_to_csv(const GeodesicTrace& trace);

}  // namespace finsler
