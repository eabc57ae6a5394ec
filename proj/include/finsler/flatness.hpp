// finslerlab - projective-flatness residuals: Hamel, parameter-preserving,
// Randers reduction, Minkowski detection, indicatrix congruence.
#pragma once

#include <functional>

#include "finsler/metrics.hpp"

namespace finsler {

// Hamel residual at one sample:
//   r_i = sum_k [d2F/dx^k dy^i - d2F/dx^i dy^k] y^k.
// Vanishing of r over a chart characterizes rectilinear coordinates; a
// nonzero residual only says the chart at hand is not rectilinear.
Vec hamel_residual(const Metric& m, const TangentSample& s);
Vec hamel_residual(const Jet& jet, const TangentSample& s);

// Parameter-preserving residual (E = F^2):
//   p_i = sum_k d2E/dx^k dy^i y^k - 0.5 sum_k d2E/dx^i dy^k y^k.
Vec param_residual(const Metric& m, const TangentSample& s);
Vec param_residual(const Jet& jet, const TangentSample& s);

struct RandersReduction {
  double identity_sup = 0.0;      // sup |Hamel(F) - Hamel(alpha) + db contraction|
  double closedness_defect = 0.0; // sup_ij |(db)_ij| at the base point
  double hamel_F_sup = 0.0;
  double hamel_alpha_sup = 0.0;
};

// Checks the algebraic reduction of the Randers Hamel residual to the
// underlying Riemannian one plus the db contraction. The identity holds for
// every Randers metric; the closedness defect reports whether the 1-form is
// closed, which is exactly when flatness transfers between F and alpha.
RandersReduction randers_reduction_residual(const Metric& m, const TangentSample& s);

struct MinkowskiVerdict {
  double dFdx_sup = 0.0;
  double param_sup = 0.0;
  bool pass_dFdx = false;
  bool pass_param = false;
  bool agree = false;
  bool pass = false;
};

// Both detection routes (dF/dx = 0 and the parameter-preserving residual)
// are computed; they must agree. Only defined for metrics over all of R^n.
MinkowskiVerdict minkowski_check(const Metric& m, const std::vector<TangentSample>& samples,
                                 double tol);

// Sampled congruence of the indicatrices at p and q:
//   max over unit directions y of |F(p,y) - F(q,y)| / F(p,y).
double indicatrix_translation_check(const Metric& m, const Vec& p, const Vec& q, int count);

// Evaluates a per-sample residual over a sample set and aggregates it into a
// report. Directions are normalized to unit Euclidean length first.
ResidualReport run_residual_report(
    const std::string& name, const std::vector<TangentSample>& samples,
    const std::function<Vec(const TangentSample&)>& residual, double tol, int threads = 1,
    std::string note = {});

}  // namespace finsler
