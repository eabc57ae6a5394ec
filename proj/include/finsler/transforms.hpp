// finslerlab - coordinate-change machinery: the two-term decomposition of the
// Hamel residual under a chart change, the affine characterization of
// rectilinear-chart freedom, and a least-squares search for rectilinear
// coordinates.
#pragma once

#include "finsler/change.hpp"
#include "finsler/metrics.hpp"

namespace finsler {

struct TermAB {
  Vec term_full;  // Hamel residual of the pulled-back metric at s
  Vec term_A;     // transformed-chart Hamel residual contracted with the Jacobian
  Vec term_B;     // second-derivative bracket contracted with d2F/dydy and y y
  double identity_residual = 0.0;  // sup |term_full - term_A - term_B|
};

// Evaluates both sides of the transformation identity at s. `m` is the
// metric seen in the transformed chart; the untransformed metric is its
// pullback through `change`.
TermAB eval_terms(const Metric& m, const CoordinateChange& change, const TangentSample& s);

struct AffineTestResult {
  bool affine = false;        // change second derivatives vanish on the samples
  bool rectilinear = false;   // pullback metric keeps a vanishing Hamel residual
  bool agree = false;
  double hessian_sup = 0.0;
  double pullback_hamel_sup = 0.0;
};

// Requires m to be rectilinear in its own chart on the given samples; then a
// change preserves rectilinearity exactly when it is affine.
AffineTestResult prop1_affine_test(const Metric& m, const CoordinateChange& change,
                                   const std::vector<TangentSample>& samples, double tol);

struct SearchResult {
  CoordinateChange change;      // map from candidate chart to the metric's chart
  double achieved_residual = 0.0;  // Hamel sup of the pulled-back metric
  double initial_residual = 0.0;
  int iterations = 0;
  bool converged = false;       // achieved <= tol; otherwise inconclusive
};

struct SearchOptions {
  int degree = 3;        // polynomial degree of the candidate map (2 or 3)
  int max_iterations = 200;
  double tol = 1e-6;     // declare convergence at this Hamel sup
  int threads = 1;
};

// Damped Gauss-Newton / Levenberg-Marquardt minimization of the stacked
// Hamel residual of pullback(m, sigma) over polynomial maps sigma with
// identity linear part and zero constant term (the affine freedom is gauge-
// fixed away). Heuristic: failure to converge is inconclusive, never a
// disproof of projective flatness.
SearchResult rectilinear_search(const Metric& m, const std::vector<TangentSample>& samples,
                                const SearchOptions& options);

}  // namespace finsler
