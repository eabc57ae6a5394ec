// finslerlab - tangent samples, derivative jets, and residual reports.
#pragma once

#include <string>
#include <vector>

#include "finsler/evaluator.hpp"
#include "finsler/types.hpp"

namespace finsler {

// Smallest admissible Euclidean norm for a fiber direction; evaluation below
// this is rejected (slit tangent bundle), never clamped.
inline constexpr double kEpsilonMin = 1e-8;

struct TangentSample {
  Vec x;  // chart coordinates of the base point
  Vec y;  // fiber coordinates, nonzero

  TangentSample() = default;
  TangentSample(Vec base, Vec dir);

  int n() const { return static_cast<int>(x.size()); }
  TangentSample with_unit_dir() const;
};

void validate_sample(const TangentSample& s, double epsilon_min = kEpsilonMin);

// All mixed partials of F at one tangent sample, up to the populated `order`,
// plus the order-2 data of the energy E = F^2 needed by the E-based
// Euler-Lagrange system. Matrix/tensor index conventions: the derivative
// variables appear in the order named by the field, e.g.
//   d2F_dxdy(i, j)      = d^2 F / dx^i dy^j
//   d3F_dxdydy(i, j, k) = d^3 F / dx^i dy^j dy^k.
struct Jet {
  int order = 0;  // F-derivative orders populated (1..3); 0 = empty
  double F = 0.0;
  Vec dF_dx, dF_dy;
  Mat d2F_dxdx, d2F_dxdy, d2F_dydy;
  Tensor3 d3F_dxdxdy, d3F_dxdydy, d3F_dydydy;

  // Energy block, populated alongside order >= 1 (values/gradients) and
  // order >= 2 (second derivatives).
  double E = 0.0;
  Vec dE_dx, dE_dy;
  Mat d2E_dxdy, d2E_dydy;

  int n() const { return static_cast<int>(dF_dx.size()); }
  void require_order(int k) const {
    if (order < k) throw UsageError("jet: derivative order " + std::to_string(k) + " not populated");
  }
};

// Fills the E = F^2 block of a jet from its F fields (exact algebra).
void fill_energy_fields(Jet& jet);

struct SampleResidual {
  TangentSample sample;
  Vec residual;
  double sup = 0.0;
};

struct ResidualReport {
  std::string name;
  std::vector<SampleResidual> samples;
  double aggregate_sup = 0.0;
  double aggregate_mean = 0.0;
  double tol_used = 0.0;
  bool pass = false;
  std::string note;
};

// Builds the aggregate fields and verdict from per-sample entries.
ResidualReport make_report(std::string name, std::vector<SampleResidual> samples, double tol,
                           std::string note = {});

// True iff |F(x, lambda y) - lambda F(x, y)| <= tol (1 + lambda) F(x, y).
bool validate_homogeneity(const ScalarEvaluator& f, const TangentSample& s, double lambda,
                          double tol = 1e-8);

// Residuals of the positive-homogeneity identities:
//   [0] dF_dy . y - F
//   [1] sup | d2F_dydy . y |
//   [2] sup | d2F_dxdy . y - dF_dx |   (row contraction over the y index)
Vec euler_identity_check(const Jet& jet, const TangentSample& s);

}  // namespace finsler
