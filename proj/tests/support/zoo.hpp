// Shared metric fixtures for the test suites.
#pragma once

#include <vector>

#include "finsler/metrics.hpp"

namespace finsler::testing {

inline Polynomial pconst(int nvars, double c) { return Polynomial::constant(nvars, c); }

inline Polynomial pmono(std::vector<int> exps, double c) {
  return Polynomial::monomial(std::move(exps), c);
}

inline std::vector<std::vector<Polynomial>> euclid_g(int n) {
  std::vector<std::vector<Polynomial>> g(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i][j] = pconst(n, i == j ? 1.0 : 0.0);
  return g;
}

inline MetricSpec euclidean_spec(int n = 2) {
  MetricSpec s;
  s.dimension = n;
  s.family = MetricFamily::euclidean;
  return s;
}

inline MetricSpec pnorm_spec(int n = 2, double p = 4.0) {
  MetricSpec s;
  s.dimension = n;
  s.family = MetricFamily::minkowski_pnorm;
  s.pnorm_p = p;
  return s;
}

// g = diag(1, 1 + (x^1)^2): curvature is non-constant, so this chart (and in
// fact every chart) fails the flatness checks; used as the negative control.
inline MetricSpec curved_riemannian_spec() {
  MetricSpec s;
  s.dimension = 2;
  s.family = MetricFamily::riemannian;
  s.g = euclid_g(2);
  s.g[1][1] = pconst(2, 1.0) + pmono({2, 0}, 1.0);
  return s;
}

inline MetricSpec randers_const_spec(double b1 = 0.3, double b2 = 0.0) {
  MetricSpec s;
  s.dimension = 2;
  s.family = MetricFamily::randers;
  s.g = euclid_g(2);
  s.b = {pconst(2, b1), pconst(2, b2)};
  return s;
}

// b = eps (x^2 dx^1 + x^1 dx^2) = d(eps x^1 x^2): exact, hence closed.
inline MetricSpec randers_closed_spec(double eps = 0.1) {
  MetricSpec s;
  s.dimension = 2;
  s.family = MetricFamily::randers;
  s.g = euclid_g(2);
  s.b = {pmono({0, 1}, eps), pmono({1, 0}, eps)};
  return s;
}

// b = eps x^2 dx^1: db = -eps dx^1 ^ dx^2 != 0.
inline MetricSpec randers_nonclosed_spec(double eps = 0.1) {
  MetricSpec s;
  s.dimension = 2;
  s.family = MetricFamily::randers;
  s.g = euclid_g(2);
  s.b = {pmono({0, 1}, eps), pconst(2, 0.0)};
  return s;
}

inline MetricSpec funk_spec(int n = 2, double r_max = 0.8) {
  MetricSpec s;
  s.dimension = n;
  s.family = MetricFamily::funk;
  s.domain = {DomainSpec::Kind::ball, 1.0, r_max};
  return s;
}

inline MetricSpec klein_spec(int n = 2, double r_max = 0.8) {
  MetricSpec s;
  s.dimension = n;
  s.family = MetricFamily::klein;
  s.domain = {DomainSpec::Kind::ball, 1.0, r_max};
  return s;
}

struct ZooEntry {
  const char* name;
  MetricSpec spec;
};

// The standing battery: every entry is a bona fide Finsler metric on its
// domain (the curved Riemannian control included).
inline std::vector<ZooEntry> standard_zoo() {
  return {
      {"euclidean-2", euclidean_spec(2)},
      {"euclidean-3", euclidean_spec(3)},
      {"pnorm4-2", pnorm_spec(2, 4.0)},
      {"pnorm4-3", pnorm_spec(3, 4.0)},
      {"curved-riemannian", curved_riemannian_spec()},
      {"randers-const", randers_const_spec()},
      {"randers-closed", randers_closed_spec()},
      {"randers-nonclosed", randers_nonclosed_spec()},
      {"funk-2", funk_spec(2)},
      {"klein-2", klein_spec(2)},
      {"klein-3", klein_spec(3)},
  };
}

inline TangentSample sample2(double x1, double x2, double y1, double y2) {
  Vec x(2), y(2);
  x << x1, x2;
  y << y1, y2;
  return TangentSample(x, y);
}

}  // namespace finsler::testing
