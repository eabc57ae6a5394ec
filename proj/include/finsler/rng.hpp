// finslerlab - deterministic sampling primitives.
//
// Transforms are hand-rolled on top of mt19937_64 so identical seeds give
// identical samples on every platform (std distributions are not portable).
#pragma once

#include <cmath>
#include <random>

#include "finsler/types.hpp"

namespace finsler {

class SampleRng {
 public:
  explicit SampleRng(uint64_t seed) : gen_(seed) {}

  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian() {
    // Box-Muller; the second value of each pair is discarded.
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vec unit_sphere(int n) {
    Vec v(n);
    double norm = 0.0;
    do {
      for (int i = 0; i < n; ++i) v[i] = gaussian();
      norm = v.norm();
    } while (norm < 1e-6);
    return v / norm;
  }

  // Uniform with respect to volume in the ball of the given radius.
  Vec in_ball(int n, double radius) {
    Vec dir = unit_sphere(n);
    double r = radius * std::pow(uniform01(), 1.0 / n);
    return r * dir;
  }

  Vec in_cube(int n, double half_width) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(-half_width, half_width);
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace finsler
