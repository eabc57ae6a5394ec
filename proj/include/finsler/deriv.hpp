// finslerlab - jet production: exact forward-mode jets and the
// finite-difference oracle.
#pragma once

#include "finsler/evaluator.hpp"
#include "finsler/geometry.hpp"

namespace finsler {

// Exact mixed partials of F (and the E = F^2 block) at s, up to total order
// `order` in {1,2,3}, from a single evaluation in truncated-Taylor
// arithmetic with all 2n coordinates seeded.
Jet jet_at(const ScalarEvaluator& f, const TangentSample& s, int order);

// Central-difference approximation of the same jet, independent of the
// Taylor path. Error is O(h^2) per stencil; step sizes are chosen per
// derivative order and scaled by max(1, |coordinate|).
Jet fd_jet(const ScalarEvaluator& f, const TangentSample& s, int order);

// Largest relative deviation between two jets over all populated slots,
// measured entrywise as |a - b| / (1 + |a|).
double jet_deviation(const Jet& a, const Jet& b);

}  // namespace finsler
