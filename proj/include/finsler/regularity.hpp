// finslerlab - regularity hypotheses: y-Hessian rank and positive
// definiteness of the fundamental tensor.
#pragma once

#include "finsler/metrics.hpp"

namespace finsler {

struct FundamentalTensor {
  Mat g;              // 0.5 * d2(F^2)/dy dy at the sample
  Vec eigen_spectrum;  // ascending
  bool positive_definite = false;
};

// Number of singular values of d2F/dydy above tau * sigma_max. Equals n-1
// for a Finsler (or pseudo-Finsler) metric, with kernel spanned by y.
int reduced_hessian_rank(const Metric& m, const TangentSample& s, double tau = 1e-8);

FundamentalTensor fundamental_tensor(const Metric& m, const TangentSample& s);

// |d2F/dydy . y| / |y| (Euclidean norms): confirms the Hessian kernel is
// exactly span(y).
double kernel_direction_check(const Metric& m, const TangentSample& s);

}  // namespace finsler
