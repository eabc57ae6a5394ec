#include "finsler/regularity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "finsler/deriv.hpp"

namespace finsler {

int reduced_hessian_rank(const Metric& m, const TangentSample& s, double tau) {
  if (tau <= 0.0 || tau >= 1.0) throw UsageError("reduced_hessian_rank: tau must lie in (0,1)");
  Jet jet = jet_at(m.evaluator(), s, 2);
  Eigen::JacobiSVD<Mat> svd(jet.d2F_dydy);
  const Vec& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tau * sv[0]) ++rank;
  return rank;
}

FundamentalTensor fundamental_tensor(const Metric& m, const TangentSample& s) {
  Jet jet = jet_at(m.evaluator(), s, 2);
  FundamentalTensor t;
  t.g = 0.5 * jet.d2E_dydy;
  t.g = 0.5 * (t.g + t.g.transpose());  // symmetrize roundoff
  Eigen::SelfAdjointEigenSolver<Mat> es(t.g);
  t.eigen_spectrum = es.eigenvalues();
  t.positive_definite = t.eigen_spectrum.minCoeff() > 0.0;
  return t;
}

double kernel_direction_check(const Metric& m, const TangentSample& s) {
  Jet jet = jet_at(m.evaluator(), s, 2);
  return (jet.d2F_dydy * s.y).norm() / s.y.norm();
}

}  // namespace finsler
