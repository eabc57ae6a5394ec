#include "finsler/geometry.hpp"

#include <cmath>

namespace finsler {

TangentSample::TangentSample(Vec base, Vec dir) : x(std::move(base)), y(std::move(dir)) {
  validate_sample(*this);
}

TangentSample TangentSample::with_unit_dir() const {
  TangentSample s = *this;
  s.y /= s.y.norm();
  return s;
}

void validate_sample(const TangentSample& s, double epsilon_min) {
  if (s.x.size() < 2) throw DomainError("sample: dimension must be >= 2");
  if (s.x.size() != s.y.size()) throw DomainError("sample: base/dir dimension mismatch");
  if (!s.x.allFinite() || !s.y.allFinite()) throw DomainError("sample: non-finite coordinates");
  if (s.y.norm() <= epsilon_min) throw DomainError("sample: direction below slit-bundle cutoff");
}

void fill_energy_fields(Jet& jet) {
  const double F = jet.F;
  jet.E = F * F;
  jet.dE_dx = 2.0 * F * jet.dF_dx;
  jet.dE_dy = 2.0 * F * jet.dF_dy;
  if (jet.order >= 2) {
    jet.d2E_dxdy = 2.0 * (jet.dF_dx * jet.dF_dy.transpose() + F * jet.d2F_dxdy);
    jet.d2E_dydy = 2.0 * (jet.dF_dy * jet.dF_dy.transpose() + F * jet.d2F_dydy);
  }
}

ResidualReport make_report(std::string name, std::vector<SampleResidual> samples, double tol,
                           std::string note) {
  ResidualReport r;
  r.name = std::move(name);
  r.samples = std::move(samples);
  r.tol_used = tol;
  r.note = std::move(note);
  double sum = 0.0;
  for (auto& s : r.samples) {
    r.aggregate_sup = std::max(r.aggregate_sup, s.sup);
    sum += s.sup;
  }
  r.aggregate_mean = r.samples.empty() ? 0.0 : sum / static_cast<double>(r.samples.size());
  r.pass = r.aggregate_sup <= tol;
  return r;
}

bool validate_homogeneity(const ScalarEvaluator& f, const TangentSample& s, double lambda,
                          double tol) {
  if (lambda <= 0.0) throw UsageError("validate_homogeneity: lambda must be positive");
  validate_sample(s);
  std::vector<double> x(s.x.data(), s.x.data() + s.n());
  std::vector<double> y(s.y.data(), s.y.data() + s.n());
  std::vector<double> ly(y);
  for (double& v : ly) v *= lambda;
  double F = f(x, y);
  double Fl = f(x, ly);
  return std::abs(Fl - lambda * F) <= tol * (1.0 + lambda) * F;
}

Vec euler_identity_check(const Jet& jet, const TangentSample& s) {
  jet.require_order(2);
  Vec r(3);
  r[0] = jet.dF_dy.dot(s.y) - jet.F;
  r[1] = sup_norm(Vec(jet.d2F_dydy * s.y));
  r[2] = sup_norm(Vec(jet.d2F_dxdy * s.y - jet.dF_dx));
  return r;
}

}  // namespace finsler
