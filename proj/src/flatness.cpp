#include "finsler/flatness.hpp"

#include <cmath>

#include "finsler/deriv.hpp"
#include "finsler/parallel.hpp"
#include "finsler/rng.hpp"

namespace finsler {

Vec hamel_residual(const Jet& jet, const TangentSample& s) {
  jet.require_order(2);
  return jet.d2F_dxdy.transpose() * s.y - jet.d2F_dxdy * s.y;
}

Vec hamel_residual(const Metric& m, const TangentSample& s) {
  return hamel_residual(jet_at(m.evaluator(), s, 2), s);
}

Vec param_residual(const Jet& jet, const TangentSample& s) {
  jet.require_order(2);
  return jet.d2E_dxdy.transpose() * s.y - 0.5 * jet.d2E_dxdy * s.y;
}

Vec param_residual(const Metric& m, const TangentSample& s) {
  return param_residual(jet_at(m.evaluator(), s, 2), s);
}

RandersReduction randers_reduction_residual(const Metric& m, const TangentSample& s) {
  if (m.spec().family != MetricFamily::randers)
    throw UsageError("randers_reduction_residual: metric is not a Randers family");
  const int n = m.dimension();

  MetricSpec alpha_spec = m.spec();
  alpha_spec.family = MetricFamily::riemannian;
  alpha_spec.b.clear();
  Metric alpha = build_metric(alpha_spec);

  Vec hamel_F = hamel_residual(m, s);
  Vec hamel_alpha = hamel_residual(alpha, s);

  // (db)_ij = db_j/dx^i - db_i/dx^j at the base point; contraction
  // (db . y)_i = sum_s (db_s/dx^i - db_i/dx^s) y^s.
  std::span<const double> xs(s.x.data(), n);
  Mat db(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) db(i, j) = m.spec().b[j].derivative(i).eval(xs);
  Mat skew = db - db.transpose();  // skew(i, s) = db_s/dx^i - db_i/dx^s
  Vec contraction = skew * s.y;

  RandersReduction r;
  r.identity_sup = sup_norm(Vec(hamel_F - hamel_alpha + contraction));
  r.closedness_defect = sup_norm(skew);
  r.hamel_F_sup = sup_norm(hamel_F);
  r.hamel_alpha_sup = sup_norm(hamel_alpha);
  return r;
}

MinkowskiVerdict minkowski_check(const Metric& m, const std::vector<TangentSample>& samples,
                                 double tol) {
  if (!m.unbounded_domain())
    throw UsageError("minkowski_check: metric must be defined over all of R^n");
  MinkowskiVerdict v;
  for (const auto& raw : samples) {
    TangentSample s = raw.with_unit_dir();
    Jet jet = jet_at(m.evaluator(), s, 2);
    v.dFdx_sup = std::max(v.dFdx_sup, sup_norm(jet.dF_dx));
    v.param_sup = std::max(v.param_sup, sup_norm(param_residual(jet, s)));
  }
  v.pass_dFdx = v.dFdx_sup <= tol;
  v.pass_param = v.param_sup <= tol;
  v.agree = v.pass_dFdx == v.pass_param;
  v.pass = v.pass_dFdx && v.pass_param;
  return v;
}

double indicatrix_translation_check(const Metric& m, const Vec& p, const Vec& q, int count) {
  if (count < 1) throw UsageError("indicatrix_translation_check: count must be >= 1");
  if (!m.in_domain(p) || !m.in_domain(q))
    throw DomainError("indicatrix_translation_check: point outside metric domain");
  SampleRng rng(0x1f1e33);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    Vec y = rng.unit_sphere(m.dimension());
    double fp = m(TangentSample(p, y));
    double fq = m(TangentSample(q, y));
    worst = std::max(worst, std::abs(fp - fq) / fp);
  }
  return worst;
}

ResidualReport run_residual_report(const std::string& name,
                                   const std::vector<TangentSample>& samples,
                                   const std::function<Vec(const TangentSample&)>& residual,
                                   double tol, int threads, std::string note) {
  std::function<SampleResidual(int)> eval = [&](int i) {
    TangentSample s = samples[i].with_unit_dir();
    SampleResidual r;
    r.sample = s;
    r.residual = residual(s);
    r.sup = sup_norm(r.residual);
    return r;
  };
  auto rows = parallel_map<SampleResidual>(static_cast<int>(samples.size()), eval, threads);
  return make_report(name, std::move(rows), tol, std::move(note));
}

}  // namespace finsler
