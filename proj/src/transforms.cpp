#include "finsler/transforms.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "finsler/deriv.hpp"
#include "finsler/flatness.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

TermAB eval_terms(const Metric& m, const CoordinateChange& change, const TangentSample& s) {
  const int n = m.dimension();
  if (change.dimension() != n) throw UsageError("eval_terms: dimension mismatch");
  validate_sample(s);

  Mat J = change.jacobian_at(s.x);
  if (std::abs(J.determinant()) <= 1e-10)
    throw TransformError("eval_terms: Jacobian is singular at the sample");
  Tensor3 H2 = change.hessian_at(s.x);  // (l, s, k)

  Vec xbar(n), ybar = J * s.y;
  {
    std::span<const double> xs(s.x.data(), n);
    std::vector<double> z = change.map_point(xs);
    for (int i = 0; i < n; ++i) xbar[i] = z[i];
  }
  TangentSample sbar(xbar, ybar);
  Jet jet_bar = jet_at(m.evaluator(), sbar, 2);

  TermAB out;
  Vec hamel_bar = hamel_residual(jet_bar, sbar);
  out.term_A = J.transpose() * hamel_bar;

  out.term_B = Vec::Zero(n);
  const Mat& Hyy = jet_bar.d2F_dydy;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int r = 0; r < n; ++r)
      for (int l = 0; l < n; ++l) {
        double bracket = 0.0;
        for (int a = 0; a < n; ++a)
          for (int k = 0; k < n; ++k)
            bracket += (H2(l, a, k) * J(r, i) - H2(l, i, k) * J(r, a)) * s.y[a] * s.y[k];
        acc += Hyy(r, l) * bracket;
      }
    out.term_B[i] = acc;
  }

  Metric pulled = pullback_metric(m, change, m.spec().domain);
  out.term_full = hamel_residual(pulled, s);
  out.identity_residual = sup_norm(Vec(out.term_full - out.term_A - out.term_B));
  return out;
}

AffineTestResult prop1_affine_test(const Metric& m, const CoordinateChange& change,
                                   const std::vector<TangentSample>& samples, double tol) {
  if (samples.empty()) throw UsageError("prop1_affine_test: no samples");
  double base_sup = 0.0;
  for (const auto& raw : samples)
    base_sup = std::max(base_sup, sup_norm(hamel_residual(m, raw.with_unit_dir())));
  if (base_sup > tol)
    throw UsageError("prop1_affine_test: metric is not rectilinear in its own chart");

  AffineTestResult res;
  Metric pulled = pullback_metric(m, change, m.spec().domain);
  for (const auto& raw : samples) {
    TangentSample s = raw.with_unit_dir();
    res.hessian_sup = std::max(res.hessian_sup, change.hessian_sup_at(s.x));
    res.pullback_hamel_sup = std::max(res.pullback_hamel_sup, sup_norm(hamel_residual(pulled, s)));
  }
  res.affine = res.hessian_sup <= tol;
  res.rectilinear = res.pullback_hamel_sup <= tol;
  res.agree = res.affine == res.rectilinear;
  return res;
}

namespace {

// Monomial exponent tuples with 2 <= degree <= max_degree.
std::vector<std::vector<int>> higher_monomials(int n, int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == n) {
      int deg = 0;
      for (int e : cur) deg += e;
      if (deg >= 2) out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[var] = e;
      self(self, var + 1, left - e);
    }
    cur[var] = 0;
  };
  rec(rec, 0, max_degree);
  return out;
}

CoordinateChange change_from_params(int n, const std::vector<std::vector<int>>& monos,
                                    const Vec& theta) {
  std::vector<Polynomial> comps;
  comps.reserve(n);
  int idx = 0;
  for (int l = 0; l < n; ++l) {
    std::vector<int> e(n, 0);
    e[l] = 1;
    Polynomial p = Polynomial::monomial(e, 1.0);
    for (const auto& mono : monos) {
      double c = theta[idx++];
      if (c != 0.0) p = p + Polynomial::monomial(mono, c);
    }
    comps.push_back(std::move(p));
  }
  return CoordinateChange(PolyMap(std::move(comps)));
}

}  // namespace

SearchResult rectilinear_search(const Metric& m, const std::vector<TangentSample>& samples,
                                const SearchOptions& options) {
  if (options.degree != 2 && options.degree != 3)
    throw UsageError("rectilinear_search: degree must be 2 or 3");
  const int n = m.dimension();
  auto monos = higher_monomials(n, options.degree);
  const int nparams = n * static_cast<int>(monos.size());
  if (static_cast<int>(samples.size()) < 10 * nparams)
    throw UsageError("rectilinear_search: need at least 10 samples per free coefficient");

  std::vector<TangentSample> unit;
  unit.reserve(samples.size());
  for (const auto& s : samples) unit.push_back(s.with_unit_dir());
  const int nres = n * static_cast<int>(unit.size());

  // Stacked Hamel residual of pullback(m, sigma_theta); domain escapes and
  // singular Jacobians surface as a failed evaluation so LM can reject the step.
  auto residual_vec = [&](const Vec& theta, Vec& out) -> bool {
    CoordinateChange sigma = change_from_params(n, monos, theta);
    Metric pulled = pullback_metric(m, sigma, m.spec().domain);
    out.resize(nres);
    try {
      std::function<Vec(int)> one = [&](int i) { return hamel_residual(pulled, unit[i]); };
      auto rows = parallel_map<Vec>(static_cast<int>(unit.size()), one, options.threads);
      for (size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < n; ++c) out[static_cast<int>(i) * n + c] = rows[i][c];
    } catch (const DomainError&) {
      return false;
    } catch (const EvaluationError&) {
      return false;
    }
    return out.allFinite();
  };

  SearchResult res;
  Vec theta = Vec::Zero(nparams);
  Vec r(nres);
  if (!residual_vec(theta, r))
    throw UsageError("rectilinear_search: metric not evaluable on the sample set");
  res.initial_residual = sup_norm(r);

  double cost = r.squaredNorm();
  double lambda = 1e-3;
  const double fd_step = 1e-6;

  Vec best_theta = theta;
  double best_sup = res.initial_residual;

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (best_sup <= options.tol) break;

    Mat Jm(nres, nparams);
    Vec rp(nres);
    bool jac_ok = true;
    for (int p = 0; p < nparams; ++p) {
      Vec tp = theta;
      tp[p] += fd_step;
      if (!residual_vec(tp, rp)) {
        jac_ok = false;
        break;
      }
      Jm.col(p) = (rp - r) / fd_step;
    }
    if (!jac_ok) {
      lambda *= 4.0;
      if (lambda > 1e12) break;
      continue;
    }

    Mat JtJ = Jm.transpose() * Jm;
    Vec g = Jm.transpose() * r;
    Mat A = JtJ;
    for (int d = 0; d < nparams; ++d) A(d, d) += lambda * (JtJ(d, d) + 1e-12);
    Vec h = A.ldlt().solve(-g);

    Vec theta_new = theta + h;
    Vec r_new(nres);
    if (!residual_vec(theta_new, r_new) || r_new.squaredNorm() >= cost) {
      lambda *= 4.0;
      if (lambda > 1e12) break;
      continue;
    }
    theta = theta_new;
    r = r_new;
    cost = r.squaredNorm();
    lambda = std::max(lambda / 3.0, 1e-12);
    double sup = sup_norm(r);
    if (sup < best_sup) {
      best_sup = sup;
      best_theta = theta;
    }
  }

  res.change = change_from_params(n, monos, best_theta);
  res.achieved_residual = best_sup;
  res.iterations = iter;
  res.converged = best_sup <= options.tol;
  return res;
}

}  // namespace finsler
