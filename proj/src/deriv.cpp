#include "finsler/deriv.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace finsler {

namespace {

bool tensor_finite(const Tensor3& t) {
  for (double v : t.data())
    if (!std::isfinite(v)) return false;
  return true;
}

void check_finite(const Jet& jet) {
  bool ok = std::isfinite(jet.F) && jet.dF_dx.allFinite() && jet.dF_dy.allFinite();
  if (jet.order >= 2)
    ok = ok && jet.d2F_dxdx.allFinite() && jet.d2F_dxdy.allFinite() && jet.d2F_dydy.allFinite();
  if (jet.order >= 3)
    ok = ok && tensor_finite(jet.d3F_dxdxdy) && tensor_finite(jet.d3F_dxdydy) &&
         tensor_finite(jet.d3F_dydydy);
  if (!ok) throw EvaluationError("jet: non-finite derivative encountered");
}

void size_jet(Jet& jet, int n, int order) {
  jet.order = order;
  jet.dF_dx = Vec::Zero(n);
  jet.dF_dy = Vec::Zero(n);
  if (order >= 2) {
    jet.d2F_dxdx = Mat::Zero(n, n);
    jet.d2F_dxdy = Mat::Zero(n, n);
    jet.d2F_dydy = Mat::Zero(n, n);
  }
  if (order >= 3) {
    jet.d3F_dxdxdy = Tensor3(n);
    jet.d3F_dxdydy = Tensor3(n);
    jet.d3F_dydydy = Tensor3(n);
  }
}

}  // namespace

Jet jet_at(const ScalarEvaluator& f, const TangentSample& s, int order) {
  validate_sample(s);
  if (order < 1 || order > 3) throw UsageError("jet_at: order must be 1, 2 or 3");
  const int n = s.n();
  auto alg = TaylorAlgebra::get(2 * n, order);

  std::vector<TaylorScalar> x, y;
  x.reserve(n);
  y.reserve(n);
  for (int i = 0; i < n; ++i) x.push_back(TaylorScalar::variable(alg.get(), s.x[i], i));
  for (int i = 0; i < n; ++i) y.push_back(TaylorScalar::variable(alg.get(), s.y[i], n + i));

  TaylorScalar F = f(x, y);

  Jet jet;
  size_jet(jet, n, order);
  std::vector<int> e(2 * n, 0);
  auto partial = [&](std::initializer_list<int> vars) {
    for (int& v : e) v = 0;
    for (int v : vars) ++e[v];
    return F.partial(e);
  };

  jet.F = F.value();
  for (int i = 0; i < n; ++i) {
    jet.dF_dx[i] = partial({i});
    jet.dF_dy[i] = partial({n + i});
  }
  if (order >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        jet.d2F_dxdy(i, j) = partial({i, n + j});
        if (j >= i) {
          jet.d2F_dxdx(i, j) = jet.d2F_dxdx(j, i) = partial({i, j});
          jet.d2F_dydy(i, j) = jet.d2F_dydy(j, i) = partial({n + i, n + j});
        }
      }
  }
  if (order >= 3) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (j >= i) {
            double v = partial({i, j, n + k});
            jet.d3F_dxdxdy(i, j, k) = v;
            jet.d3F_dxdxdy(j, i, k) = v;
          }
          if (k >= j) {
            double v = partial({i, n + j, n + k});
            jet.d3F_dxdydy(i, j, k) = v;
            jet.d3F_dxdydy(i, k, j) = v;
          }
          if (i <= j && j <= k) {
            double v = partial({n + i, n + j, n + k});
            jet.d3F_dydydy(i, j, k) = v;
            jet.d3F_dydydy(i, k, j) = v;
            jet.d3F_dydydy(j, i, k) = v;
            jet.d3F_dydydy(j, k, i) = v;
            jet.d3F_dydydy(k, i, j) = v;
            jet.d3F_dydydy(k, j, i) = v;
          }
        }
  }
  fill_energy_fields(jet);
  check_finite(jet);
  return jet;
}

namespace {

// Sign-corner stencils over the concatenated coordinate vector z = (x, y).
// The same formulas hold when slots repeat (offsets accumulate), giving the
// standard central differences for pure and mixed partials alike.
class FdEvaluator {
 public:
  FdEvaluator(const ScalarEvaluator& f, const TangentSample& s)
      : f_(f), n_(s.n()), z_(2 * s.n()) {
    for (int i = 0; i < n_; ++i) {
      z_[i] = s.x[i];
      z_[n_ + i] = s.y[i];
    }
  }

  double step(int slot, double base) const { return base * std::max(1.0, std::abs(z_[slot])); }

  double at(std::initializer_list<std::pair<int, double>> offsets) const {
    std::vector<double> z = z_;
    for (auto [slot, dz] : offsets) z[slot] += dz;
    std::span<const double> zx(z.data(), n_), zy(z.data() + n_, n_);
    return f_(zx, zy);
  }

  double d1(int a, double h) const {
    double ha = step(a, h);
    return (at({{a, ha}}) - at({{a, -ha}})) / (2.0 * ha);
  }

  double d2(int a, int b, double h) const {
    double ha = step(a, h), hb = step(b, h);
    double acc = 0.0;
    for (int sa : {1, -1})
      for (int sb : {1, -1})
        acc += sa * sb * at({{a, sa * ha}, {b, sb * hb}});
    return acc / (4.0 * ha * hb);
  }

  // Composition of three 4th-order first-derivative stencils. The O(h^2)
  // corner formula is truncation-limited near ball-metric boundaries; this
  // keeps third derivatives two orders below the oracle tolerance there.
  double d3(int a, int b, int c, double h) const {
    static constexpr double off[4] = {-2.0, -1.0, 1.0, 2.0};
    static constexpr double wgt[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
    double ha = step(a, h), hb = step(b, h), hc = step(c, h);
    double acc = 0.0;
    for (int ia = 0; ia < 4; ++ia)
      for (int ib = 0; ib < 4; ++ib)
        for (int ic = 0; ic < 4; ++ic)
          acc += wgt[ia] * wgt[ib] * wgt[ic] *
                 at({{a, off[ia] * ha}, {b, off[ib] * hb}, {c, off[ic] * hc}});
    return acc / (ha * hb * hc);
  }

 private:
  const ScalarEvaluator& f_;
  int n_;
  std::vector<double> z_;
};

}  // namespace

Jet fd_jet(const ScalarEvaluator& f, const TangentSample& s, int order) {
  validate_sample(s);
  if (order < 1 || order > 3) throw UsageError("fd_jet: order must be 1, 2 or 3");
  const int n = s.n();
  const double eps = std::numeric_limits<double>::epsilon();
  const double h1 = std::sqrt(eps);
  const double h2 = std::pow(eps, 0.25);
  const double h3 = 2.0 * std::pow(eps, 0.2);

  FdEvaluator fd(f, s);
  Jet jet;
  size_jet(jet, n, order);
  jet.F = fd.at({});
  for (int i = 0; i < n; ++i) {
    jet.dF_dx[i] = fd.d1(i, h1);
    jet.dF_dy[i] = fd.d1(n + i, h1);
  }
  if (order >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        jet.d2F_dxdy(i, j) = fd.d2(i, n + j, h2);
        if (j >= i) {
          jet.d2F_dxdx(i, j) = jet.d2F_dxdx(j, i) = fd.d2(i, j, h2);
          jet.d2F_dydy(i, j) = jet.d2F_dydy(j, i) = fd.d2(n + i, n + j, h2);
        }
      }
  }
  if (order >= 3) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (j >= i) {
            double v = fd.d3(i, j, n + k, h3);
            jet.d3F_dxdxdy(i, j, k) = v;
            jet.d3F_dxdxdy(j, i, k) = v;
          }
          if (k >= j) {
            double v = fd.d3(i, n + j, n + k, h3);
            jet.d3F_dxdydy(i, j, k) = v;
            jet.d3F_dxdydy(i, k, j) = v;
          }
          if (i <= j && j <= k) {
            double v = fd.d3(n + i, n + j, n + k, h3);
            jet.d3F_dydydy(i, j, k) = v;
            jet.d3F_dydydy(i, k, j) = v;
            jet.d3F_dydydy(j, i, k) = v;
            jet.d3F_dydydy(j, k, i) = v;
            jet.d3F_dydydy(k, i, j) = v;
            jet.d3F_dydydy(k, j, i) = v;
          }
        }
  }
  fill_energy_fields(jet);
  check_finite(jet);
  return jet;
}

namespace {

double rel_dev(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a)); }

double rel_dev(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, rel_dev(a[i], b[i]));
  return m;
}

double rel_dev(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, rel_dev(a(i, j), b(i, j)));
  return m;
}

double rel_dev(const Tensor3& a, const Tensor3& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) m = std::max(m, rel_dev(a.data()[i], b.data()[i]));
  return m;
}

}  // namespace

double jet_deviation(const Jet& a, const Jet& b) {
  int order = std::min(a.order, b.order);
  double m = rel_dev(a.F, b.F);
  m = std::max(m, rel_dev(a.dF_dx, b.dF_dx));
  m = std::max(m, rel_dev(a.dF_dy, b.dF_dy));
  if (order >= 2) {
    m = std::max(m, rel_dev(a.d2F_dxdx, b.d2F_dxdx));
    m = std::max(m, rel_dev(a.d2F_dxdy, b.d2F_dxdy));
    m = std::max(m, rel_dev(a.d2F_dydy, b.d2F_dydy));
  }
  if (order >= 3) {
    m = std::max(m, rel_dev(a.d3F_dxdxdy, b.d3F_dxdxdy));
    m = std::max(m, rel_dev(a.d3F_dxdydy, b.d3F_dxdydy));
    m = std::max(m, rel_dev(a.d3F_dydydy, b.d3F_dydydy));
  }
  return m;
}

}  // namespace finsler
