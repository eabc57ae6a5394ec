#include "finsler/metrics.hpp"

#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "finsler/rng.hpp"

namespace finsler {

namespace {

template <class S>
S generic_ipow(S base, int k) {
  S r(1.0);
  while (k > 0) {
    if (k & 1) r *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return r;
}

template <class S>
S dot(std::span<const S> a, std::span<const S> b) {
  S acc(0.0);
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

struct EuclideanEval : EvaluatorBase<EuclideanEval> {
  int n;
  explicit EuclideanEval(int dim) : n(dim) {}
  int dimension() const override { return n; }

  template <class S>
  S eval_impl(std::span<const S> /*x*/, std::span<const S> y) const {
    using std::sqrt;
    return sqrt(dot(y, y));
  }
};

struct PnormEval : EvaluatorBase<PnormEval> {
  int n;
  double p;
  PnormEval(int dim, double pv) : n(dim), p(pv) {}
  int dimension() const override { return n; }

  template <class S>
  S eval_impl(std::span<const S> /*x*/, std::span<const S> y) const {
    using std::abs;
    using std::pow;
    S acc(0.0);
    double ip = std::nearbyint(p);
    bool integral = std::abs(p - ip) < 1e-12;
    for (int i = 0; i < n; ++i) {
      if (integral && static_cast<int>(ip) % 2 == 0)
        acc += generic_ipow(y[i], static_cast<int>(ip));
      else if (integral)
        acc += generic_ipow(abs(y[i]), static_cast<int>(ip));
      else
        acc += pow(abs(y[i]), p);
    }
    return pow(acc, 1.0 / p);
  }
};

struct RiemannianEval : EvaluatorBase<RiemannianEval> {
  int n;
  std::vector<std::vector<Polynomial>> g;
  std::vector<Polynomial> b;  // empty for pure Riemannian, Randers otherwise

  RiemannianEval(int dim, std::vector<std::vector<Polynomial>> gij, std::vector<Polynomial> bi)
      : n(dim), g(std::move(gij)), b(std::move(bi)) {}
  int dimension() const override { return n; }

  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> y) const {
    using std::sqrt;
    S quad(0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) quad += g[i][j].eval(x) * y[i] * y[j];
    S f = sqrt(quad);
    for (int i = 0; i < static_cast<int>(b.size()); ++i) f += b[i].eval(x) * y[i];
    return f;
  }
};

// Funk: F = (sqrt((1-|x|^2)|y|^2 + <x,y>^2) + <x,y>) / (1-|x|^2)
// Klein: same with the <x,y> numerator term dropped.
struct BallEval : EvaluatorBase<BallEval> {
  int n;
  bool funk;
  BallEval(int dim, bool is_funk) : n(dim), funk(is_funk) {}
  int dimension() const override { return n; }

  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> y) const {
    using std::sqrt;
    S x2 = dot(x, x);
    if (scalar_value(x2) >= 1.0)
      throw DomainError(std::string(funk ? "funk" : "klein") + ": base point outside the unit ball");
    S w = dot(x, y);
    S one(1.0);
    S q = sqrt((one - x2) * dot(y, y) + w * w);
    if (funk) q += w;
    return q / (one - x2);
  }
};

struct PullbackEval : EvaluatorBase<PullbackEval> {
  int n;
  std::shared_ptr<const ScalarEvaluator> base;
  CoordinateChange change;

  PullbackEval(int dim, std::shared_ptr<const ScalarEvaluator> b, CoordinateChange c)
      : n(dim), base(std::move(b)), change(std::move(c)) {}
  int dimension() const override { return n; }

  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> y) const {
    std::vector<S> zx, zy;
    change.map_tangent(x, y, zx, zy);
    return (*base)(std::span<const S>(zx), std::span<const S>(zy));
  }
};

std::vector<Vec> probe_points(const DomainSpec& d, int n, int count) {
  SampleRng rng(0x9e3779b97f4a7c15ull);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i)
    pts.push_back(d.kind == DomainSpec::Kind::ball ? rng.in_ball(n, d.sample_radius)
                                                   : rng.in_cube(n, d.sample_radius));
  return pts;
}

Mat eval_g(const std::vector<std::vector<Polynomial>>& g, const Vec& x) {
  const int n = static_cast<int>(g.size());
  Mat m(n, n);
  std::span<const double> xs(x.data(), x.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g[i][j].eval(xs);
  return m;
}

void validate_coefficient_field(const MetricSpec& spec) {
  const int n = spec.dimension;
  if (static_cast<int>(spec.g.size()) != n) throw SpecError("g: expected a " + std::to_string(n) + "-row matrix of polynomials");
  for (const auto& row : spec.g)
    if (static_cast<int>(row.size()) != n) throw SpecError("g: ragged coefficient matrix");

  for (const auto& x : probe_points(spec.domain, n, 64)) {
    Mat gm = eval_g(spec.g, x);
    if (sup_norm(Mat(gm - gm.transpose())) > 1e-10 * (1.0 + sup_norm(gm)))
      throw SpecError("g: coefficient field is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(gm);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw SpecError("g: coefficient field is not positive definite on the domain");
    if (spec.family == MetricFamily::randers) {
      Vec bv(n);
      std::span<const double> xs(x.data(), x.size());
      for (int i = 0; i < n; ++i) bv[i] = spec.b[i].eval(xs);
      double norm2 = bv.dot(gm.ldlt().solve(bv));
      if (norm2 >= 1.0) throw SpecError("b: Randers norm condition ||b||_alpha < 1 violated");
    }
  }
}

}  // namespace

std::string family_name(MetricFamily f) {
  switch (f) {
    case MetricFamily::euclidean: return "euclidean";
    case MetricFamily::riemannian: return "riemannian";
    case MetricFamily::minkowski_pnorm: return "minkowski_pnorm";
    case MetricFamily::randers: return "randers";
    case MetricFamily::funk: return "funk";
    case MetricFamily::klein: return "klein";
    case MetricFamily::pullback: return "pullback";
  }
  throw UsageError("unknown metric family");
}

MetricFamily family_from_name(const std::string& name) {
  for (MetricFamily f : {MetricFamily::euclidean, MetricFamily::riemannian,
                         MetricFamily::minkowski_pnorm, MetricFamily::randers, MetricFamily::funk,
                         MetricFamily::klein, MetricFamily::pullback})
    if (family_name(f) == name) return f;
  throw SpecError("family: unknown metric family \"" + name + "\"");
}

double Metric::operator()(const TangentSample& s) const {
  validate_sample(s);
  std::span<const double> x(s.x.data(), s.x.size()), y(s.y.data(), s.y.size());
  return (*eval_)(x, y);
}

namespace {

bool in_domain_spec(const MetricSpec& spec, const Vec& x) {
  if (spec.domain.kind == DomainSpec::Kind::ball && x.norm() >= spec.domain.radius) return false;
  if (spec.family == MetricFamily::pullback) {
    std::span<const double> xs(x.data(), x.size());
    std::vector<double> z = spec.change->map_point(xs);
    return in_domain_spec(*spec.base, Eigen::Map<const Vec>(z.data(), z.size()));
  }
  return true;
}

}  // namespace

bool Metric::in_domain(const Vec& x) const { return in_domain_spec(spec_, x); }

Metric build_metric(const MetricSpec& spec) {
  if (spec.dimension < 2) throw SpecError("dimension: must be >= 2");
  const int n = spec.dimension;

  switch (spec.family) {
    case MetricFamily::euclidean:
      return Metric(spec, std::make_shared<EuclideanEval>(n));
    case MetricFamily::minkowski_pnorm:
      if (spec.pnorm_p < 2.0) throw SpecError("p: Minkowski p-norm requires p >= 2");
      return Metric(spec, std::make_shared<PnormEval>(n, spec.pnorm_p));
    case MetricFamily::riemannian:
      validate_coefficient_field(spec);
      return Metric(spec, std::make_shared<RiemannianEval>(n, spec.g, std::vector<Polynomial>{}));
    case MetricFamily::randers:
      if (static_cast<int>(spec.b.size()) != n) throw SpecError("b: expected one polynomial per dimension");
      validate_coefficient_field(spec);
      return Metric(spec, std::make_shared<RiemannianEval>(n, spec.g, spec.b));
    case MetricFamily::funk:
    case MetricFamily::klein: {
      MetricSpec s = spec;
      s.domain.kind = DomainSpec::Kind::ball;
      s.domain.radius = 1.0;  // the unit ball is intrinsic to these families
      if (s.domain.sample_radius >= s.domain.radius) s.domain.sample_radius = 0.8;
      return Metric(s, std::make_shared<BallEval>(n, spec.family == MetricFamily::funk));
    }
    case MetricFamily::pullback: {
      if (!spec.base || !spec.change) throw SpecError("pullback: requires base spec and change");
      if (spec.base->dimension != n || spec.change->dimension() != n)
        throw SpecError("pullback: dimension mismatch between base and change");
      Metric base = build_metric(*spec.base);
      if (spec.change->min_jacobian_det(probe_points(spec.domain, n, 64)) <= 1e-6)
        throw SpecError("change: Jacobian is (near-)singular on the sampling domain");
      return Metric(spec, std::make_shared<PullbackEval>(n, base.evaluator_ptr(), *spec.change));
    }
  }
  throw UsageError("unknown metric family");
}

Metric pullback_metric(const Metric& base, const CoordinateChange& change, DomainSpec domain) {
  MetricSpec spec;
  spec.dimension = base.dimension();
  spec.family = MetricFamily::pullback;
  spec.domain = domain;
  spec.base = std::make_shared<MetricSpec>(base.spec());
  spec.change = change;
  return Metric(spec, std::make_shared<PullbackEval>(base.dimension(), base.evaluator_ptr(), change));
}

std::vector<TangentSample> sample_domain(const MetricSpec& spec, int count, uint64_t seed) {
  if (count < 1) throw UsageError("sample_domain: count must be >= 1");
  Metric m = build_metric(spec);
  SampleRng rng(seed);
  std::vector<TangentSample> out;
  out.reserve(count);
  const int n = spec.dimension;
  while (static_cast<int>(out.size()) < count) {
    Vec x = spec.domain.kind == DomainSpec::Kind::ball ? rng.in_ball(n, spec.domain.sample_radius)
                                                       : rng.in_cube(n, spec.domain.sample_radius);
    if (!m.in_domain(x)) continue;
    out.emplace_back(x, rng.unit_sphere(n));
  }
  return out;
}

MetricSpec MetricSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("metric: expected a JSON object");
  static const std::set<std::string> allowed = {"dimension", "family", "params", "domain"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw SpecError("metric: unknown field \"" + it.key() + "\"");
  if (!j.contains("dimension")) throw SpecError("dimension: missing");
  if (!j.contains("family")) throw SpecError("family: missing");

  MetricSpec spec;
  spec.dimension = j.at("dimension").get<int>();
  spec.family = family_from_name(j.at("family").get<std::string>());

  // family defaults for the domain, overridable below
  if (spec.family == MetricFamily::funk || spec.family == MetricFamily::klein)
    spec.domain = {DomainSpec::Kind::ball, 1.0, 0.8};
  else if (spec.family == MetricFamily::pullback)
    spec.domain = {DomainSpec::Kind::rn, 1.0, 0.5};
  else
    spec.domain = {DomainSpec::Kind::rn, 1.0, 1.0};

  if (j.contains("domain") && !j.at("domain").is_null()) {
    const auto& d = j.at("domain");
    std::string type = d.value("type", spec.domain.kind == DomainSpec::Kind::ball ? "ball" : "rn");
    if (type == "ball") {
      spec.domain.kind = DomainSpec::Kind::ball;
      spec.domain.radius = d.value("radius", 1.0);
      spec.domain.sample_radius = d.value("r_max", 0.8 * spec.domain.radius);
      if (spec.domain.sample_radius >= spec.domain.radius)
        throw SpecError("domain: r_max must be strictly inside the ball radius");
    } else if (type == "rn") {
      spec.domain.kind = DomainSpec::Kind::rn;
      spec.domain.sample_radius = d.value("sample_radius", spec.domain.sample_radius);
    } else {
      throw SpecError("domain: unknown type \"" + type + "\"");
    }
  }

  nlohmann::json params = j.value("params", nlohmann::json::object());
  switch (spec.family) {
    case MetricFamily::euclidean:
    case MetricFamily::funk:
    case MetricFamily::klein:
      break;
    case MetricFamily::minkowski_pnorm:
      if (!params.contains("p")) throw SpecError("params.p: missing for minkowski_pnorm");
      spec.pnorm_p = params.at("p").get<double>();
      break;
    case MetricFamily::randers:
      if (!params.contains("b")) throw SpecError("params.b: missing for randers");
      for (const auto& poly : params.at("b"))
        spec.b.push_back(Polynomial::from_json(poly, spec.dimension));
      [[fallthrough]];
    case MetricFamily::riemannian: {
      if (!params.contains("g")) throw SpecError("params.g: missing coefficient field");
      for (const auto& row : params.at("g")) {
        std::vector<Polynomial> r;
        for (const auto& poly : row) r.push_back(Polynomial::from_json(poly, spec.dimension));
        spec.g.push_back(std::move(r));
      }
      break;
    }
    case MetricFamily::pullback: {
      if (!params.contains("base") || !params.contains("change"))
        throw SpecError("params: pullback requires base and change");
      spec.base = std::make_shared<MetricSpec>(MetricSpec::from_json(params.at("base")));
      spec.change = CoordinateChange::from_json(params.at("change"));
      break;
    }
  }
  return spec;
}

nlohmann::json MetricSpec::to_json() const {
  nlohmann::json j;
  j["dimension"] = dimension;
  j["family"] = family_name(family);
  nlohmann::json params = nlohmann::json::object();
  if (family == MetricFamily::minkowski_pnorm) params["p"] = pnorm_p;
  if (family == MetricFamily::riemannian || family == MetricFamily::randers) {
    nlohmann::json gm = nlohmann::json::array();
    for (const auto& row : g) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& poly : row) r.push_back(poly.to_json());
      gm.push_back(r);
    }
    params["g"] = gm;
  }
  if (family == MetricFamily::randers) {
    nlohmann::json bb = nlohmann::json::array();
    for (const auto& poly : b) bb.push_back(poly.to_json());
    params["b"] = bb;
  }
  if (family == MetricFamily::pullback) {
    params["base"] = base->to_json();
    params["change"] = change->to_json();
  }
  j["params"] = params;
  nlohmann::json d;
  if (domain.kind == DomainSpec::Kind::ball) {
    d["type"] = "ball";
    d["radius"] = domain.radius;
    d["r_max"] = domain.sample_radius;
  } else {
    d["type"] = "rn";
    d["sample_radius"] = domain.sample_radius;
  }
  j["domain"] = d;
  return j;
}

}  // namespace finsler
