#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "finsler/metrics.hpp"
#include "support/zoo.hpp"

using namespace finsler;
using namespace finsler::testing;

TEST_SUITE("metrics") {
  TEST_CASE("closed-form values") {
    Metric euclid = build_metric(euclidean_spec(2));
    CHECK(euclid(sample2(0, 0, 3, 4)) == doctest::Approx(5.0));

    Metric klein = build_metric(klein_spec(2));
    CHECK(klein(sample2(0, 0, 1, 0)) == doctest::Approx(1.0));
    CHECK(klein(sample2(0.5, 0, 1, 0)) == doctest::Approx(1.0 / 0.75));

    Metric funk = build_metric(funk_spec(2));
    CHECK(funk(sample2(0, 0, 1, 0)) == doctest::Approx(1.0));
    CHECK(funk(sample2(0.5, 0, 1, 0)) == doctest::Approx(2.0));
  }

  TEST_CASE("funk is positive but not reversible away from the origin") {
    Metric funk = build_metric(funk_spec(2));
    double fwd = funk(sample2(0.5, 0.1, 1, 0));
    double bwd = funk(sample2(0.5, 0.1, -1, 0));
    CHECK(fwd > 0.0);
    CHECK(bwd > 0.0);
    CHECK(std::abs(fwd - bwd) > 0.1);
    // at the origin the Funk norm is Euclidean, hence reversible
    CHECK(funk(sample2(0, 0, -1, 0)) == doctest::Approx(funk(sample2(0, 0, 1, 0))));
  }

  TEST_CASE("homogeneity across the zoo") {
    for (const auto& entry : standard_zoo()) {
      CAPTURE(entry.name);
      Metric m = build_metric(entry.spec);
      for (const auto& s : sample_domain(entry.spec, 30, 5))
        for (double lambda : {0.5, 2.0, 10.0}) CHECK(validate_homogeneity(m.evaluator(), s, lambda));
    }
  }

  TEST_CASE("spec validation errors") {
    MetricSpec bad = randers_const_spec(1.2, 0.0);  // ||b|| >= 1
    CHECK_THROWS_AS(build_metric(bad), SpecError);

    MetricSpec notpd = curved_riemannian_spec();
    notpd.g[0][0] = pconst(2, -1.0);
    CHECK_THROWS_AS(build_metric(notpd), SpecError);

    MetricSpec asym = curved_riemannian_spec();
    asym.g[0][1] = pmono({1, 0}, 0.5);
    CHECK_THROWS_AS(build_metric(asym), SpecError);

    MetricSpec p1 = pnorm_spec(2, 1.5);
    CHECK_THROWS_AS(build_metric(p1), SpecError);

    MetricSpec d1 = euclidean_spec(2);
    d1.dimension = 1;
    CHECK_THROWS_AS(build_metric(d1), SpecError);
  }

  TEST_CASE("sampling is deterministic and respects the domain") {
    auto a = sample_domain(klein_spec(2), 100, 1);
    auto b = sample_domain(klein_spec(2), 100, 1);
    REQUIRE(a.size() == 100);
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].x == b[i].x);
      CHECK(a[i].y == b[i].y);
      CHECK(a[i].x.norm() <= 0.8);
      CHECK(a[i].y.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    auto c = sample_domain(klein_spec(2), 100, 2);
    CHECK(a[0].x != c[0].x);

    auto e = sample_domain(euclidean_spec(2), 3, 7);
    CHECK(e.size() == 3);
    for (const auto& s : e) CHECK(s.y.norm() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(sample_domain(euclidean_spec(2), 0, 1), UsageError);
  }

  TEST_CASE("pullback composes exactly") {
    // phi(u) = (u1 + 0.1 u1^2, u2 - 0.05 u1 u2)
    PolyMap phi({Polynomial::monomial({1, 0}, 1.0) + Polynomial::monomial({2, 0}, 0.1),
                 Polynomial::monomial({0, 1}, 1.0) + Polynomial::monomial({1, 1}, -0.05)});
    CoordinateChange change(phi);
    Metric base = build_metric(klein_spec(2));
    Metric pulled = pullback_metric(base, change, {DomainSpec::Kind::ball, 0.7, 0.5});

    for (const auto& s : sample_domain(pulled.spec(), 50, 9)) {
      Mat J = change.jacobian_at(s.x);
      std::span<const double> xs(s.x.data(), 2);
      std::vector<double> z = change.map_point(xs);
      Vec zx = Eigen::Map<const Vec>(z.data(), 2);
      Vec zy = J * s.y;
      CHECK(pulled(s) == doctest::Approx(base(TangentSample(zx, zy))).epsilon(1e-14));
    }
  }

  TEST_CASE("metric spec json round trip and diagnostics") {
    auto j = nlohmann::json::parse(R"({
      "dimension": 2,
      "family": "randers",
      "params": {
        "g": [[[[[0,0],1.0]], []], [[], [[[0,0],1.0]]]],
        "b": [[[[0,1], 0.1]], [[[1,0], 0.1]]]
      },
      "domain": {"type": "rn", "sample_radius": 1.0}
    })");
    MetricSpec spec = MetricSpec::from_json(j);
    CHECK(spec.family == MetricFamily::randers);
    Metric m = build_metric(spec);
    CHECK(m(sample2(0.5, 0.25, 1, 0)) == doctest::Approx(1.0 + 0.1 * 0.25));

    MetricSpec back = MetricSpec::from_json(spec.to_json());
    CHECK(build_metric(back)(sample2(0.5, 0.25, 1, 0)) == doctest::Approx(1.0 + 0.1 * 0.25));

    auto unknown = nlohmann::json::parse(R"({"dimension":2,"family":"euclidean","oops":1})");
    CHECK_THROWS_WITH_AS(MetricSpec::from_json(unknown),
                         "metric: unknown field \"oops\"", SpecError);
    auto nofam = nlohmann::json::parse(R"({"dimension":2})");
    CHECK_THROWS_AS(MetricSpec::from_json(nofam), SpecError);
    auto badfam = nlohmann::json::parse(R"({"dimension":2,"family":"hyperbolic"})");
    CHECK_THROWS_AS(MetricSpec::from_json(badfam), SpecError);
  }

  TEST_CASE("ball metrics reject evaluation outside the unit ball") {
    Metric funk = build_metric(funk_spec(2));
    CHECK_THROWS_AS(funk(sample2(1.1, 0, 1, 0)), DomainError);
    CHECK(funk.in_domain(sample2(0.9, 0, 1, 0).x));
    CHECK_FALSE(funk.in_domain(sample2(1.0, 0, 1, 0).x));
  }
}
