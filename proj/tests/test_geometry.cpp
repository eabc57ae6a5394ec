#include <doctest.h>

#include "finsler/deriv.hpp"
#include "finsler/geometry.hpp"
#include "finsler/metrics.hpp"
#include "support/zoo.hpp"

using namespace finsler;
using namespace finsler::testing;

namespace {

// F = |y|^2: 2+-homogeneous, so it must fail the 1-homogeneity validation.
struct EnergyNormEval : EvaluatorBase<EnergyNormEval> {
  int dimension() const override { return 2; }
  template <class S>
  S eval_impl(std::span<const S> /*x*/, std::span<const S> y) const {
    S acc(0.0);
    for (const auto& v : y) acc += v * v;
    return acc;
  }
};

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("sample validation enforces the slit bundle") {
    Vec x(2), y(2);
    x << 0.0, 0.0;
    y << 0.0, 0.0;
    CHECK_THROWS_AS(TangentSample(x, y), DomainError);
    y << 1e-9, 0.0;
    CHECK_THROWS_AS(TangentSample(x, y), DomainError);
    y << 1.0, 0.0;
    CHECK_NOTHROW(TangentSample(x, y));
    Vec x1(1), y1(1);
    x1 << 0.0;
    y1 << 1.0;
    CHECK_THROWS_AS(TangentSample(x1, y1), DomainError);
  }

  TEST_CASE("homogeneity validation") {
    Metric euclid = build_metric(euclidean_spec(2));
    Metric quartic = build_metric(pnorm_spec(2, 4.0));
    TangentSample s = sample2(0.1, -0.2, 0.6, 0.8);
    CHECK(validate_homogeneity(euclid.evaluator(), s, 2.0));
    CHECK(validate_homogeneity(quartic.evaluator(), s, 3.0));
    CHECK(validate_homogeneity(quartic.evaluator(), s, 0.5));

    EnergyNormEval energy;
    CHECK_FALSE(validate_homogeneity(energy, s, 2.0));
    CHECK_THROWS_AS(validate_homogeneity(energy, s, -1.0), UsageError);
  }

  TEST_CASE("euler identities on euclidean closed form") {
    Metric euclid = build_metric(euclidean_spec(2));
    TangentSample s = sample2(0.0, 0.0, 1.0, 0.0);
    Jet jet = jet_at(euclid.evaluator(), s, 2);
    Vec r = euler_identity_check(jet, s);
    CHECK(r[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r[2] == doctest::Approx(0.0).epsilon(1e-14));
  }

  TEST_CASE("euler identities across the zoo on unit directions") {
    for (const auto& entry : standard_zoo()) {
      CAPTURE(entry.name);
      Metric m = build_metric(entry.spec);
      for (const auto& raw : sample_domain(entry.spec, 25, 11)) {
        TangentSample s = raw.with_unit_dir();
        Vec r = euler_identity_check(jet_at(m.evaluator(), s, 2), s);
        CHECK(r.cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }

  TEST_CASE("fd-oracle jets satisfy the euler identities to oracle accuracy") {
    Metric klein = build_metric(klein_spec(2));
    TangentSample s = sample2(0.3, 0.0, 0.0, 1.0);
    Vec r = euler_identity_check(fd_jet(klein.evaluator(), s, 2), s);
    CHECK(r.cwiseAbs().maxCoeff() < 1e-5);
  }

  TEST_CASE("report aggregation invariants") {
    std::vector<SampleResidual> rows(3);
    for (int i = 0; i < 3; ++i) {
      rows[i].sample = sample2(0, 0, 1, 0);
      Vec res(2);
      res << 0.5 * (i + 1), -1.0 * (i + 1);
      rows[i].residual = res;
      rows[i].sup = res.cwiseAbs().maxCoeff();
    }
    ResidualReport rep = make_report("demo", rows, 2.5);
    CHECK(rep.aggregate_sup == doctest::Approx(3.0));
    CHECK(rep.aggregate_mean == doctest::Approx(2.0));
    CHECK(rep.pass == false);
    ResidualReport rep2 = make_report("demo", rows, 3.0);
    CHECK(rep2.pass == true);
  }
}
