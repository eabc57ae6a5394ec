#include <doctest.h>

#include <nlohmann/json.hpp>

#include "finsler/polynomial.hpp"
#include "finsler/taylor.hpp"

using namespace finsler;

TEST_SUITE("polynomial") {
  TEST_CASE("evaluation and derivatives") {
    // p = 3 x^2 y - 2 y + 1
    Polynomial p(2);
    std::vector<int> e1 = {2, 1}, e2 = {0, 1}, e0 = {0, 0};
    p.add_term(e1, 3.0);
    p.add_term(e2, -2.0);
    p.add_term(e0, 1.0);

    std::vector<double> z = {1.5, -0.5};
    CHECK(p.eval<double>(z) == doctest::Approx(3 * 2.25 * -0.5 + 1.0 + 1.0));
    CHECK(p.degree() == 3);

    Polynomial dx = p.derivative(0);  // 6 x y
    CHECK(dx.eval<double>(z) == doctest::Approx(6 * 1.5 * -0.5));
    Polynomial dy = p.derivative(1);  // 3 x^2 - 2
    CHECK(dy.eval<double>(z) == doctest::Approx(3 * 2.25 - 2.0));
    CHECK(p.derivative(0).derivative(0).eval<double>(z) == doctest::Approx(6 * -0.5));  // 6y
    CHECK(p.derivative(0).derivative(0).derivative(0).is_zero());
  }

  TEST_CASE("taylor evaluation matches double evaluation") {
    Polynomial p(2);
    std::vector<int> e = {1, 2};
    p.add_term(e, 4.0);
    auto alg = TaylorAlgebra::get(2, 2);
    std::vector<TaylorScalar> z = {TaylorScalar::variable(alg.get(), 0.5, 0),
                                   TaylorScalar::variable(alg.get(), 2.0, 1)};
    TaylorScalar v = p.eval<TaylorScalar>(z);
    CHECK(v.value() == doctest::Approx(4 * 0.5 * 4.0));
    std::vector<int> d = {0, 1};
    CHECK(v.partial(d) == doctest::Approx(4 * 0.5 * 2 * 2.0));  // 16 xy -> 8
  }

  TEST_CASE("duplicate terms merge and zeros drop") {
    Polynomial p(2);
    std::vector<int> e = {1, 0};
    p.add_term(e, 2.0);
    p.add_term(e, 3.0);
    CHECK(p.terms().size() == 1);
    CHECK(p.terms()[0].coef == doctest::Approx(5.0));
    p.add_term(e, -5.0);
    CHECK(p.is_zero());
  }

  TEST_CASE("json round trip") {
    auto j = nlohmann::json::parse(R"([[[2,0], 1.5], [[0,1], -2.0]])");
    Polynomial p = Polynomial::from_json(j, 2);
    std::vector<double> z = {2.0, 3.0};
    CHECK(p.eval<double>(z) == doctest::Approx(1.5 * 4 - 6.0));
    Polynomial q = Polynomial::from_json(p.to_json(), 2);
    CHECK(q.eval<double>(z) == doctest::Approx(p.eval<double>(z)));
    CHECK_THROWS_AS(Polynomial::from_json(nlohmann::json::parse("[[[1], 2.0]]"), 2), SpecError);
  }

  TEST_CASE("composition with an affine map") {
    // p(u) = u1^2 + u2, composed with u = (v1 + 1, 2 v2)
    Polynomial p(2);
    std::vector<int> e1 = {2, 0}, e2 = {0, 1};
    p.add_term(e1, 1.0);
    p.add_term(e2, 1.0);
    std::vector<Polynomial> subs = {
        Polynomial::monomial({1, 0}, 1.0) + Polynomial::constant(2, 1.0),
        Polynomial::monomial({0, 1}, 2.0)};
    Polynomial c = p.compose(subs);
    std::vector<double> v = {0.5, -1.0};
    CHECK(c.eval<double>(v) == doctest::Approx(1.5 * 1.5 + 2 * -1.0));
  }

  TEST_CASE("polymap identity and composition") {
    PolyMap id = PolyMap::identity(2);
    std::vector<double> z = {3.0, -4.0};
    auto w = id.eval<double>(z);
    CHECK(w[0] == 3.0);
    CHECK(w[1] == -4.0);

    // f(u) = (u1 + u2^2, u2); f o id = f
    PolyMap f({Polynomial::monomial({1, 0}, 1.0) + Polynomial::monomial({0, 2}, 1.0),
               Polynomial::monomial({0, 1}, 1.0)});
    auto fz = f.compose(id).eval<double>(z);
    CHECK(fz[0] == doctest::Approx(3.0 + 16.0));
    CHECK(fz[1] == doctest::Approx(-4.0));
  }
}
