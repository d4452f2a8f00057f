#include <doctest.h>

#include <complex>
#include <map>
#include <vector>

#include "fixtures.hpp"
#include "parfell/error.hpp"
#include "parfell/partial_action.hpp"
#include "parfell/random.hpp"

using namespace parfell;

TEST_CASE("validate examples") {
  CHECK(validate(fixtures::swap()).valid());
  CHECK(validate(fixtures::fixed_point()).valid());
  CHECK(validate(fixtures::partial_shift(), 3).valid());

  auto bad = fixtures::action_from(
      R"({"group":"free:1","n":3,"elements":[{"t":"a","domain":[1,2],"map":{"0":1,"1":1}},)"
      R"({"t":"a^-1","domain":[0,1],"map":{"1":0,"2":1}}]})");
  auto report = validate(bad);
  CHECK_FALSE(report.valid());
  REQUIRE(report.counts.count("bijection"));
  bool witnessed = false;
  for (const auto& v : report.witnesses)
    if (v.axiom == "bijection" && v.detail == "eta_a not injective") witnessed = true;
  CHECK(witnessed);
}

TEST_CASE("element_map on the partial shift") {
  auto shift = fixtures::partial_shift();
  const auto& g = shift.group();
  auto a2 = element_map(shift, g.parse("a^2"));
  CHECK(a2.domain() == std::vector<int>{0});
  CHECK(a2(0) == 2);
  CHECK(element_map(shift, g.parse("a a^-1")) == PartialMap::identity(3));
  CHECK(element_map(shift, g.identity()) == PartialMap::identity(3));
  CHECK(element_map(shift, g.parse("a^-1")) == element_map(shift, g.parse("a")).inverse());
  CHECK(element_map(shift, g.parse("a^3")).domain().empty());
}

TEST_CASE("undeclared finite element") {
  auto z3 = R"({"group":"cyclic:3","n":1,"elements":[{"t":"1","domain":[0],"map":{"0":0}}]})";
  CHECK_THROWS_AS(fixtures::action_from(z3), MalformedInput);
}

TEST_CASE("random actions are valid") {
  Rng rng(7);
  std::vector<GroupSpec> groups{GroupSpec::cyclic(2), GroupSpec::cyclic(3), GroupSpec::cyclic(6),
                                GroupSpec::symmetric(3), GroupSpec::free(1), GroupSpec::free(2)};
  for (int trial = 0; trial < 60; ++trial) {
    const auto& g = groups[static_cast<std::size_t>(trial) % groups.size()];
    auto a = random_action(g, 8, rng);
    CHECK(a.size() <= 8);
    CHECK(validate(a, 3).valid());
    // Composition containment checked by hand over ball(2).
    for (const auto& s : ball(g, 2)) {
      auto es = element_map(a, s);
      for (const auto& t : ball(g, 2)) {
        auto et = element_map(a, t);
        auto est = element_map(a, g.multiply(s, t));
        for (int z = 0; z < static_cast<int>(a.size()); ++z)
          if (et.defined(z) && es.defined(et(z))) CHECK(est(z) == es(et(z)));
      }
    }
  }
}

TEST_CASE("dual system") {
  auto shift = fixtures::partial_shift();
  auto dual = dualize(shift, 2);
  const auto& g = shift.group();
  auto a = g.parse("a");
  CHECK(dual.support(a) == std::vector<int>{1, 2});
  CHECK(dual.alpha(a, dual.indicator(0)) == dual.indicator(1));
  CHECK(dual.alpha(g.identity(), dual.indicator(2)) == dual.indicator(2));
  CHECK_THROWS_AS(dual.alpha(a, dual.indicator(2)), PreconditionError);
  CHECK(sup_norm(Function{Complex(3, 4), 1.0}) == doctest::Approx(5.0));
}

TEST_CASE("fiber operations match the pointwise formula") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto action = random_action(GroupSpec::symmetric(3), 6, rng);
    auto dual = dualize(action, 1);
    const auto& g = action.group();
    for (const auto& s : dual.elements()) {
      for (const auto& t : dual.elements()) {
        FiberElement a{s, random_function(dual.support(s), action.size(), rng)};
        FiberElement b{t, random_function(dual.support(t), action.size(), rng)};
        auto prod = dual.fiber_product(a, b);
        CHECK(prod.t == g.multiply(s, t));
        // result(eta_s(y)) = a(eta_s(y)) b(y) for y in V_{s^-1} ∩ V_t.
        Function expect(action.size(), 0.0);
        auto es = element_map(action, s);
        for (int y = 0; y < static_cast<int>(action.size()); ++y)
          if (es.defined(y)) expect[es(y)] = a.coeffs[es(y)] * b.coeffs[y];
        for (std::size_t z = 0; z < expect.size(); ++z) CHECK(std::abs(prod.coeffs[z] - expect[z]) < 1e-14);

        auto adj = dual.fiber_adjoint(a);
        CHECK(adj.t == g.inverse(s));
        auto back = dual.fiber_adjoint(adj);
        CHECK(back.coeffs == a.coeffs);
      }
    }
  }
}

TEST_CASE("equivariance") {
  auto shift = fixtures::partial_shift();
  EquivariantMap id{shift, shift, {0, 1, 2}};
  CHECK(check_equivariance(id, 3).ok());

  // Collapse onto 0, which lies outside V_a.
  EquivariantMap collapse{shift, shift, {0, 0, 0}};
  auto r = check_equivariance(collapse, 2);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.witnesses.empty());

  CHECK(is_isomorphism(shift, shift, {0, 1, 2}, ball(shift.group(), 2)));
  CHECK_FALSE(is_isomorphism(shift, shift, {2, 1, 0}, ball(shift.group(), 2)));
}
