#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "parfell/error.hpp"
#include "parfell/random.hpp"
#include "parfell/crossed_product.hpp"
#include "parfell/representation.hpp"

using namespace parfell;

namespace {

PartialRepFamily near_shift_family(double scale) {
  auto g = GroupSpec::free(1);
  PartialRepFamily v{g, 2, {}};
  v.v[g.identity()] = ComplexMatrix::identity(2);
  v.v[g.parse("a")] = scale * ComplexMatrix::unit(1, 0, 2);
  v.v[g.parse("a^-1")] = scale * ComplexMatrix::unit(0, 1, 2);
  return v;
}

Function scaled_fn(Function f, double c) {
  for (auto& x : f) x *= c;
  return f;
}

}  // namespace

TEST_CASE("std_covariant_rep is exact") {
  for (const auto& action : {fixtures::swap(), fixtures::fixed_point(), fixtures::partial_shift()}) {
    auto rep = std_covariant_rep(action, 3);
    auto elems = ball(action.group(), 3);
    auto d = partial_rep_defects(rep.v, elems);
    for (const char* name : kDefectNames) CHECK(d.value(name) <= 1e-12);
    auto c = covariance_defects(rep, elems);
    CHECK(c.value("covariance") <= 1e-12);
    CHECK(c.value("pi_defect") <= 1e-12);
  }
  auto rep = std_covariant_rep(fixtures::swap());
  auto g = rep.v.group.parse("g");
  CHECK(rep.v.at(g) == (ComplexMatrix{{0, 1}, {1, 0}}));
  CHECK(rep.phi[1] == ComplexMatrix::unit(1, 1, 2));
}

TEST_CASE("defects of a scaled swap") {
  auto rep = std_covariant_rep(fixtures::swap());
  auto g = rep.v.group.parse("g");
  auto v = rep.v;
  v.v[g] = 1.1 * v.v[g];
  auto d = partial_rep_defects(v, rep.v.group.elements());
  // v_g^3 - v_g v_e = (1.331 - 1.1) P for the swap permutation P.
  CHECK(d.value("triple_product") == doctest::Approx(1.331 - 1.1).epsilon(1e-12));
  CHECK(d.value("selfadjoint") == 0.0);
  CHECK(d.value("isometry_gap") == doctest::Approx(0.231).epsilon(1e-12));

  v.v[rep.v.group.identity()] = 2.0 * ComplexMatrix::identity(2);
  CHECK_THROWS_AS(partial_rep_defects(v, rep.v.group.elements()), PreconditionError);
}

TEST_CASE("covariance defect with the v_t removed") {
  auto action = fixtures::swap();
  auto rep = std_covariant_rep(action);
  auto g = rep.v.group.parse("g");
  rep.v.v[g] = ComplexMatrix::zero(2, 2);
  auto c = covariance_defects(rep, rep.v.group.elements());
  CHECK(c.value("covariance") == doctest::Approx(1.0));
}

TEST_CASE("perturbation fixed point and worked instance") {
  auto rep = std_covariant_rep(fixtures::swap());
  auto same = perturb_to_partial_isometries(rep.v, 0.01, &rep);
  CHECK(same.u.v == rep.v.v);
  CHECK(same.certificate.max_distance == 0.0);
  CHECK(same.certificate.holds());

  auto v = near_shift_family(1.01);
  auto res = perturb_to_partial_isometries(v, 0.011);
  auto a = v.group.parse("a");
  CHECK(distance(res.u.at(a), ComplexMatrix::unit(1, 0, 2)) < 1e-15);
  CHECK(res.certificate.distance.at(a) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(res.certificate.max_distance < res.certificate.distance_bound());
  CHECK(res.certificate.holds());

  CHECK_THROWS_AS(perturb_to_partial_isometries(v, 0.2), PreconditionError);
  CHECK_THROWS_AS(perturb_to_partial_isometries(v, 0.005), PreconditionError);
}

TEST_CASE("perturbation on random noisy families") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    auto action = random_action(trial % 2 ? GroupSpec::cyclic(4) : GroupSpec::free(2), 6, rng);
    auto rep = std_covariant_rep(action, trial % 2 ? ball(action.group(), 1) : ball(action.group(), 2));
    double eta = 1e-2;
    auto noisy = add_noise(rep.v, eta / 8, rng);
    auto res = perturb_to_partial_isometries(noisy, eta, &rep);
    CHECK(res.certificate.holds());
    for (const auto& [t, u] : res.u.v) CHECK(is_partial_isometry(u, 1e-10).ok);
  }
}

TEST_CASE("symmetrize") {
  auto action = fixtures::action_from(R"({"group":"free:1","n":2,"elements":[{"t":"a","domain":[1],"map":{"0":1}}]})");
  auto dual = dualize(action, 1);
  const auto& g = action.group();
  auto a = g.parse("a");
  auto ai = g.parse("a^-1");
  ComplexMatrix m{{1, Complex(0, 2)}, {3, 4}};
  auto zero = ComplexMatrix::zero(2, 2);
  FiberFamily fam;
  fam[g.identity()] = {ComplexMatrix::unit(0, 0, 2), ComplexMatrix::unit(1, 1, 2)};
  fam[a] = {zero, m};
  fam[ai] = {zero, zero};
  auto out = symmetrize(fam, dual);
  CHECK(out.at(a)[1] == 0.5 * m);
  CHECK(out.at(ai)[0] == 0.5 * m.adjoint());
  // Already *-compatible input is unchanged.
  CHECK(symmetrize(out, dual) == out);

  Rng rng(4);
  for (auto& [t, maps] : fam)
    for (std::size_t z : dual.support(t)) maps[z] = random_matrix(2, 2, rng);
  auto sym = symmetrize(fam, dual);
  for (const auto& t : dual.elements()) {
    for (int z : dual.support(t)) {
      FiberElement b{t, dual.indicator(z)};
      auto bs = dual.fiber_adjoint(b);
      CHECK(apply_fiber(sym, b).adjoint() == apply_fiber(sym, bs));
    }
  }
}

TEST_CASE("induced family round trip") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto action = random_action(GroupSpec::symmetric(3), 6, rng);
    auto rep = std_covariant_rep(action);
    auto back = bundle_rep_to_covariant(induced_family(rep), rep.dual);
    CHECK(back.phi == rep.phi);
    CHECK(back.v.v == rep.v.v);
    CHECK(back.v.at(action.group().identity()) == ComplexMatrix::identity(rep.dim()));
  }
}

TEST_CASE("extract_finite_system") {
  auto swap = fixtures::swap();
  auto ex = extract_finite_system(std_covariant_rep(swap));
  CHECK(ex.action.size() == 2);
  CHECK(is_isomorphism(ex.action, swap, ex.rho, swap.group().elements()));
  CHECK(ex.multiplicity == std::vector<std::size_t>{1, 1});

  // Trivial group, phi the diagonal embedding.
  auto triv = fixtures::action_from(R"({"group":"trivial","n":3,"elements":[]})");
  auto tx = extract_finite_system(std_covariant_rep(triv));
  CHECK(tx.action.size() == 3);
  CHECK(tx.action.domain_of(tx.action.group().identity()) == std::vector<int>{0, 1, 2});

  // Multiplicity two: tensor every matrix with I_2.
  auto base = std_covariant_rep(swap);
  auto rep = base;
  auto i2 = ComplexMatrix::identity(2);
  for (auto& p : rep.phi) p = kron(p, i2);
  for (auto& [t, m] : rep.v.v) m = kron(m, i2);
  rep.v.dim = 4;
  auto mx = extract_finite_system(rep);
  CHECK(mx.multiplicity == std::vector<std::size_t>{2, 2});
  CHECK(is_isomorphism(mx.action, swap, mx.rho, swap.group().elements()));
  for (std::size_t c = 0; c < mx.projections.size(); ++c)
    CHECK(op_norm(mx.projections[c]) == doctest::Approx(op_norm(rep.phi[static_cast<std::size_t>(mx.rho[c])])));

  auto broken = base;
  broken.phi[0] = ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}};
  CHECK_THROWS_AS(extract_finite_system(broken), PreconditionError);
}

TEST_CASE("mf_defect_report") {
  auto action = fixtures::swap();
  auto rep = std_covariant_rep(action);
  auto fam = induced_family(rep);
  Rng rng(6);
  std::vector<FiberElement> sample;
  for (const auto& t : rep.dual.elements()) {
    for (int z : rep.dual.support(t)) sample.push_back({t, rep.dual.indicator(z)});
    sample.push_back({t, random_function(rep.dual.support(t), 2, rng)});
  }
  auto d = mf_defect_report(fam, rep.dual, sample);
  CHECK(d.value("selfadjoint") <= 1e-12);
  CHECK(d.value("pi_defect") <= 1e-12);
  CHECK(d.value("isometry_gap") <= 1e-12);

  double eps = 0.05;
  auto scaled = fam;
  for (auto& [t, maps] : scaled)
    for (auto& m : maps) m = (1 + eps) * m;
  std::vector<FiberElement> ind;
  double max_b = 0.0;
  for (const auto& t : rep.dual.elements())
    for (int z : rep.dual.support(t)) {
      ind.push_back({t, scaled_fn(rep.dual.indicator(z), 3.0)});
      max_b = std::max(max_b, 3.0);
    }
  auto ds = mf_defect_report(scaled, rep.dual, ind);
  CHECK(ds.value("isometry_gap") == doctest::Approx(eps * max_b).epsilon(1e-12));

  auto empty = mf_defect_report(fam, rep.dual, {});
  CHECK(empty.max() == 0.0);
}
