// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "parfell/bernoulli.hpp"
#include "parfell/cli.hpp"
#include "parfell/crossed_product.hpp"
#include "parfell/io.hpp"
#include "parfell/partial_action.hpp"
#include "parfell/random.hpp"
#include "parfell/representation.hpp"

using namespace parfell;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

FinitePartialAction load(const std::string& name) {
  return io::parse_action(io::read_json_file(std::string(PARFELL_DATA_DIR) + "/" + name));
}

std::size_t sum_of_domains(const FinitePartialAction& a) {
  std::size_t total = 0;
  for (const auto& t : a.group().elements()) total += element_map(a, t).range().size();
  return total;
}

std::vector<FinitePartialAction> model_systems(Rng& rng, std::size_t count) {
  std::vector<FinitePartialAction> out{load("swap.json"), load("fixed_point.json")};
  std::vector<GroupSpec> groups{GroupSpec::cyclic(2), GroupSpec::cyclic(3), GroupSpec::cyclic(4),
                                GroupSpec::cyclic(5), GroupSpec::cyclic(6), GroupSpec::symmetric(3),
                                GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::cyclic(2))};
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_action(groups[i % groups.size()], 6, rng));
  return out;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

Outcome covariant_suite() {
  Rng rng(101);
  std::vector<GroupSpec> groups{GroupSpec::cyclic(2), GroupSpec::cyclic(3), GroupSpec::cyclic(4), GroupSpec::cyclic(5),
                                GroupSpec::cyclic(6), GroupSpec::free(1),   GroupSpec::free(2)};
  double worst = 0.0;
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    auto action = random_action(groups[i % groups.size()], 8, rng);
    if (!validate(action, 3).valid()) ++invalid;
    auto rep = std_covariant_rep(action, 3);
    auto elems = ball(action.group(), 3);
    auto d = partial_rep_defects(rep.v, elems);
    auto c = covariance_defects(rep, elems);
    for (const char* name : {"selfadjoint", "triple_product", "commuting_ranges", "intertwine"})
      worst = std::max(worst, d.value(name));
    worst = std::max(worst, c.value("covariance"));
  }
  return {worst <= 1e-12 && invalid == 0, "200 systems, max defect " + fmt(worst) + ", invalid inputs " + std::to_string(invalid)};
}

Outcome perturbation_trials() {
  Rng rng(202);
  std::vector<GroupSpec> groups{GroupSpec::cyclic(2), GroupSpec::cyclic(3), GroupSpec::cyclic(4),
                                GroupSpec::symmetric(3), GroupSpec::free(1), GroupSpec::free(2)};
  std::size_t violations = 0;
  std::size_t trials = 0;
  std::size_t max_dim = 0;
  double worst_pi = 0.0;
  double worst_ratio = 0.0;
  for (double eta : {1e-3, 1e-2}) {
    for (std::size_t i = 0; i < 1000; ++i) {
      const auto& g = groups[i % groups.size()];
      auto action = random_action(g, 1 + i % 16, rng);
      auto rep = g.is_finite() ? std_covariant_rep(action, g.elements()) : std_covariant_rep(action, ball(g, 2));
      auto noisy = add_noise(rep.v, eta / 8, rng);
      auto res = perturb_to_partial_isometries(noisy, eta, &rep);
      const auto& c = res.certificate;
      ++trials;
      max_dim = std::max(max_dim, rep.dim());
      double pi = 0.0;
      for (const auto& [t, u] : res.u.v) pi = std::max(pi, is_partial_isometry(u, 1e-10).defect);
      worst_pi = std::max(worst_pi, pi);
      worst_ratio = std::max({worst_ratio, c.max_distance / c.distance_bound(), c.adjoint_defect / c.adjoint_bound(),
                              c.triple_defect / c.triple_bound(), c.covariance_defect.value_or(0) / c.covariance_bound()});
      bool ok = pi <= 1e-10 && c.max_distance < c.distance_bound() && c.adjoint_defect < c.adjoint_bound() &&
                c.triple_defect < c.triple_bound() && c.covariance_defect &&
                *c.covariance_defect < c.covariance_bound();
      if (!ok) ++violations;
    }
  }
  return {violations == 0, std::to_string(trials) + " trials (d <= " + std::to_string(max_dim) + "), violations " +
                               std::to_string(violations) + ", max PI defect " + fmt(worst_pi) +
                               ", max defect/bound " + fmt(worst_ratio)};
}

Outcome crossed_product_structure() {
  CrossedProductModel swap(load("swap.json"));
  CrossedProductModel fixed(load("fixed_point.json"));
  bool ok = algebra_dimension(swap) == 4 && center_dimension(swap) == 1 && algebra_dimension(fixed) == 3;
  std::string detail = "swap " + std::to_string(algebra_dimension(swap)) + "/" + std::to_string(center_dimension(swap)) +
                       ", fixed point " + std::to_string(algebra_dimension(fixed));
  Rng rng(303);
  std::size_t mismatches = 0;
  double mult = 0.0;
  double inv = 0.0;
  double cstar = 0.0;
  auto systems = model_systems(rng, 20);
  for (std::size_t i = 2; i < systems.size(); ++i) {
    CrossedProductModel m(systems[i]);
    if (algebra_dimension(m) != sum_of_domains(systems[i])) ++mismatches;
  }
  for (const auto& a : systems) {
    CrossedProductModel m(a);
    auto d = check_model(m, 200, rng);
    mult = std::max(mult, d.multiplicative);
    inv = std::max(inv, d.involutive);
    cstar = std::max(cstar, d.c_star);
  }
  ok = ok && mismatches == 0 && mult <= 1e-10 && inv <= 1e-10 && cstar <= 1e-8;
  detail += ", 20 random systems with " + std::to_string(mismatches) + " dimension mismatches, hom " + fmt(mult) +
            ", star " + fmt(inv) + ", C* " + fmt(cstar);
  return {ok, detail};
}

Outcome expectation_checks() {
  Rng rng(404);
  auto systems = model_systems(rng, 6);
  double min_re = 0.0;
  double max_im = 0.0;
  double excess = 0.0;
  std::size_t unfaithful = 0;
  std::size_t sections = 0;
  for (const auto& a : systems) {
    CrossedProductModel m(a);
    const auto& dual = m.dual();
    for (int i = 0; i < 500; ++i) {
      auto x = random_section(dual, rng);
      auto exx = expectation(section_mul(section_star(x, dual), x, dual), dual);
      bool zero = true;
      for (auto c : exx) {
        min_re = std::min(min_re, c.real());
        max_im = std::max(max_im, std::abs(c.imag()));
        if (std::abs(c) > 1e-12) zero = false;
      }
      bool x_zero = true;
      for (const auto& [t, f] : x.terms)
        for (auto c : f) x_zero = x_zero && c == 0.0;
      if (zero && !x_zero) ++unfaithful;
      excess = std::max(excess, sup_norm(expectation(x, dual)) - reduced_norm(m, x));
      ++sections;
    }
  }
  bool ok = min_re >= -1e-12 && max_im <= 1e-12 && unfaithful == 0 && excess <= 1e-12;
  return {ok, std::to_string(sections) + " sections, min Re E(x*x) " + fmt(min_re) + ", unfaithful " +
                  std::to_string(unfaithful) + ", max(|E(x)| - |x|) " + fmt(excess)};
}

Outcome bundle_axioms() {
  Rng rng(505);
  auto systems = model_systems(rng, 6);
  std::size_t failing = 0;
  for (const auto& a : systems)
    if (!bundle_axiom_report(dualize(a), 500, rng).ok()) ++failing;
  auto z2 = GroupSpec::cyclic(2);
  std::map<GroupElement, DualSystem::Entry> entries;
  entries[z2.identity()] = {{0, 1}, PartialMap::identity(2)};
  entries[GroupElement::from_index(1)] = {{0, 1}, PartialMap{{0, 0}}};
  auto bad = bundle_axiom_report(DualSystem(z2, 2, entries), 500, rng);
  bool witnessed = !bad.ok() && !bad.witnesses.empty();
  return {failing == 0 && witnessed, std::to_string(systems.size()) + " systems x 500 pairs, failing " +
                                         std::to_string(failing) + ", corrupted action witnessed: " +
                                         (witnessed ? bad.witnesses.front().axiom : std::string("none"))};
}

Outcome bernoulli_certificates() {
  auto z = GroupSpec::free(1);
  auto cz = certify_rfd(z, 0.2);
  bool ok = cz.valid && cz.target == "finite:4" && cz.density_bound == 0.125 && cz.equivariance_defect == 0 &&
            cz.quotient_points == 8 && cz.points_checked == 8;
  auto f2 = GroupSpec::free(2);
  auto cf = certify_rfd(f2, 0.3);
  ok = ok && cf.valid && cf.equivariance_defect == 0;
  bool reverified = false;
  if (cz.hom && cf.hom) {
    auto rz = verify_rfd(BernoulliWindow(z, cz.depth), *cz.hom, 0.2);
    auto rf = verify_rfd(BernoulliWindow(f2, cf.depth), *cf.hom, 0.3);
    reverified = rz.valid && rf.valid && rz.density_bound == cz.density_bound && rf.density_bound == cf.density_bound;
  }
  ok = ok && reverified;
  return {ok, "Z via " + cz.target + " (N=" + std::to_string(cz.depth) + ", bound " + fmt(cz.density_bound) +
                  "), F_2 via " + cf.target + " (N=" + std::to_string(cf.depth) + ", bound " + fmt(cf.density_bound) +
                  "), re-verified: " + (reverified ? "yes" : "no")};
}

Outcome measure_checks() {
  bool ok = true;
  double worst = 0.0;
  double half = -1.0;
  for (auto [group, delta] : {std::pair{GroupSpec::free(1), 0.2}, std::pair{GroupSpec::free(2), 0.3}}) {
    auto cert = certify_rfd(group, delta);
    if (!cert.valid || !cert.hom) return {false, "no certificate for " + group.describe()};
    QuotientApprox q(BernoulliWindow(group, cert.depth), *cert.hom);
    std::vector<CylinderFunction> tests{CylinderFunction::constant(1.0)};
    const auto& coords = q.window().coords();
    for (std::size_t k = 1; k < coords.size(); ++k) tests.push_back(CylinderFunction::indicator(coords[k]));
    if (coords.size() >= 3) tests.push_back({"pair", {coords[1], coords[2]}, {0.0, 0.25, 1.0, 3.0}});
    auto m = invariant_measure_approx(q, tests, coords);
    ok = ok && m.normalization == 1.0 && m.positive;
    for (const auto& per : m.defects)
      for (const auto& [s, d] : per) worst = std::max(worst, d);
    if (group.rank() == 1) half = m.values[1];
  }
  ok = ok && worst == 0.0 && half == 0.5;
  return {ok, "normalization exact, max invariance defect " + fmt(worst) + ", mu(x(t_1)=1) = " + fmt(half)};
}

Outcome extraction_round_trip() {
  Rng rng(808);
  std::vector<GroupSpec> groups{GroupSpec::cyclic(2), GroupSpec::cyclic(4), GroupSpec::symmetric(3),
                                GroupSpec::free(1), GroupSpec::free(2)};
  std::size_t ok_count = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto& g = groups[i % groups.size()];
    auto action = random_action(g, 8, rng);
    auto ex = extract_finite_system(std_covariant_rep(action, 2));
    bool mult_free = std::all_of(ex.multiplicity.begin(), ex.multiplicity.end(), [](std::size_t m) { return m == 1; });
    if (mult_free && is_isomorphism(ex.action, action, ex.rho, ball(g, 3))) ++ok_count;
  }
  return {ok_count == 50, std::to_string(ok_count) + "/50 systems recovered with an explicit intertwining bijection"};
}

Outcome determinism() {
  std::string d = PARFELL_DATA_DIR;
  std::vector<std::vector<std::string>> commands{
      {"--seed", "5", "perturb", d + "/swap.json", "--eta", "0.05"},
      {"--seed", "5", "crossed-product", d + "/fixed_point.json"},
      {"--seed", "5", "bundle-axioms", d + "/partial_shift.json"},
      {"--seed", "5", "covariant-rep", d + "/partial_shift.json"},
      {"bernoulli", "certify", "--group", "free:2", "--delta", "0.3"},
      {"measure", "--group", "free:1", "--delta", "0.2"}};
  std::size_t identical = 0;
  for (const auto& args : commands) {
    auto a = cli::run(args);
    auto b = cli::run(args);
    if (!a.report.empty() && a.report == b.report && a.exit_code == b.exit_code) ++identical;
  }
  return {identical == commands.size(), std::to_string(identical) + "/" + std::to_string(commands.size()) +
                                            " commands byte-identical across two runs"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "exact covariant representations", 30, covariant_suite},
      {2, "perturbation bounds", 60, perturbation_trials},
      {3, "crossed-product structure", 0, crossed_product_structure},
      {4, "conditional expectation", 0, expectation_checks},
      {5, "Fell bundle axioms", 0, bundle_axioms},
      {6, "Bernoulli RFD certificates", 10, bernoulli_certificates},
      {7, "invariant measure approximants", 0, measure_checks},
      {8, "extraction round trip", 0, extraction_round_trip},
      {9, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += ", over the " + fmt(c.limit_s) + " s limit";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d %s: %s (%s; %.2f s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
