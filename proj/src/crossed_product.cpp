#include "parfell/crossed_product.hpp"

#include <algorithm>
#include <cmath>

#include "parfell/error.hpp"

namespace parfell {

Section Section::single(const GroupElement& t, Function f) {
  Section x;
  x.terms.emplace(t, std::move(f));
  return x;
}

Function Section::at(const GroupElement& t, std::size_t n) const {
  auto it = terms.find(t);
  return it == terms.end() ? Function(n, 0.0) : it->second;
}

void check_section(const Section& x, const DualSystem& dual) {
  for (const auto& [t, f] : x.terms) {
    if (f.size() != dual.size()) throw MalformedInput("section coefficient vector has wrong length");
    if (!dual.supported_in(f, t))
      throw PreconditionError("section term at '" + dual.group().format(t) + "' is not supported in V_t");
  }
}

Section section_add(const Section& x, const Section& y, Complex scale) {
  Section out = x;
  for (const auto& [t, f] : y.terms) {
    auto [it, fresh] = out.terms.try_emplace(t, Function(f.size(), 0.0));
    if (it->second.size() != f.size()) throw MalformedInput("section coefficient vectors differ in length");
    for (std::size_t z = 0; z < f.size(); ++z) it->second[z] += scale * f[z];
  }
  return out;
}

Section section_mul(const Section& x, const Section& y, const DualSystem& dual) {
  check_section(x, dual);
  check_section(y, dual);
  Section out;
  for (const auto& [s, a] : x.terms)
    for (const auto& [t, b] : y.terms) {
      FiberElement p = dual.fiber_product({s, a}, {t, b});
      auto [it, fresh] = out.terms.try_emplace(p.t, Function(dual.size(), 0.0));
      for (std::size_t z = 0; z < dual.size(); ++z) it->second[z] += p.coeffs[z];
    }
  return out;
}

Section section_star(const Section& x, const DualSystem& dual) {
  check_section(x, dual);
  Section out;
  for (const auto& [t, a] : x.terms) {
    if (!dual.covers(dual.group().inverse(t)))
      throw UndeclaredElement("dual system does not cover the inverse of '" + dual.group().format(t) + "'");
    FiberElement p = dual.fiber_adjoint({t, a});
    out.terms.emplace(p.t, std::move(p.coeffs));
  }
  return out;
}

Function expectation(const Section& x, const DualSystem& dual) { return x.at(dual.group().identity(), dual.size()); }

Section random_section(const DualSystem& dual, Rng& rng) {
  std::bernoulli_distribution pick(0.5);
  Section x;
  for (const auto& t : dual.elements())
    if (pick(rng)) x.terms.emplace(t, random_function(dual.support(t), dual.size(), rng));
  return x;
}

CrossedProductModel::CrossedProductModel(const FinitePartialAction& action)
    : rep_([&] {
        if (!action.group().is_finite()) throw PreconditionError("the matrix model needs a finite group");
        if (action.group().order() > kMaxOrder) throw PreconditionError("group order exceeds the model limit of 64");
        return std_covariant_rep(action);
      }()) {
  const std::size_t got = algebra_dimension(*this);
  if (got != expected_dimension())
    throw NumericalError("model is not faithful: rank " + std::to_string(got) + " but sum |V_t| = " +
                         std::to_string(expected_dimension()));
}

ComplexMatrix CrossedProductModel::lambda(const GroupElement& s) const {
  const std::size_t m = order();
  ComplexMatrix l(m, m);
  const auto& row = group().table()[s.index()];
  for (std::size_t t = 0; t < m; ++t) l(row[t], t) = 1.0;
  return l;
}

ComplexMatrix CrossedProductModel::image(const Section& x) const {
  check_section(x, dual());
  const std::size_t n = points();
  const std::size_t m = order();
  ComplexMatrix out(n * m, n * m);
  for (const auto& [s, f] : x.terms) {
    const ComplexMatrix a = rep_.phi_of(f) * rep_.v.at(s);
    const auto& row = group().table()[s.index()];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Complex c = a(i, j);
        if (c == 0.0) continue;
        for (std::size_t t = 0; t < m; ++t) out(i * m + row[t], j * m + t) += c;
      }
  }
  return out;
}

std::size_t CrossedProductModel::expected_dimension() const {
  std::size_t total = 0;
  for (const auto& t : dual().elements()) total += dual().support(t).size();
  return total;
}

double reduced_norm(const CrossedProductModel& model, const Section& x) { return op_norm(model.image(x)); }

namespace {

std::vector<ComplexMatrix> basis_images(const CrossedProductModel& model) {
  std::vector<ComplexMatrix> out;
  const auto& dual = model.dual();
  for (const auto& t : dual.elements())
    for (int z : dual.support(t)) out.push_back(model.image(Section::single(t, dual.indicator(z))));
  return out;
}

}  // namespace

std::size_t algebra_dimension(const CrossedProductModel& model) {
  const auto basis = basis_images(model);
  if (basis.empty()) return 0;
  const std::size_t len = basis[0].rows() * basis[0].cols();
  ComplexMatrix stacked(basis.size(), len);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto src = basis[k].data();
    std::copy(src.begin(), src.end(), &stacked(k, 0));
  }
  return matrix_rank(stacked);
}

std::size_t center_dimension(const CrossedProductModel& model) {
  const auto basis = basis_images(model);
  if (basis.empty()) return 0;
  const auto& dual = model.dual();
  // Generators: delta_z delta_e and p_s delta_s.
  std::vector<ComplexMatrix> gens;
  const GroupElement e = model.group().identity();
  for (std::size_t z = 0; z < model.points(); ++z)
    gens.push_back(model.image(Section::single(e, dual.indicator(static_cast<int>(z)))));
  for (const auto& s : dual.elements()) gens.push_back(model.image(Section::single(s, dual.unit(s))));

  // Column k of K holds the commutators [B_k, G_j] for every generator; the
  // center is the null space of K inside span(B_k).
  const std::size_t len = basis[0].rows() * basis[0].cols();
  const std::size_t D = basis.size();
  ComplexMatrix gram(D, D);
  std::vector<ComplexMatrix> comms;
  for (const auto& g : gens) {
    comms.clear();
    for (const auto& b : basis) comms.push_back(commutator(b, g));
    for (std::size_t k = 0; k < D; ++k)
      for (std::size_t l = k; l < D; ++l) {
        Complex acc = 0.0;
        const auto ck = comms[k].data();
        const auto cl = comms[l].data();
        for (std::size_t i = 0; i < len; ++i) acc += std::conj(ck[i]) * cl[i];
        gram(k, l) += acc;
        if (l != k) gram(l, k) += std::conj(acc);
      }
  }
  return D - matrix_rank(gram, 1e-10);
}

ModelDefects check_model(const CrossedProductModel& model, std::size_t pairs, Rng& rng) {
  const auto& dual = model.dual();
  ModelDefects out;
  out.pairs = pairs;
  for (std::size_t k = 0; k < pairs; ++k) {
    const Section x = random_section(dual, rng);
    const Section y = random_section(dual, rng);
    const ComplexMatrix ix = model.image(x);
    const ComplexMatrix iy = model.image(y);
    out.multiplicative = std::max(out.multiplicative, distance(model.image(section_mul(x, y, dual)), ix * iy));
    const Section xs = section_star(x, dual);
    out.involutive = std::max(out.involutive, distance(model.image(xs), ix.adjoint()));

    const Section xx = section_mul(xs, x, dual);
    const double nx = op_norm(ix);
    const double nxx = op_norm(model.image(xx));
    out.c_star = std::max(out.c_star, std::abs(nxx - nx * nx) / (1 + nx * nx));

    const Function ex = expectation(x, dual);
    out.contractivity = std::max(out.contractivity, sup_norm(ex) - nx);

    const Function exx = expectation(xx, dual);
    double emin = 0.0, eimag = 0.0, emax = 0.0;
    for (const auto& c : exx) {
      emin = std::min(emin, c.real());
      eimag = std::max(eimag, std::abs(c.imag()));
      emax = std::max(emax, std::abs(c));
    }
    out.expectation_min = std::min(out.expectation_min, emin);
    out.expectation_imag = std::max(out.expectation_imag, eimag);
    double xmax = 0.0;
    for (const auto& [t, f] : x.terms) xmax = std::max(xmax, sup_norm(f));
    if (emax <= 1e-12 && xmax > 1e-6) ++out.faithfulness_failures;
  }
  return out;
}

BundleAxiomReport bundle_axiom_report(const DualSystem& dual, std::size_t trials, Rng& rng, double tol) {
  constexpr std::size_t kWitnesses = 8;
  BundleAxiomReport r;
  r.trials = trials;
  r.tolerance = tol;
  const auto elems = dual.elements();
  const GroupSpec& G = dual.group();
  if (elems.empty()) return r;
  std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);

  auto note = [&](const char* axiom, double excess, const GroupElement& s, const GroupElement& t, std::size_t trial) {
    if (!(excess > tol)) return;
    r.worst[axiom] = std::max(r.worst[axiom], excess);
    if (r.counts[axiom]++ < kWitnesses) r.witnesses.push_back({axiom, G.format(s), G.format(t), trial, excess});
  };

  for (std::size_t k = 0; k < trials; ++k) {
    const GroupElement& s = elems[pick(rng)];
    const GroupElement& t = elems[pick(rng)];
    // Every tenth trial uses the zero element of the first fiber.
    Function a = k % 10 == 9 ? Function(dual.size(), 0.0) : random_function(dual.support(s), dual.size(), rng);
    const Function b = random_function(dual.support(t), dual.size(), rng);
    const FiberElement fa{s, a};
    const FiberElement fb{t, b};
    const double na = sup_norm(a);
    const double nb = sup_norm(b);

    if (dual.covers(G.multiply(s, t))) {
      const double nab = sup_norm(dual.fiber_product(fa, fb).coeffs);
      note("submultiplicativity", nab - na * nb, s, t, k);
    }
    if (!dual.covers(G.inverse(s))) continue;
    const FiberElement as = dual.fiber_adjoint(fa);
    note("adjoint_isometry", std::abs(sup_norm(as.coeffs) - na), s, s, k);
    const FiberElement ass = dual.fiber_adjoint(as);
    Function diff = ass.coeffs;
    for (std::size_t z = 0; z < diff.size(); ++z) diff[z] -= a[z];
    note("involution", ass.t == s ? sup_norm(diff) : 1.0, s, s, k);
    const FiberElement asa = dual.fiber_product(as, fa);
    note("c_star_identity", std::abs(sup_norm(asa.coeffs) - na * na), s, s, k);
    double neg = 0.0;
    for (const auto& c : asa.coeffs) neg = std::max({neg, -c.real(), std::abs(c.imag())});
    note("positivity", neg, s, s, k);
  }
  std::sort(r.witnesses.begin(), r.witnesses.end());
  return r;
}

DefectReport mf_defect_report(const FiberFamily& family, const DualSystem& dual, const std::vector<FiberElement>& sample) {
  const GroupSpec& G = dual.group();
  DefectReport r;
  r.entries["pi_defect"] = DefectEntry{};
  std::vector<ComplexMatrix> images;
  images.reserve(sample.size());
  for (const auto& b : sample) images.push_back(apply_fiber(family, b));

  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& b = sample[i];
    const std::string name = G.format(b.t);
    r.update("isometry_gap", std::abs(op_norm(images[i]) - sup_norm(b.coeffs)), name, name, static_cast<int>(i));
    const GroupElement tinv = G.inverse(b.t);
    if (family.count(tinv) && dual.covers(tinv)) {
      const FiberElement bs = dual.fiber_adjoint(b);
      r.update("selfadjoint", distance(images[i].adjoint(), apply_fiber(family, bs)), name, name, static_cast<int>(i));
    } else {
      r.skipped.emplace_back(name, G.format(tinv));
    }
  }
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < sample.size(); ++j) {
      const GroupElement st = G.multiply(sample[i].t, sample[j].t);
      if (!family.count(st) || !dual.covers(st)) {
        r.skipped.emplace_back(G.format(sample[i].t), G.format(sample[j].t));
        continue;
      }
      const FiberElement ab = dual.fiber_product(sample[i], sample[j]);
      r.update("pi_defect", distance(images[i] * images[j], apply_fiber(family, ab)), G.format(sample[i].t),
               G.format(sample[j].t), static_cast<int>(i));
    }
  return r;
}

}  // namespace parfell
