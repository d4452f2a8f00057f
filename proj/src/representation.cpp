#include "parfell/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parfell/error.hpp"
#include "parfell/parallel.hpp"

namespace parfell {

const ComplexMatrix& PartialRepFamily::at(const GroupElement& t) const {
  auto it = v.find(t);
  if (it == v.end()) throw UndeclaredElement("family has no matrix for '" + group.format(t) + "'");
  return it->second;
}

std::vector<GroupElement> PartialRepFamily::elements() const {
  std::vector<GroupElement> out;
  out.reserve(v.size());
  for (const auto& [t, m] : v) out.push_back(t);
  return out;
}

ComplexMatrix CovariantRep::phi_of(const Function& f) const {
  if (f.size() != phi.size()) throw MalformedInput("function length does not match phi");
  ComplexMatrix out(dim(), dim());
  for (std::size_t z = 0; z < f.size(); ++z)
    if (f[z] != 0.0) out.add_scaled(f[z], phi[z]);
  return out;
}

DefectReport::DefectReport() {
  for (const char* name : kDefectNames) entries[name] = DefectEntry{};
}

double DefectReport::value(const std::string& name) const {
  auto it = entries.find(name);
  return it == entries.end() ? 0.0 : it->second.value;
}

double DefectReport::max() const {
  double m = 0.0;
  for (const auto& [name, e] : entries) m = std::max(m, e.value);
  return m;
}

void DefectReport::update(const std::string& name, double value, const std::string& s, const std::string& t, int point) {
  auto& e = entries[name];
  if (value > e.value) e = DefectEntry{value, s, t, point};
}

void DefectReport::merge(const DefectReport& other) {
  for (const auto& [name, e] : other.entries) update(name, e.value, e.s, e.t, e.point);
  skipped.insert(skipped.end(), other.skipped.begin(), other.skipped.end());
}

namespace {

std::vector<GroupElement> default_rep_elements(const FinitePartialAction& action, std::size_t radius) {
  if (action.group().is_finite()) return action.group().elements();
  return ball(action.group(), 2 * std::max<std::size_t>(radius, 1));
}

void require_identity_at_e(const PartialRepFamily& v) {
  const GroupElement e = v.group.identity();
  if (!v.has(e)) throw PreconditionError("family has no matrix for e");
  if (distance(v.at(e), ComplexMatrix::identity(v.dim)) > 1e-9) throw PreconditionError("family has v_e != identity");
}

}  // namespace

CovariantRep std_covariant_rep(const FinitePartialAction& action, std::size_t radius) {
  return std_covariant_rep(action, default_rep_elements(action, radius));
}

CovariantRep std_covariant_rep(const FinitePartialAction& action, const std::vector<GroupElement>& elements) {
  const std::size_t n = action.size();
  const GroupSpec& G = action.group();
  std::vector<GroupElement> elems = elements;
  elems.push_back(G.identity());
  for (const auto& t : elements) elems.push_back(G.inverse(t));
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());

  std::vector<ComplexMatrix> phi;
  phi.reserve(n);
  for (std::size_t z = 0; z < n; ++z) phi.push_back(ComplexMatrix::unit(z, z, n));

  PartialRepFamily v{G, n, {}};
  for (const auto& t : elems) {
    const PartialMap eta = action.element_map(t);
    ComplexMatrix m(n, n);
    for (std::size_t z = 0; z < n; ++z)
      if (eta.image[z] >= 0) m(static_cast<std::size_t>(eta.image[z]), z) = 1.0;
    v.v.emplace(t, std::move(m));
  }
  return CovariantRep{std::move(phi), std::move(v), dualize(action, elems)};
}

DefectReport partial_rep_defects(const PartialRepFamily& v, const std::vector<GroupElement>& elements, std::size_t jobs) {
  require_identity_at_e(v);
  const GroupSpec& G = v.group;

  std::map<GroupElement, ComplexMatrix> range;
  auto range_of = [&](const GroupElement& t) -> const ComplexMatrix& { return range.at(t); };
  for (const auto& [t, m] : v.v) range.emplace(t, m * m.adjoint());

  std::vector<std::string> names;
  names.reserve(elements.size());
  for (const auto& t : elements) names.push_back(G.format(t));

  std::vector<DefectReport> parts(elements.size());
  parallel_for(elements.size(), jobs, [&](std::size_t i) {
    DefectReport& r = parts[i];
    const GroupElement& s = elements[i];
    const ComplexMatrix& vs = v.at(s);
    const GroupElement sinv = G.inverse(s);
    r.update("isometry_gap", distance(vs * vs.adjoint() * vs, vs), names[i], names[i]);
    if (v.has(sinv))
      r.update("selfadjoint", distance(vs.adjoint(), v.at(sinv)), names[i], names[i]);
    else
      r.skipped.emplace_back(names[i], G.format(sinv));
    for (std::size_t j = 0; j < elements.size(); ++j) {
      const GroupElement& t = elements[j];
      const ComplexMatrix& vt = v.at(t);
      r.update("commuting_ranges", distance(range_of(s) * range_of(t), range_of(t) * range_of(s)), names[i], names[j]);
      const GroupElement st = G.multiply(s, t);
      if (!v.has(st) || !v.has(sinv)) {
        r.skipped.emplace_back(names[i], names[j]);
        continue;
      }
      const ComplexMatrix& vsinv = v.at(sinv);
      const ComplexMatrix left = vsinv * vs;
      r.update("triple_product", distance(left * vt, vsinv * v.at(st)), names[i], names[j]);
      r.update("intertwine", distance(vs * range_of(t), range_of(st) * vs), names[i], names[j]);
    }
  });
  DefectReport out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

DefectReport covariance_defects(const CovariantRep& rep, const std::vector<GroupElement>& elements) {
  const GroupSpec& G = rep.v.group;
  const std::size_t n = rep.phi.size();
  DefectReport r;
  r.entries["pi_defect"] = DefectEntry{};
  for (std::size_t z = 0; z < n; ++z) {
    const ComplexMatrix& pz = rep.phi[z];
    r.update("pi_defect", distance(pz.adjoint(), pz), "", "", static_cast<int>(z));
    for (std::size_t w = 0; w < n; ++w) {
      ComplexMatrix expect = z == w ? pz : ComplexMatrix(pz.rows(), pz.cols());
      r.update("pi_defect", distance(pz * rep.phi[w], expect), "", "", static_cast<int>(z));
    }
  }
  for (const auto& t : elements) {
    const std::string name = G.format(t);
    if (!rep.v.has(t) || !rep.dual.covers(t)) {
      r.skipped.emplace_back("", name);
      continue;
    }
    const ComplexMatrix& vt = rep.v.at(t);
    const ComplexMatrix vt_adj = vt.adjoint();
    const PartialMap& eta = rep.dual.entry(t).eta;
    for (std::size_t z = 0; z < n; ++z) {
      if (eta.image[z] < 0) continue;
      const ComplexMatrix lhs = vt * rep.phi[z] * vt_adj;
      r.update("covariance", distance(lhs, rep.phi[static_cast<std::size_t>(eta.image[z])]), "", name, static_cast<int>(z));
    }
  }
  return r;
}

bool PerturbationCertificate::holds() const {
  bool ok = max_isometry_defect <= 1e-10 && max_distance < distance_bound() && adjoint_defect < adjoint_bound() &&
            triple_defect < triple_bound();
  if (covariance_defect) ok = ok && *covariance_defect < covariance_bound();
  return ok;
}

PerturbationResult perturb_to_partial_isometries(const PartialRepFamily& v, double eta, const CovariantRep* rep) {
  if (!(eta > 0.0 && eta < 0.125)) throw PreconditionError("eta must satisfy 0 < eta < 1/8");
  const GroupSpec& G = v.group;
  for (const auto& [t, m] : v.v) {
    if (m.rows() != v.dim || m.cols() != v.dim) throw MalformedInput("family matrix has wrong size");
    const double gap = is_partial_isometry(m, 0.0).defect;
    if (!(gap < 2 * eta))
      throw PreconditionError("‖v_t v_t* v_t - v_t‖ >= 2 eta at t = " + G.format(t));
    if (op_norm(m) > 1 + eta + 1e-12) throw PreconditionError("‖v_t‖ > 1 + eta at t = " + G.format(t));
  }

  PerturbationResult res{PartialRepFamily{G, v.dim, {}}, {}};
  auto& cert = res.certificate;
  cert.eta = eta;
  for (const auto& [t, m] : v.v) {
    ComplexMatrix u;
    if (is_partial_isometry(m, 0.0).defect <= 1e-13) {
      u = m;
    } else {
      const ComplexMatrix q = m.adjoint() * m;
      const ComplexMatrix p = nearest_projection(0.5 * (q + q.adjoint()));
      const ComplexMatrix w = m * p;
      u = w * corner_inv_sqrt(w, p);
    }
    const double dist = distance(u, m);
    cert.distance[t] = dist;
    cert.max_distance = std::max(cert.max_distance, dist);
    cert.max_isometry_defect = std::max(cert.max_isometry_defect, is_partial_isometry(u, 0.0).defect);
    res.u.v.emplace(t, std::move(u));
  }

  const auto& U = res.u;
  for (const auto& [t, ut] : U.v) {
    const GroupElement tinv = G.inverse(t);
    if (U.has(tinv)) cert.adjoint_defect = std::max(cert.adjoint_defect, distance(ut.adjoint(), U.at(tinv)));
  }
  for (const auto& [s, us] : U.v) {
    const GroupElement sinv = G.inverse(s);
    if (!U.has(sinv)) {
      cert.skipped_pairs += U.v.size();
      continue;
    }
    const ComplexMatrix left = U.at(sinv) * us;
    for (const auto& [t, ut] : U.v) {
      const GroupElement st = G.multiply(s, t);
      if (!U.has(st)) {
        ++cert.skipped_pairs;
        continue;
      }
      cert.triple_defect = std::max(cert.triple_defect, distance(left * ut, U.at(sinv) * U.at(st)));
    }
  }
  if (rep) {
    for (const auto& p : rep->phi) cert.norm_constant = std::max(cert.norm_constant, op_norm(p));
    CovariantRep perturbed{rep->phi, U, rep->dual};
    cert.covariance_defect = covariance_defects(perturbed, U.elements()).value("covariance");
  }
  return res;
}

ComplexMatrix apply_fiber(const FiberFamily& family, const FiberElement& b) {
  auto it = family.find(b.t);
  if (it == family.end()) throw UndeclaredElement("fiber family has no map at this element");
  const auto& maps = it->second;
  if (maps.size() != b.coeffs.size()) throw MalformedInput("fiber element has wrong length");
  if (maps.empty()) return {};
  ComplexMatrix out(maps[0].rows(), maps[0].cols());
  for (std::size_t z = 0; z < maps.size(); ++z)
    if (b.coeffs[z] != 0.0) out.add_scaled(b.coeffs[z], maps[z]);
  return out;
}

FiberFamily symmetrize(const FiberFamily& family, const DualSystem& dual) {
  const GroupSpec& G = dual.group();
  FiberFamily out;
  for (const auto& [t, maps] : family) {
    const GroupElement tinv = G.inverse(t);
    auto other = family.find(tinv);
    if (other == family.end()) throw PreconditionError("element set is not inverse-closed at '" + G.format(t) + "'");
    const PartialMap& back = dual.entry(tinv).eta;  // V_t -> V_{t^-1}
    std::vector<ComplexMatrix> sym;
    sym.reserve(maps.size());
    for (std::size_t z = 0; z < maps.size(); ++z) {
      const ComplexMatrix& a = maps[z];
      if (back.image[z] < 0) {
        sym.emplace_back(a.rows(), a.cols());
        continue;
      }
      const ComplexMatrix& b = other->second.at(static_cast<std::size_t>(back.image[z]));
      ComplexMatrix m(a.rows(), a.cols());
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = 0.5 * (a(i, j) + std::conj(b(j, i)));
      sym.push_back(std::move(m));
    }
    out.emplace(t, std::move(sym));
  }
  return out;
}

FiberFamily induced_family(const CovariantRep& rep) {
  FiberFamily out;
  for (const auto& t : rep.dual.elements()) {
    if (!rep.v.has(t)) continue;
    const ComplexMatrix& vt = rep.v.at(t);
    const auto& V = rep.dual.support(t);
    std::vector<ComplexMatrix> maps;
    for (std::size_t z = 0; z < rep.phi.size(); ++z) {
      if (std::binary_search(V.begin(), V.end(), static_cast<int>(z)))
        maps.push_back(rep.phi[z] * vt);
      else
        maps.emplace_back(rep.dim(), rep.dim());
    }
    out.emplace(t, std::move(maps));
  }
  return out;
}

CovariantPair bundle_rep_to_covariant(const FiberFamily& family, const DualSystem& dual) {
  const GroupSpec& G = dual.group();
  const GroupElement e = G.identity();
  auto it = family.find(e);
  if (it == family.end()) throw UndeclaredElement("fiber family has no map at e");
  std::vector<ComplexMatrix> phi = it->second;
  PartialRepFamily v{G, phi.empty() ? 0 : phi[0].rows(), {}};
  for (const auto& [t, maps] : family) {
    if (!dual.covers(t)) throw UndeclaredElement("dual system does not cover '" + G.format(t) + "'");
    v.v.emplace(t, apply_fiber(family, FiberElement{t, dual.unit(t)}));
  }
  return CovariantPair{std::move(phi), std::move(v)};
}

ExtractedSystem extract_finite_system(const CovariantRep& rep) {
  const std::size_t n = rep.phi.size();
  const std::size_t d = rep.dim();
  const GroupSpec& G = rep.v.group;
  if (n == 0) throw MalformedInput("phi has no indicator images");

  ComplexMatrix total(d, d);
  for (std::size_t x = 0; x < n; ++x) {
    const ComplexMatrix& px = rep.phi[x];
    if (px.rows() != d || px.cols() != d) throw MalformedInput("phi image has wrong size");
    if (distance(px, px.adjoint()) > kCharacterTolerance) throw PreconditionError("phi(delta_x) is not Hermitian");
    if (distance(px * px, px) > kCharacterTolerance) throw PreconditionError("phi(delta_x) is not idempotent");
    for (std::size_t y = x + 1; y < n; ++y)
      if (op_norm(commutator(px, rep.phi[y])) > kCharacterTolerance) throw PreconditionError("phi image does not commute");
    total += px;
  }
  if (distance(total, ComplexMatrix::identity(d)) > kCharacterTolerance)
    throw PreconditionError("phi(delta_x) do not sum to the identity");

  // Distinct weights separate the joint eigenspaces of the commuting family.
  ComplexMatrix h(d, d);
  for (std::size_t x = 0; x < n; ++x) h.add_scaled(static_cast<double>(x + 1), rep.phi[x]);
  const auto eig = herm_eig(0.5 * (h + h.adjoint()), 1e-7);

  std::vector<std::vector<std::size_t>> columns(n);  // eigenvectors per source point
  for (std::size_t k = 0; k < d; ++k) {
    int hit = -1;
    for (std::size_t x = 0; x < n; ++x) {
      Complex c = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) c += std::conj(eig.vectors(i, k)) * rep.phi[x](i, j) * eig.vectors(j, k);
      const double chi = c.real();
      if (std::abs(chi - 1.0) < kCharacterTolerance && std::abs(c.imag()) < kCharacterTolerance) {
        if (hit >= 0) throw NumericalError("joint eigenvector evaluates to 1 on two indicators");
        hit = static_cast<int>(x);
      } else if (std::abs(c) >= kCharacterTolerance) {
        throw NumericalError("character value is neither 0 nor 1 within 1e-7");
      }
    }
    if (hit < 0) throw NumericalError("joint eigenvector annihilated by every indicator");
    columns[static_cast<std::size_t>(hit)].push_back(k);
  }

  std::vector<int> rho;
  std::vector<std::size_t> mult;
  std::vector<ComplexMatrix> proj;
  std::vector<int> point_of_source(n, -1);
  for (std::size_t x = 0; x < n; ++x) {
    if (columns[x].empty()) continue;
    point_of_source[x] = static_cast<int>(rho.size());
    rho.push_back(static_cast<int>(x));
    mult.push_back(columns[x].size());
    ComplexMatrix e(d, d);
    for (std::size_t k : columns[x])
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) e(i, j) += eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    proj.push_back(std::move(e));
  }
  const std::size_t k = rho.size();

  std::vector<GroupElement> declared;
  if (G.is_finite()) {
    declared = G.elements();
  } else {
    for (const auto& g : G.generators()) {
      declared.push_back(g);
      declared.push_back(G.inverse(g));
    }
  }

  std::map<GroupElement, ElementData> data;
  for (const auto& t : declared) {
    if (!rep.dual.covers(t) || !rep.v.has(t) || !rep.dual.covers(G.inverse(t)))
      throw UndeclaredElement("representation does not cover '" + G.format(t) + "'");
    const auto& Vt = rep.dual.support(t);
    const auto& Vtinv = rep.dual.support(G.inverse(t));
    auto in = [](const std::vector<int>& set, int p) { return std::binary_search(set.begin(), set.end(), p); };
    ElementData ed;
    ed.map = PartialMap::empty(k);
    const ComplexMatrix& vt = rep.v.at(t);
    const ComplexMatrix vt_adj = vt.adjoint();
    for (std::size_t zeta = 0; zeta < k; ++zeta) {
      if (in(Vt, rho[zeta])) ed.domain.push_back(static_cast<int>(zeta));
      if (!in(Vtinv, rho[zeta])) continue;
      const ComplexMatrix moved = vt * proj[zeta] * vt_adj;
      std::size_t best = 0;
      double best_weight = -1.0;
      for (std::size_t cand = 0; cand < k; ++cand) {
        double w = 0.0;
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) w += (moved(i, j) * proj[cand](j, i)).real();
        if (w > best_weight) best_weight = w, best = cand;
      }
      if (distance(moved, proj[best]) > kCharacterTolerance)
        throw PreconditionError("v_t E v_t* is not a spectral projection at t = " + G.format(t));
      ed.map.image[zeta] = static_cast<int>(best);
    }
    data.emplace(t, std::move(ed));
  }
  return ExtractedSystem{FinitePartialAction(G, k, std::move(data)), std::move(rho), std::move(mult), std::move(proj)};
}

}  // namespace parfell
