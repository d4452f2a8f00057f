#include "parfell/partial_action.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "parfell/error.hpp"
#include "parfell/parallel.hpp"

namespace parfell {

PartialMap PartialMap::identity(std::size_t n) {
  PartialMap m{std::vector<int>(n)};
  std::iota(m.image.begin(), m.image.end(), 0);
  return m;
}

std::vector<int> PartialMap::domain() const {
  std::vector<int> out;
  for (std::size_t z = 0; z < image.size(); ++z)
    if (image[z] >= 0) out.push_back(static_cast<int>(z));
  return out;
}

std::vector<int> PartialMap::range() const {
  std::vector<int> out;
  for (int y : image)
    if (y >= 0) out.push_back(y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool PartialMap::injective() const {
  std::vector<bool> hit(image.size(), false);
  for (int y : image) {
    if (y < 0) continue;
    if (hit[static_cast<std::size_t>(y)]) return false;
    hit[static_cast<std::size_t>(y)] = true;
  }
  return true;
}

PartialMap PartialMap::inverse() const {
  if (!injective()) throw PreconditionError("partial map is not injective");
  PartialMap out = empty(image.size());
  for (std::size_t z = 0; z < image.size(); ++z)
    if (image[z] >= 0) out.image[static_cast<std::size_t>(image[z])] = static_cast<int>(z);
  return out;
}

PartialMap PartialMap::after(const PartialMap& inner) const {
  PartialMap out = empty(inner.size());
  for (std::size_t z = 0; z < inner.size(); ++z) {
    const int mid = inner.image[z];
    if (mid >= 0) out.image[z] = image.at(static_cast<std::size_t>(mid));
  }
  return out;
}

namespace {

bool is_letter(const GroupElement& g) { return g.is_word() && g.word().size() == 1; }

std::vector<int> image_of_set(const PartialMap& m, const std::vector<int>& set) {
  std::vector<int> out;
  for (int z : set)
    if (m.defined(z)) out.push_back(m(z));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

FinitePartialAction::FinitePartialAction(GroupSpec group, std::size_t n, std::map<GroupElement, ElementData> data)
    : group_(std::move(group)), n_(n), data_(std::move(data)) {
  if (n_ == 0) throw MalformedInput("partial action needs a nonempty set Z");
  for (auto& [t, d] : data_) {
    group_.check(t);
    if (group_.is_free() && !group_.is_identity(t) && !is_letter(t))
      throw MalformedInput("free-group actions declare only generators and their inverses, got '" + group_.format(t) + "'");
    if (d.map.size() != n_) throw MalformedInput("map of '" + group_.format(t) + "' has wrong size");
    for (int y : d.map.image)
      if (y >= static_cast<int>(n_)) throw MalformedInput("map of '" + group_.format(t) + "' leaves Z");
    std::sort(d.domain.begin(), d.domain.end());
    if (std::adjacent_find(d.domain.begin(), d.domain.end()) != d.domain.end())
      throw MalformedInput("domain of '" + group_.format(t) + "' has duplicate points");
    for (int z : d.domain)
      if (z < 0 || z >= static_cast<int>(n_)) throw MalformedInput("domain of '" + group_.format(t) + "' leaves Z");
    if (d.domain.size() != d.map.domain().size())
      throw MalformedInput("domain/map size mismatch for '" + group_.format(t) + "'");
  }
  const GroupElement e = group_.identity();
  if (!data_.count(e)) {
    ElementData id;
    id.domain.resize(n_);
    std::iota(id.domain.begin(), id.domain.end(), 0);
    id.map = PartialMap::identity(n_);
    data_.emplace(e, std::move(id));
  }
  if (group_.is_finite()) {
    for (const auto& g : group_.elements())
      if (!data_.count(g)) throw MalformedInput("finite-group action must declare element '" + group_.format(g) + "'");
  } else {
    for (const auto& g : group_.generators()) {
      const GroupElement inv = group_.inverse(g);
      for (const auto& [have, missing] : {std::pair{g, inv}, std::pair{inv, g}}) {
        if (data_.count(missing) || !data_.count(have)) continue;
        const auto& src = data_.at(have);
        if (!src.map.injective())
          throw MalformedInput("cannot derive '" + group_.format(missing) + "' from a non-injective map");
        data_.emplace(missing, ElementData{src.map.domain(), src.map.inverse()});
      }
      if (!data_.count(g)) throw MalformedInput("free-group action must declare generator '" + group_.format(g) + "'");
    }
  }
}

PartialMap FinitePartialAction::element_map(const GroupElement& g) const {
  group_.check(g);
  if (auto it = data_.find(g); it != data_.end()) return it->second.map;
  if (group_.is_finite()) throw UndeclaredElement("element '" + group_.format(g) + "' is not declared");
  PartialMap acc = PartialMap::identity(n_);
  // eta_{s1} ∘ ... ∘ eta_{sk}: the last letter acts first.
  const auto& w = g.word();
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    acc = data_.at(GroupElement::from_reduced_word({*it})).map.after(acc);
  return acc;
}

std::vector<int> FinitePartialAction::domain_of(const GroupElement& g) const {
  if (auto it = data_.find(g); it != data_.end()) return it->second.domain;
  return element_map(g).range();
}

std::vector<GroupElement> FinitePartialAction::check_elements(std::size_t radius) const {
  if (group_.is_finite()) return group_.elements();
  return ball(group_, std::max<std::size_t>(radius, 1));
}

PartialMap element_map(const FinitePartialAction& action, const GroupElement& g) { return action.element_map(g); }

namespace {

constexpr std::size_t kWitnessCap = 32;

struct Collector {
  std::map<std::string, std::size_t> counts;
  std::vector<Violation> witnesses;

  void add(Violation v) {
    if (counts[v.axiom]++ < 1024) witnesses.push_back(std::move(v));
  }

  void merge(Collector&& other) {
    for (auto& [k, c] : other.counts) counts[k] += c;
    for (auto& w : other.witnesses) witnesses.push_back(std::move(w));
  }

  // Sorted, at most kWitnessCap per axiom.
  std::vector<Violation> finish() {
    std::sort(witnesses.begin(), witnesses.end());
    std::vector<Violation> out;
    std::map<std::string, std::size_t> kept;
    for (auto& w : witnesses)
      if (kept[w.axiom]++ < kWitnessCap) out.push_back(std::move(w));
    return out;
  }
};

int first_difference(const PartialMap& a, const PartialMap& b) {
  for (std::size_t z = 0; z < a.size(); ++z)
    if (a.image[z] != b.image[z]) return static_cast<int>(z);
  return -1;
}

}  // namespace

ValidationReport validate(const FinitePartialAction& action, std::size_t radius, std::size_t jobs) {
  const GroupSpec& G = action.group();
  const std::size_t n = action.size();
  const auto elems = action.check_elements(radius);

  std::map<GroupElement, PartialMap> maps;
  std::map<GroupElement, std::vector<int>> domains;
  auto need = [&](const GroupElement& g) {
    if (!maps.count(g)) {
      maps.emplace(g, action.element_map(g));
      domains.emplace(g, action.domain_of(g));
    }
  };
  for (const auto& s : elems) {
    need(s);
    need(G.inverse(s));
    for (const auto& t : elems) need(G.multiply(s, t));
  }

  Collector single;
  for (const auto& t : elems) {
    const auto& eta = maps.at(t);
    const auto& Vt = domains.at(t);
    const GroupElement tinv = G.inverse(t);
    const std::string name = G.format(t);
    if (G.is_identity(t)) {
      const int z = first_difference(eta, PartialMap::identity(n));
      if (z >= 0 || Vt.size() != n) single.add({"identity", "", name, z, "V_e must be Z and eta_e the identity"});
    }
    bool injective = true;
    {
      std::vector<int> seen(n, -1);
      for (std::size_t z = 0; z < n; ++z) {
        const int y = eta.image[z];
        if (y < 0) continue;
        if (seen[static_cast<std::size_t>(y)] >= 0) {
          single.add({"bijection", "", name, static_cast<int>(z), "eta_" + name + " not injective"});
          injective = false;
          break;
        }
        seen[static_cast<std::size_t>(y)] = static_cast<int>(z);
      }
    }
    if (const auto range = eta.range(); range != Vt) {
      int z = -1;
      for (int p : Vt)
        if (!std::binary_search(range.begin(), range.end(), p)) { z = p; break; }
      single.add({"range", "", name, z, "eta_t does not map onto V_t"});
    }
    if (eta.domain() != domains.at(tinv)) single.add({"domain", "", name, -1, "domain of eta_t differs from V_{t^-1}"});
    if (injective) {
      const int z = first_difference(maps.at(tinv), eta.inverse());
      if (z >= 0) single.add({"inverse", "", name, z, "eta_{t^-1} differs from eta_t^-1"});
    }
  }

  std::vector<Collector> per_s(elems.size());
  parallel_for(elems.size(), jobs, [&](std::size_t i) {
    const auto& s = elems[i];
    Collector& out = per_s[i];
    const GroupElement sinv = G.inverse(s);
    const auto& eta_s = maps.at(s);
    const auto& eta_sinv = maps.at(sinv);
    const auto& Vs = domains.at(s);
    const auto& Vsinv = domains.at(sinv);
    for (const auto& t : elems) {
      const GroupElement st = G.multiply(s, t);
      const auto& eta_t = maps.at(t);
      const auto& eta_st = maps.at(st);
      const std::string sn = G.format(s), tn = G.format(t);

      const PartialMap comp = eta_s.after(eta_t);
      for (std::size_t z = 0; z < n; ++z) {
        if (comp.image[z] < 0) continue;
        if (eta_st.image[z] != comp.image[z]) {
          out.add({"composition", sn, tn, static_cast<int>(z), "eta_s eta_t not contained in eta_st"});
          break;
        }
      }
      const auto lhs = image_of_set(eta_s, intersect(Vsinv, domains.at(t)));
      const auto rhs = intersect(Vs, domains.at(st));
      if (lhs != rhs) out.add({"fact2", sn, tn, -1, "eta_s(V_{s^-1} ∩ V_t) != V_s ∩ V_st"});
      const int z3 = first_difference(eta_sinv.after(eta_s).after(eta_t), eta_sinv.after(eta_st));
      if (z3 >= 0) out.add({"fact3", sn, tn, z3, "eta_{s^-1} eta_s eta_t != eta_{s^-1} eta_st"});
    }
  });
  for (auto& c : per_s) single.merge(std::move(c));

  ValidationReport report;
  report.elements_checked = elems.size();
  report.pairs_checked = elems.size() * elems.size();
  report.counts = single.counts;
  report.witnesses = single.finish();
  return report;
}

DualSystem::DualSystem(GroupSpec group, std::size_t n, std::map<GroupElement, Entry> entries)
    : group_(std::move(group)), n_(n), entries_(std::move(entries)) {
  for (const auto& [t, e] : entries_) {
    group_.check(t);
    if (e.eta.size() != n_) throw MalformedInput("dual system entry has wrong size");
  }
}

std::vector<GroupElement> DualSystem::elements() const {
  std::vector<GroupElement> out;
  for (const auto& [t, e] : entries_) out.push_back(t);
  return out;
}

const DualSystem::Entry& DualSystem::entry(const GroupElement& t) const {
  auto it = entries_.find(t);
  if (it == entries_.end()) throw UndeclaredElement("dual system does not cover '" + group_.format(t) + "'");
  return it->second;
}

Function DualSystem::unit(const GroupElement& t) const {
  Function f(n_, 0.0);
  for (int z : support(t)) f[static_cast<std::size_t>(z)] = 1.0;
  return f;
}

Function DualSystem::indicator(int z) const {
  Function f(n_, 0.0);
  f.at(static_cast<std::size_t>(z)) = 1.0;
  return f;
}

bool DualSystem::supported_in(const Function& f, const GroupElement& t) const {
  const auto& V = support(t);
  for (std::size_t z = 0; z < f.size(); ++z)
    if (f[z] != 0.0 && !std::binary_search(V.begin(), V.end(), static_cast<int>(z))) return false;
  return true;
}

Function DualSystem::alpha(const GroupElement& t, const Function& f) const {
  if (f.size() != n_) throw MalformedInput("function has wrong length");
  const auto& eta = entry(t).eta;
  Function out(n_, 0.0);
  for (std::size_t z = 0; z < n_; ++z) {
    if (f[z] == 0.0) continue;
    if (eta.image[z] < 0)
      throw PreconditionError("alpha_" + group_.format(t) + " applied outside its domain (point " + std::to_string(z) + ")");
    out[static_cast<std::size_t>(eta.image[z])] += f[z];
  }
  return out;
}

FiberElement DualSystem::fiber_product(const FiberElement& a, const FiberElement& b) const {
  const GroupElement sinv = group_.inverse(a.t);
  Function mid = alpha(sinv, a.coeffs);
  for (std::size_t z = 0; z < n_; ++z) mid[z] *= b.coeffs.at(z);
  const GroupElement st = group_.multiply(a.t, b.t);
  entry(st);
  return {st, alpha(a.t, mid)};
}

FiberElement DualSystem::fiber_adjoint(const FiberElement& a) const {
  Function conj(a.coeffs.size());
  std::transform(a.coeffs.begin(), a.coeffs.end(), conj.begin(), [](Complex c) { return std::conj(c); });
  const GroupElement tinv = group_.inverse(a.t);
  return {tinv, alpha(tinv, conj)};
}

DualSystem dualize(const FinitePartialAction& action, const std::vector<GroupElement>& elements) {
  std::map<GroupElement, DualSystem::Entry> entries;
  for (const auto& t : elements)
    if (!entries.count(t)) entries.emplace(t, DualSystem::Entry{action.domain_of(t), action.element_map(t)});
  return DualSystem(action.group(), action.size(), std::move(entries));
}

DualSystem dualize(const FinitePartialAction& action, std::size_t radius) {
  return dualize(action, action.check_elements(radius));
}

double sup_norm(const Function& f) {
  double m = 0.0;
  for (const auto& c : f) m = std::max(m, std::abs(c));
  return m;
}

EquivarianceReport check_equivariance(const EquivariantMap& map, std::size_t radius, bool strict) {
  const auto& src = map.source;
  const auto& dst = map.target;
  if (!(src.group() == dst.group())) throw MalformedInput("equivariance check between different groups");
  if (map.rho.size() != src.size()) throw MalformedInput("rho must be defined on every point of Z");
  for (int x : map.rho)
    if (x < 0 || x >= static_cast<int>(dst.size())) throw MalformedInput("rho leaves X");

  const GroupSpec& G = src.group();
  Collector col;
  const auto elems = src.check_elements(radius);
  for (const auto& t : elems) {
    const std::string name = G.format(t);
    const auto V = src.domain_of(t);
    const auto U = dst.domain_of(t);
    const auto eta = src.element_map(t);
    const auto theta = dst.element_map(t);
    auto in = [](const std::vector<int>& set, int p) { return std::binary_search(set.begin(), set.end(), p); };
    for (std::size_t zi = 0; zi < src.size(); ++zi) {
      const int z = static_cast<int>(zi);
      const int rz = map.rho[zi];
      if (in(V, z) && !in(U, rz)) col.add({"range", "", name, z, "rho(V_t) not inside U_t"});
      if (strict && in(U, rz) && !in(V, z)) col.add({"strict", "", name, z, "rho^-1(U_t) not inside V_t"});
      if (eta.defined(z)) {
        const int lhs = map.rho[static_cast<std::size_t>(eta(z))];
        if (!theta.defined(rz) || theta(rz) != lhs)
          col.add({"intertwine", "", name, z, "rho(eta_t(z)) != theta_t(rho(z))"});
      }
    }
  }
  EquivarianceReport r;
  r.elements_checked = elems.size();
  r.counts = col.counts;
  r.witnesses = col.finish();
  return r;
}

bool is_isomorphism(const FinitePartialAction& a, const FinitePartialAction& b, const std::vector<int>& bijection,
                    const std::vector<GroupElement>& elements) {
  if (a.size() != b.size() || bijection.size() != a.size()) return false;
  std::vector<bool> hit(b.size(), false);
  for (int y : bijection) {
    if (y < 0 || y >= static_cast<int>(b.size()) || hit[static_cast<std::size_t>(y)]) return false;
    hit[static_cast<std::size_t>(y)] = true;
  }
  for (const auto& t : elements) {
    const auto ea = a.element_map(t);
    const auto eb = b.element_map(t);
    for (std::size_t z = 0; z < a.size(); ++z) {
      const int bz = bijection[z];
      if (ea.defined(static_cast<int>(z)) != eb.defined(bz)) return false;
      if (ea.defined(static_cast<int>(z)) && bijection[static_cast<std::size_t>(ea(static_cast<int>(z)))] != eb(bz))
        return false;
    }
    std::vector<int> mapped;
    for (int z : a.domain_of(t)) mapped.push_back(bijection[static_cast<std::size_t>(z)]);
    std::sort(mapped.begin(), mapped.end());
    if (mapped != b.domain_of(t)) return false;
  }
  return true;
}

}  // namespace parfell
