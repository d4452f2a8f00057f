#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "parfell/group.hpp"

namespace parfell {

using Complex = std::complex<double>;
/// A function on a finite set {0, ..., n-1}.
using Function = std::vector<Complex>;

/// Partial map on {0, ..., n-1}; image[z] < 0 means z is outside the domain.
struct PartialMap {
  std::vector<int> image;

  static PartialMap identity(std::size_t n);
  static PartialMap empty(std::size_t n) { return PartialMap{std::vector<int>(n, -1)}; }

  std::size_t size() const noexcept { return image.size(); }
  bool defined(int z) const { return image.at(static_cast<std::size_t>(z)) >= 0; }
  int operator()(int z) const { return image.at(static_cast<std::size_t>(z)); }

  std::vector<int> domain() const;
  std::vector<int> range() const;
  bool injective() const;
  /// Inverse of an injective map.
  PartialMap inverse() const;
  /// (*this) after `inner`, defined where both steps are.
  PartialMap after(const PartialMap& inner) const;

  friend bool operator==(const PartialMap&, const PartialMap&) = default;
};

/// Data of one declared element t: the set V_t and the map eta_t: V_{t^-1} -> V_t.
struct ElementData {
  std::vector<int> domain;
  PartialMap map;
};

/// A partial action of a group on Z = {0, ..., n-1}.
///
/// Finite groups declare every element (the identity may be omitted). Free
/// groups declare generators and optionally their inverses; a missing inverse
/// is derived from an injective generator map. Other words act by composing
/// generator maps along the reduced word.
class FinitePartialAction {
 public:
  /// Structural checks only (indices, sizes, declared set); axioms are left
  /// to validate(). Throws MalformedInput.
  FinitePartialAction(GroupSpec group, std::size_t n, std::map<GroupElement, ElementData> data);

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return n_; }
  const std::map<GroupElement, ElementData>& declared() const noexcept { return data_; }

  /// eta_g as a partial bijection. Throws UndeclaredElement for finite groups
  /// when g is not declared.
  PartialMap element_map(const GroupElement& g) const;
  /// V_g: declared set when available, otherwise the range of element_map(g).
  std::vector<int> domain_of(const GroupElement& g) const;

  /// Elements a check of the given radius ranges over.
  std::vector<GroupElement> check_elements(std::size_t radius) const;

 private:
  GroupSpec group_;
  std::size_t n_;
  std::map<GroupElement, ElementData> data_;
};

PartialMap element_map(const FinitePartialAction& action, const GroupElement& g);

struct Violation {
  std::string axiom;
  std::string s;
  std::string t;
  int point = -1;
  std::string detail;

  friend auto operator<=>(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::size_t elements_checked = 0;
  std::size_t pairs_checked = 0;
  /// Total violations per axiom (witness lists are capped).
  std::map<std::string, std::size_t> counts;
  std::vector<Violation> witnesses;

  bool valid() const noexcept { return counts.empty(); }
};

inline constexpr std::size_t kDefaultRadius = 3;

/// Checks the partial-action axioms over check_elements(radius): eta_e = id,
/// bijectivity with eta_{t^-1} = eta_t^-1, composition containment, and the
/// derived identities eta_s(V_{s^-1} ∩ V_t) = V_s ∩ V_st and
/// eta_{s^-1} eta_s eta_t = eta_{s^-1} eta_st.
ValidationReport validate(const FinitePartialAction& action, std::size_t radius = kDefaultRadius,
                          std::size_t jobs = 1);

/// Element of the fiber C_0(V_t) of the bundle attached to a dual system.
struct FiberElement {
  GroupElement t;
  Function coeffs;
};

/// The dual partial action alpha_t(f) = f ∘ eta_{t^-1} on functions over Z,
/// tabulated for a finite set of group elements.
class DualSystem {
 public:
  struct Entry {
    std::vector<int> support;  // V_t
    PartialMap eta;            // eta_t: V_{t^-1} -> V_t
  };

  DualSystem(GroupSpec group, std::size_t n, std::map<GroupElement, Entry> entries);

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return n_; }
  bool covers(const GroupElement& t) const { return entries_.count(t) != 0; }
  std::vector<GroupElement> elements() const;
  const Entry& entry(const GroupElement& t) const;
  const std::vector<int>& support(const GroupElement& t) const { return entry(t).support; }

  /// Indicator of V_t.
  Function unit(const GroupElement& t) const;
  Function indicator(int z) const;
  /// alpha_t(f) for f supported in the domain of eta_t; the image of delta_z
  /// is delta_{eta_t(z)}. Throws PreconditionError for f outside the domain.
  Function alpha(const GroupElement& t, const Function& f) const;
  bool supported_in(const Function& f, const GroupElement& t) const;

  /// Bundle operations: (a v_s)(b v_t) = alpha_s(alpha_{s^-1}(a) b) v_st and
  /// (a v_t)^* = alpha_{t^-1}(a^*) v_{t^-1}; the norm is the sup-norm.
  FiberElement fiber_product(const FiberElement& a, const FiberElement& b) const;
  FiberElement fiber_adjoint(const FiberElement& a) const;

 private:
  GroupSpec group_;
  std::size_t n_;
  std::map<GroupElement, Entry> entries_;
};

/// Tabulates the dual system; finite groups use every element, free groups
/// ball(radius).
DualSystem dualize(const FinitePartialAction& action, std::size_t radius = kDefaultRadius);
DualSystem dualize(const FinitePartialAction& action, const std::vector<GroupElement>& elements);

double sup_norm(const Function& f);

/// A point map rho: Z -> X between two partial actions of the same group.
struct EquivariantMap {
  FinitePartialAction source;  // on Z
  FinitePartialAction target;  // on X
  std::vector<int> rho;
};

struct EquivarianceReport {
  std::size_t elements_checked = 0;
  std::map<std::string, std::size_t> counts;
  std::vector<Violation> witnesses;

  bool ok() const noexcept { return counts.empty(); }
};

/// Checks rho(V_t) ⊆ U_t, rho(eta_t(z)) = theta_t(rho(z)) on V_{t^-1}, and when
/// `strict` also rho^{-1}(U_t) ⊆ V_t, for every t in check_elements(radius).
EquivarianceReport check_equivariance(const EquivariantMap& map, std::size_t radius = kDefaultRadius,
                                      bool strict = true);

/// True when `bijection` maps Z_a onto Z_b and intertwines every eta_t
/// (including domains) over the given elements.
bool is_isomorphism(const FinitePartialAction& a, const FinitePartialAction& b, const std::vector<int>& bijection,
                    const std::vector<GroupElement>& elements);

}  // namespace parfell
