#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parfell/group.hpp"
#include "parfell/partial_action.hpp"

namespace parfell {

/// Binary points x over the coordinates t_0 = e, t_1, ..., t_N (ball order)
/// with x(t_0) = 1. Point p stores x(t_k) in bit k - 1, so there are 2^N.
class BernoulliWindow {
 public:
  static constexpr std::size_t kMaxDepth = 24;

  BernoulliWindow(GroupSpec group, std::size_t depth);

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t depth() const noexcept { return coords_.size() - 1; }
  const std::vector<GroupElement>& coords() const noexcept { return coords_; }
  std::size_t point_count() const noexcept { return std::size_t{1} << depth(); }
  /// Index k with t_k = g, or -1.
  int coord_index(const GroupElement& g) const;
  /// x(t_k) for the window point p.
  int value(std::size_t p, std::size_t k) const { return k == 0 ? 1 : static_cast<int>((p >> (k - 1)) & 1U); }

 private:
  GroupSpec group_;
  std::vector<GroupElement> coords_;
};

/// sum_{k=1..N} 2^-k |x(t_k) - y(t_k)|.
double metric(const BernoulliWindow& w, std::size_t x, std::size_t y);

/// The shift theta_t truncated to the window: U_t = {x : x(e) = x(t) = 1} and
/// theta_t(x)(t_k) = x(t^-1 t_k) where t^-1 t_k lies in the window.
struct TruncatedShift {
  GroupElement t;
  std::vector<std::size_t> domain;  // U_t, ascending
  std::vector<int> source;          // source[k] = index of t^-1 t_k, or -1
};

struct TruncatedBernoulli {
  BernoulliWindow window;
  std::map<GroupElement, TruncatedShift> shifts;

  /// theta_t(x) on the window coordinates it determines (-1 elsewhere).
  /// Requires x in U_{t^-1}.
  std::vector<int> apply(const GroupElement& t, std::size_t x) const;
};

/// Shifts for every t with t and t^-1 in the window, or only for `requested`
/// (UndeclaredElement when one of them is not representable).
TruncatedBernoulli build_truncated_bernoulli(const GroupSpec& group, std::size_t depth,
                                             const std::vector<GroupElement>& requested = {});

/// The finite model attached to phi: G -> Gamma. Z = {z in {0,1}^Gamma : z(e) = 1}
/// with V_gamma = {z(e) = z(gamma) = 1}, eta_gamma(z)(g) = z(gamma^-1 g), and
/// rho(z)(g) = z(phi(g)). G acts through eta_{phi(t)}.
class QuotientApprox {
 public:
  static constexpr std::size_t kMaxTarget = 16;

  QuotientApprox(BernoulliWindow window, GroupHom hom);

  const BernoulliWindow& window() const noexcept { return window_; }
  const GroupHom& hom() const noexcept { return hom_; }
  /// The partial action of Gamma on Z.
  const FinitePartialAction& action() const noexcept { return action_; }
  std::size_t size() const noexcept { return action_.size(); }
  /// z as a bit mask over the elements of Gamma (bit 0 always set).
  std::uint32_t point(std::size_t z) const { return (static_cast<std::uint32_t>(z) << 1) | 1U; }
  std::size_t index_of(std::uint32_t mask) const { return mask >> 1; }

  /// rho(z)(g) = z(phi(g)) for any g in G.
  int rho_value(std::size_t z, const GroupElement& g) const;
  /// rho(z) restricted to the window, as a window point index.
  std::size_t rho_window(std::size_t z) const;
  /// eta_t for t in G, i.e. eta_{phi(t)}.
  PartialMap eta(const GroupElement& t) const;
  std::vector<int> domain(const GroupElement& t) const;

 private:
  BernoulliWindow window_;
  GroupHom hom_;
  FinitePartialAction action_;
};

inline QuotientApprox quotient_approximation(const BernoulliWindow& window, const GroupHom& hom) {
  return QuotientApprox(window, hom);
}

struct EquivarianceCheck {
  std::size_t elements_checked = 0;
  std::size_t coordinates_checked = 0;
  /// Points where rho(V_t) ⊆ U_t or rho^-1(U_t) ⊆ V_t fails.
  std::size_t domain_mismatches = 0;
  /// Coordinates where rho(eta_t(z)) and theta_t(rho(z)) differ.
  std::size_t value_mismatches = 0;

  std::size_t defect() const noexcept { return domain_mismatches + value_mismatches; }
};

/// Strict equivariance of rho, exactly, for t in `elements`, comparing points
/// of {0,1}^G on the coordinates ball(coord_radius).
EquivarianceCheck check_strict_equivariance(const QuotientApprox& q, const std::vector<GroupElement>& elements,
                                            std::size_t coord_radius);

struct RfdCertificate {
  bool valid = false;
  std::string reason;
  double delta = 0.0;
  std::size_t depth = 0;          // N
  double tail_bound = 0.0;        // 2^-N
  double window_distance = 0.0;   // max over x of metric(rho(z_x), x) on the window
  double density_bound = 0.0;     // window_distance + tail_bound
  std::optional<GroupHom> hom;
  std::string target;             // description of Gamma
  bool action_valid = false;
  std::size_t equivariance_defect = 0;
  std::size_t points_checked = 0;     // window points
  std::size_t quotient_points = 0;    // |Z|
  std::size_t candidates_tried = 0;
};

/// Smallest N >= 0 with 2^-N < delta. Throws PreconditionError for delta <= 0.
std::size_t depth_for(double delta);

/// True when phi(t_k) != e for k >= 1 and phi is injective on t_0..t_N.
bool separates_window(const GroupHom& hom, const BernoulliWindow& window);

/// Re-runs the quotient construction, action validation, strict equivariance
/// and the z_x density enumeration for a given hom.
RfdCertificate verify_rfd(const BernoulliWindow& window, const GroupHom& hom, double delta, std::size_t jobs = 1);

/// Searches the trivial group, Z/n (n = 2..12), Z/a x Z/b (ab <= 16) and then
/// `extra` for the first hom separating the window, enumerating generator
/// images lexicographically; `hom` skips the search.
RfdCertificate certify_rfd(const GroupSpec& group, double delta, const std::optional<GroupHom>& hom = std::nullopt,
                           const std::vector<GroupSpec>& extra = {}, std::size_t jobs = 1);

/// Function of finitely many coordinates: f(x) = table[sum_i x(coords[i]) 2^i].
struct CylinderFunction {
  std::string name;
  std::vector<GroupElement> coords;
  std::vector<double> table;

  static CylinderFunction constant(double c);
  /// Indicator of {x : x(g) = 1}.
  static CylinderFunction indicator(const GroupElement& g, std::string name = {});
};

struct MeasureApprox {
  std::vector<double> values;  // mu(f) per test function
  /// |mu(alpha_s f) - mu(f)| per (test function, s).
  std::vector<std::map<GroupElement, double>> defects;
  double normalization = 0.0;  // mu(1)
  bool positive = true;        // mu(f) >= 0 whenever f >= 0
};

/// mu(f) = (1/|Z|) sum_z f(rho(z)); invariance defects compare
/// sum_{z in V_s} f(theta_{s^-1}(rho(z))) with sum_{z in V_{s^-1}} f(rho(z)).
/// Coordinates must lie in the window (PreconditionError otherwise).
MeasureApprox invariant_measure_approx(const QuotientApprox& q, const std::vector<CylinderFunction>& tests,
                                       const std::vector<GroupElement>& elements);

}  // namespace parfell
