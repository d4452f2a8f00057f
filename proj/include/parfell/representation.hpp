#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parfell/group.hpp"
#include "parfell/matrix.hpp"
#include "parfell/partial_action.hpp"

namespace parfell {

/// Matrices v_t for a finite set of group elements; v_e is the identity.
struct PartialRepFamily {
  GroupSpec group;
  std::size_t dim = 0;
  std::map<GroupElement, ComplexMatrix> v;

  bool has(const GroupElement& t) const { return v.count(t) != 0; }
  /// Throws UndeclaredElement.
  const ComplexMatrix& at(const GroupElement& t) const;
  std::vector<GroupElement> elements() const;
};

/// A pair (phi, v) on the dual system of a finite partial action. phi is
/// given by its values on the indicator functions delta_z.
struct CovariantRep {
  std::vector<ComplexMatrix> phi;
  PartialRepFamily v;
  DualSystem dual;

  std::size_t dim() const noexcept { return v.dim; }
  ComplexMatrix phi_of(const Function& f) const;
};

struct DefectEntry {
  double value = 0.0;
  std::string s;
  std::string t;
  int point = -1;
};

/// Named defect functionals. Every report carries the six standard entries;
/// certificates add "pi_defect" and "distance_bound".
struct DefectReport {
  std::map<std::string, DefectEntry> entries;
  /// (s, t) pairs left out because a needed product was not available.
  std::vector<std::pair<std::string, std::string>> skipped;

  DefectReport();
  double value(const std::string& name) const;
  double max() const;
  /// Raises the entry when `value` is strictly larger, so the first witness
  /// in scan order is kept on ties.
  void update(const std::string& name, double value, const std::string& s, const std::string& t, int point = -1);
  void merge(const DefectReport& other);
};

inline const char* const kDefectNames[] = {"selfadjoint",      "triple_product", "covariance",
                                           "isometry_gap",     "commuting_ranges", "intertwine"};

/// phi(delta_z) = e_zz and v_t = sum over z in V_{t^-1} of e_{eta_t(z), z}.
/// The family covers `elements` (defaults: every element of a finite group,
/// ball(2 * radius) for a free group) so products of checked pairs exist.
CovariantRep std_covariant_rep(const FinitePartialAction& action, std::size_t radius = kDefaultRadius);
CovariantRep std_covariant_rep(const FinitePartialAction& action, const std::vector<GroupElement>& elements);

/// selfadjoint ‖v_t* - v_{t^-1}‖, triple_product ‖v_{s^-1}v_sv_t - v_{s^-1}v_st‖,
/// commuting_ranges ‖e_se_t - e_te_s‖, intertwine ‖v_se_t - e_st v_s‖ and
/// isometry_gap ‖v_tv_t*v_t - v_t‖, maximised over s, t in `elements`.
/// Throws PreconditionError unless v_e is the identity.
DefectReport partial_rep_defects(const PartialRepFamily& v, const std::vector<GroupElement>& elements,
                                 std::size_t jobs = 1);

/// covariance: max ‖v_t phi(delta_z) v_t* - phi(alpha_t(delta_z))‖ over z in
/// V_{t^-1}; pi_defect: how far phi is from a *-homomorphism on indicators.
DefectReport covariance_defects(const CovariantRep& rep, const std::vector<GroupElement>& elements);

/// Partial-isometry correction of an approximate family.
struct PerturbationCertificate {
  double eta = 0.0;
  double norm_constant = 0.0;  // C = max ‖phi(a)‖ over tested a
  std::map<GroupElement, double> distance;  // ‖u_t - v_t‖
  double max_distance = 0.0;
  double max_isometry_defect = 0.0;  // ‖u_tu_t*u_t - u_t‖
  double adjoint_defect = 0.0;       // ‖u_t* - u_{t^-1}‖
  double triple_defect = 0.0;
  std::optional<double> covariance_defect;
  std::size_t skipped_pairs = 0;

  double distance_bound() const { return 10 * eta; }
  double adjoint_bound() const { return 21 * eta; }
  double triple_bound() const { return 51 * eta; }
  double covariance_bound() const { return 21 * eta * (1 + norm_constant); }
  /// Every bound holds and each u_t is a partial isometry to 1e-10.
  bool holds() const;
};

struct PerturbationResult {
  PartialRepFamily u;
  PerturbationCertificate certificate;
};

/// q = v*v, p = nearest projection to q, w = vp, x = (w*w)^{-1/2} in pM_dp,
/// u = wx, for each t. Requires 0 < eta < 1/8, ‖v_tv_t*v_t - v_t‖ < 2 eta and
/// ‖v_t‖ <= 1 + eta (PreconditionError otherwise). When `rep` is given its
/// phi and dual are used for the covariance bound.
PerturbationResult perturb_to_partial_isometries(const PartialRepFamily& v, double eta,
                                                 const CovariantRep* rep = nullptr);

/// A linear map from each fiber C_0(V_t) into M_d, given on the indicators:
/// maps.at(t)[z] is the image of delta_z nu_t (zero for z outside V_t).
using FiberFamily = std::map<GroupElement, std::vector<ComplexMatrix>>;

ComplexMatrix apply_fiber(const FiberFamily& family, const FiberElement& b);

/// out_t(b) = (phi_t(b) + phi_{t^-1}(b*)*) / 2.
FiberFamily symmetrize(const FiberFamily& family, const DualSystem& dual);

/// pi_t(a nu_t) = phi(a) v_t.
FiberFamily induced_family(const CovariantRep& rep);

struct CovariantPair {
  std::vector<ComplexMatrix> phi;
  PartialRepFamily v;
};

/// phi(a) = family_e(a nu_e) and v(t) = family_t(p_t nu_t).
CovariantPair bundle_rep_to_covariant(const FiberFamily& family, const DualSystem& dual);

/// Finite system read off a covariant matrix representation.
struct ExtractedSystem {
  FinitePartialAction action;
  /// Character index -> source point it evaluates to 1 on.
  std::vector<int> rho;
  std::vector<std::size_t> multiplicity;
  /// Spectral projection of each character.
  std::vector<ComplexMatrix> projections;
};

inline constexpr double kCharacterTolerance = 1e-7;

/// Joint spectral decomposition of phi(delta_x), then eta_t from
/// v_t E v_t* on the spectral projections. Throws PreconditionError when the
/// images do not commute or do not sum to the identity, NumericalError when
/// characters cannot be told apart.
ExtractedSystem extract_finite_system(const CovariantRep& rep);

}  // namespace parfell
