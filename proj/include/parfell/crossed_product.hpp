#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "parfell/matrix.hpp"
#include "parfell/partial_action.hpp"
#include "parfell/random.hpp"
#include "parfell/representation.hpp"

namespace parfell {

/// Finitely supported section x = sum_t f_t delta_t with f_t supported in V_t.
struct Section {
  std::map<GroupElement, Function> terms;

  static Section single(const GroupElement& t, Function f);
  /// f_t, or the zero function of length n when t is absent.
  Function at(const GroupElement& t, std::size_t n) const;
};

/// Throws PreconditionError when some f_t is nonzero outside V_t and
/// UndeclaredElement when t is not covered by `dual`.
void check_section(const Section& x, const DualSystem& dual);

Section section_add(const Section& x, const Section& y, Complex scale = 1.0);
Section section_mul(const Section& x, const Section& y, const DualSystem& dual);
Section section_star(const Section& x, const DualSystem& dual);

/// E(x) = x(e).
Function expectation(const Section& x, const DualSystem& dual);

/// Random section with a term at each covered element with probability 1/2.
Section random_section(const DualSystem& dual, Rng& rng);

/// Faithful matrix model of the crossed product of a finite-group partial
/// action: a delta_s maps to phi(a) v_s ⊗ lambda_s on C^n ⊗ C^m, basis index
/// point * m + group element.
class CrossedProductModel {
 public:
  static constexpr std::size_t kMaxOrder = 64;

  /// Throws PreconditionError for a free group or order above kMaxOrder, and
  /// NumericalError when the model fails the faithfulness rank check.
  explicit CrossedProductModel(const FinitePartialAction& action);

  const GroupSpec& group() const noexcept { return rep_.v.group; }
  const DualSystem& dual() const noexcept { return rep_.dual; }
  const CovariantRep& rep() const noexcept { return rep_; }
  std::size_t points() const noexcept { return rep_.phi.size(); }
  std::size_t order() const noexcept { return group().order(); }
  std::size_t dim() const noexcept { return points() * order(); }

  /// Left-regular permutation matrix, (lambda_s)_{st, t} = 1.
  ComplexMatrix lambda(const GroupElement& s) const;
  ComplexMatrix image(const Section& x) const;
  /// sum_t |V_t|
  std::size_t expected_dimension() const;

 private:
  CovariantRep rep_;
};

inline CrossedProductModel build_model(const FinitePartialAction& action) { return CrossedProductModel(action); }

double reduced_norm(const CrossedProductModel& model, const Section& x);
/// Rank of the span of the images of all basis sections delta_z delta_t.
std::size_t algebra_dimension(const CrossedProductModel& model);
/// Dimension of the commutant of the image inside the image.
std::size_t center_dimension(const CrossedProductModel& model);

struct ModelDefects {
  std::size_t pairs = 0;
  double multiplicative = 0.0;     // ‖image(xy) - image(x)image(y)‖
  double involutive = 0.0;         // ‖image(x*) - image(x)*‖
  double c_star = 0.0;             // |‖x*x‖ - ‖x‖^2| / (1 + ‖x‖^2)
  double contractivity = 0.0;      // max(0, sup|E(x)| - ‖x‖)
  double expectation_min = 0.0;    // min real part of E(x*x)
  double expectation_imag = 0.0;   // max |imaginary part| of E(x*x)
  std::size_t faithfulness_failures = 0;  // E(x*x) = 0 while x != 0
};

/// Random-pair checks of the model homomorphism, C*-identity and expectation.
ModelDefects check_model(const CrossedProductModel& model, std::size_t pairs, Rng& rng);

struct BundleViolation {
  std::string axiom;
  std::string s;
  std::string t;
  std::size_t trial = 0;
  double excess = 0.0;

  friend auto operator<=>(const BundleViolation&, const BundleViolation&) = default;
};

struct BundleAxiomReport {
  std::size_t trials = 0;
  double tolerance = 0.0;
  std::map<std::string, std::size_t> counts;
  std::map<std::string, double> worst;
  std::vector<BundleViolation> witnesses;  // first few per axiom

  bool ok() const noexcept { return counts.empty(); }
};

/// Random fiber pairs a in C_0(V_s), b in C_0(V_t) tested for ‖ab‖ <= ‖a‖‖b‖,
/// ‖a*‖ = ‖a‖, a** = a, ‖a*a‖ = ‖a‖^2 and a*a >= 0 with the bundle operations
/// of `dual` and the sup-norm.
BundleAxiomReport bundle_axiom_report(const DualSystem& dual, std::size_t trials, Rng& rng, double tol = 1e-9);

/// selfadjoint ‖phi_t(b)* - phi_{t^-1}(b*)‖, pi_defect ‖phi_s(a)phi_t(b) - phi_st(ab)‖
/// and isometry_gap |‖phi_t(b)‖ - ‖b‖| over the sample.
DefectReport mf_defect_report(const FiberFamily& family, const DualSystem& dual, const std::vector<FiberElement>& sample);

}  // namespace parfell
