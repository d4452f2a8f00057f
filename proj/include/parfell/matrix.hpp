#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace parfell {

using Complex = std::complex<double>;

/// Tolerance set shared by checks and reports.
struct Tolerances {
  double axiom = 1e-9;     // defect functionals and axiom checks
  double exact = 1e-12;    // identities that hold by construction
  double norm = 1e-8;      // norm identities (C*-identity, submultiplicativity)
  double spectral = 1e-9;  // eigen-decomposition residuals
};

/// Dense row-major complex matrix with value semantics.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix zero(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }
  static ComplexMatrix identity(std::size_t n);
  /// Matrix unit e_{ij} of size n x n.
  static ComplexMatrix unit(std::size_t i, std::size_t j, std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);
  /// this += s * o
  ComplexMatrix& add_scaled(Complex s, const ComplexMatrix& o);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest singular value.
double op_norm(const ComplexMatrix& m);
/// op_norm(a - b) without forming a copy at the call site.
double distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Numerical rank: singular values above rel_tol * largest.
std::size_t matrix_rank(const ComplexMatrix& m, double rel_tol = 1e-9);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // orthonormal columns, vectors(:, k) for values[k]
};

/// Eigen-decomposition of a Hermitian matrix. Within each cluster of
/// (numerically) equal eigenvalues the basis is rebuilt by Gram-Schmidt on
/// the cluster projection of e_0, e_1, ... so the output does not depend on
/// the solver's arbitrary choice. Throws PreconditionError when
/// ‖M - M*‖ > herm_tol.
HermitianEigen herm_eig(const ComplexMatrix& m, double herm_tol = 1e-9);

/// Spectral projection of a nearly idempotent Hermitian Q onto eigenvalues
/// above `threshold`. Requires ‖Q^2 - Q‖ < 1/4; throws NumericalError when an
/// eigenvalue lies within 1e-6 of the threshold.
ComplexMatrix nearest_projection(const ComplexMatrix& q, double threshold = 0.5);

/// (W*W)^{-1/2} computed inside the corner P M_d P (zero on the complement).
ComplexMatrix corner_inv_sqrt(const ComplexMatrix& w, const ComplexMatrix& p);

struct PartialIsometryCheck {
  bool ok = false;
  double defect = 0.0;  // ‖V V* V - V‖
};

PartialIsometryCheck is_partial_isometry(const ComplexMatrix& v, double tol);

}  // namespace parfell
