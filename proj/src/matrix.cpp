#include "parfell/matrix.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "parfell/error.hpp"
#include "parfell/kernels.hpp"

namespace parfell {

namespace {

using RowMajorXcd = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorXcd> view(const ComplexMatrix& m) {
  return Eigen::Map<const RowMajorXcd>(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                       static_cast<Eigen::Index>(m.cols()));
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw MalformedInput("matrix shape mismatch");
}

Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return {};
  if (std::min(m.rows(), m.cols()) <= 64) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(view(m));
    return svd.singularValues();
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(view(m));
  return svd.singularValues();
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw MalformedInput("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::unit(std::size_t i, std::size_t j, std::size_t n) {
  ComplexMatrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const { return std::sqrt(kernels::active().sum_abs2(data_.data(), data_.size())); }

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& c : data_) m = std::max(m, std::abs(c));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) { return add_scaled(1.0, o); }

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) { return add_scaled(-1.0, o); }

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& c : data_) c *= s;
  return *this;
}

ComplexMatrix& ComplexMatrix::add_scaled(Complex s, const ComplexMatrix& o) {
  require_same_shape(*this, o);
  kernels::active().caxpy(s, o.data_.data(), data_.data(), data_.size());
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw MalformedInput("matrix product shape mismatch");
  ComplexMatrix c(a.rows_, b.cols_);
  kernels::active().cgemm(a.data_.data(), b.data_.data(), c.data_.data(), a.rows_, a.cols_, b.cols_);
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex s = a(i, j);
      if (s == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
    }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double op_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const double scale = m.max_abs();
  if (scale == 0.0) return 0.0;
  // Largest eigenvalue of the smaller Gram matrix; rescaling keeps tiny
  // differences away from underflow.
  const Eigen::MatrixXcd a = view(m) / scale;
  const Eigen::MatrixXcd gram = m.rows() <= m.cols() ? Eigen::MatrixXcd(a * a.adjoint()) : Eigen::MatrixXcd(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    const auto sv = singular_values(m);
    return sv(0);
  }
  return scale * std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

double distance(const ComplexMatrix& a, const ComplexMatrix& b) { return op_norm(a - b); }

std::size_t matrix_rank(const ComplexMatrix& m, double rel_tol) {
  const auto sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

HermitianEigen herm_eig(const ComplexMatrix& m, double herm_tol) {
  if (!m.square()) throw PreconditionError("herm_eig needs a square matrix");
  const std::size_t d = m.rows();
  if (d == 0) return {};
  if (!m.all_finite()) throw PreconditionError("herm_eig input has non-finite entries");
  if (distance(m, m.adjoint()) > herm_tol) throw PreconditionError("herm_eig input is not Hermitian");

  const Eigen::MatrixXcd h = 0.5 * (view(m) + view(m).adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  const Eigen::VectorXd& vals = es.eigenvalues();
  const Eigen::MatrixXcd& vecs = es.eigenvectors();

  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  const double cluster_tol = 1e-9 * scale;

  HermitianEigen out;
  out.values.assign(vals.data(), vals.data() + vals.size());
  out.vectors = ComplexMatrix(d, d);

  Eigen::Index start = 0;
  while (start < static_cast<Eigen::Index>(d)) {
    Eigen::Index end = start + 1;
    while (end < static_cast<Eigen::Index>(d) && vals(end) - vals(end - 1) <= cluster_tol) ++end;
    const Eigen::Index k = end - start;
    const Eigen::MatrixXcd block = vecs.middleCols(start, k);
    const Eigen::MatrixXcd proj = block * block.adjoint();

    // Residual projector R = P - QQ* shrinks as basis vectors are accepted;
    // pick the first coordinate whose residual has weight above 1/(2d).
    std::vector<Eigen::VectorXcd> basis;
    for (std::size_t j = 0; j < d && static_cast<Eigen::Index>(basis.size()) < k; ++j) {
      Eigen::VectorXcd w = proj.col(static_cast<Eigen::Index>(j));
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) w -= q * q.dot(w);
      if (w.squaredNorm() > 0.5 / static_cast<double>(d)) basis.push_back(w.normalized());
    }
    if (static_cast<Eigen::Index>(basis.size()) != k) throw NumericalError("degenerate eigenspace basis selection failed");
    for (Eigen::Index c = 0; c < k; ++c)
      for (std::size_t r = 0; r < d; ++r)
        out.vectors(r, static_cast<std::size_t>(start + c)) = basis[static_cast<std::size_t>(c)](static_cast<Eigen::Index>(r));
    start = end;
  }
  return out;
}

ComplexMatrix nearest_projection(const ComplexMatrix& q, double threshold) {
  if (!q.square()) throw PreconditionError("nearest_projection needs a square matrix");
  const double idem = distance(q * q, q);
  if (!(idem < 0.25)) throw PreconditionError("nearest_projection needs ‖Q^2 - Q‖ < 1/4");
  const auto eig = herm_eig(q);
  const std::size_t d = q.rows();
  ComplexMatrix p(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    if (std::abs(eig.values[k] - threshold) < 1e-6)
      throw NumericalError("eigenvalue within 1e-6 of the rounding threshold");
    if (eig.values[k] < threshold) continue;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) p(i, j) += eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  ComplexMatrix sym = p + p.adjoint();
  sym *= 0.5;
  return sym;
}

ComplexMatrix corner_inv_sqrt(const ComplexMatrix& w, const ComplexMatrix& p) {
  if (!p.square() || w.cols() != p.rows()) throw PreconditionError("corner_inv_sqrt shape mismatch");
  const std::size_t d = p.rows();
  if (distance(p * p, p) > 1e-9 || distance(p, p.adjoint()) > 1e-9) throw PreconditionError("corner is not a projection");
  const auto pe = herm_eig(p);
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < d; ++k)
    if (pe.values[k] > 0.5) cols.push_back(k);
  const std::size_t r = cols.size();
  if (r == 0) return ComplexMatrix(d, d);

  ComplexMatrix basis(d, r);
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t i = 0; i < d; ++i) basis(i, c) = pe.vectors(i, cols[c]);

  const ComplexMatrix gram = w.adjoint() * w;
  ComplexMatrix compressed = basis.adjoint() * gram * basis;
  compressed = 0.5 * (compressed + compressed.adjoint());
  if (!(distance(compressed, ComplexMatrix::identity(r)) < 1.0))
    throw PreconditionError("corner_inv_sqrt needs ‖W*W - P‖ < 1 on the corner");
  const auto ce = herm_eig(compressed);
  const double floor = 1e-12 * std::max(1.0, ce.values.back());
  if (ce.values.front() <= floor) throw NumericalError("corner operator is singular");

  std::vector<Complex> scale(r);
  for (std::size_t k = 0; k < r; ++k) scale[k] = 1.0 / std::sqrt(ce.values[k]);
  const ComplexMatrix inner = ce.vectors * ComplexMatrix::diagonal(scale) * ce.vectors.adjoint();
  ComplexMatrix x = basis * inner * basis.adjoint();
  return 0.5 * (x + x.adjoint());
}

PartialIsometryCheck is_partial_isometry(const ComplexMatrix& v, double tol) {
  const double defect = distance(v * v.adjoint() * v, v);
  return {defect <= tol, defect};
}

}  // namespace parfell
