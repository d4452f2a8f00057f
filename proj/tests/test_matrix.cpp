#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "parfell/error.hpp"
#include "parfell/kernels.hpp"
#include "parfell/matrix.hpp"
#include "parfell/random.hpp"

using namespace parfell;

namespace {

// Power iteration on M*M; enough iterations for the sizes used here.
double power_norm(const ComplexMatrix& m) {
  std::vector<Complex> x(m.cols(), Complex(1.0, 0.3));
  double lambda = 0.0;
  for (int it = 0; it < 3000; ++it) {
    std::vector<Complex> y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[j];
    std::vector<Complex> z(m.cols(), 0.0);
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t i = 0; i < m.rows(); ++i) z[j] += std::conj(m(i, j)) * y[i];
    double nz = 0.0;
    for (auto c : z) nz += std::norm(c);
    nz = std::sqrt(nz);
    if (nz == 0.0) return 0.0;
    lambda = nz;
    for (auto& c : z) c /= nz;
    x = z;
  }
  return std::sqrt(lambda);
}

// Naive triple loop product.
ComplexMatrix naive_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("op_norm examples") {
  CHECK(op_norm(ComplexMatrix::zero(3, 3)) == 0.0);
  CHECK(op_norm(ComplexMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(op_norm(ComplexMatrix{{0, 2}, {0, 0}}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(op_norm(ComplexMatrix{}) == 0.0);
}

TEST_CASE("op_norm agrees with power iteration") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = 1 + static_cast<std::size_t>(trial) % 9;
    std::size_t c = 1 + static_cast<std::size_t>(trial * 7) % 11;
    auto m = random_matrix(r, c, rng);
    CHECK(op_norm(m) == doctest::Approx(power_norm(m)).epsilon(1e-8));
  }
}

TEST_CASE("product matches the naive loop") {
  Rng rng(5);
  for (std::size_t n : {1, 2, 3, 7, 16, 33}) {
    auto a = random_matrix(n, n + 1, rng);
    auto b = random_matrix(n + 1, n + 2, rng);
    CHECK(max_diff(a * b, naive_mul(a, b)) < 1e-12);
  }
}

TEST_CASE("kernel variants agree") {
  const auto& scalar = kernels::scalar_table();
  const auto* avx = kernels::avx2_table();
  if (!avx) {
    MESSAGE("AVX2 kernels unavailable on this CPU; equivalence skipped");
    return;
  }
  Rng rng(9);
  for (std::size_t m : {1, 2, 3, 5, 8, 17}) {
    for (std::size_t k : {1, 4, 7, 16}) {
      for (std::size_t n : {1, 2, 3, 6, 9, 32}) {
        auto a = random_matrix(m, k, rng);
        auto b = random_matrix(k, n, rng);
        ComplexMatrix c1(m, n), c2(m, n);
        scalar.cgemm(a.data().data(), b.data().data(), c1.data().data(), m, k, n);
        avx->cgemm(a.data().data(), b.data().data(), c2.data().data(), m, k, n);
        CHECK(max_diff(c1, c2) <= 1e-13 * (1 + c1.max_abs()));
      }
    }
  }
  for (std::size_t len : {0, 1, 2, 3, 5, 64, 101}) {
    auto x = random_matrix(1, len, rng);
    auto y1 = random_matrix(1, len, rng);
    auto y2 = y1;
    Complex alpha(0.7, -1.3);
    scalar.caxpy(alpha, x.data().data(), y1.data().data(), len);
    avx->caxpy(alpha, x.data().data(), y2.data().data(), len);
    CHECK(max_diff(y1, y2) <= 1e-14 * (1 + y1.max_abs()));
    double s1 = scalar.sum_abs2(x.data().data(), len);
    double s2 = avx->sum_abs2(x.data().data(), len);
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-14));
  }
}

TEST_CASE("herm_eig") {
  auto e = herm_eig(ComplexMatrix{{3, 0, 0}, {0, -1, 0}, {0, 0, 2}});
  CHECK(e.values == std::vector<double>{-1, 2, 3});

  auto s = herm_eig(ComplexMatrix{{0, 1}, {1, 0}});
  REQUIRE(s.values.size() == 2);
  CHECK(s.values[0] == doctest::Approx(-1.0));
  CHECK(s.values[1] == doctest::Approx(1.0));

  Rng rng(2);
  auto a = random_matrix(6, 6, rng);
  auto h = a + a.adjoint();
  auto d = herm_eig(h);
  ComplexMatrix lam(6, 6);
  for (std::size_t k = 0; k < 6; ++k) lam(k, k) = d.values[k];
  CHECK(op_norm(d.vectors * lam * d.vectors.adjoint() - h) < 1e-10 * (1 + op_norm(h)));
  CHECK(op_norm(d.vectors.adjoint() * d.vectors - ComplexMatrix::identity(6)) < 1e-12);

  auto p = ComplexMatrix::unit(0, 0, 3) + ComplexMatrix::unit(2, 2, 3);
  for (double v : herm_eig(p).values) CHECK((std::abs(v) < 1e-12 || std::abs(v - 1) < 1e-12));

  CHECK_THROWS_AS(herm_eig(ComplexMatrix{{0, 1}, {0, 0}}), PreconditionError);
}

TEST_CASE("nearest_projection") {
  auto q = ComplexMatrix::unit(0, 0, 2);
  CHECK(nearest_projection(q) == q);
  auto q2 = 1.0201 * ComplexMatrix::unit(0, 0, 2);
  CHECK(max_diff(nearest_projection(q2), q) < 1e-15);
  CHECK(nearest_projection(0.49 * ComplexMatrix::identity(3)).max_abs() < 1e-15);
  CHECK_THROWS_AS(nearest_projection(ComplexMatrix{{0, 1}, {1, 0}}), PreconditionError);
}

TEST_CASE("corner_inv_sqrt") {
  auto p = ComplexMatrix::unit(0, 0, 2);
  CHECK(max_diff(corner_inv_sqrt(p, p), p) < 1e-15);
  auto w = 1.01 * ComplexMatrix::unit(1, 0, 2);
  auto x = corner_inv_sqrt(w, p);
  CHECK(std::abs(x(0, 0) - 1.0 / std::sqrt(1.0201)) < 1e-15);
  CHECK(std::abs(x(1, 1)) == 0.0);
  auto zero = ComplexMatrix::zero(2, 2);
  CHECK(corner_inv_sqrt(w, zero).max_abs() == 0.0);
}

TEST_CASE("is_partial_isometry") {
  ComplexMatrix perm{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  auto r = is_partial_isometry(perm, 1e-12);
  CHECK(r.ok);
  CHECK(r.defect == 0.0);
  auto shift = ComplexMatrix::unit(1, 0, 3) + ComplexMatrix::unit(2, 1, 3);
  r = is_partial_isometry(shift, 1e-12);
  CHECK(r.ok);
  CHECK(r.defect == 0.0);
  r = is_partial_isometry(1.01 * ComplexMatrix::unit(1, 0, 2), 1e-9);
  CHECK_FALSE(r.ok);
  CHECK(r.defect == doctest::Approx(1.01 * (1.01 * 1.01 - 1)).epsilon(1e-12));
}

TEST_CASE("rank and kron") {
  ComplexMatrix a{{1, 2}, {2, 4}};
  CHECK(matrix_rank(a) == 1);
  CHECK(matrix_rank(ComplexMatrix::identity(4)) == 4);
  CHECK(matrix_rank(ComplexMatrix::zero(3, 2)) == 0);
  auto k = kron(ComplexMatrix{{1, 2}, {3, 4}}, ComplexMatrix::identity(2));
  CHECK(k.rows() == 4);
  CHECK(k(2, 0) == Complex(3));
  CHECK(k(3, 3) == Complex(4));
  CHECK(k(1, 3) == Complex(2));
  CHECK(k(0, 1) == Complex(0));
}
