#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qvor/qdm.hpp"
#include "test_util.hpp"

using namespace qvor;
using qvor::test::diag_state;
using qvor::test::max_abs;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a qvor::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("validate_density accepts states and names the failed condition") {
  CHECK_NOTHROW(DensityMatrix::validate(CMatrix::Identity(3, 3) / 3.0));
  CHECK_NOTHROW(DensityMatrix::validate(diag_state({1.0, 0.0})));

  try {
    DensityMatrix::validate(diag_state({1.2, -0.2}));
    FAIL("expected NotPSD");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotPSD);
    CHECK(e.magnitude() == doctest::Approx(0.2));
  }

  CMatrix skew = CMatrix::Identity(2, 2) / 2.0;
  skew(0, 1) = Complex(0.1, 0.0);
  try {
    DensityMatrix::validate(skew);
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotHermitian);
    CHECK(e.magnitude() == doctest::Approx(0.1));
  }

  try {
    DensityMatrix::validate(diag_state({0.5, 0.6}));
    FAIL("expected TraceNotOne");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTraceNotOne);
    CHECK(e.magnitude() == doctest::Approx(0.1));
  }

  CHECK(code_of([] { DensityMatrix::validate(CMatrix::Zero(2, 3)); }) == ErrorCode::kNotSquare);
}

TEST_CASE("hermitian_eig sorts descending and reconstructs") {
  auto half = hermitian_eig(CMatrix::Identity(2, 2) / 2.0);
  CHECK(half.eigenvalues(0) == doctest::Approx(0.5));
  CHECK(half.eigenvalues(1) == doctest::Approx(0.5));

  auto pure = hermitian_eig(diag_state({1.0, 0.0}));
  CHECK(pure.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(std::abs(pure.eigenvalues(1)) < 1e-15);

  // section matrix at d = 3 with xi_1 = 1 and everything else zero:
  // diagonal (2/3, 1/3, 1/3)
  auto sec = hermitian_eig(diag_state({2.0 / 3, 1.0 / 3, 1.0 / 3}));
  CHECK(sec.eigenvalues(0) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(sec.eigenvalues(1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(sec.eigenvalues(2) == doctest::Approx(1.0 / 3).epsilon(1e-14));

  std::mt19937_64 rng(11);
  for (int d = 1; d <= 8; ++d) {
    for (int rep = 0; rep < 20; ++rep) {
      const CMatrix h = test::random_hermitian(d, rng);
      const auto e = hermitian_eig(h);
      const CMatrix back = e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
      CHECK(max_abs(back - h) <= 1e-10);
      CHECK(max_abs(e.eigenvectors.adjoint() * e.eigenvectors - CMatrix::Identity(d, d)) <= 1e-10);
      for (int i = 1; i < d; ++i) CHECK(e.eigenvalues(i - 1) >= e.eigenvalues(i));
    }
  }
}

TEST_CASE("matrix_log") {
  CHECK(max_abs(matrix_log(CMatrix::Identity(3, 3))) < 1e-15);
  const CMatrix l = matrix_log(CMatrix::Identity(2, 2) / 2.0);
  CHECK(max_abs(l + std::numbers::ln2 * CMatrix::Identity(2, 2)) < 1e-15);
  CHECK(code_of([] { matrix_log(diag_state({1.0, 0.0})); }) == ErrorCode::kSingularState);

  // log(exp(H)) on spectra inside [0.1, 1]
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int d = 2; d <= 6; ++d) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto basis = hermitian_eig(test::random_hermitian(d, rng)).eigenvectors;
      RVector spec(d);
      for (int i = 0; i < d; ++i) spec(i) = u(rng);
      const CMatrix h = basis * spec.asDiagonal() * basis.adjoint();
      CHECK(max_abs(matrix_log(matrix_exp(h)) - h) <= 1e-8);
    }
  }
}

TEST_CASE("divergence examples") {
  const CMatrix half = CMatrix::Identity(2, 2) / 2.0;
  CHECK(std::abs(divergence(half, half)) < 1e-15);
  CHECK(divergence(diag_state({1.0, 0.0}), half) == doctest::Approx(std::numbers::ln2).epsilon(1e-14));
  CHECK(divergence(diag_state({0.3, 0.7}), half) ==
        doctest::Approx(0.08228287850505178).epsilon(1e-13));

  CHECK(code_of([&] { divergence(half, diag_state({1.0, 0.0})); }) ==
        ErrorCode::kSingularSecondArgument);
  CHECK(code_of([&] { divergence(half, CMatrix::Identity(3, 3) / 3.0); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("divergence properties on random states") {
  std::mt19937_64 rng(2024);
  for (int d = 2; d <= 6; ++d) {
    for (int rep = 0; rep < 200; ++rep) {
      const CMatrix s = test::random_density(d, rng);
      const CMatrix r = test::random_density(d, rng);
      CHECK(divergence(s, r) >= -1e-12);
      CHECK(std::abs(divergence(s, s)) <= 1e-10);
    }
    for (int rep = 0; rep < 100; ++rep) {
      const auto p = test::random_probabilities(d, rng);
      const auto q = test::random_probabilities(d, rng);
      CHECK(std::abs(divergence(diag_state(p), diag_state(q)) - classical_kl(p, q)) <= 1e-10);
    }
  }
}

TEST_CASE("divergence is not symmetric") {
  const CMatrix a = diag_state({0.9, 0.1});
  const CMatrix b = diag_state({0.5, 0.5});
  CHECK(std::abs(divergence(a, b) - divergence(b, a)) > 0.01);
}

TEST_CASE("divergence_on_support allows rank-deficient rho with matching support") {
  const CMatrix rho = diag_state({0.6, 0.4, 0.0});
  const CMatrix sigma = diag_state({0.3, 0.7, 0.0});
  CHECK(divergence_on_support(sigma, rho) ==
        doctest::Approx(classical_kl(std::vector{0.3, 0.7}, std::vector{0.6, 0.4})).epsilon(1e-13));
  CHECK(code_of([&] { divergence_on_support(diag_state({0.3, 0.3, 0.4}), rho); }) ==
        ErrorCode::kSingularSecondArgument);
}

TEST_CASE("coordinate and Hilbert-Schmidt distances") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(coordinate_distance_sq(a, a) == 0.0);
  CHECK(coordinate_distance_sq(a, std::vector{1.0, 3.0, 3.0}) == 1.0);
  CHECK(code_of([&] { coordinate_distance_sq(a, std::vector{1.0}); }) ==
        ErrorCode::kDimensionMismatch);
  CHECK(hilbert_schmidt_distance_sq(diag_state({1, 0}), diag_state({0, 1})) == doctest::Approx(2.0));
}
