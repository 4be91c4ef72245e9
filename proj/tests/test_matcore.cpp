#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qgeom/errors.hpp"
#include "qgeom/matcore.hpp"

using namespace qgeom;
using namespace qgeom::matcore;

namespace {

const Complex I{0.0, 1.0};

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no qgeom::Error thrown";
  return ErrorKind::ParseError;
}

}  // namespace

TEST(Hermitize, FixedPointAndAntiHermitianPart) {
  const ComplexMatrix h = m2(1.0, 2.0 - I, 2.0 + I, -3.0);
  EXPECT_LT((hermitize(h) - h).norm(), 1e-15);
  const ComplexMatrix k = m2(I, 1.0, -1.0, 2.0 * I);
  EXPECT_LT(hermitize(k).norm(), 1e-15);
}

TEST(Hermitize, Example) {
  const ComplexMatrix out = hermitize(m2(1.0, 2.0 * I, 0.0, 1.0));
  EXPECT_LT((out - m2(1.0, I, -I, 1.0)).norm(), 1e-15);
}

TEST(EigHermitian, Identity) {
  const auto s = eig_hermitian(ComplexMatrix::Identity(3, 3));
  EXPECT_LT((s.eigenvalues - RealVector::Ones(3)).norm(), 1e-15);
  EXPECT_LT((s.eigenvectors.adjoint() * s.eigenvectors -
             ComplexMatrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(EigHermitian, DiagonalAndPauliX) {
  const auto d = eig_hermitian(m2(0.2, 0.0, 0.0, 0.8));
  EXPECT_NEAR(d.eigenvalues(0), 0.2, 1e-15);
  EXPECT_NEAR(d.eigenvalues(1), 0.8, 1e-15);
  EXPECT_NEAR(std::abs(d.eigenvectors(0, 0)), 1.0, 1e-15);

  const auto x = eig_hermitian(m2(0.0, 1.0, 1.0, 0.0));
  EXPECT_NEAR(x.eigenvalues(0), -1.0, 1e-15);
  EXPECT_NEAR(x.eigenvalues(1), 1.0, 1e-15);
}

TEST(EigHermitian, ReconstructsRandomHermitian) {
  ComplexMatrix a(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) a(r, c) = Complex(std::sin(r + 2.0 * c), std::cos(3.0 * r - c));
  }
  a = hermitize(a);
  const auto s = eig_hermitian(a);
  EXPECT_LT((reconstruct(s) - a).norm(), 1e-13);
  for (int i = 1; i < 4; ++i) EXPECT_LE(s.eigenvalues(i - 1), s.eigenvalues(i));
}

TEST(EigHermitian, RejectsNonHermitian) {
  EXPECT_EQ(kind_of([] { eig_hermitian(m2(1.0, 1.0, 0.0, 1.0)); }),
            ErrorKind::NotHermitian);
}

TEST(MatSqrtPsd, Examples) {
  EXPECT_LT((mat_sqrt_psd(ComplexMatrix::Identity(3, 3)) -
             ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LT((mat_sqrt_psd(m2(4.0, 0.0, 0.0, 9.0)) - m2(2.0, 0.0, 0.0, 3.0)).norm(),
            1e-14);
  const ComplexMatrix p = m2(0.5, 0.5 * I, -0.5 * I, 0.5);
  EXPECT_LT((mat_sqrt_psd(p) - p).norm(), 1e-14);
}

TEST(MatSqrtPsd, ClampsTinyNegativeAndRejectsNegative) {
  EXPECT_NO_THROW(mat_sqrt_psd(m2(1.0, 0.0, 0.0, -1e-13)));
  EXPECT_EQ(kind_of([] { mat_sqrt_psd(m2(1.0, 0.0, 0.0, -1e-6)); }),
            ErrorKind::NotPSD);
}

TEST(MatFuncHermitian, IdentityAndCos) {
  const ComplexMatrix a = m2(0.3, 0.1 - 0.2 * I, 0.1 + 0.2 * I, -0.7);
  EXPECT_LT((mat_func_hermitian(a, [](double x) { return x; }) - a).norm(), 1e-14);
  EXPECT_LT((mat_func_hermitian(ComplexMatrix::Zero(3, 3),
                                [](double x) { return std::cos(x); }) -
             ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(MatFuncHermitian, RankOneSinc) {
  const double pi = std::numbers::pi;
  ComplexVector b(2);
  b << 0.6 * std::polar(1.0, 0.4), 0.8 * std::polar(1.0, -1.1);
  b *= pi / 2.0;
  const ComplexMatrix bb = b * b.adjoint();
  const ComplexMatrix out = mat_func_hermitian(bb, [](double x) {
    const double r = std::sqrt(std::max(x, 0.0));
    return r == 0.0 ? 1.0 : std::sin(r) / r;
  });
  const ComplexMatrix expected =
      ComplexMatrix::Identity(2, 2) + (2.0 / pi - 1.0) * bb / b.squaredNorm();
  EXPECT_LT((out - expected).norm(), 1e-14);
}

TEST(Standard, TraceDetDagger) {
  EXPECT_NEAR(trace(ComplexMatrix::Identity(3, 3)).real(), 3.0, 0.0);
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = -0.5;
  d(2, 2) = 3.0;
  EXPECT_NEAR(std::abs(det(d) - Complex(-3.0)), 0.0, 1e-15);
  const ComplexMatrix a = m2(1.0 + I, 2.0, -I, 0.5);
  EXPECT_EQ(dagger(dagger(a)), a);
  EXPECT_NEAR(std::abs(det(a) - (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0))), 0.0,
              1e-15);
}

TEST(Standard, DetMatchesLuAboveThree) {
  ComplexMatrix a(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) a(r, c) = Complex(1.0 / (r + c + 1.0), 0.1 * (r - c));
  }
  EXPECT_LT(std::abs(det(a) - a.determinant()), 1e-14);
  const ComplexMatrix b = a.topLeftCorner(3, 3);
  EXPECT_LT(std::abs(det(b) - b.determinant()), 1e-14);
}

TEST(Standard, DimensionMismatch) {
  const ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix b = ComplexMatrix::Identity(3, 3);
  EXPECT_EQ(kind_of([&] { mul(a, b); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { add(a, b); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { sub(a, b); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { trace(ComplexMatrix::Zero(2, 3)); }),
            ErrorKind::DimensionMismatch);
}

TEST(Standard, FrobeniusAndScale) {
  const ComplexMatrix a = m2(3.0, 0.0, 0.0, 4.0 * I);
  EXPECT_DOUBLE_EQ(frobenius(a), 5.0);
  EXPECT_EQ(scale(a, I)(1, 1), Complex(-4.0));
}
