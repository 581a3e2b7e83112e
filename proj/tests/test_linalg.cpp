#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "unispec/unispec.hpp"

using namespace unispec;

namespace {

HermitianMatrix herm(const ComplexMatrix& m) { return HermitianMatrix(m); }

ComplexMatrix diag(std::initializer_list<cplx> d) { return ComplexMatrix::diagonal(std::vector<cplx>(d)); }

}  // namespace

TEST(HermitianEig, DiagonalInputSortsDescending) {
  const auto e = hermitian_eig(herm(diag({1.0, 3.0, -2.0})));
  ASSERT_EQ(e.values.size(), 3u);
  EXPECT_NEAR(e.values[0], 3.0, 1e-14);
  EXPECT_NEAR(e.values[1], 1.0, 1e-14);
  EXPECT_NEAR(e.values[2], -2.0, 1e-14);
}

TEST(HermitianEig, PauliX) {
  ComplexMatrix x(2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  const auto e = hermitian_eig(herm(x));
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], -1.0, 1e-14);
  const auto v = e.vectors.matrix().column(0);
  EXPECT_NEAR(std::abs(v[0]), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(v[1]), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(HermitianEig, ComplexOffDiagonal) {
  // [[0, -i], [i, 0]] (Pauli Y)
  ComplexMatrix y(2);
  y(0, 1) = cplx{0.0, -1.0};
  y(1, 0) = cplx{0.0, 1.0};
  const auto e = hermitian_eig(herm(y));
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], -1.0, 1e-14);
  const auto& v = e.vectors.matrix();
  const auto back = v * ComplexMatrix::diagonal(std::vector<cplx>{1.0, -1.0}) * v.adjoint();
  EXPECT_LT(max_abs_diff(back, y), 1e-13);
}

TEST(HermitianEig, MatchesSturmBisectionOracle) {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 8;
    const auto h = oracle::random_hermitian(n, rng);
    const auto got = hermitian_eig(herm(h)).values;
    const auto want = oracle::hermitian_eigenvalues(h);
    for (int k = 0; k < n; ++k) EXPECT_NEAR(got[static_cast<std::size_t>(k)], want[static_cast<std::size_t>(k)], 1e-9) << "n=" << n;
  }
}

TEST(HermitianEig, EigenvaluesAreCharacteristicRoots) {
  Rng rng(7);
  const auto h = oracle::random_hermitian(5, rng);
  for (double lambda : hermitian_eig(herm(h)).values) {
    const auto shifted = h - ComplexMatrix::identity(5) * lambda;
    // relative to the scale of det(h - mu I) away from the roots
    EXPECT_LT(std::abs(oracle::det(shifted)), 1e-9 * std::pow(h.frobenius(), 5));
  }
}

TEST(HermitianEig, ReconstructionAndOrthonormality) {
  Rng rng(3);
  for (int n : {1, 2, 4, 8, 16}) {
    const auto h = oracle::random_hermitian(n, rng);
    const auto e = hermitian_eig(herm(h));
    const auto& v = e.vectors.matrix();
    std::vector<cplx> d(e.values.begin(), e.values.end());
    EXPECT_LT(max_abs_diff(v * ComplexMatrix::diagonal(d) * v.adjoint(), h), 1e-9);
    EXPECT_LT(unitary_defect(v), tol::unitary(n));
    for (std::size_t k = 1; k < e.values.size(); ++k) EXPECT_GE(e.values[k - 1], e.values[k]);
  }
}

TEST(HermitianEig, ZeroSweepsOnNonDiagonalFails) {
  ComplexMatrix x(2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  try {
    hermitian_eig(herm(x), 0);
    FAIL() << "expected NonConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonConvergence);
  }
}

TEST(OpNorm, TwoByTwoClosedForm) {
  // singular values of [[a, b], [0, d]] from the trace and determinant of a* a
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a(2);
    a(0, 0) = rng.complex_normal();
    a(0, 1) = rng.complex_normal();
    a(1, 0) = rng.complex_normal();
    a(1, 1) = rng.complex_normal();
    const auto g = a.adjoint() * a;
    const double tr = g.trace().real();
    const double dt = std::norm(oracle::det(a));
    const double top = 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * dt)));
    EXPECT_NEAR(op_norm(a), std::sqrt(top), 1e-12);
  }
}

TEST(OpNorm, MatchesPowerIteration) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = gaussian_matrix(4, rng);
    EXPECT_NEAR(op_norm(a), oracle::op_norm_power(a), 1e-9);
  }
}

TEST(OpNorm, Submultiplicative) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = gaussian_matrix(4, rng);
    const auto b = gaussian_matrix(4, rng);
    EXPECT_LE(op_norm(a * b), op_norm(a) * op_norm(b) * (1.0 + 1e-12));
  }
}

TEST(UnitaryEig, DiagonalIAndOne) {
  const UnitaryMatrix u(diag({cplx{0.0, 1.0}, 1.0}));
  const auto sd = unitary_eig(u);
  const auto args = sd.arguments();
  EXPECT_NEAR(args[0], kPi / 2, 1e-12);
  EXPECT_NEAR(args[1], 0.0, 1e-12);
  EXPECT_LT(max_abs_diff(sd.recompose(), u.matrix()), 1e-12);
}

TEST(UnitaryEig, RecomposesHaarUnitaries) {
  Rng rng(13);
  for (int n : {1, 2, 3, 4, 8, 12}) {
    const auto u = haar_unitary(n, rng);
    const auto sd = unitary_eig(u);
    EXPECT_LT(max_abs_diff(sd.recompose(), u.matrix()), tol::resid(n));
    for (const auto& z : sd.eigenvalues) EXPECT_NEAR(std::abs(z), 1.0, 1e-14);
    const auto args = sd.arguments();
    for (std::size_t k = 1; k < args.size(); ++k) EXPECT_GE(args[k - 1], args[k]);
  }
}

TEST(UnitaryEig, DegenerateSpectrum) {
  Rng rng(17);
  const auto w = haar_unitary(5, rng);
  const auto u = unitary_with_angles(w, {0.4, 0.4, 0.4, -1.0, -1.0});
  const auto sd = unitary_eig(u);
  EXPECT_LT(max_abs_diff(sd.recompose(), u.matrix()), tol::resid(5));
  EXPECT_NEAR(sd.arguments()[2], 0.4, 1e-10);
  EXPECT_NEAR(sd.arguments()[3], -1.0, 1e-10);
}

TEST(UnitaryEig, Deterministic) {
  Rng rng(19);
  const auto u = haar_unitary(6, rng);
  const auto a = unitary_eig(u);
  const auto b = unitary_eig(u);
  EXPECT_EQ(a.eigenvectors.matrix(), b.eigenvectors.matrix());
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
}

TEST(ExpmSkew, Zero) {
  EXPECT_EQ(expm_skew(SkewHermitianMatrix::zero(3)).matrix(), ComplexMatrix::identity(3));
}

TEST(ExpmSkew, Diagonal) {
  const SkewHermitianMatrix x(diag({cplx{0.0, 0.5}, cplx{0.0, -2.0}}));
  const auto e = expm_skew(x).matrix();
  EXPECT_LT(std::abs(e(0, 0) - std::polar(1.0, 0.5)), 1e-15);
  EXPECT_LT(std::abs(e(1, 1) - std::polar(1.0, -2.0)), 1e-15);
  EXPECT_EQ(e(0, 1), cplx(0.0, 0.0));
}

TEST(ExpmSkew, MatchesTaylorOracle) {
  Rng rng(23);
  for (int n : {2, 3, 4, 8}) {
    for (double nrm : {0.1, 1.0, 3.0, 10.0}) {
      const auto x = random_skew(n, nrm, rng);
      EXPECT_LT(max_abs_diff(expm_skew(x).matrix(), oracle::expm_taylor(x.matrix())), 1e-11) << n << " " << nrm;
    }
  }
}

TEST(ExpmSkew, InverseIsExpOfNegation) {
  Rng rng(29);
  const auto x = random_skew(4, 2.0, rng);
  const auto p = expm_skew(x) * expm_skew(x.scaled(-1.0));
  EXPECT_LT(max_abs_diff(p.matrix(), ComplexMatrix::identity(4)), 1e-12);
}

TEST(LogmPrincipal, Identity) {
  EXPECT_LT(logm_principal(UnitaryMatrix::identity(3)).matrix().max_abs(), 1e-15);
}

TEST(LogmPrincipal, Diagonal) {
  const UnitaryMatrix u(diag({std::polar(1.0, 2.5), std::polar(1.0, -0.7)}));
  const auto l = logm_principal(u).matrix();
  EXPECT_LT(std::abs(l(0, 0) - cplx(0.0, 2.5)), 1e-13);
  EXPECT_LT(std::abs(l(1, 1) - cplx(0.0, -0.7)), 1e-13);
}

TEST(LogmPrincipal, MinusOneThrows) {
  const UnitaryMatrix u(diag({-1.0, 1.0}));
  try {
    logm_principal(u);
    FAIL() << "expected SpectrumAtMinusOne";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpectrumAtMinusOne);
  }
}

TEST(LogmPrincipal, ExpOfLogMatchesTaylorOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto u = haar_unitary(4, rng);
    const auto l = logm_principal(u);
    EXPECT_LT(max_abs_diff(oracle::expm_taylor(l.matrix()), u.matrix()), 1e-8);
    // principal branch: spectrum of -i log u inside (-pi, pi)
    for (double v : oracle::hermitian_eigenvalues(l.hermitian().matrix())) EXPECT_LT(std::abs(v), kPi);
  }
}

TEST(LogmPrincipal, RoundTripBelowPi) {
  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    const auto x = random_skew(n, rng.uniform(0.0, kPi - 0.05), rng);
    EXPECT_LT(max_abs_diff(logm_principal(expm_skew(x)).matrix(), x.matrix()), tol::roundtrip);
  }
}

TEST(Qr, FactorsAndOrthonormal) {
  Rng rng(41);
  const auto a = gaussian_matrix(6, rng);
  const auto [q, r] = qr(a);
  EXPECT_LT(max_abs_diff(q * r, a), 1e-12);
  EXPECT_LT(unitary_defect(q), 1e-13);
  for (int i = 0; i < 6; ++i) {
    EXPECT_GE(r(i, i).real(), 0.0);
    EXPECT_EQ(r(i, i).imag(), 0.0);
    for (int j = 0; j < i; ++j) EXPECT_EQ(r(i, j), cplx(0.0, 0.0));
  }
}

TEST(Haar, UnitaryAndSeeded) {
  for (int n : {1, 2, 8, 32, 64}) {
    const auto u = haar_unitary(n, RngSeed{99});
    EXPECT_LT(unitary_defect(u.matrix()), tol::unitary(n));
    EXPECT_EQ(u.matrix(), haar_unitary(n, RngSeed{99}).matrix());
  }
  EXPECT_NE(haar_unitary(4, RngSeed{1}).matrix(), haar_unitary(4, RngSeed{2}).matrix());
}

TEST(Haar, PhaseOfTraceIsUniformish) {
  // E[tr u] = 0 and E|tr u|^2 = 1 for Haar measure
  Rng rng(43);
  cplx mean = 0.0;
  double second = 0.0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const cplx tr = haar_unitary(3, rng).matrix().trace();
    mean += tr;
    second += std::norm(tr);
  }
  mean /= static_cast<double>(trials);
  second /= trials;
  EXPECT_LT(std::abs(mean), 0.08);
  EXPECT_NEAR(second, 1.0, 0.1);
}

TEST(Matrix, ValidationErrorsNameTolerance) {
  ComplexMatrix m = ComplexMatrix::identity(2);
  m(0, 0) = 1.0 + 1e-6;
  try {
    UnitaryMatrix u(m);
    FAIL() << "expected ValidationError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_NE(std::string(e.what()).find("tol_unitary"), std::string::npos);
  }
  ComplexMatrix h(2);
  h(0, 1) = 1.0;
  try {
    HermitianMatrix hh(h);
    FAIL() << "expected ValidationError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_NE(std::string(e.what()).find("tol_sym"), std::string::npos);
  }
}

TEST(Matrix, DimensionLimits) {
  EXPECT_THROW(ComplexMatrix(0), Error);
  EXPECT_THROW(ComplexMatrix(65), Error);
  EXPECT_NO_THROW(ComplexMatrix(64));
  EXPECT_THROW(ComplexMatrix::identity(2) * ComplexMatrix::identity(3), Error);
}
