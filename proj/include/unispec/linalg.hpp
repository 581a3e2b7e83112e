#ifndef UNISPEC_LINALG_HPP
#define UNISPEC_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "unispec/core.hpp"
#include "unispec/matrix.hpp"
#include "unispec/random.hpp"

namespace unispec {

/// Principal argument in (-pi, pi].
inline double principal_arg(cplx z) {
  const double a = std::arg(z);
  return a <= -kPi ? kPi : a;
}

struct HermitianEigen {
  std::vector<double> values;  // descending
  UnitaryMatrix vectors;       // column k belongs to values[k]
};

namespace detail {

inline double off_diagonal_frobenius(const ComplexMatrix& a) {
  double acc = 0.0;
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

/// a <- J* a J and v <- v J for the complex Jacobi rotation that zeroes a(p, q).
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cplx phase = apq / mag;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  // Real Jacobi rotation on the phase-stripped 2x2 block [[app, mag], [mag, aqq]].
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // J = [[c, s e^{i phi}], [-s e^{-i phi}, c]] acting on coordinates (p, q).
  const cplx jpp = c;
  const cplx jpq = s * phase;
  const cplx jqp = -s * std::conj(phase);
  const cplx jqq = c;

  const int n = a.n();
  for (int k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (int k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (int k = 0; k < n; ++k) {
    const cplx vkp = v(k, p);
    const cplx vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

/// Stable ordering permutation: descending key, ties by original index.
template <typename Key>
std::vector<int> descending_order(const std::vector<Key>& keys) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return keys[i] > keys[j]; });
  return order;
}

inline ComplexMatrix permute_columns(const ComplexMatrix& m, const std::vector<int>& order) {
  ComplexMatrix out(m.n());
  for (int j = 0; j < m.n(); ++j)
    for (int i = 0; i < m.n(); ++i) out(i, j) = m(i, order[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace detail

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
inline HermitianEigen hermitian_eig(const HermitianMatrix& h, int max_sweeps = tol::max_sweeps) {
  const int n = h.n();
  // Symmetrize so rotations act on an exactly Hermitian matrix.
  ComplexMatrix a = (h.matrix() + h.matrix().adjoint()) * 0.5;
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = tol::jacobi(a.frobenius());

  int sweep = 0;
  while (detail::off_diagonal_frobenius(a) > threshold) {
    if (sweep++ >= max_sweeps)
      throw Error(ErrorCode::NonConvergence, "Jacobi eigensolver exceeded " + std::to_string(max_sweeps) + " sweeps");
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  std::vector<double> diag(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = a(i, i).real();
  const auto order = detail::descending_order(diag);
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = diag[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
  return {std::move(values), UnitaryMatrix(detail::permute_columns(v, order), trusted)};
}

/// Operator (spectral) norm: largest singular value.
inline double op_norm(const ComplexMatrix& a) {
  const HermitianMatrix gram(a.adjoint() * a, trusted);
  const auto eig = hermitian_eig(gram);
  return std::sqrt(std::max(0.0, eig.values.front()));
}

/// Eigenvalues on the unit circle with orthonormal eigenvectors, ordered by
/// principal argument descending.
struct SpectralDecomposition {
  std::vector<cplx> eigenvalues;
  UnitaryMatrix eigenvectors;
  UnitaryMatrix subject;

  std::vector<double> arguments() const {
    std::vector<double> args;
    args.reserve(eigenvalues.size());
    for (const auto& z : eigenvalues) args.push_back(principal_arg(z));
    return args;
  }

  ComplexMatrix recompose() const {
    const auto& v = eigenvectors.matrix();
    return v * ComplexMatrix::diagonal(eigenvalues) * v.adjoint();
  }
};

inline constexpr std::uint64_t kEigenSeed = 0x5eed'0f'e16e'5eedULL;
inline constexpr int kEigenRetries = 8;

/// Diagonalizes a unitary through a generic Hermitian combination of its
/// real and imaginary parts, which commutes with u and shares its eigenvectors.
inline SpectralDecomposition unitary_eig(const UnitaryMatrix& u, Rng& rng) {
  const int n = u.n();
  const ComplexMatrix& m = u.matrix();
  const ComplexMatrix re = (m + m.adjoint()) * 0.5;
  const ComplexMatrix im = (m - m.adjoint()) * cplx{0.0, -0.5};
  const double resid_tol = tol::resid(n);

  for (int attempt = 0; attempt <= kEigenRetries; ++attempt) {
    const double s = rng.uniform(0.0, kPi);
    const HermitianMatrix combo(re * std::cos(s) + im * std::sin(s), trusted);
    const auto eig = hermitian_eig(combo);
    const ComplexMatrix& v = eig.vectors.matrix();
    const ComplexMatrix d = v.adjoint() * m * v;

    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) off = std::max(off, std::abs(d(i, j)));
    if (off > resid_tol) continue;

    std::vector<cplx> lambda(static_cast<std::size_t>(n));
    std::vector<double> args(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const cplx z = d(k, k);
      lambda[static_cast<std::size_t>(k)] = std::abs(z) > 0.0 ? z / std::abs(z) : cplx{1.0, 0.0};
      args[static_cast<std::size_t>(k)] = principal_arg(lambda[static_cast<std::size_t>(k)]);
    }
    const auto order = detail::descending_order(args);
    std::vector<cplx> sorted(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) sorted[static_cast<std::size_t>(k)] = lambda[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    return {std::move(sorted), UnitaryMatrix(detail::permute_columns(v, order), trusted), u};
  }
  throw Error(ErrorCode::DegenerateCombination,
              "no Hermitian combination diagonalized the unitary after " + std::to_string(kEigenRetries) + " retries");
}

inline SpectralDecomposition unitary_eig(const UnitaryMatrix& u) {
  Rng rng(kEigenSeed);
  return unitary_eig(u, rng);
}

/// e^x for skew-Hermitian x, through the eigen-decomposition of -ix.
inline UnitaryMatrix expm_skew(const SkewHermitianMatrix& x) {
  const auto eig = hermitian_eig(x.hermitian());
  std::vector<cplx> phases;
  phases.reserve(eig.values.size());
  for (double theta : eig.values) phases.push_back(std::polar(1.0, theta));
  const ComplexMatrix& v = eig.vectors.matrix();
  return {v * ComplexMatrix::diagonal(phases) * v.adjoint(), trusted};
}

/// Principal logarithm from an existing decomposition.
inline SkewHermitianMatrix logm_principal(const SpectralDecomposition& sd) {
  std::vector<cplx> logs;
  logs.reserve(sd.eigenvalues.size());
  for (const auto& z : sd.eigenvalues) {
    const double a = principal_arg(z);
    if (std::abs(a) >= kPi - tol::pi_gap)
      throw Error(ErrorCode::SpectrumAtMinusOne, "eigenvalue argument " + std::to_string(a) + " is within tol_pi_gap of pi");
    logs.emplace_back(0.0, a);
  }
  const ComplexMatrix& v = sd.eigenvectors.matrix();
  return SkewHermitianMatrix::skew_part(v * ComplexMatrix::diagonal(logs) * v.adjoint());
}

/// Principal logarithm; all eigenvalue arguments must stay tol_pi_gap away from pi.
inline SkewHermitianMatrix logm_principal(const UnitaryMatrix& u) { return logm_principal(unitary_eig(u)); }

struct QrResult {
  ComplexMatrix q;
  ComplexMatrix r;
};

/// QR by modified Gram-Schmidt with one re-orthogonalization pass. The
/// diagonal of r is real and non-negative.
inline QrResult qr(const ComplexMatrix& a) {
  const int n = a.n();
  std::vector<Vector> cols;
  cols.reserve(static_cast<std::size_t>(n));
  ComplexMatrix r(n);
  for (int j = 0; j < n; ++j) {
    Vector w = a.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        const auto& qi = cols[static_cast<std::size_t>(i)];
        const cplx c = inner(w, qi);
        r(i, j) += c;
        for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] -= c * qi[static_cast<std::size_t>(k)];
      }
    }
    const double len = norm(w);
    if (len == 0.0) throw Error(ErrorCode::InvalidArgument, "QR of a rank-deficient matrix");
    r(j, j) = len;
    for (auto& z : w) z /= len;
    cols.push_back(std::move(w));
  }
  return {ComplexMatrix::from_columns(cols), std::move(r)};
}

}  // namespace unispec

#endif  // UNISPEC_LINALG_HPP
