// Reference computations that share no code with the library's eigensolver,
// logarithm or exponential.
#ifndef UNISPEC_TESTS_ORACLES_HPP
#define UNISPEC_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "unispec/unispec.hpp"

namespace oracle {

using unispec::ComplexMatrix;
using unispec::cplx;

/// Number of eigenvalues of Hermitian h strictly below lambda, from the
/// inertia of the LDL* factorization of h - lambda I (Sylvester).
inline int count_below(const ComplexMatrix& h, double lambda) {
  const int n = h.n();
  std::vector<cplx> a(h.data().begin(), h.data().end());
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i * n + i)] -= lambda;
  int negatives = 0;
  for (int k = 0; k < n; ++k) {
    double d = a[static_cast<std::size_t>(k * n + k)].real();
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++negatives;
    for (int i = k + 1; i < n; ++i) {
      const cplx l = a[static_cast<std::size_t>(i * n + k)] / d;
      for (int j = k + 1; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] -= l * std::conj(a[static_cast<std::size_t>(j * n + k)]);
    }
  }
  return negatives;
}

/// Eigenvalues of a Hermitian matrix by Sturm-count bisection, descending.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  const int n = h.n();
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(h(i, j));
    r = std::max(r, row);
  }
  std::vector<double> out;
  for (int k = n - 1; k >= 0; --k) {
    // k-th smallest: the smallest lambda with count_below(lambda) > k
    double lo = -r - 1.0, hi = r + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, r); ++it) {
      const double mid = 0.5 * (lo + hi);
      (count_below(h, mid) > k ? hi : lo) = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline cplx det(const ComplexMatrix& m) {
  const int n = m.n();
  std::vector<cplx> a(m.data().begin(), m.data().end());
  cplx d = 1.0;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[static_cast<std::size_t>(i * n + k)]) > std::abs(a[static_cast<std::size_t>(p * n + k)])) p = i;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a[static_cast<std::size_t>(k * n + j)], a[static_cast<std::size_t>(p * n + j)]);
      d = -d;
    }
    const cplx piv = a[static_cast<std::size_t>(k * n + k)];
    d *= piv;
    if (piv == cplx{0.0, 0.0}) return 0.0;
    for (int i = k + 1; i < n; ++i) {
      const cplx l = a[static_cast<std::size_t>(i * n + k)] / piv;
      for (int j = k; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] -= l * a[static_cast<std::size_t>(k * n + j)];
    }
  }
  return d;
}

/// e^m by scaling and squaring of a truncated Taylor series.
inline ComplexMatrix expm_taylor(const ComplexMatrix& m) {
  int squarings = 0;
  double scale = 1.0;
  while (m.max_abs() * m.n() * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  const ComplexMatrix a = m * scale;
  ComplexMatrix term = ComplexMatrix::identity(m.n());
  ComplexMatrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * a * (1.0 / k);
    sum = sum + term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Largest singular value by power iteration on a* a.
inline double op_norm_power(const ComplexMatrix& a, int iterations = 5000) {
  const ComplexMatrix g = a.adjoint() * a;
  std::vector<cplx> v(static_cast<std::size_t>(a.n()));
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = cplx{1.0 + 0.1 * static_cast<double>(k), 0.3 * static_cast<double>(k)};
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    auto w = g * std::span<const cplx>(v);
    lambda = unispec::norm(w) / unispec::norm(v);
    if (lambda == 0.0) return 0.0;
    v = unispec::normalized(w);
  }
  return std::sqrt(lambda);
}

/// Random Hermitian matrix with independent Gaussian entries.
inline ComplexMatrix random_hermitian(int n, unispec::Rng& rng) {
  const auto g = unispec::gaussian_matrix(n, rng);
  return (g + g.adjoint()) * 0.5;
}

}  // namespace oracle

#endif  // UNISPEC_TESTS_ORACLES_HPP
