#ifndef UNISPEC_MATRIX_HPP
#define UNISPEC_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "unispec/core.hpp"

namespace unispec {

using Vector = std::vector<cplx>;

/// <a, b> = sum a_k conj(b_k), linear in the first argument.
inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "inner product of vectors of different length");
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * std::conj(b[k]);
  return acc;
}

inline double norm(std::span<const cplx> a) {
  double acc = 0.0;
  for (const auto& z : a) acc += std::norm(z);
  return std::sqrt(acc);
}

inline Vector normalized(std::span<const cplx> a) {
  const double len = norm(a);
  if (len == 0.0) throw Error(ErrorCode::InvalidArgument, "cannot normalize the zero vector");
  Vector out(a.begin(), a.end());
  for (auto& z : out) z /= len;
  return out;
}

inline Vector basis_vector(int n, int k) {
  Vector e(static_cast<std::size_t>(n), cplx{0.0, 0.0});
  e[static_cast<std::size_t>(k)] = 1.0;
  return e;
}

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(int n) : n_(n), data_(checked_size(n), cplx{0.0, 0.0}) {}

  ComplexMatrix(int n, std::vector<cplx> row_major) : n_(n), data_(std::move(row_major)) {
    if (data_.size() != checked_size(n)) throw Error(ErrorCode::DimensionMismatch, "matrix data is not n*n");
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorCode::InvalidArgument, "matrix entries must be finite");
    }
  }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const cplx> d) {
    ComplexMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
  }

  /// Matrix whose columns are the given vectors (must be n of length n).
  static ComplexMatrix from_columns(const std::vector<Vector>& cols) {
    const int n = static_cast<int>(cols.size());
    ComplexMatrix m(n);
    for (int j = 0; j < n; ++j) {
      if (static_cast<int>(cols[static_cast<std::size_t>(j)].size()) != n)
        throw Error(ErrorCode::DimensionMismatch, "column length differs from column count");
      for (int i = 0; i < n; ++i) m(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
    return m;
  }

  int n() const noexcept { return n_; }

  cplx& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const cplx& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * n_ + j)]; }

  std::span<const cplx> data() const noexcept { return data_; }

  Vector column(int j) const {
    Vector c(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) c[static_cast<std::size_t>(i)] = (*this)(i, j);
    return c;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  cplx trace() const {
    cplx t{0.0, 0.0};
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius() const {
    double acc = 0.0;
    for (const auto& z : data_) acc += std::norm(z);
    return std::sqrt(acc);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.same_dim(b);
    const int n = a.n_;
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{0.0, 0.0}) continue;
        for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Vector operator*(const ComplexMatrix& a, std::span<const cplx> x) {
    if (static_cast<int>(x.size()) != a.n_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
    Vector y(x.size(), cplx{0.0, 0.0});
    for (int i = 0; i < a.n_; ++i) {
      cplx acc{0.0, 0.0};
      for (int j = 0; j < a.n_; ++j) acc += a(i, j) * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  static std::size_t checked_size(int n) {
    if (n < 1 || n > kMaxDim)
      throw Error(ErrorCode::InvalidArgument, "matrix dimension must be in [1, 64], got " + std::to_string(n));
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }

  void same_dim(const ComplexMatrix& o) const {
    if (o.n_ != n_) throw Error(ErrorCode::DimensionMismatch, "matrix dimensions differ");
  }

  int n_;
  std::vector<cplx> data_;
};

/// Max-entry distance between two matrices of equal size.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

/// Hermitian deviation ||a - a*||_max.
inline double hermitian_defect(const ComplexMatrix& a) { return max_abs_diff(a, a.adjoint()); }
/// Skew-Hermitian deviation ||a + a*||_max.
inline double skew_defect(const ComplexMatrix& a) { return (a + a.adjoint()).max_abs(); }
/// Unitarity deviation ||a*a - I||_max.
inline double unitary_defect(const ComplexMatrix& a) {
  return max_abs_diff(a.adjoint() * a, ComplexMatrix::identity(a.n()));
}

struct trusted_t {
  explicit trusted_t() = default;
};
/// Skips the invariant check; for values produced by the library itself.
inline constexpr trusted_t trusted{};

class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
    const double defect = hermitian_defect(m_);
    if (defect > tol::sym(m_.n()))
      throw Error(ErrorCode::ValidationError,
                  "matrix is not Hermitian within tol_sym (defect " + std::to_string(defect) + ")");
  }
  HermitianMatrix(ComplexMatrix m, trusted_t) : m_(std::move(m)) {}

  int n() const noexcept { return m_.n(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  ComplexMatrix m_;
};

/// Element of the Lie algebra u(n): x* = -x.
class SkewHermitianMatrix {
 public:
  explicit SkewHermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
    const double defect = skew_defect(m_);
    if (defect > tol::sym(m_.n()))
      throw Error(ErrorCode::ValidationError,
                  "matrix is not skew-Hermitian within tol_sym (defect " + std::to_string(defect) + ")");
  }
  SkewHermitianMatrix(ComplexMatrix m, trusted_t) : m_(std::move(m)) {}

  /// x = i h.
  static SkewHermitianMatrix from_hermitian(const HermitianMatrix& h) {
    return {h.matrix() * cplx{0.0, 1.0}, trusted};
  }
  static SkewHermitianMatrix zero(int n) { return {ComplexMatrix(n), trusted}; }

  /// Projection (m - m*)/2 onto the skew-Hermitian matrices.
  static SkewHermitianMatrix skew_part(const ComplexMatrix& m) { return {(m - m.adjoint()) * 0.5, trusted}; }

  int n() const noexcept { return m_.n(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  /// The Hermitian matrix -i x.
  HermitianMatrix hermitian() const { return {m_ * cplx{0.0, -1.0}, trusted}; }

  SkewHermitianMatrix scaled(double s) const { return {m_ * s, trusted}; }

  friend SkewHermitianMatrix operator+(const SkewHermitianMatrix& a, const SkewHermitianMatrix& b) {
    return {a.m_ + b.m_, trusted};
  }
  friend SkewHermitianMatrix operator-(const SkewHermitianMatrix& a, const SkewHermitianMatrix& b) {
    return {a.m_ - b.m_, trusted};
  }
  friend bool operator==(const SkewHermitianMatrix&, const SkewHermitianMatrix&) = default;

 private:
  ComplexMatrix m_;
};

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
    const double defect = unitary_defect(m_);
    if (defect > tol::unitary(m_.n()))
      throw Error(ErrorCode::ValidationError,
                  "matrix is not unitary within tol_unitary (defect " + std::to_string(defect) + ")");
  }
  UnitaryMatrix(ComplexMatrix m, trusted_t) : m_(std::move(m)) {}

  static UnitaryMatrix identity(int n) { return {ComplexMatrix::identity(n), trusted}; }

  int n() const noexcept { return m_.n(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  UnitaryMatrix inverse() const { return {m_.adjoint(), trusted}; }

  /// e^{i angle} u
  UnitaryMatrix phase_shifted(double angle) const { return {m_ * std::polar(1.0, angle), trusted}; }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) { return {a.m_ * b.m_, trusted}; }
  friend Vector operator*(const UnitaryMatrix& a, std::span<const cplx> x) { return a.m_ * x; }
  friend bool operator==(const UnitaryMatrix&, const UnitaryMatrix&) = default;

 private:
  ComplexMatrix m_;
};

/// w x w*, conjugation of a generator by a unitary.
inline SkewHermitianMatrix conjugate(const UnitaryMatrix& w, const SkewHermitianMatrix& x) {
  return SkewHermitianMatrix::skew_part(w.matrix() * x.matrix() * w.matrix().adjoint());
}

}  // namespace unispec

#endif  // UNISPEC_MATRIX_HPP
