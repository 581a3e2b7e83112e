#ifndef UNISPEC_SPECTRAL_HPP
#define UNISPEC_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <utility>
#include <vector>

#include "unispec/core.hpp"
#include "unispec/linalg.hpp"
#include "unispec/matrix.hpp"

namespace unispec {

/// An angle in radians.
struct Angle {
  double radians = 0.0;

  friend auto operator<=>(const Angle&, const Angle&) = default;
  friend Angle operator+(Angle a, Angle b) { return {a.radians + b.radians}; }
  friend Angle operator-(Angle a, Angle b) { return {a.radians - b.radians}; }
  friend Angle operator-(Angle a) { return {-a.radians}; }
};

/// Subspace of C^n stored through an orthonormal basis (k = 0 is the zero subspace).
class Subspace {
 public:
  explicit Subspace(int ambient_dim) : n_(ambient_dim) {}

  /// Orthonormalizes the given spanning set, dropping dependent directions.
  static Subspace span(int ambient_dim, const std::vector<Vector>& vectors, double drop_tol = 1e-10) {
    Subspace s(ambient_dim);
    for (const auto& v : vectors) {
      if (static_cast<int>(v.size()) != ambient_dim) throw Error(ErrorCode::DimensionMismatch, "vector length differs from ambient dimension");
      Vector w = v;
      const double original = norm(w);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : s.basis_) {
          const cplx c = inner(w, b);
          for (std::size_t k = 0; k < w.size(); ++k) w[k] -= c * b[k];
        }
      }
      const double len = norm(w);
      if (original == 0.0 || len <= drop_tol * std::max(1.0, original)) continue;
      for (auto& z : w) z /= len;
      s.basis_.push_back(std::move(w));
    }
    return s;
  }

  /// Takes an already orthonormal basis.
  static Subspace from_orthonormal(int ambient_dim, std::vector<Vector> basis) {
    Subspace s(ambient_dim);
    s.basis_ = std::move(basis);
    return s;
  }

  int ambient_dim() const noexcept { return n_; }
  int dim() const noexcept { return static_cast<int>(basis_.size()); }
  const std::vector<Vector>& basis() const noexcept { return basis_; }

  ComplexMatrix projector() const {
    ComplexMatrix p(n_);
    for (const auto& b : basis_)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) p(i, j) += b[static_cast<std::size_t>(i)] * std::conj(b[static_cast<std::size_t>(j)]);
    return p;
  }

 private:
  int n_;
  std::vector<Vector> basis_;
};

struct ThetaRange {
  Angle plus;
  Angle minus;
};

namespace detail {

inline ThetaRange theta_range(const SpectralDecomposition& sd) {
  const auto args = sd.arguments();
  for (double a : args) {
    if (std::abs(a) >= kPi - tol::pi_gap)
      throw Error(ErrorCode::SpectrumAtMinusOne, "-1 lies in the spectrum within tol_pi_gap");
  }
  // arguments are sorted descending
  return {{args.front()}, {args.back()}};
}

inline Subspace eigen_cluster(int n, const UnitaryMatrix& vectors, const std::vector<double>& keys, double target) {
  std::vector<Vector> cols;
  for (std::size_t k = 0; k < keys.size(); ++k)
    if (std::abs(keys[k] - target) <= tol::cluster) cols.push_back(vectors.matrix().column(static_cast<int>(k)));
  return Subspace::from_orthonormal(n, std::move(cols));
}

}  // namespace detail

/// theta_+(u) and theta_-(u): extreme principal arguments of spec(u).
inline ThetaRange theta_range(const UnitaryMatrix& u) { return detail::theta_range(unitary_eig(u)); }
inline Angle theta_plus(const UnitaryMatrix& u) { return theta_range(u).plus; }
inline Angle theta_minus(const UnitaryMatrix& u) { return theta_range(u).minus; }

/// phi_+(x), phi_-(x): extreme eigenvalues of -ix. Not reduced modulo 2 pi.
inline ThetaRange phi_range(const SkewHermitianMatrix& x) {
  const auto eig = hermitian_eig(x.hermitian());
  return {{eig.values.front()}, {eig.values.back()}};
}
inline Angle phi_plus(const SkewHermitianMatrix& x) { return phi_range(x).plus; }
inline Angle phi_minus(const SkewHermitianMatrix& x) { return phi_range(x).minus; }

/// e^{-i(theta_+ + theta_-)/2} u, whose spectrum is symmetric about angle 0.
inline UnitaryMatrix center_unitary(const UnitaryMatrix& u) {
  const auto r = theta_range(u);
  return u.phase_shifted(-0.5 * (r.plus.radians + r.minus.radians));
}

/// x - (i/2)(phi_+ + phi_-) I.
inline SkewHermitianMatrix center_generator(const SkewHermitianMatrix& x) {
  const auto r = phi_range(x);
  const double shift = 0.5 * (r.plus.radians + r.minus.radians);
  ComplexMatrix m = x.matrix();
  for (int i = 0; i < m.n(); ++i) m(i, i) -= cplx{0.0, shift};
  return {std::move(m), trusted};
}

inline Subspace eigenspace_plus(const UnitaryMatrix& u) {
  const auto sd = unitary_eig(u);
  const auto r = detail::theta_range(sd);
  return detail::eigen_cluster(u.n(), sd.eigenvectors, sd.arguments(), r.plus.radians);
}

inline Subspace eigenspace_minus(const UnitaryMatrix& u) {
  const auto sd = unitary_eig(u);
  const auto r = detail::theta_range(sd);
  return detail::eigen_cluster(u.n(), sd.eigenvectors, sd.arguments(), r.minus.radians);
}

inline Subspace eigenspace_plus(const SkewHermitianMatrix& x) {
  const auto eig = hermitian_eig(x.hermitian());
  return detail::eigen_cluster(x.n(), eig.vectors, eig.values, eig.values.front());
}

inline Subspace eigenspace_minus(const SkewHermitianMatrix& x) {
  const auto eig = hermitian_eig(x.hermitian());
  return detail::eigen_cluster(x.n(), eig.vectors, eig.values, eig.values.back());
}

/// A ∩ B: eigenvectors of P_A P_B P_A whose eigenvalue is 1 up to tol_sub.
inline Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  const int n = a.ambient_dim();
  if (b.ambient_dim() != n) throw Error(ErrorCode::DimensionMismatch, "subspaces live in different ambient spaces");
  if (a.dim() == 0 || b.dim() == 0) return Subspace(n);
  const ComplexMatrix pa = a.projector();
  const ComplexMatrix pb = b.projector();
  const auto eig = hermitian_eig(HermitianMatrix(pa * pb * pa, trusted));
  std::vector<Vector> cols;
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    if (eig.values[k] >= 1.0 - tol::sub) cols.push_back(eig.vectors.matrix().column(static_cast<int>(k)));
  return Subspace::from_orthonormal(n, std::move(cols));
}

/// ||P_A - P_B||, zero exactly when A = B.
inline double subspace_distance(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "subspaces live in different ambient spaces");
  return op_norm(a.projector() - b.projector());
}

/// d(id, u) = max(theta_+, -theta_-).
inline double dist_identity(const UnitaryMatrix& u) {
  const auto r = theta_range(u);
  return std::max(r.plus.radians, -r.minus.radians);
}

/// Rectifiable distance, through left invariance: d(u, v) = d(id, u* v).
inline double dist(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  if (u.n() != v.n()) throw Error(ErrorCode::DimensionMismatch, "unitaries of different dimension");
  return dist_identity(u.inverse() * v);
}

/// theta_±(e^{i lambda} u) = lambda + theta_±(u), checked against direct recomputation.
inline ThetaRange phase_shift_spectrum(const UnitaryMatrix& u, Angle lambda) {
  const auto r = theta_range(u);
  if (!(-kPi - r.minus.radians < lambda.radians && lambda.radians < kPi - r.plus.radians))
    throw Error(ErrorCode::ShiftOutOfRange, "phase shift leaves (-pi - theta_-, pi - theta_+)");
  const ThetaRange shifted{lambda + r.plus, lambda + r.minus};
  const auto direct = theta_range(u.phase_shifted(lambda.radians));
  if (std::abs(direct.plus.radians - shifted.plus.radians) > tol::spec ||
      std::abs(direct.minus.radians - shifted.minus.radians) > tol::spec)
    throw Error(ErrorCode::ShiftOutOfRange, "phase-shifted spectrum disagrees with direct recomputation");
  return shifted;
}

}  // namespace unispec

#endif  // UNISPEC_SPECTRAL_HPP
