#ifndef UNISPEC_THEOREMS_HPP
#define UNISPEC_THEOREMS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unispec/core.hpp"
#include "unispec/geometry.hpp"
#include "unispec/linalg.hpp"
#include "unispec/matrix.hpp"
#include "unispec/random.hpp"
#include "unispec/spectral.hpp"

namespace unispec {

enum class Applicability {
  Applicable,
  SpectrumAtMinusOne,  // some input has -1 in its spectrum
  HypothesisFailed,    // angle sums reach +-pi
};

inline constexpr std::string_view to_string(Applicability a) {
  switch (a) {
    case Applicability::Applicable: return "Applicable";
    case Applicability::SpectrumAtMinusOne: return "SpectrumAtMinusOne";
    case Applicability::HypothesisFailed: return "HypothesisFailed";
  }
  return "Unknown";
}

/// Compares the intersection of the factor eigenspaces (lhs) with the
/// eigenspace of the product or endpoint (rhs).
struct EigenspaceCheck {
  int lhs_dim = 0;
  int rhs_dim = 0;
  double subspace_distance = 0.0;
};

/// Outcome of one spectral-bound check.
///
/// `bound_*` is the sum of factor angles (or the integral of phi_* along a
/// curve) and `theta_*_product` the attained angle of the product. The upper
/// slack is bound_plus - theta_plus_product, the lower one
/// theta_minus_product - bound_minus; both are non-negative when the bound holds.
struct BoundReport {
  Applicability applicability = Applicability::Applicable;
  std::string reason;
  Angle theta_plus_product;
  Angle theta_minus_product;
  double bound_plus = 0.0;
  double bound_minus = 0.0;
  double slack_plus = 0.0;
  double slack_minus = 0.0;
  bool equality_plus = false;
  bool equality_minus = false;
  std::optional<EigenspaceCheck> eigenspace_plus;
  std::optional<EigenspaceCheck> eigenspace_minus;
  /// Set when the product has -1 in its spectrum although the hypotheses hold.
  bool product_at_minus_one = false;
  /// Curve checks only: |theta_+(alpha_b) - (theta_+(gamma_b) - S_b/2)|.
  std::optional<double> centered_residual;
  double tolerance_used = tol::verdict;

  bool applicable() const { return applicability == Applicability::Applicable; }

  /// True when the bound is violated beyond tolerance or an equality case
  /// fails to show the eigenspace identity.
  bool violated() const {
    if (!applicable()) return false;
    if (product_at_minus_one) return true;
    if (slack_plus < -tol::verdict || slack_minus < -tol::verdict) return true;
    if (eigenspace_plus && !eigenspace_matches(*eigenspace_plus)) return true;
    if (eigenspace_minus && !eigenspace_matches(*eigenspace_minus)) return true;
    if (centered_residual && *centered_residual > tol::roundtrip) return true;
    return false;
  }

  static bool eigenspace_matches(const EigenspaceCheck& c) {
    return c.lhs_dim == c.rhs_dim && c.subspace_distance <= kEigenspaceTolerance;
  }

  static constexpr double kEigenspaceTolerance = 1e-8;
};

namespace detail {

inline Subspace intersect_all(const std::vector<Subspace>& spaces) {
  Subspace acc = spaces.front();
  for (std::size_t k = 1; k < spaces.size(); ++k) acc = subspace_intersect(acc, spaces[k]);
  return acc;
}

inline EigenspaceCheck compare(const Subspace& lhs, const Subspace& rhs) {
  return {lhs.dim(), rhs.dim(), subspace_distance(lhs, rhs)};
}

inline BoundReport inapplicable(Applicability why, std::string reason) {
  BoundReport r;
  r.applicability = why;
  r.reason = std::move(reason);
  return r;
}

}  // namespace detail

/// Spectral bound for u = us[0] us[1] ... us[m-1]:
/// sum theta_+(u_j) >= theta_+(u) and sum theta_-(u_j) <= theta_-(u), with the
/// eigenspace identity for the top (bottom) eigenspaces in the equality case.
inline BoundReport check_nfold_bound(const std::vector<UnitaryMatrix>& us) {
  if (us.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one factor");
  const int n = us.front().n();
  std::vector<SpectralDecomposition> decomps;
  decomps.reserve(us.size());
  double sum_plus = 0.0;
  double sum_minus = 0.0;
  for (std::size_t j = 0; j < us.size(); ++j) {
    if (us[j].n() != n) throw Error(ErrorCode::DimensionMismatch, "factors differ in dimension");
    decomps.push_back(unitary_eig(us[j]));
    try {
      const auto r = detail::theta_range(decomps.back());
      sum_plus += r.plus.radians;
      sum_minus += r.minus.radians;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SpectrumAtMinusOne) throw;
      return detail::inapplicable(Applicability::SpectrumAtMinusOne, "factor " + std::to_string(j) + " has -1 in its spectrum");
    }
  }
  if (!(sum_plus < kPi)) return detail::inapplicable(Applicability::HypothesisFailed, "sum of theta_+ is not below pi");
  if (!(sum_minus > -kPi)) return detail::inapplicable(Applicability::HypothesisFailed, "sum of theta_- is not above -pi");

  BoundReport rep;
  rep.bound_plus = sum_plus;
  rep.bound_minus = sum_minus;

  UnitaryMatrix product = us.front();
  for (std::size_t j = 1; j < us.size(); ++j) product = product * us[j];
  const auto prod_sd = unitary_eig(product);
  ThetaRange attained;
  try {
    attained = detail::theta_range(prod_sd);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SpectrumAtMinusOne) throw;
    rep.product_at_minus_one = true;
    rep.reason = "product has -1 in its spectrum";
    return rep;
  }
  rep.theta_plus_product = attained.plus;
  rep.theta_minus_product = attained.minus;
  rep.slack_plus = sum_plus - attained.plus.radians;
  rep.slack_minus = attained.minus.radians - sum_minus;
  rep.equality_plus = std::abs(rep.slack_plus) <= tol::eq;
  rep.equality_minus = std::abs(rep.slack_minus) <= tol::eq;

  const auto prod_args = prod_sd.arguments();
  if (rep.equality_plus) {
    std::vector<Subspace> tops;
    for (const auto& sd : decomps) {
      const auto args = sd.arguments();
      tops.push_back(detail::eigen_cluster(n, sd.eigenvectors, args, args.front()));
    }
    rep.eigenspace_plus = detail::compare(detail::intersect_all(tops),
                                          detail::eigen_cluster(n, prod_sd.eigenvectors, prod_args, prod_args.front()));
  }
  if (rep.equality_minus) {
    std::vector<Subspace> bottoms;
    for (const auto& sd : decomps) {
      const auto args = sd.arguments();
      bottoms.push_back(detail::eigen_cluster(n, sd.eigenvectors, args, args.back()));
    }
    rep.eigenspace_minus = detail::compare(detail::intersect_all(bottoms),
                                           detail::eigen_cluster(n, prod_sd.eigenvectors, prod_args, prod_args.back()));
  }
  return rep;
}

/// Two-factor case; "uv" is the matrix product u * v.
inline BoundReport check_product_bound(const UnitaryMatrix& u, const UnitaryMatrix& v) { return check_nfold_bound({u, v}); }

/// Spectral bound along a curve: theta_+(gamma_b) <= int phi_+(x(t)) dt and
/// theta_-(gamma_b) >= int phi_-(x(t)) dt. Equality cases compare H_±(gamma_b)
/// with the intersection of H_±(x) over the quadrature nodes.
inline BoundReport check_curve_bound(const GeneratorCurve& curve, int steps_per_segment = kDefaultSampledSteps) {
  const int n = curve.n();
  const auto nodes = quadrature_nodes(curve, steps_per_segment);
  const auto ev = detail::evolve_nodes(n, nodes, false);
  if (!(ev.int_phi_plus < kPi)) return detail::inapplicable(Applicability::HypothesisFailed, "integral of phi_+ is not below pi");
  if (!(ev.int_phi_minus > -kPi)) return detail::inapplicable(Applicability::HypothesisFailed, "integral of phi_- is not above -pi");

  BoundReport rep;
  rep.bound_plus = ev.int_phi_plus;
  rep.bound_minus = ev.int_phi_minus;
  const auto end_sd = unitary_eig(ev.endpoint);
  ThetaRange attained;
  try {
    attained = detail::theta_range(end_sd);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SpectrumAtMinusOne) throw;
    rep.product_at_minus_one = true;
    rep.reason = "endpoint has -1 in its spectrum";
    return rep;
  }
  rep.theta_plus_product = attained.plus;
  rep.theta_minus_product = attained.minus;
  rep.slack_plus = ev.int_phi_plus - attained.plus.radians;
  rep.slack_minus = attained.minus.radians - ev.int_phi_minus;
  rep.equality_plus = std::abs(rep.slack_plus) <= tol::eq;
  rep.equality_minus = std::abs(rep.slack_minus) <= tol::eq;

  const auto end_args = end_sd.arguments();
  if (rep.equality_plus) {
    std::vector<Subspace> tops;
    for (const auto& node : nodes) tops.push_back(eigenspace_plus(node.x));
    rep.eigenspace_plus = detail::compare(detail::intersect_all(tops),
                                          detail::eigen_cluster(n, end_sd.eigenvectors, end_args, end_args.front()));
  }
  if (rep.equality_minus) {
    std::vector<Subspace> bottoms;
    for (const auto& node : nodes) bottoms.push_back(eigenspace_minus(node.x));
    rep.eigenspace_minus = detail::compare(detail::intersect_all(bottoms),
                                           detail::eigen_cluster(n, end_sd.eigenvectors, end_args, end_args.back()));
  }

  const auto alpha = detail::evolve_nodes(n, nodes, true);
  rep.centered_residual = std::abs(theta_plus(alpha.endpoint).radians - (attained.plus.radians - 0.5 * ev.s_total));
  return rep;
}

/// For xi a common eigenvector of every generator, x(t) xi = i f(t) xi, returns
/// ||gamma_b xi - e^{i int f} xi||.
inline double check_lrlog(const GeneratorCurve& curve, std::span<const cplx> xi, int steps_per_segment = kDefaultSampledSteps) {
  if (static_cast<int>(xi.size()) != curve.n()) throw Error(ErrorCode::DimensionMismatch, "vector length differs from curve dimension");
  detail::require_unit(xi, "xi");
  auto eigenvalue_of = [&](const SkewHermitianMatrix& x) {
    const double f = norming_functional(xi, x);
    Vector r = x.matrix() * xi;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= cplx{0.0, f} * xi[k];
    if (norm(r) > 1e-8) throw Error(ErrorCode::NotCommonEigenvector, "xi is not an eigenvector of every generator sample");
    return f;
  };
  // f is piecewise linear on sampled segments, so the trapezoid rule is exact.
  double integral = 0.0;
  for (const auto& seg : curve.segments()) {
    if (const auto* c = std::get_if<ConstantGenerator>(&seg.kind)) {
      integral += seg.duration * eigenvalue_of(c->x);
      continue;
    }
    const auto& s = std::get<SampledGenerator>(seg.kind).samples;
    const double h = seg.duration / static_cast<double>(s.size() - 1);
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double w = (j == 0 || j + 1 == s.size()) ? 0.5 : 1.0;
      integral += w * h * eigenvalue_of(s[j]);
    }
  }
  const auto ev = evolve(curve, steps_per_segment);
  const Vector moved = ev.endpoint * xi;
  const cplx phase = std::polar(1.0, integral);
  double acc = 0.0;
  for (std::size_t k = 0; k < moved.size(); ++k) acc += std::norm(moved[k] - phase * xi[k]);
  return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Instance generators

inline ComplexMatrix gaussian_matrix(int n, Rng& rng) {
  ComplexMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  return g;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
/// diag(R) absorbed into Q.
inline UnitaryMatrix haar_unitary(int n, Rng& rng) {
  if (n < 1 || n > kMaxDim) throw Error(ErrorCode::InvalidArgument, "dimension must be in [1, 64]");
  auto [q, r] = qr(gaussian_matrix(n, rng));
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const cplx phase = std::abs(d) > 0.0 ? d / std::abs(d) : cplx{1.0, 0.0};
    for (int i = 0; i < n; ++i) q(i, j) *= phase;
  }
  return {std::move(q), trusted};
}

inline UnitaryMatrix haar_unitary(int n, RngSeed seed) {
  Rng rng(seed);
  return haar_unitary(n, rng);
}

/// Random Hermitian-generated skew matrix i*(G + G*)/2 scaled to operator norm `target_norm`.
inline SkewHermitianMatrix random_skew(int n, double target_norm, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(n, rng);
  ComplexMatrix h = (g + g.adjoint()) * 0.5;
  const double nrm = op_norm(h);
  if (nrm > 0.0) h *= target_norm / nrm;
  return SkewHermitianMatrix::from_hermitian(HermitianMatrix(std::move(h), trusted));
}

/// w diag(e^{i angles}) w*.
inline UnitaryMatrix unitary_with_angles(const UnitaryMatrix& w, const std::vector<double>& angles) {
  std::vector<cplx> d;
  d.reserve(angles.size());
  for (double a : angles) d.push_back(std::polar(1.0, a));
  const auto& wm = w.matrix();
  return {wm * ComplexMatrix::diagonal(d) * wm.adjoint(), trusted};
}

/// u = w diag(e^{i theta_k}) w* with w Haar and theta_k uniform in (-cap, cap).
inline UnitaryMatrix random_bounded_unitary(int n, Angle cap, Rng& rng) {
  if (!(cap.radians > 0.0 && cap.radians < kPi)) throw Error(ErrorCode::InvalidAngles, "theta_cap must lie in (0, pi)");
  const auto w = haar_unitary(n, rng);
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (auto& a : angles) a = rng.uniform(-cap.radians, cap.radians);
  return unitary_with_angles(w, angles);
}

inline UnitaryMatrix random_bounded_unitary(int n, Angle cap, RngSeed seed) {
  Rng rng(seed);
  return random_bounded_unitary(n, cap, rng);
}

inline constexpr double kEqualityMargin = 0.05;
inline constexpr double kEqualitySpread = 1.0;

/// A pair (u, v) sharing the top eigenspace w*span(e_1..e_k) with angles
/// theta_a and theta_b, so that theta_+(uv) = theta_a + theta_b. The remaining
/// eigenvalues of u (v) have arguments in (theta_a - 1.05, theta_a - 0.05].
inline std::pair<UnitaryMatrix, UnitaryMatrix> make_equality_pair(int n, int k, Angle theta_a, Angle theta_b, Rng& rng) {
  if (k < 1 || k > n) throw Error(ErrorCode::InvalidArgument, "shared dimension k must lie in [1, n]");
  if (!(theta_a.radians > 0.0 && theta_b.radians > 0.0 && theta_a.radians + theta_b.radians < kPi))
    throw Error(ErrorCode::InvalidAngles, "need theta_a, theta_b > 0 and theta_a + theta_b < pi");
  const auto w = haar_unitary(n, rng);
  auto block = [&](double top) {
    std::vector<double> angles(static_cast<std::size_t>(n), top);
    const int rest = n - k;
    if (rest > 0) {
      const auto inner_w = haar_unitary(rest, rng);
      std::vector<double> low(static_cast<std::size_t>(rest));
      for (auto& a : low) a = top - kEqualityMargin - kEqualitySpread * rng.uniform();
      const auto a_block = unitary_with_angles(inner_w, low);
      // embed into the lower-right corner of diag(e^{i top} I_k, A)
      ComplexMatrix d(n);
      for (int i = 0; i < k; ++i) d(i, i) = std::polar(1.0, top);
      for (int i = 0; i < rest; ++i)
        for (int j = 0; j < rest; ++j) d(k + i, k + j) = a_block.matrix()(i, j);
      return UnitaryMatrix(w.matrix() * d * w.matrix().adjoint(), trusted);
    }
    return unitary_with_angles(w, angles);
  };
  auto u = block(theta_a.radians);
  auto v = block(theta_b.radians);
  return {std::move(u), std::move(v)};
}

inline std::pair<UnitaryMatrix, UnitaryMatrix> make_equality_pair(int n, int k, Angle theta_a, Angle theta_b, RngSeed seed) {
  Rng rng(seed);
  return make_equality_pair(n, k, theta_a, theta_b, rng);
}

/// Random unit vector in C^n.
inline Vector random_unit_vector(int n, Rng& rng) {
  Vector v(static_cast<std::size_t>(n));
  for (auto& z : v) z = rng.complex_normal();
  return normalized(v);
}

}  // namespace unispec

#endif  // UNISPEC_THEOREMS_HPP
