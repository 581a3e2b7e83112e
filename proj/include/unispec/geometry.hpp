#ifndef UNISPEC_GEOMETRY_HPP
#define UNISPEC_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <variant>
#include <vector>

#include "unispec/core.hpp"
#include "unispec/linalg.hpp"
#include "unispec/matrix.hpp"
#include "unispec/spectral.hpp"

namespace unispec {

inline constexpr int kDefaultSampledSteps = 256;

struct ConstantGenerator {
  SkewHermitianMatrix x;
};

/// Generator samples at uniform times over the segment, linearly interpolated.
struct SampledGenerator {
  std::vector<SkewHermitianMatrix> samples;
};

struct Segment {
  double duration;
  std::variant<ConstantGenerator, SampledGenerator> kind;

  bool is_constant() const { return std::holds_alternative<ConstantGenerator>(kind); }

  /// Generator at local time t in [0, duration].
  SkewHermitianMatrix generator_at(double t) const {
    if (const auto* c = std::get_if<ConstantGenerator>(&kind)) return c->x;
    const auto& s = std::get<SampledGenerator>(kind).samples;
    const int intervals = static_cast<int>(s.size()) - 1;
    const double pos = std::clamp(t / duration, 0.0, 1.0) * intervals;
    const int j = std::min(static_cast<int>(std::floor(pos)), intervals - 1);
    const double w = pos - j;
    const auto& a = s[static_cast<std::size_t>(j)].matrix();
    const auto& b = s[static_cast<std::size_t>(j + 1)].matrix();
    return {a * (1.0 - w) + b * w, trusted};
  }
};

/// A curve t -> gamma_t in U(n) with gamma_a = id, described by its right
/// logarithmic derivative: d/dt gamma = x(t) gamma.
class GeneratorCurve {
 public:
  explicit GeneratorCurve(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw Error(ErrorCode::InvalidArgument, "curve needs at least one segment");
    n_ = -1;
    double total = 0.0;
    for (const auto& seg : segments_) {
      if (!(seg.duration > 0.0) || !std::isfinite(seg.duration))
        throw Error(ErrorCode::InvalidArgument, "segment duration must be positive");
      total += seg.duration;
      if (const auto* c = std::get_if<ConstantGenerator>(&seg.kind)) {
        check_dim(c->x.n());
      } else {
        const auto& s = std::get<SampledGenerator>(seg.kind).samples;
        if (s.size() < 2) throw Error(ErrorCode::InvalidArgument, "sampled segment needs at least two samples");
        for (const auto& x : s) check_dim(x.n());
      }
    }
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "curve duration must be positive");
  }

  static GeneratorCurve constant(SkewHermitianMatrix x, double duration = 1.0) {
    return GeneratorCurve({Segment{duration, ConstantGenerator{std::move(x)}}});
  }

  int n() const noexcept { return n_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }

  double duration() const {
    double t = 0.0;
    for (const auto& s : segments_) t += s.duration;
    return t;
  }

  /// This curve followed by `later`; the endpoint of the result is later_b * this_b.
  GeneratorCurve then(const GeneratorCurve& later) const {
    if (later.n() != n_) throw Error(ErrorCode::DimensionMismatch, "concatenated curves differ in dimension");
    auto segs = segments_;
    segs.insert(segs.end(), later.segments_.begin(), later.segments_.end());
    return GeneratorCurve(std::move(segs));
  }

 private:
  void check_dim(int n) {
    if (n_ < 0) n_ = n;
    if (n != n_) throw Error(ErrorCode::DimensionMismatch, "curve generators differ in dimension");
  }

  std::vector<Segment> segments_;
  int n_;
};

struct EvolutionResult {
  UnitaryMatrix endpoint;
  double int_phi_plus = 0.0;
  double int_phi_minus = 0.0;
  double length = 0.0;
  double s_total = 0.0;  // integral of phi_+ + phi_-
  int steps_used = 0;
};

/// One quadrature node of the discretized curve: step width and generator at the midpoint.
struct CurveNode {
  double weight;
  SkewHermitianMatrix x;
};

/// Midpoint nodes: one per Constant segment, `steps_per_segment` per Sampled segment.
inline std::vector<CurveNode> quadrature_nodes(const GeneratorCurve& curve, int steps_per_segment) {
  if (steps_per_segment < 1) throw Error(ErrorCode::InvalidArgument, "steps_per_segment must be >= 1");
  std::vector<CurveNode> nodes;
  for (const auto& seg : curve.segments()) {
    if (seg.is_constant()) {
      nodes.push_back({seg.duration, std::get<ConstantGenerator>(seg.kind).x});
      continue;
    }
    const double h = seg.duration / steps_per_segment;
    for (int k = 0; k < steps_per_segment; ++k) nodes.push_back({h, seg.generator_at((k + 0.5) * h)});
  }
  return nodes;
}

/// Two Newton-Schulz polar steps, u <- u (3I - u*u)/2.
inline ComplexMatrix reunitarize(ComplexMatrix u) {
  const auto three = ComplexMatrix::identity(u.n()) * 3.0;
  for (int it = 0; it < 2; ++it) u = u * ((three - u.adjoint() * u) * 0.5);
  return u;
}

namespace detail {

inline EvolutionResult evolve_nodes(int n, const std::vector<CurveNode>& nodes, bool centered) {
  EvolutionResult r{UnitaryMatrix::identity(n)};
  ComplexMatrix gamma = ComplexMatrix::identity(n);
  std::vector<cplx> phases(static_cast<std::size_t>(n));
  for (const auto& node : nodes) {
    // one decomposition of -ix gives phi_+-, ||x|| and e^{h x}
    const auto eig = hermitian_eig(node.x.hermitian());
    const double top = eig.values.front();
    const double bottom = eig.values.back();
    const double shift = centered ? 0.5 * (top + bottom) : 0.0;
    for (std::size_t k = 0; k < phases.size(); ++k) phases[k] = std::polar(1.0, node.weight * (eig.values[k] - shift));
    const ComplexMatrix& v = eig.vectors.matrix();
    gamma = reunitarize(v * ComplexMatrix::diagonal(phases) * v.adjoint() * gamma);
    r.int_phi_plus += node.weight * top;
    r.int_phi_minus += node.weight * bottom;
    r.length += node.weight * std::max(std::abs(top - shift), std::abs(bottom - shift));
    ++r.steps_used;
  }
  r.s_total = r.int_phi_plus + r.int_phi_minus;
  r.endpoint = UnitaryMatrix(std::move(gamma), trusted);
  return r;
}

}  // namespace detail

/// Exponential midpoint integration of d/dt gamma = x(t) gamma from gamma_a = id,
/// with midpoint quadrature of phi_+(x), phi_-(x) and ||x||. Constant segments
/// are a single exact step.
inline EvolutionResult evolve(const GeneratorCurve& curve, int steps_per_segment = kDefaultSampledSteps) {
  return detail::evolve_nodes(curve.n(), quadrature_nodes(curve, steps_per_segment), false);
}

/// Evolves alpha_t = gamma_t e^{-i S_t / 2}: the generator is centered at every
/// quadrature node. Integrals (int_phi_*, s_total) refer to the uncentered
/// generator; `length` is the length of alpha.
inline EvolutionResult evolve_centered(const GeneratorCurve& curve, int steps_per_segment = kDefaultSampledSteps) {
  return detail::evolve_nodes(curve.n(), quadrature_nodes(curve, steps_per_segment), true);
}

/// Every generator (and every sample) replaced by its centered version.
inline GeneratorCurve center_curve(const GeneratorCurve& curve) {
  std::vector<Segment> segs;
  for (const auto& seg : curve.segments()) {
    if (const auto* c = std::get_if<ConstantGenerator>(&seg.kind)) {
      segs.push_back({seg.duration, ConstantGenerator{center_generator(c->x)}});
    } else {
      SampledGenerator s;
      for (const auto& x : std::get<SampledGenerator>(seg.kind).samples) s.samples.push_back(center_generator(x));
      segs.push_back({seg.duration, std::move(s)});
    }
  }
  return GeneratorCurve(std::move(segs));
}

/// Finsler length: integral of ||x(t)||.
inline double curve_length(const GeneratorCurve& curve, int steps_per_segment = kDefaultSampledSteps) {
  double len = 0.0;
  for (const auto& node : quadrature_nodes(curve, steps_per_segment)) len += node.weight * op_norm(node.x.matrix());
  return len;
}

/// mu(t) = base * e^{t x}, t in [0, 1].
struct Geodesic {
  UnitaryMatrix base;
  GeneratorCurve curve;

  const SkewHermitianMatrix& generator() const { return std::get<ConstantGenerator>(curve.segments().front().kind).x; }
  UnitaryMatrix at(double t) const { return base * expm_skew(generator().scaled(t)); }
  UnitaryMatrix end() const { return base * evolve(curve).endpoint; }
};

/// Minimal geodesic from u to v with generator log(u* v).
inline Geodesic geodesic_between(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  if (u.n() != v.n()) throw Error(ErrorCode::DimensionMismatch, "unitaries of different dimension");
  return {u, GeneratorCurve::constant(logm_principal(u.inverse() * v))};
}

namespace detail {
inline void require_unit(std::span<const cplx> xi, const char* what) {
  const double len = norm(xi);
  if (std::abs(len - 1.0) > tol::unit_vector) throw Error(ErrorCode::NotUnit, std::string(what) + " is not a unit vector");
}
}  // namespace detail

/// Great-circle distance on the unit sphere of C^n viewed as R^{2n}.
inline double sphere_distance(std::span<const cplx> xi, std::span<const cplx> eta) {
  detail::require_unit(xi, "first argument");
  detail::require_unit(eta, "second argument");
  return std::acos(std::clamp(inner(xi, eta).real(), -1.0, 1.0));
}

/// rho_xi(u) = u xi.
inline Vector orbit_map(const UnitaryMatrix& u, std::span<const cplx> xi) {
  detail::require_unit(xi, "xi");
  if (static_cast<int>(xi.size()) != u.n()) throw Error(ErrorCode::DimensionMismatch, "vector length differs from matrix dimension");
  return u * xi;
}

/// psi_xi(z) = <-i z xi, xi>, real for skew-Hermitian z.
inline double norming_functional(std::span<const cplx> xi, const SkewHermitianMatrix& z) {
  detail::require_unit(xi, "xi");
  const Vector zx = z.matrix() * xi;
  Vector w(zx.size());
  for (std::size_t k = 0; k < zx.size(); ++k) w[k] = cplx{0.0, -1.0} * zx[k];
  const cplx val = inner(w, xi);
  if (std::abs(val.imag()) > 1e-10 * std::max(1.0, z.matrix().frobenius()))
    throw Error(ErrorCode::InvalidArgument, "norming functional has a non-negligible imaginary part");
  return val.real();
}

/// |psi_xi(e^{-y} d exp_y[x]) - psi_xi(x)| with the differential of exp taken
/// by central differences of width eps.
inline double gauss_lemma_check(const SkewHermitianMatrix& y, const SkewHermitianMatrix& x, std::span<const cplx> xi, double eps) {
  detail::require_unit(xi, "xi");
  if (!(eps >= 1e-6 && eps <= 1e-3)) throw Error(ErrorCode::InvalidArgument, "eps must lie in [1e-6, 1e-3]");
  const double ynorm = op_norm(y.matrix());
  Vector r = y.matrix() * xi;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= cplx{0.0, ynorm} * xi[k];
  if (norm(r) > 1e-6) throw Error(ErrorCode::NotNormingVector, "xi is not a norming eigenvector of y");

  const ComplexMatrix plus = expm_skew(y + x.scaled(eps)).matrix();
  const ComplexMatrix minus = expm_skew(y - x.scaled(eps)).matrix();
  const ComplexMatrix dexp = (plus - minus) * (0.5 / eps);
  const ComplexMatrix w = expm_skew(y.scaled(-1.0)).matrix() * dexp;
  return std::abs(norming_functional(xi, SkewHermitianMatrix::skew_part(w)) - norming_functional(xi, x));
}

}  // namespace unispec

#endif  // UNISPEC_GEOMETRY_HPP
