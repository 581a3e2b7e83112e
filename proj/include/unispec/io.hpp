#ifndef UNISPEC_IO_HPP
#define UNISPEC_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "unispec/core.hpp"
#include "unispec/geometry.hpp"
#include "unispec/matrix.hpp"
#include "unispec/spectral.hpp"
#include "unispec/theorems.hpp"

namespace unispec::io {

using json = nlohmann::json;

/// Rounds to 12 significant digits for human-facing reports.
inline double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

// ---------------------------------------------------------------------------
// Matrices: {"n": 2, "re": [[...], ...], "im": [[...], ...]}, row-major.

inline json to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (int i = 0; i < m.n(); ++i) {
    json rr = json::array();
    json ii = json::array();
    for (int j = 0; j < m.n(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"n", m.n()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

inline double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_fail(where + " is not finite");
  return v;
}

inline std::vector<double> number_list(const json& j, std::size_t expect, const std::string& where) {
  if (!j.is_array() || j.size() != expect) parse_fail(where + " must be an array of " + std::to_string(expect) + " numbers");
  std::vector<double> out;
  out.reserve(expect);
  for (std::size_t k = 0; k < expect; ++k) out.push_back(number_at(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

}  // namespace detail

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) detail::parse_fail("matrix must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer()) detail::parse_fail("matrix needs an integer field \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1 || n > kMaxDim) detail::parse_fail("matrix dimension must lie in [1, 64]");
  for (const char* key : {"re", "im"}) {
    if (!j.contains(key) || !j[key].is_array()) detail::parse_fail(std::string("matrix needs an array field \"") + key + "\"");
    if (j[key].size() != static_cast<std::size_t>(n)) detail::parse_fail(std::string("\"") + key + "\" must have n rows (matrix must be square)");
  }
  std::vector<cplx> data;
  data.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto row = std::to_string(i);
    const auto re = detail::number_list(j["re"][static_cast<std::size_t>(i)], static_cast<std::size_t>(n), "re[" + row + "]");
    const auto im = detail::number_list(j["im"][static_cast<std::size_t>(i)], static_cast<std::size_t>(n), "im[" + row + "]");
    for (int c = 0; c < n; ++c) data.emplace_back(re[static_cast<std::size_t>(c)], im[static_cast<std::size_t>(c)]);
  }
  return ComplexMatrix(n, std::move(data));
}

// ---------------------------------------------------------------------------
// Subspaces: {"n": 4, "k": 2, "basis_re": [[col0], [col1]], "basis_im": [...]}

inline json to_json(const Subspace& s) {
  json re = json::array();
  json im = json::array();
  for (const auto& b : s.basis()) {
    json rr = json::array();
    json ii = json::array();
    for (const auto& z : b) {
      rr.push_back(z.real());
      ii.push_back(z.imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"n", s.ambient_dim()}, {"k", s.dim()}, {"basis_re", std::move(re)}, {"basis_im", std::move(im)}};
}

inline Subspace subspace_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("k")) detail::parse_fail("subspace needs fields \"n\" and \"k\"");
  const int n = j["n"].get<int>();
  const int k = j["k"].get<int>();
  if (n < 1 || n > kMaxDim || k < 0 || k > n) detail::parse_fail("subspace needs 1 <= n <= 64 and 0 <= k <= n");
  const auto& re = j.at("basis_re");
  const auto& im = j.at("basis_im");
  if (!re.is_array() || !im.is_array() || re.size() != static_cast<std::size_t>(k) || im.size() != static_cast<std::size_t>(k))
    detail::parse_fail("subspace basis must list k columns");
  std::vector<Vector> cols;
  for (int c = 0; c < k; ++c) {
    const auto r = detail::number_list(re[static_cast<std::size_t>(c)], static_cast<std::size_t>(n), "basis_re");
    const auto i = detail::number_list(im[static_cast<std::size_t>(c)], static_cast<std::size_t>(n), "basis_im");
    Vector v;
    for (int t = 0; t < n; ++t) v.emplace_back(r[static_cast<std::size_t>(t)], i[static_cast<std::size_t>(t)]);
    cols.push_back(std::move(v));
  }
  auto s = Subspace::from_orthonormal(n, std::move(cols));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const cplx g = inner(s.basis()[static_cast<std::size_t>(b)], s.basis()[static_cast<std::size_t>(a)]);
      if (std::abs(g - cplx{a == b ? 1.0 : 0.0, 0.0}) > tol::unitary(n))
        throw Error(ErrorCode::ValidationError, "subspace basis is not orthonormal within tol_unitary");
    }
  return s;
}

// ---------------------------------------------------------------------------
// Validation per declared type.

inline UnitaryMatrix unitary_from_json(const json& j) { return UnitaryMatrix(matrix_from_json(j)); }
inline SkewHermitianMatrix skew_from_json(const json& j) { return SkewHermitianMatrix(matrix_from_json(j)); }

// ---------------------------------------------------------------------------
// Curves: {"segments": [{"duration": 1.0, "constant": M} | {"duration": 1.0, "samples": [M, ...]}]}

inline json to_json(const GeneratorCurve& c) {
  json segs = json::array();
  for (const auto& seg : c.segments()) {
    json s{{"duration", seg.duration}};
    if (const auto* k = std::get_if<ConstantGenerator>(&seg.kind)) {
      s["constant"] = to_json(k->x.matrix());
    } else {
      json samples = json::array();
      for (const auto& x : std::get<SampledGenerator>(seg.kind).samples) samples.push_back(to_json(x.matrix()));
      s["samples"] = std::move(samples);
    }
    segs.push_back(std::move(s));
  }
  return {{"segments", std::move(segs)}};
}

inline GeneratorCurve curve_from_json(const json& j) {
  if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array() || j["segments"].empty())
    detail::parse_fail("curve needs a non-empty array field \"segments\"");
  std::vector<Segment> segs;
  for (const auto& s : j["segments"]) {
    if (!s.is_object() || !s.contains("duration")) detail::parse_fail("segment needs a \"duration\"");
    const double duration = detail::number_at(s["duration"], "duration");
    if (!(duration > 0.0)) detail::parse_fail("segment duration must be positive");
    const bool has_const = s.contains("constant");
    const bool has_samples = s.contains("samples");
    if (has_const == has_samples) detail::parse_fail("segment needs exactly one of \"constant\" or \"samples\"");
    if (has_const) {
      segs.push_back({duration, ConstantGenerator{skew_from_json(s["constant"])}});
    } else {
      if (!s["samples"].is_array() || s["samples"].size() < 2) detail::parse_fail("\"samples\" needs at least two matrices");
      SampledGenerator g;
      for (const auto& m : s["samples"]) g.samples.push_back(skew_from_json(m));
      segs.push_back({duration, std::move(g)});
    }
  }
  try {
    return GeneratorCurve(std::move(segs));
  } catch (const Error& e) {
    detail::parse_fail(e.what());
  }
}

// ---------------------------------------------------------------------------
// Files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::parse_fail("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    detail::parse_fail(path + ": " + e.what());
  }
}

inline ComplexMatrix parse_matrix(const std::string& path) { return matrix_from_json(read_json_file(path)); }
inline GeneratorCurve parse_curve(const std::string& path) { return curve_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const EigenspaceCheck& c) {
  return {{"lhs_dim", c.lhs_dim}, {"rhs_dim", c.rhs_dim}, {"subspace_distance", round12(c.subspace_distance)}};
}

inline json to_json(const BoundReport& r) {
  json j{{"applicable", r.applicable()},
         {"reason", r.applicable() ? r.reason : std::string(to_string(r.applicability)) + ": " + r.reason},
         {"tolerance_used", r.tolerance_used}};
  if (!r.applicable()) return j;
  j["violated"] = r.violated();
  j["product_at_minus_one"] = r.product_at_minus_one;
  j["theta_plus_product"] = round12(r.theta_plus_product.radians);
  j["theta_minus_product"] = round12(r.theta_minus_product.radians);
  j["bound_plus"] = round12(r.bound_plus);
  j["bound_minus"] = round12(r.bound_minus);
  j["slack_plus"] = round12(r.slack_plus);
  j["slack_minus"] = round12(r.slack_minus);
  j["equality_plus"] = r.equality_plus;
  j["equality_minus"] = r.equality_minus;
  j["eigenspace_plus"] = r.eigenspace_plus ? to_json(*r.eigenspace_plus) : json(nullptr);
  j["eigenspace_minus"] = r.eigenspace_minus ? to_json(*r.eigenspace_minus) : json(nullptr);
  if (r.centered_residual) j["centered_residual"] = round12(*r.centered_residual);
  return j;
}

}  // namespace unispec::io

#endif  // UNISPEC_IO_HPP
