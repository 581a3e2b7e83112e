#ifndef UNISPEC_SUITE_HPP
#define UNISPEC_SUITE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "unispec/core.hpp"
#include "unispec/geometry.hpp"
#include "unispec/io.hpp"
#include "unispec/random.hpp"
#include "unispec/spectral.hpp"
#include "unispec/theorems.hpp"

namespace unispec {

enum class CheckKind {
  Product,        // product bound on random bounded pairs
  Equality,       // planted equality pairs
  Nfold,          // n-fold products
  Curve,          // piecewise-constant curves, cross-checked against Nfold
  CurveEquality,  // curves with a common top block
  Contraction,    // sphere contraction of the orbit map
  Minimality,     // geodesics against two-leg detours
  Gauss,          // finite-difference Gauss lemma
  Lrlog,          // planted common eigenvector along a curve
};

inline constexpr CheckKind kAllChecks[] = {CheckKind::Product,     CheckKind::Equality,    CheckKind::Nfold,
                                           CheckKind::Curve,       CheckKind::CurveEquality, CheckKind::Contraction,
                                           CheckKind::Minimality,  CheckKind::Gauss,       CheckKind::Lrlog};

inline constexpr std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Product: return "product";
    case CheckKind::Equality: return "equality";
    case CheckKind::Nfold: return "nfold";
    case CheckKind::Curve: return "curve";
    case CheckKind::CurveEquality: return "curve-equality";
    case CheckKind::Contraction: return "contraction";
    case CheckKind::Minimality: return "minimality";
    case CheckKind::Gauss: return "gauss";
    case CheckKind::Lrlog: return "lrlog";
  }
  return "unknown";
}

inline std::optional<CheckKind> check_from_string(std::string_view s) {
  for (auto k : kAllChecks)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct TrialOutcome {
  enum class Status { Passed, Failed, Inapplicable };
  Status status = Status::Passed;
  /// Smallest margin by which the checked inequality held (negative on violation).
  std::optional<double> slack;
  /// Largest residual of an identity that should vanish.
  std::optional<double> residual;
  std::string detail;
};

namespace trials {

using Status = TrialOutcome::Status;

inline TrialOutcome from_report(const BoundReport& r) {
  TrialOutcome t;
  if (!r.applicable()) {
    t.status = Status::Inapplicable;
    t.detail = r.reason;
    return t;
  }
  t.slack = std::min(r.slack_plus, r.slack_minus);
  if (r.violated()) {
    t.status = Status::Failed;
    t.detail = r.product_at_minus_one ? r.reason : "bound violated or equality-case eigenspaces differ";
  }
  return t;
}

/// Splits `total` into m positive parts with random proportions.
inline std::vector<double> random_split(double total, int m, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(m));
  double sum = 0.0;
  for (auto& x : w) sum += (x = rng.uniform(0.1, 1.0));
  for (auto& x : w) x *= total / sum;
  return w;
}

/// Skew generator i(H + cI) with Gaussian H, random scalar c, scaled to the given norm.
inline SkewHermitianMatrix random_generator(int n, double target_norm, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(n, rng);
  ComplexMatrix h = (g + g.adjoint()) * 0.5;
  const double c = rng.normal();
  for (int i = 0; i < n; ++i) h(i, i) += c;
  const double nrm = op_norm(h);
  if (nrm > 0.0) h *= target_norm / nrm;
  return SkewHermitianMatrix::from_hermitian(HermitianMatrix(std::move(h), trusted));
}

/// i W diag(values) W* for the given unitary W.
inline SkewHermitianMatrix generator_with_spectrum(const UnitaryMatrix& w, const std::vector<double>& values) {
  std::vector<cplx> d;
  for (double v : values) d.emplace_back(0.0, v);
  return SkewHermitianMatrix::skew_part(w.matrix() * ComplexMatrix::diagonal(d) * w.matrix().adjoint());
}

/// w diag(i a I_k, B) w* with the spectrum of -iB inside [a - 0.05 - spread, a - 0.05].
inline SkewHermitianMatrix top_block_generator(const UnitaryMatrix& w, int k, double a, double spread, Rng& rng) {
  const int n = w.n();
  std::vector<double> values(static_cast<std::size_t>(k), a);
  if (n > k) {
    const auto inner = haar_unitary(n - k, rng);
    std::vector<double> low(static_cast<std::size_t>(n - k));
    for (auto& v : low) v = a - kEqualityMargin - spread * rng.uniform();
    const auto block = generator_with_spectrum(inner, low);
    ComplexMatrix d(n);
    for (int i = 0; i < k; ++i) d(i, i) = cplx{0.0, a};
    for (int i = 0; i < n - k; ++i)
      for (int j = 0; j < n - k; ++j) d(k + i, k + j) = block.matrix()(i, j);
    return SkewHermitianMatrix::skew_part(w.matrix() * d * w.matrix().adjoint());
  }
  return generator_with_spectrum(w, values);
}

inline TrialOutcome product(RngSeed seed, int n) {
  Rng rng(seed);
  const double c1 = rng.uniform(0.05, kPi - 0.15);
  const double c2 = rng.uniform(0.05, kPi - c1 - 0.05);
  const auto u = random_bounded_unitary(n, {c1}, rng);
  const auto v = random_bounded_unitary(n, {c2}, rng);
  return from_report(check_product_bound(u, v));
}

inline TrialOutcome equality(RngSeed seed, int n) {
  Rng rng(seed);
  const int k = rng.uniform_int(1, std::min(2, n));
  const double ta = rng.uniform(0.1, 1.5);
  const double tb = rng.uniform(0.1, kPi - ta - 0.1);
  const auto [u, v] = make_equality_pair(n, k, {ta}, {tb}, rng);
  const auto rep = check_product_bound(u, v);
  auto t = from_report(rep);
  if (t.status != Status::Passed) return t;
  if (!rep.equality_plus || !rep.eigenspace_plus || rep.eigenspace_plus->lhs_dim != k) {
    t.status = Status::Failed;
    t.detail = "planted equality not detected with intersection dimension " + std::to_string(k);
    return t;
  }
  t.residual = rep.eigenspace_plus->subspace_distance;
  return t;
}

inline TrialOutcome nfold(RngSeed seed, int n) {
  Rng rng(seed);
  const int m = rng.uniform_int(2, 6);
  const auto caps = random_split(rng.uniform(0.1, kPi - 0.01), m, rng);
  std::vector<UnitaryMatrix> us;
  for (double c : caps) us.push_back(random_bounded_unitary(n, {c}, rng));
  return from_report(check_nfold_bound(us));
}

/// Random piecewise-constant curve with sum of h_j ||x_j|| below pi.
inline GeneratorCurve random_constant_curve(int n, Rng& rng) {
  const int m = rng.uniform_int(1, 5);
  const auto budget = random_split(rng.uniform(0.1, kPi - 0.01), m, rng);
  std::vector<Segment> segs;
  for (int j = 0; j < m; ++j) {
    const double h = rng.uniform(0.2, 1.0);
    segs.push_back({h, ConstantGenerator{random_generator(n, budget[static_cast<std::size_t>(j)] / h, rng)}});
  }
  return GeneratorCurve(std::move(segs));
}

/// Factor list u_1 ... u_m of the n-fold product equal to the curve endpoint:
/// the last segment is the leftmost factor.
inline std::vector<UnitaryMatrix> factors_of(const GeneratorCurve& curve) {
  std::vector<UnitaryMatrix> us;
  for (auto it = curve.segments().rbegin(); it != curve.segments().rend(); ++it)
    us.push_back(expm_skew(std::get<ConstantGenerator>(it->kind).x.scaled(it->duration)));
  return us;
}

inline TrialOutcome curve(RngSeed seed, int n) {
  Rng rng(seed);
  const auto c = random_constant_curve(n, rng);
  const auto rep = check_curve_bound(c);
  auto t = from_report(rep);
  const auto ref = check_nfold_bound(factors_of(c));
  if (ref.applicable() != rep.applicable()) {
    t.status = Status::Failed;
    t.detail = "curve and n-fold applicability disagree";
    return t;
  }
  if (!rep.applicable()) return t;
  const double agree = std::max({std::abs(rep.bound_plus - ref.bound_plus), std::abs(rep.bound_minus - ref.bound_minus),
                                 std::abs(rep.theta_plus_product.radians - ref.theta_plus_product.radians),
                                 std::abs(rep.theta_minus_product.radians - ref.theta_minus_product.radians)});
  t.residual = agree;
  if (agree > tol::verdict || rep.violated() != ref.violated() || rep.equality_plus != ref.equality_plus ||
      rep.equality_minus != ref.equality_minus) {
    t.status = Status::Failed;
    t.detail = "curve verdict disagrees with the n-fold verdict on its factors";
  }
  return t;
}

/// Curve whose generators share the top eigenspace w*span(e_1..e_k); mixes
/// constant and sampled segments.
inline GeneratorCurve top_block_curve(int n, int k, Rng& rng) {
  const auto w = haar_unitary(n, rng);
  const int m = rng.uniform_int(1, 5);
  const auto tops = random_split(rng.uniform(0.2, kPi - 0.2), m, rng);
  std::vector<Segment> segs;
  for (int j = 0; j < m; ++j) {
    const double h = rng.uniform(0.1, 0.4);
    const double a = tops[static_cast<std::size_t>(j)] / h;
    if (rng.uniform() < 0.5) {
      segs.push_back({h, ConstantGenerator{top_block_generator(w, k, a, 1.0, rng)}});
    } else {
      // top angle constant across samples keeps the discrete integral equal to h*a
      SampledGenerator s;
      const int count = rng.uniform_int(2, 3);
      for (int q = 0; q < count; ++q) s.samples.push_back(top_block_generator(w, k, a, 1.0, rng));
      segs.push_back({h, std::move(s)});
    }
  }
  return GeneratorCurve(std::move(segs));
}

inline TrialOutcome curve_equality(RngSeed seed, int n, int steps) {
  Rng rng(seed);
  const int k = rng.uniform_int(1, std::min(2, n));
  const auto c = top_block_curve(n, k, rng);
  const auto rep = check_curve_bound(c, steps);
  auto t = from_report(rep);
  if (t.status != Status::Passed) return t;
  if (!rep.equality_plus || !rep.eigenspace_plus || rep.eigenspace_plus->lhs_dim != k) {
    t.status = Status::Failed;
    t.detail = "planted curve equality not detected with intersection dimension " + std::to_string(k);
    return t;
  }
  t.residual = rep.eigenspace_plus->subspace_distance;
  return t;
}

inline TrialOutcome contraction(RngSeed seed, int n) {
  Rng rng(seed);
  const auto u = haar_unitary(n, rng);
  const auto v = haar_unitary(n, rng);
  const auto xi = random_unit_vector(n, rng);
  TrialOutcome t;
  double d = 0.0;
  try {
    d = dist(u, v);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SpectrumAtMinusOne) throw;
    t.status = Status::Inapplicable;
    t.detail = "u* v has -1 in its spectrum";
    return t;
  }
  const double ds = sphere_distance(orbit_map(u, xi), orbit_map(v, xi));
  t.slack = d - ds;
  if (ds > d + tol::verdict) {
    t.status = Status::Failed;
    t.detail = "sphere distance exceeds group distance";
  }
  return t;
}

inline constexpr int kDetoursPerTrial = 10;

inline TrialOutcome minimality(RngSeed seed, int n) {
  Rng rng(seed);
  const auto u = haar_unitary(n, rng);
  const auto v = u * random_bounded_unitary(n, {kPi - 0.1}, rng);
  const auto mu = geodesic_between(u, v);
  const double d = curve_length(mu.curve);
  TrialOutcome t;
  t.residual = std::abs(d - dist(u, v));
  double worst = std::numeric_limits<double>::infinity();
  for (int q = 0; q < kDetoursPerTrial; ++q) {
    for (int attempt = 0;; ++attempt) {
      const auto w = u * random_bounded_unitary(n, {rng.uniform(0.05, kPi - 0.05)}, rng);
      try {
        const double len = curve_length(geodesic_between(u, w).curve) + curve_length(geodesic_between(w, v).curve);
        worst = std::min(worst, len - d);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SpectrumAtMinusOne || attempt >= 8) throw;
      }
    }
  }
  t.slack = worst;
  if (worst < -tol::verdict) {
    t.status = Status::Failed;
    t.detail = "detour shorter than the geodesic";
  }
  return t;
}

/// Residual ratio window for second-order central differences: eps shrinks 10x.
inline constexpr double kGaussRatioLow = 100.0 / 3.0;
inline constexpr double kGaussRatioHigh = 300.0;
/// Rounding floor of the central difference at eps = 1e-4: expm carries errors
/// near n * 1e-16, divided by eps, with 10x headroom. Below it the ratio
/// measures noise, not truncation order.
inline constexpr double kGaussNoiseFloor = 1e-10;

inline TrialOutcome gauss(RngSeed seed, int n) {
  Rng rng(seed);
  const auto w = haar_unitary(n, rng);
  const double top = rng.uniform(0.5, 1.5);
  std::vector<double> values{top};
  for (int i = 1; i < n; ++i) values.push_back(rng.uniform(-top + 0.1, top - 0.1));
  const auto y = generator_with_spectrum(w, values);
  const auto xi = w.matrix().column(0);
  const auto x = random_skew(n, rng.uniform(0.5, 1.5), rng);
  const double r4 = gauss_lemma_check(y, x, xi, 1e-4);
  const double r3 = gauss_lemma_check(y, x, xi, 1e-3);
  TrialOutcome t;
  t.residual = r4;
  const double ratio = r3 / r4;
  const bool second_order = (ratio >= kGaussRatioLow && ratio <= kGaussRatioHigh) || r4 <= kGaussNoiseFloor;
  if (!(r4 <= 1e-6) || !second_order) {
    t.status = Status::Failed;
    char buf[96];
    std::snprintf(buf, sizeof buf, "residual %.3e at eps 1e-4, %.3e at eps 1e-3", r4, r3);
    t.detail = buf;
  }
  return t;
}

/// Curve with generators w diag(i f_j, B_j) w*, so xi = w e_1 is a common eigenvector.
inline GeneratorCurve common_eigenvector_curve(const UnitaryMatrix& w, Rng& rng) {
  const int n = w.n();
  const int m = rng.uniform_int(1, 4);
  auto gen = [&] {
    std::vector<double> values(static_cast<std::size_t>(n));
    for (auto& v : values) v = rng.uniform(-1.5, 1.5);
    const auto inner = n > 1 ? haar_unitary(n - 1, rng) : UnitaryMatrix::identity(1);
    ComplexMatrix d(n);
    d(0, 0) = cplx{0.0, values[0]};
    if (n > 1) {
      std::vector<double> rest(values.begin() + 1, values.end());
      const auto block = generator_with_spectrum(inner, rest);
      for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) d(1 + i, 1 + j) = block.matrix()(i, j);
    }
    return SkewHermitianMatrix::skew_part(w.matrix() * d * w.matrix().adjoint());
  };
  static constexpr int kSampleCounts[] = {2, 3, 5};  // intervals divide the step count
  std::vector<Segment> segs;
  for (int j = 0; j < m; ++j) {
    const double h = rng.uniform(0.2, 1.0);
    if (rng.uniform() < 0.5) {
      segs.push_back({h, ConstantGenerator{gen()}});
    } else {
      SampledGenerator s;
      const int count = kSampleCounts[rng.uniform_int(0, 2)];
      for (int q = 0; q < count; ++q) s.samples.push_back(gen());
      segs.push_back({h, std::move(s)});
    }
  }
  return GeneratorCurve(std::move(segs));
}

inline TrialOutcome lrlog(RngSeed seed, int n, int steps) {
  Rng rng(seed);
  const auto w = haar_unitary(n, rng);
  const auto c = common_eigenvector_curve(w, rng);
  TrialOutcome t;
  t.residual = check_lrlog(c, w.matrix().column(0), steps);
  if (*t.residual > 1e-8) {
    t.status = Status::Failed;
    t.detail = "endpoint does not act on xi by the integrated phase";
  }
  return t;
}

}  // namespace trials

inline TrialOutcome run_trial(CheckKind kind, RngSeed seed, int n, int steps = kDefaultSampledSteps) {
  switch (kind) {
    case CheckKind::Product: return trials::product(seed, n);
    case CheckKind::Equality: return trials::equality(seed, n);
    case CheckKind::Nfold: return trials::nfold(seed, n);
    case CheckKind::Curve: return trials::curve(seed, n);
    case CheckKind::CurveEquality: return trials::curve_equality(seed, n, steps);
    case CheckKind::Contraction: return trials::contraction(seed, n);
    case CheckKind::Minimality: return trials::minimality(seed, n);
    case CheckKind::Gauss: return trials::gauss(seed, n);
    case CheckKind::Lrlog: return trials::lrlog(seed, n, steps);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown check");
}

struct SuiteConfig {
  int trials = 0;
  std::vector<int> dims{4};
  RngSeed seed{0};
  std::vector<CheckKind> checks;
  int steps = kDefaultSampledSteps;
  int jobs = 1;
};

struct CheckSummary {
  CheckKind kind;
  int passed = 0;
  int failed = 0;
  int inapplicable = 0;
  std::optional<double> worst_slack;
  std::optional<double> worst_residual;
};

struct FailureRecord {
  CheckKind kind;
  int trial;
  int n;
  RngSeed seed;
  std::string detail;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckSummary> checks;
  std::vector<FailureRecord> failures;

  int total_failed() const {
    int f = 0;
    for (const auto& c : checks) f += c.failed;
    return f;
  }
};

/// Per-trial seed; each trial depends only on (suite seed, check, index).
inline RngSeed trial_seed(RngSeed suite, CheckKind kind, int trial) {
  return derive_seed(suite, static_cast<std::uint64_t>(kind) + 1, static_cast<std::uint64_t>(trial));
}

inline int trial_dim(const SuiteConfig& cfg, int trial) {
  return cfg.dims[static_cast<std::size_t>(trial) % cfg.dims.size()];
}

/// Runs every requested check; failures are data, never exceptions. Results do
/// not depend on `jobs`.
inline SuiteReport run_suite(const SuiteConfig& cfg) {
  SuiteReport rep{cfg, {}, {}};
  if (cfg.trials <= 0 || cfg.checks.empty()) return rep;
  if (cfg.dims.empty()) throw Error(ErrorCode::InvalidArgument, "suite needs at least one dimension");
  const int jobs = std::max(1, cfg.jobs);

  for (auto kind : cfg.checks) {
    std::vector<TrialOutcome> out(static_cast<std::size_t>(cfg.trials));
    auto work = [&](int start) {
      for (int i = start; i < cfg.trials; i += jobs) {
        auto& slot = out[static_cast<std::size_t>(i)];
        try {
          slot = run_trial(kind, trial_seed(cfg.seed, kind, i), trial_dim(cfg, i), cfg.steps);
        } catch (const std::exception& e) {
          slot = TrialOutcome{TrialOutcome::Status::Failed, std::nullopt, std::nullopt, std::string("exception: ") + e.what()};
        }
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j);
      for (auto& th : pool) th.join();
    }

    CheckSummary s{kind, 0, 0, 0, std::nullopt, std::nullopt};
    for (int i = 0; i < cfg.trials; ++i) {
      const auto& t = out[static_cast<std::size_t>(i)];
      switch (t.status) {
        case TrialOutcome::Status::Passed: ++s.passed; break;
        case TrialOutcome::Status::Inapplicable: ++s.inapplicable; break;
        case TrialOutcome::Status::Failed:
          ++s.failed;
          rep.failures.push_back({kind, i, trial_dim(cfg, i), trial_seed(cfg.seed, kind, i), t.detail});
          break;
      }
      if (t.slack) s.worst_slack = s.worst_slack ? std::min(*s.worst_slack, *t.slack) : *t.slack;
      if (t.residual) s.worst_residual = s.worst_residual ? std::max(*s.worst_residual, *t.residual) : *t.residual;
    }
    rep.checks.push_back(s);
  }
  return rep;
}

namespace io {

inline json to_json(const SuiteReport& r) {
  json checks = json::object();
  for (const auto& c : r.checks) {
    checks[std::string(to_string(c.kind))] = {
        {"passed", c.passed},
        {"failed", c.failed},
        {"inapplicable", c.inapplicable},
        {"worst_slack", c.worst_slack ? json(round12(*c.worst_slack)) : json(nullptr)},
        {"worst_residual", c.worst_residual ? json(round12(*c.worst_residual)) : json(nullptr)},
    };
  }
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"check", std::string(to_string(f.kind))},
                        {"trial", f.trial},
                        {"n", f.n},
                        {"seed", f.seed.value},
                        {"detail", f.detail}});
  }
  json names = json::array();
  for (auto k : r.config.checks) names.push_back(std::string(to_string(k)));
  return {{"config", {{"trials", r.config.trials}, {"dims", r.config.dims}, {"seed", r.config.seed.value},
                      {"checks", std::move(names)}, {"steps", r.config.steps}}},
          {"checks", std::move(checks)},
          {"failures", std::move(failures)},
          {"total_failed", r.total_failed()}};
}

}  // namespace io

}  // namespace unispec

#endif  // UNISPEC_SUITE_HPP
