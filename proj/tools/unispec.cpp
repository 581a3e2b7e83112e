// unispec: spectral bounds for products and curves of unitary matrices.
//
// Exit codes: 0 success, 1 a checked bound was violated, 2 the input does not
// meet the hypotheses, 3 parse or validation error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unispec/unispec.hpp"

namespace {

using unispec::io::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInapplicable = 2;
constexpr int kExitInputError = 3;

struct Output {
  std::string path;
  std::string format = "json";
};

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << prefix << ": " << j.dump() << '\n';
  }
}

void emit(const json& j, const Output& out) {
  std::ostringstream os;
  if (out.format == "text") {
    flatten(j, "", os);
  } else {
    os << j.dump(2) << '\n';
  }
  if (out.path.empty()) {
    std::cout << os.str();
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw unispec::Error(unispec::ErrorCode::ParseError, "cannot write " + out.path);
  f << os.str();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("UNISPEC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw unispec::Error(unispec::ErrorCode::ParseError, "UNISPEC_SEED is not an unsigned integer");
    }
  }
  return 0;
}

json inapplicable(const std::string& reason) { return {{"applicable", false}, {"reason", reason}}; }

int exit_for(const unispec::BoundReport& r) {
  if (!r.applicable()) return kExitInapplicable;
  return r.violated() ? kExitViolation : kExitOk;
}

int cmd_spectrum(const std::string& in, const Output& out) {
  using namespace unispec;
  const auto u = io::unitary_from_json(io::read_json_file(in));
  const auto sd = unitary_eig(u);
  json args = json::array();
  for (double a : sd.arguments()) args.push_back(io::round12(a));
  json j{{"n", u.n()}, {"eigenvalue_arguments", args}};
  try {
    const auto r = detail::theta_range(sd);
    j["applicable"] = true;
    j["theta_plus"] = io::round12(r.plus.radians);
    j["theta_minus"] = io::round12(r.minus.radians);
    j["dist_identity"] = io::round12(std::max(r.plus.radians, -r.minus.radians));
    j["eigenspace_plus_dim"] = eigenspace_plus(u).dim();
    j["eigenspace_minus_dim"] = eigenspace_minus(u).dim();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SpectrumAtMinusOne) throw;
    j.update(inapplicable(e.what()));
    emit(j, out);
    return kExitInapplicable;
  }
  emit(j, out);
  return kExitOk;
}

int cmd_distance(const std::string& up, const std::string& vp, const Output& out) {
  using namespace unispec;
  const auto u = io::unitary_from_json(io::read_json_file(up));
  const auto v = io::unitary_from_json(io::read_json_file(vp));
  try {
    emit({{"applicable", true}, {"distance", io::round12(dist(u, v))}}, out);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SpectrumAtMinusOne) throw;
    emit(inapplicable(e.what()), out);
    return kExitInapplicable;
  }
  return kExitOk;
}

int cmd_geodesic(const std::string& up, const std::string& vp, const Output& out) {
  using namespace unispec;
  const auto u = io::unitary_from_json(io::read_json_file(up));
  const auto v = io::unitary_from_json(io::read_json_file(vp));
  try {
    const auto g = geodesic_between(u, v);
    emit({{"applicable", true},
          {"base", io::to_json(g.base.matrix())},
          {"generator", io::to_json(g.generator().matrix())},
          {"length", io::round12(curve_length(g.curve))},
          {"endpoint_error", io::round12(max_abs_diff(g.end().matrix(), v.matrix()))}},
         out);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SpectrumAtMinusOne) throw;
    emit(inapplicable(e.what()), out);
    return kExitInapplicable;
  }
  return kExitOk;
}

int cmd_verify_product(const std::string& up, const std::string& vp, const Output& out) {
  using namespace unispec;
  const auto u = io::unitary_from_json(io::read_json_file(up));
  const auto v = io::unitary_from_json(io::read_json_file(vp));
  const auto r = check_product_bound(u, v);
  emit(io::to_json(r), out);
  return exit_for(r);
}

int cmd_verify_nfold(const std::vector<std::string>& paths, const Output& out) {
  using namespace unispec;
  std::vector<UnitaryMatrix> us;
  for (const auto& p : paths) us.push_back(io::unitary_from_json(io::read_json_file(p)));
  const auto r = check_nfold_bound(us);
  emit(io::to_json(r), out);
  return exit_for(r);
}

int cmd_verify_curve(const std::string& path, int steps, const Output& out) {
  using namespace unispec;
  const auto c = io::parse_curve(path);
  const auto r = check_curve_bound(c, steps);
  emit(io::to_json(r), out);
  return exit_for(r);
}

int cmd_suite(const unispec::SuiteConfig& cfg, const Output& out) {
  const auto rep = unispec::run_suite(cfg);
  emit(unispec::io::to_json(rep), out);
  return rep.total_failed() > 0 ? kExitViolation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral bounds for products and curves of unitary matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("--out", out.path, "Write the report to this file instead of stdout");
  app.add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "text"}));

  std::string in, u_path, v_path, curve_path;
  std::vector<std::string> factors;
  int steps = unispec::kDefaultSampledSteps;

  auto* spectrum = app.add_subcommand("spectrum", "theta_+/theta_- and eigenvalue arguments of a unitary");
  spectrum->add_option("--in", in, "Unitary matrix JSON")->required();

  auto* distance = app.add_subcommand("distance", "Rectifiable distance between two unitaries");
  auto* geodesic = app.add_subcommand("geodesic", "Minimal geodesic u exp(t x) from u to v");
  auto* vprod = app.add_subcommand("verify-product", "Check the spectral bound for u v");
  for (auto* sc : {distance, geodesic, vprod}) {
    sc->add_option("--u", u_path, "First unitary (JSON)")->required();
    sc->add_option("--v", v_path, "Second unitary (JSON)")->required();
  }

  auto* vnfold = app.add_subcommand("verify-nfold", "Check the spectral bound for u_1 u_2 ... u_m");
  vnfold->add_option("--in", factors, "Factor files, leftmost first")->required();

  auto* vcurve = app.add_subcommand("verify-curve", "Check the spectral bound along a generator curve");
  vcurve->add_option("--curve", curve_path, "Curve JSON")->required();
  vcurve->add_option("--steps", steps, "Integrator steps per sampled segment")->check(CLI::PositiveNumber);

  unispec::SuiteConfig cfg;
  cfg.trials = 100;
  cfg.dims.clear();
  std::vector<std::string> check_names;
  std::uint64_t seed = 0;
  auto* suite = app.add_subcommand("suite", "Randomized verification suite");
  suite->add_option("--trials", cfg.trials, "Trials per check")->check(CLI::NonNegativeNumber);
  suite->add_option("--n", cfg.dims, "Matrix dimension (repeatable)")->check(CLI::Range(1, unispec::kMaxDim));
  auto* seed_opt = suite->add_option("--seed", seed, "Suite seed (default: $UNISPEC_SEED or 0)");
  suite->add_option("--checks", check_names, "Checks to run (default: all)")->delimiter(',');
  suite->add_option("--steps", cfg.steps, "Integrator steps per sampled segment")->check(CLI::PositiveNumber);
  suite->add_option("--jobs", cfg.jobs, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (*spectrum) return cmd_spectrum(in, out);
    if (*distance) return cmd_distance(u_path, v_path, out);
    if (*geodesic) return cmd_geodesic(u_path, v_path, out);
    if (*vprod) return cmd_verify_product(u_path, v_path, out);
    if (*vnfold) return cmd_verify_nfold(factors, out);
    if (*vcurve) return cmd_verify_curve(curve_path, steps, out);
    if (*suite) {
      cfg.seed = {seed_opt->count() > 0 ? seed : default_seed()};
      if (cfg.dims.empty()) cfg.dims = {4};
      if (check_names.empty()) {
        cfg.checks.assign(std::begin(unispec::kAllChecks), std::end(unispec::kAllChecks));
      } else {
        for (const auto& name : check_names) {
          const auto k = unispec::check_from_string(name);
          if (!k) throw unispec::Error(unispec::ErrorCode::ParseError, "unknown check '" + name + "'");
          cfg.checks.push_back(*k);
        }
      }
      return cmd_suite(cfg, out);
    }
  } catch (const unispec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
