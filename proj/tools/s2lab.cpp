// s2lab: classification, football construction, level-set summaries and the
// verification suite from the command line.
//
// Exit codes: 0 success, 1 verification or integration failure, 2 usage error.

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "s2lab/divisor.hpp"
#include "s2lab/errors.hpp"
#include "s2lab/io.hpp"
#include "s2lab/levelset.hpp"
#include "s2lab/radial.hpp"
#include "s2lab/verify.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int usage(const std::string& message) {
  std::cerr << json{{"error", "usage"}, {"message", message}}.dump() << '\n';
  return kUsage;
}

std::vector<double> parse_betas(const std::string& text) {
  if (text.empty()) throw UsageError("--betas is empty");
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    const auto* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, v);
    if (item.empty() || ec != std::errc() || ptr != end) throw UsageError("malformed cone order '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// --- classify ---------------------------------------------------------------

struct ClassifyArgs {
  std::string betas;
  double eps = 1e-9;
  bool infinity = false;
};

int cmd_classify(const ClassifyArgs& a) {
  const s2lab::ConicDivisor d(parse_betas(a.betas), a.infinity);
  const auto c = s2lab::classify(d, a.eps);
  json out;
  out["kind"] = std::string(s2lab::to_string(c.kind));
  out["witness_index"] = c.witness_index ? json(*c.witness_index) : json(nullptr);
  out["lhs"] = c.lhs;
  out["rhs"] = c.rhs;
  out["gbc_total"] = s2lab::gbc_total(d);
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// --- football ---------------------------------------------------------------

struct FootballArgs {
  std::optional<double> beta;
  bool sphere = false;
  double t_max = 15.0;
  double tol = 1e-10;
  std::string out;
};

double sigma2_residual(const s2lab::RadialProfile& p) {
  // Twenty radii spread over the part of the profile where e^{4h} is at
  // least 1e-6 of its peak.
  const auto h = p.h();
  const auto grid = p.grid();
  const double peak = *std::max_element(h.begin(), h.end());
  double lo = grid.back(), hi = grid.front();
  for (std::size_t i = 0; i < h.size(); ++i)
    if (4.0 * (h[i] - peak) >= std::log(1e-6)) {
      lo = std::min(lo, grid[i]);
      hi = std::max(hi, grid[i]);
    }
  const auto u = s2lab::reconstruct_factor(p);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double t = lo + (hi - lo) * (k + 0.5) / 20.0;
    worst = std::max(worst, std::abs(s2lab::sigma_k_curvature(u, s2lab::Point4{std::exp(t), 0.0, 0.0, 0.0}, 2) - 1.5));
  }
  return worst;
}

int cmd_football(const FootballArgs& a) {
  if (a.sphere == a.beta.has_value()) throw UsageError("give exactly one of --beta or --sphere");
  if (a.beta && !(*a.beta > -1.0 && *a.beta < 0.0))
    throw UsageError("--beta must lie in (-1, 0); use --sphere for the smooth case");
  if (!(a.t_max > 0.0) || !(a.tol > 0.0)) throw UsageError("--tmax and --tol must be positive");

  std::optional<s2lab::RadialProfile> profile;
  try {
    if (a.sphere) {
      profile.emplace(s2lab::sphere_profile(a.t_max));
    } else {
      s2lab::FootballOptions fo;
      fo.t_max = a.t_max;
      fo.tol = a.tol;
      profile.emplace(s2lab::football_profile(*a.beta, fo));
    }
  } catch (const s2lab::IntegrationError& e) {
    json diag{{"error", "integration_failure"}, {"message", e.what()}, {"t", e.t()}, {"h", e.h()}, {"dh", e.dh()}};
    std::cout << diag.dump(2) << '\n';
    return kFailed;
  }
  const auto& p = *profile;
  s2lab::write_profile_csv(a.out, p);

  const auto k = p.first_integrals();
  const double k0 = k[k.size() / 2];
  double drift = 0.0;
  for (double v : k) drift = std::max(drift, std::abs(v - k0));
  const auto asym = s2lab::measured_asymptotics(p);

  json out;
  out["beta"] = p.beta();
  out["t_max"] = a.t_max;
  out["tol"] = a.tol;
  out["rows"] = p.size();
  out["slope_minus"] = asym.slope_minus;
  out["slope_plus"] = asym.slope_plus;
  out["beta_zero"] = asym.beta_zero;
  out["beta_infinity"] = asym.beta_infinity;
  out["first_integral"] = k0;
  out["K_drift"] = drift;
  out["sigma2_residual"] = sigma2_residual(p);
  out["mean_curvature_ratio"] = asym.mean_curvature_ratio;
  out["sufficient_decay"] = asym.sufficient_decay;
  out["out"] = a.out;
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// --- levelset ---------------------------------------------------------------

struct LevelsetArgs {
  std::string profile;
  std::string out;
  std::size_t points = 400;
};

int cmd_levelset(const LevelsetArgs& a) {
  std::optional<s2lab::RadialProfile> profile;
  try {
    profile.emplace(s2lab::read_profile_csv(a.profile));
  } catch (const s2lab::ParseError& e) {
    return usage(std::string("profile: ") + e.what());
  } catch (const s2lab::DomainError& e) {
    return usage(std::string("profile: ") + e.what());
  }
  const s2lab::LevelSetEvaluator ev(*profile);
  const auto grid = s2lab::default_level_grid(*profile, a.points);
  s2lab::write_summary_csv(a.out, s2lab::summaries(ev, grid));
  const auto r = s2lab::relation_report(ev, grid);

  json out;
  out["beta"] = profile->beta();
  out["points"] = r.points;
  out["interior_points"] = r.interior_points;
  out["max_abs_CA"] = r.max_abs_CA;
  out["max_abs_AD"] = r.max_abs_AD;
  out["max_abs_AD_slope"] = r.max_abs_AD_slope;
  out["min_M_slope"] = r.min_M_slope;
  out["M_spread"] = r.M_spread;
  out["M_mean"] = r.M_mean;
  out["limit_errors"] = {{"z_plus", r.limits.z_plus},   {"z_minus", r.limits.z_minus},
                         {"D_plus", r.limits.d_plus},   {"D_minus", r.limits.d_minus},
                         {"C_plus", r.limits.c_plus},   {"C_minus", r.limits.c_minus}};
  out["out"] = a.out;
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string positional;
  std::string suite;
  s2lab::VerifyOptions options;
};

int cmd_verify(const VerifyArgs& a) {
  if (!a.positional.empty() && !a.suite.empty() && a.positional != a.suite)
    throw UsageError("suite given twice with different values");
  const std::string suite = !a.suite.empty() ? a.suite : (!a.positional.empty() ? a.positional : "all");
  if (!s2lab::is_known_suite(suite)) throw UsageError("unknown suite '" + suite + "'");
  if (a.options.samples < 10000) throw UsageError("--samples must be at least 10000");

  std::vector<s2lab::Check> checks;
  try {
    checks = s2lab::run_suite(suite, a.options);
  } catch (const std::exception& e) {
    std::cout << json{{"suite", suite}, {"passed", false}, {"error", e.what()}}.dump(2) << '\n';
    return kFailed;
  }
  json list = json::array();
  for (const auto& c : checks)
    list.push_back({{"name", c.name},
                    {"label", c.label},
                    {"module", c.module},
                    {"criterion", c.criterion},
                    {"passed", c.passed},
                    {"measured", c.measured},
                    {"threshold", c.threshold}});
  const bool ok = s2lab::all_passed(checks);
  json out{{"suite", suite}, {"passed", ok}, {"checks", list}};
  std::cout << out.dump(2) << '\n';
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"s2lab: sigma_2 conic 4-sphere laboratory"};
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "classify a conic divisor");
  classify->add_option("--betas", ca.betas, "comma-separated cone orders in (-1, 0)")->required();
  classify->add_option("--eps", ca.eps, "criticality tolerance");
  classify->add_flag("--infinity", ca.infinity, "last entry is the point at infinity");

  FootballArgs fa;
  auto* football = app.add_subcommand("football", "integrate a radial football and write its profile CSV");
  football->add_option("--beta", fa.beta, "cone order in (-1, 0)");
  football->add_flag("--sphere", fa.sphere, "closed-form round sphere instead");
  football->add_option("--tmax", fa.t_max, "cylinder half-length");
  football->add_option("--tol", fa.tol, "integrator tolerance");
  football->add_option("--out", fa.out, "profile CSV path")->required();

  LevelsetArgs la;
  auto* levelset = app.add_subcommand("levelset", "level-set summaries of a profile CSV");
  levelset->add_option("profile", la.profile, "profile CSV")->required();
  levelset->add_option("--out", la.out, "summary CSV path")->required();
  levelset->add_option("--points", la.points, "t_u grid size")->check(CLI::Range(10, 100000));

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("suite_name", va.positional, "all, symfunc, conformal, divisor, radial or levelset");
  verify->add_option("--suite", va.suite, "same as the positional suite name");
  verify->add_option("--seed", va.options.seed, "seed for sampled checks");
  verify->add_option("--samples", va.options.samples, "Monte-Carlo sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*classify) return cmd_classify(ca);
    if (*football) return cmd_football(fa);
    if (*levelset) return cmd_levelset(la);
    if (*verify) return cmd_verify(va);
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const s2lab::DomainError& e) {
    return usage(e.what());
  } catch (const std::exception& e) {
    // Unwritable outputs and the like: the invocation, not the numerics, failed.
    return usage(e.what());
  }
  return kUsage;
}
