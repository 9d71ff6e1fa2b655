#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "lacewalk/app.hpp"
#include "lacewalk/enumerate.hpp"
#include "lacewalk/lace_kernels.hpp"
#include "lacewalk/sampler.hpp"
#include "lacewalk/series.hpp"
#include "lacewalk/step_io.hpp"

namespace lacewalk::app {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) { return format_double(v); }
std::string fmt(const Rational& v) { return to_string(v); }

/// Exact string next to the double value for rational runs.
template <class S>
json number(const S& v) {
  if constexpr (ScalarOps<S>::exact) {
    return {{"value", to_double(v)}, {"exact", to_string(v)}};
  } else {
    return v;
  }
}

const char* kSchemaDoc = R"(# lacewalk output files

Every artifact is named `{command}-{hash}.{ext}`, where `hash` is 16 hex
digits of FNV-1a over the resolved inputs (step table, kappa, arithmetic,
command options). Identical inputs give byte-identical files. Values are
exact `p/q` strings in rational mode and shortest round-trip decimals in
float mode.

## enumerate-{hash}.csv

| column | meaning |
| --- | --- |
| n | number of steps |
| c_n | sum_x C_n(x) |
| second_moment | sum_x abs(x)^2 C_n(x) |
| fourth_moment | sum_x abs(x)^4 C_n(x) |
| msd | second_moment / c_n (decimal) |

## enumerate-{hash}-fields.csv

| column | meaning |
| --- | --- |
| n | number of steps |
| x1..xd | lattice point |
| value | C_n(x) |

## lace-{hash}.csv

| column | meaning |
| --- | --- |
| m | number of steps |
| N | lace size |
| x1..xd | lattice point |
| value | Pi_m^(N)(x) |

`lace-{hash}.json` holds per-m totals, condition estimates (sum of absolute
terms over absolute total) and the recursion residuals.

## sample-{hash}.csv

| column | meaning |
| --- | --- |
| n | number of steps |
| count | number of sampled walks |
| seed | base seed |
| cn_estimate | mean weight |
| cn_std_error | standard error of the mean weight |
| msd_estimate | weight-averaged squared end-to-end distance |
| nonzero | samples with nonzero weight |
| algorithm | sampler and random stream identifiers |

## series-{hash}.json, verify-{hash}.json

JSON objects; see the `inputs` member for the echoed configuration.
)";

class ArtifactSet {
 public:
  ArtifactSet(fs::path dir, std::string stem) : dir_(std::move(dir)), stem_(std::move(stem)) {}

  void add(const std::string& suffix, std::string content) { pending_.emplace_back(suffix, std::move(content)); }

  /// Writes everything, or nothing if any write fails.
  std::vector<fs::path> commit() {
    fs::create_directories(dir_);
    std::vector<fs::path> written;
    try {
      for (const auto& [suffix, content] : pending_) written.push_back(write(dir_ / (stem_ + suffix), content));
      write(dir_ / "schema.md", kSchemaDoc);
    } catch (...) {
      for (const auto& p : written) fs::remove(p);
      throw;
    }
    return written;
  }

 private:
  static fs::path write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      out << content;
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
    return path;
  }

  fs::path dir_;
  std::string stem_;
  std::vector<std::pair<std::string, std::string>> pending_;
};

struct Context {
  const RunConfig& config;
  const CommandOptions& options;
  StepDistribution D;
  Potential U;
  EnumerationOptions enumeration;
  json inputs;
  std::string stem;
  fs::path out_dir;
};

int require_positive(const std::optional<int>& v, int fallback, const char* name) {
  const int x = v.value_or(fallback);
  if (x < 1) throw ConfigError(std::string("--") + name + " must be >= 1");
  return x;
}

template <class S>
std::string field_rows(const LatticeField<S>& f, const std::string& prefix) {
  std::string rows;
  for (const auto& [x, v] : f.entries()) {
    rows += prefix;
    for (int i = 0; i < x.dim(); ++i) rows += "," + std::to_string(x[i]);
    rows += "," + fmt(v) + "\n";
  }
  return rows;
}

std::string coord_header(int dim) {
  std::string h;
  for (int i = 1; i <= dim; ++i) h += ",x" + std::to_string(i);
  return h;
}

template <class S>
RunResult run_enumerate(Context& ctx) {
  const int nmax = require_positive(ctx.options.nmax, 6, "nmax");
  const auto series = enumerate_connectivities<S>(nmax, ctx.D, ctx.U, ctx.enumeration);
  std::string table = "n,c_n,second_moment,fourth_moment,msd\n";
  std::string fields = "n" + coord_header(ctx.D.dim()) + ",value\n";
  for (int n = 0; n <= nmax; ++n) {
    const S c = series.partition_value(n);
    table += std::to_string(n) + "," + fmt(c) + "," + fmt(series.moment(n, 2)) + "," + fmt(series.moment(n, 4)) + "," +
             fmt(n == 0 ? 0.0 : series.msd(n)) + "\n";
    fields += field_rows(series[n], std::to_string(n));
  }
  ArtifactSet files(ctx.out_dir, ctx.stem);
  files.add(".csv", table);
  files.add("-fields.csv", fields);
  RunResult r;
  r.artifacts = files.commit();
  r.summary = "enumerate: nmax=" + std::to_string(nmax) + " c_" + std::to_string(nmax) + "=" +
              fmt(series.partition_value(nmax)) + " nodes=" + std::to_string(series.nodes) + " -> " +
              r.artifacts.front().string();
  return r;
}

template <class S>
RunResult run_lace(Context& ctx) {
  const int n = require_positive(ctx.options.n ? ctx.options.n : ctx.options.nmax, 4, "n");
  const int max_lace = ctx.options.max_lace.value_or(-1);
  if (max_lace == 0 || max_lace < -1) throw ConfigError("--max-lace must be >= 1");
  std::vector<PiKernels<S>> kernels;
  std::string rows = "m,N" + coord_header(ctx.D.dim()) + ",value\n";
  json report = {{"inputs", ctx.inputs}, {"kernels", json::array()}, {"recursion", json::array()}};
  for (int m = 1; m <= n; ++m) {
    kernels.push_back(pi_kernels<S>(m, ctx.D, ctx.U, max_lace, ctx.enumeration));
    const auto& k = kernels.back();
    for (int N = 1; N <= k.max_lace_size; ++N) rows += field_rows(k[N], std::to_string(m) + "," + std::to_string(N));
    report["kernels"].push_back({{"m", m},
                                 {"maxLaceSize", k.max_lace_size},
                                 {"pi", number(k.total.sum())},
                                 {"secondMoment", number(k.total.even_moment(2))},
                                 {"conditionEstimate", k.condition_estimate},
                                 {"nodes", k.nodes}});
  }
  const auto series = enumerate_connectivities<S>(n, ctx.D, ctx.U, ctx.enumeration);
  bool all = true;
  for (int m = 1; m <= n; ++m) {
    const auto rr = recursion_residual(m, ctx.D, series, kernels);
    all = all && rr.holds;
    report["recursion"].push_back({{"n", m}, {"maxAbsResidual", number(rr.max_abs_residual)}, {"holds", rr.holds}});
  }
  ArtifactSet files(ctx.out_dir, ctx.stem);
  files.add(".csv", rows);
  files.add(".json", report.dump(2) + "\n");
  RunResult r;
  r.artifacts = files.commit();
  r.summary = "lace: n=" + std::to_string(n) + " pi_" + std::to_string(n) + "=" + fmt(kernels.back().total.sum()) +
              " recursion " + (all ? "closes" : "does not close") + " -> " + r.artifacts.front().string();
  return r;
}

struct CheckLog {
  json entries = json::array();
  int failures = 0;
  int asserted = 0;
  int informational_failures = 0;

  void add(const std::string& name, json params, bool holds, bool assert_it, json detail = json::object()) {
    // unasserted checks keep their verdict under "observed" only
    json e = {{"check", name},
              {"params", std::move(params)},
              {"holds", assert_it ? json(holds) : json(nullptr)},
              {"observed", holds},
              {"asserted", assert_it}};
    for (auto& [k, v] : detail.items()) e[k] = v;
    entries.push_back(std::move(e));
    if (assert_it) {
      ++asserted;
      if (!holds) ++failures;
    } else if (!holds) {
      ++informational_failures;
    }
  }
};

template <class S>
bool close_to(const S& a, const S& b) {
  if constexpr (ScalarOps<S>::exact) {
    return a == b;
  } else {
    return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b));
  }
}

/// Self-avoiding prefixes of exactly m steps from the origin.
std::vector<Walk> prefixes(int m, const StepDistribution& D, const Potential& U) {
  std::vector<Walk> out;
  std::vector<LatticePoint> sites{LatticePoint::origin(D.dim())};
  std::function<void()> rec = [&]() {
    if (static_cast<int>(sites.size()) == m + 1) {
      Walk w(sites);
      if (walk_weight<double>(w, D, U) > 0) out.push_back(std::move(w));
      return;
    }
    for (const auto& e : D.entries()) {
      const auto next = sites.back() + e.offset;
      if (std::find(sites.begin(), sites.end(), next) != sites.end() && U.interacting()) continue;
      sites.push_back(next);
      rec();
      sites.pop_back();
    }
  };
  rec();
  return out;
}

std::vector<std::vector<double>> wave_vectors(int dim) {
  // fixed, deterministic sample of the Brillouin zone
  std::vector<std::vector<double>> ks;
  for (int i = 0; i < 5; ++i) {
    std::vector<double> k;
    for (int a = 0; a < dim; ++a) k.push_back(std::numbers::pi * std::sin(1.0 + 2.3 * i + 0.7 * a));
    ks.push_back(k);
  }
  return ks;
}

template <class S>
RunResult run_verify(Context& ctx) {
  const int nmax = require_positive(ctx.options.nmax, 5, "nmax");
  const auto& D = ctx.D;
  const auto& U = ctx.U;
  const int d = D.dim();
  const bool hyp = small_attraction_hypothesis(U, D);
  CheckLog log;

  const auto series = enumerate_connectivities<S>(nmax, D, U, ctx.enumeration);
  std::vector<PiKernels<S>> kernels;
  for (int m = 1; m <= nmax; ++m) kernels.push_back(pi_kernels<S>(m, D, U, -1, ctx.enumeration));

  const S kappa = U.interacting() ? U.template kappa_as<S>() : S(0);
  const S d1 = D.nearest_neighbor_weight<S>();
  {
    const S rhs = S(1) + S(2 * d) * kappa * d1;
    log.add("c1-closed-form", json::object(), close_to(series.partition_value(1), rhs), true,
            {{"lhs", number(series.partition_value(1))}, {"rhs", number(S(rhs))}});
    const S pi1 = kernels[0].total.sum();
    const S expect = S(2 * d) * kappa * d1;
    log.add("pi1-closed-form", json::object(), close_to(pi1, expect), true,
            {{"lhs", number(pi1)}, {"rhs", number(S(expect))}});
  }
  for (int n = 1; n <= nmax; ++n) {
    const auto rr = recursion_residual(n, D, series, kernels);
    log.add("recursion", {{"n", n}}, rr.holds, true, {{"maxAbsResidual", number(rr.max_abs_residual)}});
  }
  {
    int gmax = 0;
    double walks = 1;
    while (gmax < std::min(nmax, 4) && walks * static_cast<double>(D.size()) <= 50000) {
      walks *= static_cast<double>(D.size());
      ++gmax;
    }
    for (int n = 1; n <= gmax; ++n) {
      const auto g = verify_graph_sum_equivalence<S>(n, D, U);
      log.add("graph-sum", {{"n", n}}, g.holds, true,
              {{"walks", g.walks}, {"maxAbsDifference", number(g.max_abs_difference)}});
    }
  }
  for (int m = 1; m < nmax; ++m) {
    for (int n = 1; m + n <= nmax; ++n) {
      const auto s = verify_subadditivity(series, m, n);
      log.add("subadditivity", {{"m", m}, {"n", n}}, s.holds, hyp, {{"lhs", number(s.lhs)}, {"rhs", number(s.rhs)}});
    }
  }
  {
    const S c1 = series.partition_value(1);
    S upper(1);
    S lower(1);
    const S step_floor = S(1) / S(1 << d);
    for (int n = 1; n <= nmax; ++n) {
      upper *= c1;
      lower *= step_floor;
      const S c = series.partition_value(n);
      log.add("lower-bound", {{"n", n}}, holds_le(lower, c), true, {{"lhs", number(lower)}, {"rhs", number(c)}});
      log.add("upper-bound", {{"n", n}}, holds_le(c, upper), hyp, {{"lhs", number(c)}, {"rhs", number(upper)}});
      const std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
      const double ft = fourier(series[n], zero).real();
      const double cn = ScalarOps<S>::to_double(c);
      log.add("fourier-at-zero", {{"n", n}}, std::fabs(ft - cn) <= 1e-14 * std::fabs(cn), true,
              {{"lhs", ft}, {"rhs", cn}});
    }
  }
  {
    const auto fg = fg_residual(series, kernels, wave_vectors(d), 1.0, D, U);
    log.add("fg-recursion", {{"nmax", nmax}, {"z", 1.0}, {"samples", fg.samples}}, fg.holds, true,
            {{"maxResidual", fg.max_residual}});
  }
  for (int n = 1; n <= nmax; ++n) {
    const auto& k = kernels[static_cast<std::size_t>(n) - 1];
    auto add = [&](KernelBound which, int N, double gamma) {
      const auto b = evaluate_kernel_bound(which, N, gamma, series, k, D, U);
      log.add(std::string("kernel-bound-") + to_string(which), {{"n", n}, {"N", N}, {"gamma", gamma}}, b.holds, hyp,
              {{"lhs", b.lhs}, {"rhs", b.rhs}, {"exact", b.exact}});
    };
    add(KernelBound::I, 1, 0.0);
    for (double g : {1.0, 1.5, 2.0}) add(KernelBound::III, 1, g);
    if (n >= 3) {
      add(KernelBound::II, 2, 0.0);
      for (double g : {1.0, 1.5, 2.0}) add(KernelBound::IV, 2, g);
    }
  }
  {
    const int mmax = std::min(2, nmax);
    const int smax = std::min(2, nmax);
    std::size_t cases = 0, failing = 0, summed_failing = 0;
    for (int m = 1; m <= mmax; ++m) {
      for (const auto& w : prefixes(m, D, U)) {
        for (int j = 0; j < m; ++j) {
          for (int n = 1; n <= smax; ++n) {
            const auto sweep = key_inequality_sweep<S>(w, j, n, D, U);
            ++cases;
            failing += !sweep.all_endpoints_hold;
            summed_failing += !sweep.summed_holds;
          }
        }
      }
    }
    log.add("key-inequality", {{"prefixSteps", mmax}, {"suffixSteps", smax}}, failing == 0, hyp,
            {{"cases", cases}, {"failingCases", failing}});
    log.add("key-inequality-summed", {{"prefixSteps", mmax}, {"suffixSteps", smax}}, summed_failing == 0, hyp,
            {{"cases", cases}, {"failingCases", summed_failing}});
  }

  json report = {{"inputs", ctx.inputs},
                 {"hypothesis",
                  {{"smallAttraction", hyp},
                   {"deltaUsed", D.theorem_delta()},
                   {"deltaEmpirical", D.delta_empirical()},
                   {"deltaAnalytic", D.delta_analytic() ? json(*D.delta_analytic()) : json(nullptr)}}},
                 {"checks", log.entries},
                 {"asserted", log.asserted},
                 {"failures", log.failures},
                 {"informationalFailures", log.informational_failures}};
  ArtifactSet files(ctx.out_dir, ctx.stem);
  files.add(".json", report.dump(2) + "\n");
  RunResult r;
  r.artifacts = files.commit();
  r.exit_code = log.failures == 0 ? kExitOk : kExitFailed;
  r.summary = "verify: " + std::to_string(log.asserted - log.failures) + "/" + std::to_string(log.asserted) +
              " asserted checks hold" +
              (log.informational_failures ? ", " + std::to_string(log.informational_failures) + " informational failures"
                                          : std::string()) +
              (hyp ? "" : " (small-attraction condition not met; bounds not asserted)") + " -> " +
              r.artifacts.front().string();
  return r;
}

template <class S>
RunResult run_series(Context& ctx) {
  const int nmax = require_positive(ctx.options.nmax, 6, "nmax");
  const int truncation = ctx.options.truncation.value_or(nmax);
  if (truncation < 0) throw ConfigError("--truncation must be >= 0");
  auto est = mu_estimators<S>(nmax, ctx.D, ctx.U, ctx.enumeration);
  const double mu = ctx.options.mu ? *ctx.options.mu
                                   : (est.mu_ratio.empty() ? est.mu_root.back() : est.mu_ratio.back());
  if (!(mu > 0)) throw ConfigError("--mu must be positive");
  std::vector<PiKernels<S>> kernels;
  for (int m = 1; m <= truncation; ++m) kernels.push_back(pi_kernels<S>(m, ctx.D, ctx.U, -1, ctx.enumeration));
  json out = {{"inputs", ctx.inputs}, {"muRoot", est.mu_root}, {"muRatio", est.mu_ratio},
              {"c1", est.c1},         {"muInBounds", est.mu_in_bounds}};
  RunResult r;
  try {
    diffusion_constant(est, truncation, mu, ctx.D, kernels);
    out["delta0"] = est.delta0;
    out["tau"] = est.tau;
    out["sigma"] = est.sigma;
    out["delta"] = est.delta;
    out["truncationN"] = est.truncation_n;
    out["muUsed"] = est.mu_used;
    out["diagnostics"] = {{"lastTauTerm", est.last_tau_term}, {"lastSigmaTerm", est.last_sigma_term}};
    r.summary = "series: delta=" + fmt(est.delta) + " (N=" + std::to_string(truncation) + ", mu=" + fmt(mu) + ")";
  } catch (const std::domain_error& e) {
    out["delta"] = nullptr;
    out["error"] = e.what();
    r.exit_code = kExitFailed;
    r.summary = std::string("series: ") + e.what();
  }
  ArtifactSet files(ctx.out_dir, ctx.stem);
  files.add(".json", out.dump(2) + "\n");
  r.artifacts = files.commit();
  r.summary += " -> " + r.artifacts.front().string();
  return r;
}

RunResult run_sample(Context& ctx) {
  const int n = require_positive(ctx.options.n, 0, "n");
  const std::uint64_t count = ctx.options.count.value_or(100000);
  if (count < 1) throw ConfigError("--count must be >= 1");
  const std::uint64_t seed = ctx.options.seed.value_or(ctx.config.seed);
  const auto b = sample_walks(n, count, seed, ctx.D, ctx.U, ctx.enumeration.threads);
  std::string csv = "n,count,seed,cn_estimate,cn_std_error,msd_estimate,nonzero,algorithm\n";
  csv += std::to_string(b.n) + "," + std::to_string(b.count) + "," + std::to_string(b.seed) + "," + fmt(b.cn_estimate) +
         "," + fmt(b.cn_std_error) + "," + fmt(b.msd_estimate) + "," + std::to_string(b.nonzero) + "," + b.algorithm +
         "\n";
  ArtifactSet files(ctx.out_dir, ctx.stem);
  files.add(".csv", csv);
  RunResult r;
  r.artifacts = files.commit();
  r.summary = "sample: n=" + std::to_string(n) + " c_n~" + fmt(b.cn_estimate) + " +- " + fmt(b.cn_std_error) +
              (b.nonzero == 0 ? " (every sample had weight 0)" : "") + " -> " + r.artifacts.front().string();
  return r;
}

json option_echo(const std::string& command, const CommandOptions& o, const RunConfig& c) {
  json j = json::object();
  if (o.nmax) j["nmax"] = *o.nmax;
  if (o.n) j["n"] = *o.n;
  if (o.max_lace) j["maxLace"] = *o.max_lace;
  if (o.truncation) j["truncation"] = *o.truncation;
  if (o.mu) j["mu"] = *o.mu;
  if (command == "sample") {
    j["count"] = o.count.value_or(100000);
    j["seed"] = o.seed.value_or(c.seed);
  }
  return j;
}

}  // namespace

RunResult run(const std::string& command, const RunConfig& config, const CommandOptions& options) {
  static const std::vector<std::string> commands{"enumerate", "lace", "verify", "series", "sample"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    throw ConfigError("unknown command '" + command + "'");
  }
  StepDistribution D = make_distribution(config);
  Potential U = Potential::disabled();
  try {
    U = make_potential(config);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  EnumerationOptions enumeration;
  enumeration.budget = options.budget.value_or(config.budget);
  enumeration.threads = options.threads.value_or(config.threads);
  if (enumeration.budget == 0) throw ConfigError("--budget must be positive");
  if (enumeration.threads == 0) throw ConfigError("--threads must be >= 1");

  json step_spec = config.step_distribution;
  step_spec.erase("path");
  step_spec.erase("entries");
  json inputs = {{"schema", kConfigSchema},
                 {"command", command},
                 {"dimension", D.dim()},
                 {"interaction", U.interacting()},
                 {"kappa", to_string(U.kappa())},
                 {"arithmetic", config.arithmetic == Arithmetic::Rational ? "rational" : "float"},
                 {"stepDistribution", step_spec},
                 {"steps", step_distribution_to_json(D)},
                 {"options", option_echo(command, options, config)}};
  Context ctx{config,
              options,
              std::move(D),
              std::move(U),
              enumeration,
              inputs,
              command + "-" + config_hash(inputs),
              fs::path(options.out.value_or(config.output))};

  const bool exact = config.arithmetic == Arithmetic::Rational;
  if (command == "enumerate") return exact ? run_enumerate<Rational>(ctx) : run_enumerate<double>(ctx);
  if (command == "lace") return exact ? run_lace<Rational>(ctx) : run_lace<double>(ctx);
  if (command == "verify") return exact ? run_verify<Rational>(ctx) : run_verify<double>(ctx);
  if (command == "series") return exact ? run_series<Rational>(ctx) : run_series<double>(ctx);
  return run_sample(ctx);
}

}  // namespace lacewalk::app
