// Acceptance run: one PASS/FAIL line per criterion. With an argument k only
// criterion k runs; the exit status is nonzero iff a selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lacewalk/enumerate.hpp"
#include "lacewalk/lace_kernels.hpp"
#include "lacewalk/laces.hpp"
#include "lacewalk/sampler.hpp"
#include "lacewalk/series.hpp"

using namespace lacewalk;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

StepDistribution exponential(double L, int d, double cutoff) {
  return build_step_distribution(Profile::exponential(), L, d, cutoff);
}

std::vector<Walk> self_avoiding_prefixes(int m, const StepDistribution& D) {
  std::vector<Walk> out;
  std::vector<LatticePoint> sites{LatticePoint::origin(D.dim())};
  std::function<void()> rec = [&]() {
    if (static_cast<int>(sites.size()) == m + 1) {
      out.emplace_back(sites);
      return;
    }
    for (const auto& e : D.entries()) {
      const auto next = sites.back() + e.offset;
      if (std::find(sites.begin(), sites.end(), next) != sites.end()) continue;
      sites.push_back(next);
      rec();
      sites.pop_back();
    }
  };
  rec();
  return out;
}

Outcome closed_forms() {
  struct Case {
    StepDistribution D;
    Rational kappa;
  };
  const std::vector<Case> cases{
      {StepDistribution::uniform_nearest_neighbor(1), Rational(1, 10)},
      {StepDistribution::uniform_nearest_neighbor(2), Rational(1, 50)},
      {StepDistribution::uniform_nearest_neighbor(3), Rational(3, 7)},
      {exponential(1, 1, 2).rationalized(), Rational(1, 50)},
      {exponential(1, 2, 2).rationalized(), Rational(1, 200)},
      {exponential(2, 2, 1).rationalized(), Rational(0)},
  };
  int ok = 0;
  for (const auto& c : cases) {
    const Potential U(c.kappa);
    const int d = c.D.dim();
    const Rational d1 = c.D.nearest_neighbor_weight<Rational>();
    const auto series = enumerate_connectivities<Rational>(1, c.D, U);
    const auto pi = pi_kernels<Rational>(1, c.D, U);
    const bool c1 = series.partition_value(1) == 1 + 2 * d * c.kappa * d1;
    const bool pi1 = pi.total.sum() == 2 * d * c.kappa * d1;
    ok += c1 && pi1;
  }
  return {ok == static_cast<int>(cases.size()), std::to_string(ok) + "/" + std::to_string(cases.size()) +
                                                    " (d, kappa, D) combinations exact"};
}

template <class S>
S recursion_max_residual(int nmax, const StepDistribution& D, const Potential& U) {
  const auto series = enumerate_connectivities<S>(nmax, D, U);
  std::vector<PiKernels<S>> kernels;
  for (int m = 1; m <= nmax; ++m) kernels.push_back(pi_kernels<S>(m, D, U));
  S worst(0);
  for (int n = 1; n <= nmax; ++n) {
    const auto r = recursion_residual(n, D, series, kernels);
    if (worst < r.max_abs_residual) worst = r.max_abs_residual;
  }
  return worst;
}

Outcome recursion_identity() {
  const std::vector<StepDistribution> Ds{exponential(1, 1, 2), exponential(1, 2, 1.5)};
  bool pass = true;
  double worst_float = 0;
  int exact = 0, total = 0;
  for (const auto& D0 : Ds) {
    const auto D = D0.rationalized();
    for (const Rational& kappa : {Rational(0), Rational(1, 50)}) {
      ++total;
      const Potential U(kappa);
      const bool zero = recursion_max_residual<Rational>(6, D, U) == 0;
      exact += zero;
      pass = pass && zero;
      const double f = recursion_max_residual<double>(6, D0, U);
      worst_float = std::max(worst_float, f);
      pass = pass && f < 1e-12;
    }
  }
  return {pass, "rational residual 0 in " + std::to_string(exact) + "/" + std::to_string(total) +
                    " cases, float max residual " + num(worst_float)};
}

Outcome graph_sum_equivalence() {
  const std::vector<StepDistribution> Ds{StepDistribution::uniform_nearest_neighbor(1),
                                         exponential(1, 1, 2).rationalized()};
  bool pass = true;
  std::uint64_t walks = 0;
  for (const auto& D : Ds) {
    for (const Rational& kappa : {Rational(0), Rational(1, 10)}) {
      for (int n = 1; n <= 4; ++n) {
        const auto r = verify_graph_sum_equivalence<Rational>(n, D, Potential(kappa));
        pass = pass && r.holds && r.max_abs_difference == 0;
        walks += r.walks;
      }
    }
  }
  return {pass, std::to_string(walks) + " walks compared exactly"};
}

Outcome lace_map_laws() {
  std::size_t graphs = 0, violations = 0;
  for (int b = 1; b <= 4; ++b) {
    const auto edges = IntervalGraph::all_edges(0, b);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << edges.size()); ++mask) {
      const auto G = IntervalGraph::from_mask(0, b, mask);
      if (!is_connected(G)) continue;
      ++graphs;
      const Lace L = lace_of(G);
      bool ok = L.graph().is_subgraph_of(G) && lace_of(L.graph()) == L && is_minimally_connected(L.graph());
      for (const auto& e : G.edges()) {
        if (!L.graph().contains(e)) ok = ok && is_compatible(e, L);
      }
      violations += !ok;
    }
  }
  return {violations == 0 && graphs > 0,
          std::to_string(graphs) + " connected graphs, " + std::to_string(violations) + " violations"};
}

struct BoundsTally {
  int configs = 0;
  int skipped = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
};

Outcome subadditivity_and_bounds(bool subadditivity_part) {
  // d=1 in exact arithmetic on the rationalized table; d=2 in float mode
  // (relative tolerance 1e-12) because the radius-2 table has 12 steps.
  BoundsTally sub, bounds;
  for (int d : {1, 2}) {
    for (double L : {1.0, 2.0}) {
      const double cutoff = d == 1 ? 2.0 : 3.0 - L;
      const auto D = exponential(L, d, cutoff);
      const double delta = *D.delta_analytic();
      for (const char* k : {"0", "1/200", "1/50"}) {
        const Rational kappa(k);
        if (!theorem1_condition(kappa.get_d(), delta, d)) {
          ++sub.skipped;
          continue;
        }
        ++sub.configs;
        const Potential U(kappa);
        auto tally = [&](const auto& series) {
          using S = std::decay_t<decltype(series.partition_value(0))>;
          for (int m = 1; m < 8; ++m) {
            for (int n = 1; m + n <= 8; ++n) {
              ++sub.checks;
              sub.failures += !verify_subadditivity(series, m, n).holds;
            }
          }
          const S c1 = series.partition_value(1);
          S upper(1), lower(1);
          for (int n = 1; n <= 8; ++n) {
            upper *= c1;
            lower /= S(1 << d);
            bounds.checks += 2;
            bounds.failures += !holds_le(lower, series.partition_value(n));
            bounds.failures += !holds_le(series.partition_value(n), upper);
          }
        };
        if (d == 1) {
          tally(enumerate_connectivities<Rational>(8, D.rationalized(), U));
        } else {
          tally(enumerate_connectivities<double>(8, D, U));
        }
      }
    }
  }
  const auto& t = subadditivity_part ? sub : bounds;
  return {t.failures == 0 && t.checks > 0,
          std::to_string(t.checks - t.failures) + "/" + std::to_string(t.checks) + " inequalities hold over " +
              std::to_string(sub.configs) + " configurations (" + std::to_string(sub.skipped) +
              " outside the small-attraction condition)"};
}

Outcome kernel_bounds() {
  std::size_t checks = 0, failures = 0;
  std::string worst;
  double worst_ratio = 0;
  auto run = [&](const auto& D, const Potential& U, auto tag) {
    using S = decltype(tag);
    const auto series = enumerate_connectivities<S>(5, D, U);
    for (int n = 1; n <= 6; ++n) {
      const auto k = pi_kernels<S>(n, D, U, 2);
      auto check = [&](KernelBound which, int N, double gamma) {
        const auto r = evaluate_kernel_bound(which, N, gamma, series, k, D, U);
        ++checks;
        failures += !r.holds;
        if (r.rhs > 0 && r.lhs / r.rhs > worst_ratio) {
          worst_ratio = r.lhs / r.rhs;
          worst = std::string(to_string(which)) + " n=" + std::to_string(n);
        }
      };
      check(KernelBound::I, 1, 0);
      for (double g : {1.0, 1.5, 2.0}) check(KernelBound::III, 1, g);
      if (n >= 3) {
        check(KernelBound::II, 2, 0);
        for (double g : {1.0, 1.5, 2.0}) check(KernelBound::IV, 2, g);
      }
    }
  };
  int configs = 0;
  for (double L : {1.0, 2.0}) {
    const auto D = exponential(L, 1, 2).rationalized();
    for (const char* k : {"0", "1/200", "1/50"}) {
      const Potential U{Rational(k)};
      if (!small_attraction_hypothesis(U, D)) continue;
      ++configs;
      run(D, U, Rational{});
    }
  }
  {
    const auto D = exponential(2, 2, 1);
    for (const char* k : {"0", "1/50"}) {
      const Potential U{Rational(k)};
      if (!small_attraction_hypothesis(U, D)) continue;
      ++configs;
      run(D, U, double{});
    }
  }
  // sharpness: n = 2, N = 1, d = 1, kappa = 0
  const auto D = StepDistribution::uniform_nearest_neighbor(1);
  const Potential U(0);
  const auto series = enumerate_connectivities<Rational>(1, D, U);
  const auto r = evaluate_kernel_bound(KernelBound::I, 1, 0, series, pi_kernels<Rational>(2, D, U), D, U);
  const bool sharp = r.exact && r.holds && r.lhs == 0.5 && r.rhs == 0.5;
  return {failures == 0 && checks > 0 && sharp,
          std::to_string(checks - failures) + "/" + std::to_string(checks) + " bounds hold over " +
              std::to_string(configs) + " configurations, tightest lhs/rhs " + num(worst_ratio) + " (" + worst +
              "); sharpness lhs=" + num(r.lhs) + " rhs=" + num(r.rhs)};
}

Outcome key_inequality() {
  const auto D = exponential(1, 1, 2).rationalized();
  const Potential U(Rational(1, 50));
  std::size_t cases = 0, failing = 0, endpoints = 0, failing_endpoints = 0, summed_failing = 0;
  for (int m = 1; m <= 3; ++m) {
    for (const auto& w : self_avoiding_prefixes(m, D)) {
      for (int j = 0; j < m; ++j) {
        for (int n = 0; n <= 3; ++n) {
          const auto s = key_inequality_sweep<Rational>(w, j, n, D, U);
          ++cases;
          failing += !s.all_endpoints_hold;
          summed_failing += !s.summed_holds;
          endpoints += s.per_endpoint.size();
          failing_endpoints += s.failing_endpoints;
        }
      }
    }
  }
  return {failing == 0, std::to_string(cases - failing) + "/" + std::to_string(cases) + " (prefix, j, n) cases hold; " +
                            std::to_string(failing_endpoints) + "/" + std::to_string(endpoints) +
                            " endpoints fail; summed over y: " + std::to_string(summed_failing) + " cases fail"};
}

Outcome random_walk_degeneration() {
  bool pass = true;
  for (const auto& D : {exponential(1, 1, 2).rationalized(), exponential(1, 2, 1.5).rationalized(),
                        StepDistribution::uniform_nearest_neighbor(3)}) {
    const auto U = Potential::disabled();
    const auto series = enumerate_connectivities<Rational>(6, D, U);
    const Rational delta0 = D.second_moment<Rational>();
    for (int n = 0; n <= 6; ++n) {
      pass = pass && series.partition_value(n) == 1;
      pass = pass && series.moment(n, 2) == n * delta0;
    }
    const auto est = diffusion_constant<Rational>(4, 1.0, D, U);
    pass = pass && est.tau == 0 && est.sigma == 0 && est.delta == delta0.get_d();
  }
  return {pass, "c_n = 1, sum |x|^2 C_n = n delta_0 and delta = delta_0 exactly"};
}

Outcome fourier_recursion() {
  const auto D = exponential(1, 2, 2);
  const Potential U(Rational(1, 50));
  std::vector<std::vector<double>> ks;
  for (int i = 0; i < 5; ++i) {
    ks.push_back({std::numbers::pi * std::sin(1.0 + 2.3 * i), std::numbers::pi * std::sin(1.7 + 2.3 * i)});
  }
  const auto series = enumerate_connectivities<double>(4, D, U);
  std::vector<PiKernels<double>> kernels;
  for (int m = 1; m <= 4; ++m) kernels.push_back(pi_kernels<double>(m, D, U));
  const auto fg = fg_residual(series, kernels, ks, 1.0, D, U);
  double worst_rel = 0;
  for (int n = 0; n <= 4; ++n) {
    const double c = series.partition_value(n);
    worst_rel = std::max(worst_rel, std::fabs(fourier(series[n], std::vector<double>{0, 0}).real() - c) / c);
  }
  return {fg.holds && fg.max_residual < 1e-10 && worst_rel <= 1e-14,
          "max residual " + num(fg.max_residual) + " at " + std::to_string(fg.samples) +
              " wave vectors, fourier(C_n, 0) relative error " + num(worst_rel)};
}

Outcome sampler_calibration() {
  const auto D = StepDistribution::uniform_nearest_neighbor(2);
  const Potential U(0);
  const auto exact = enumerate_connectivities<Rational>(8, D, U);
  bool pass = true;
  std::string detail;
  for (int n : {4, 6, 8}) {
    const double cn = exact.partition_value(n).get_d();
    int within = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto b = sample_walks(n, 100000, seed, D, U);
      within += std::fabs(b.cn_estimate - cn) <= 3 * b.cn_std_error;
    }
    pass = pass && within >= 99;
    detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + ": " + std::to_string(within) +
              "/100 seeds within 3 se";
  }
  return {pass, detail};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "closed forms for c_1 and pi_1", 1, closed_forms},
      {2, "convolution recursion closes", 120, recursion_identity},
      {3, "connected-graph sum equals lace-grouped sum", 60, graph_sum_equivalence},
      {4, "lace map laws", 60, lace_map_laws},
      {5, "subadditivity under the small-attraction condition", 300, [] { return subadditivity_and_bounds(true); }},
      {6, "kernel norm bounds (i)-(iv) and sharpness", 300, kernel_bounds},
      {7, "key inequality, exhaustive sweep", 120, key_inequality},
      {8, "simple random walk degenerations", 1, random_walk_degeneration},
      {9, "Fourier-side recursion", 60, fourier_recursion},
      {10, "sampler calibration", 300, sampler_calibration},
      {11, "2^{-dn} <= c_n <= c_1^n", 300, [] { return subadditivity_and_bounds(false); }},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    ok = ok && pass;
    std::printf("criterion %2d %s: %s [%s; %.2fs%s]\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
