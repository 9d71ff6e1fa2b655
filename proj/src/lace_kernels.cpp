#include "lacewalk/lace_kernels.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>

#include "detail/box_accumulator.hpp"
#include "detail/parallel.hpp"

namespace lacewalk {

namespace {

/// Per-lace edge classification on [0, n].
struct LacePlan {
  int size = 0;
  /// ending[t]: (s, in_lace) for every lace or compatible edge st.
  std::vector<std::vector<std::pair<int, bool>>> ending;
  /// pending[t]: lace edges (s, t') with s <= t < t', which constrain
  /// where the walk may still go.
  std::vector<std::vector<Edge>> pending;
};

std::vector<LacePlan> make_plans(int n, int max_size) {
  std::vector<LacePlan> plans;
  const auto all = IntervalGraph::all_edges(0, n);
  for (int N = 1; N <= max_size; ++N) {
    for (const auto& lace : enumerate_laces(0, n, N)) {
      LacePlan p;
      p.size = N;
      p.ending.resize(static_cast<std::size_t>(n) + 1);
      p.pending.resize(static_cast<std::size_t>(n) + 1);
      for (const auto& e : all) {
        const bool in_lace = lace.graph().contains(e);
        if (in_lace || is_compatible(e, lace)) p.ending[static_cast<std::size_t>(e.t)].emplace_back(e.s, in_lace);
      }
      for (const auto& e : lace.edges()) {
        for (int t = e.s; t < e.t; ++t) p.pending[static_cast<std::size_t>(t)].push_back(e);
      }
      plans.push_back(std::move(p));
    }
  }
  return plans;
}

constexpr std::uint64_t kBudgetBatch = 1u << 14;

template <class S>
class KernelWorker {
 public:
  KernelWorker(const StepDistribution& D, const Potential& U, const std::vector<LacePlan>& plans, int n,
               int max_size, detail::NodeBudget& budget)
      : D_(D),
        U_(U),
        plans_(plans),
        n_(n),
        dim_(D.dim()),
        reach_(D.max_step_length()),
        budget_(budget),
        path_(static_cast<std::size_t>((n + 1) * D.dim()), 0),
        r2_(static_cast<std::size_t>(n) + 1, 0),
        live_(static_cast<std::size_t>(n) + 1) {
    for (std::size_t i = 0; i < D.size(); ++i) weights_.push_back(D.weight_as<S>(i));
    const int radius = n * detail::max_coordinate_step(D);
    for (int N = 0; N <= max_size; ++N) acc_.emplace_back(dim_, radius);
  }

  void run_branch(std::size_t first) {
    live_[0].clear();
    for (std::size_t k = 0; k < plans_.size(); ++k) live_[0].emplace_back(static_cast<int>(k), S(1));
    child(0, first, S(1));
    flush();
  }

  std::vector<detail::BoxAccumulator<S>>& accumulators() { return acc_; }
  CompensatedSum<double>& abs_sum() { return abs_; }

 private:
  int* site(int t) { return path_.data() + static_cast<std::size_t>(t * dim_); }

  void visit(int t, const S& dprod) {
    for (std::size_t i = 0; i < weights_.size(); ++i) child(t, i, dprod);
  }

  void child(int t, std::size_t step, const S& dprod) {
    const int next = t + 1;
    int* x = site(next);
    const int* cur = site(t);
    const auto& off = D_.entries()[step].offset;
    for (int k = 0; k < dim_; ++k) x[k] = cur[k] + off[k];
    if (++pending_ == kBudgetBatch) flush();

    for (int s = 0; s <= t; ++s) {
      const int* y = site(s);
      std::int64_t d2 = 0;
      for (int k = 0; k < dim_; ++k) d2 += static_cast<std::int64_t>(x[k] - y[k]) * (x[k] - y[k]);
      r2_[static_cast<std::size_t>(s)] = d2;
    }
    r2_[static_cast<std::size_t>(next)] = 0;

    auto& out = live_[static_cast<std::size_t>(next)];
    out.clear();
    for (const auto& [k, value] : live_[static_cast<std::size_t>(t)]) {
      const auto& plan = plans_[static_cast<std::size_t>(k)];
      S v = value;
      for (const auto& [s, in_lace] : plan.ending[static_cast<std::size_t>(next)]) {
        const auto d2 = r2_[static_cast<std::size_t>(s)];
        v *= in_lace ? S(-U_.template value<S>(d2)) : U_.template pair_factor<S>(d2);
        if (ScalarOps<S>::is_zero(v)) break;
      }
      if (ScalarOps<S>::is_zero(v)) continue;
      if (!reachable(plan, next)) continue;
      out.emplace_back(k, std::move(v));
    }
    if (out.empty()) return;

    const S dnext = dprod * weights_[step];
    if (next == n_) {
      for (const auto& [k, v] : out) {
        const S term = dnext * v;
        acc_[static_cast<std::size_t>(plans_[static_cast<std::size_t>(k)].size)].add(x, term);
        abs_ += std::fabs(ScalarOps<S>::to_double(term));
      }
      return;
    }
    visit(next, dnext);
  }

  /// Every open lace edge (s, t') must be able to close within distance 1.
  bool reachable(const LacePlan& plan, int t) {
    for (const auto& e : plan.pending[static_cast<std::size_t>(t)]) {
      const double slack = 1.0 + reach_ * (e.t - t) + 1e-9;
      const int* a = site(e.s);
      const int* b = site(t);
      std::int64_t d2 = 0;
      for (int k = 0; k < dim_; ++k) d2 += static_cast<std::int64_t>(a[k] - b[k]) * (a[k] - b[k]);
      if (static_cast<double>(d2) > slack * slack) return false;
    }
    return true;
  }

  void flush() {
    if (pending_ == 0) return;
    const auto n = pending_;
    pending_ = 0;
    if (!budget_.charge(n)) throw BudgetExceeded("lace kernel enumeration", budget_.used(), budget_.cap());
  }

  const StepDistribution& D_;
  const Potential& U_;
  const std::vector<LacePlan>& plans_;
  int n_;
  int dim_;
  double reach_;
  detail::NodeBudget& budget_;
  std::vector<int> path_;
  std::vector<std::int64_t> r2_;
  std::vector<std::vector<std::pair<int, S>>> live_;
  std::vector<S> weights_;
  std::vector<detail::BoxAccumulator<S>> acc_;
  CompensatedSum<double> abs_;
  std::uint64_t pending_ = 0;
};

template <class S>
S pow_int(S base, int e) {
  S r(1);
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

}  // namespace

template <class S>
PiKernels<S> pi_kernels(int n, const StepDistribution& D, const Potential& U, int max_lace_size,
                        const EnumerationOptions& opts) {
  if (n < 1) throw std::invalid_argument("lace kernels need n >= 1");
  const int max_size = max_lace_size < 0 ? n : std::min(max_lace_size, n);
  if (max_size < 1) throw std::invalid_argument("max lace size must be >= 1");

  PiKernels<S> out;
  out.n = n;
  out.max_lace_size = max_size;
  out.by_size.assign(static_cast<std::size_t>(max_size) + 1, LatticeField<S>(D.dim(), n));
  out.total = LatticeField<S>(D.dim(), n);

  const auto plans = make_plans(n, max_size);
  detail::NodeBudget budget(opts.budget);
  std::vector<std::unique_ptr<KernelWorker<S>>> workers(D.size());
  detail::for_each_task(D.size(), opts.threads, [&](std::size_t b) {
    workers[b] = std::make_unique<KernelWorker<S>>(D, U, plans, n, max_size, budget);
    workers[b]->run_branch(b);
  });

  auto& total = workers.front()->accumulators();
  auto& abs_total = workers.front()->abs_sum();
  for (std::size_t b = 1; b < workers.size(); ++b) {
    auto& part = workers[b]->accumulators();
    for (std::size_t N = 1; N < total.size(); ++N) total[N].merge(part[N]);
    abs_total += workers[b]->abs_sum();
    workers[b].reset();
  }
  for (int N = 1; N <= max_size; ++N) {
    out.by_size[static_cast<std::size_t>(N)] = total[static_cast<std::size_t>(N)].to_field(n);
    out.total += out.by_size[static_cast<std::size_t>(N)];
  }
  const double result = ScalarOps<double>::to_double(out.total.to_double().norm1());
  const double terms = abs_total.value();
  if (result > 0.0) {
    out.condition_estimate = terms / result;
  } else {
    out.condition_estimate = terms > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  out.nodes = budget.used();
  return out;
}

template <class S>
RecursionReport<S> recursion_residual(int n, const StepDistribution& D, const ConnectivitySeries<S>& series,
                                      const std::vector<PiKernels<S>>& kernels) {
  if (n < 1 || n > series.nmax()) throw std::out_of_range("recursion order beyond the enumerated series");
  if (static_cast<int>(kernels.size()) < n) throw std::invalid_argument("recursion needs Pi_1..Pi_n");

  std::map<LatticePoint, CompensatedSum<S>> acc;
  for (const auto& [x, v] : series[n].entries()) acc[x] += v;
  const auto walked = convolve(D.as_field<S>(), series[n - 1]);
  for (const auto& [x, v] : walked.entries()) acc[x] += S(-v);
  for (int m = 1; m <= n; ++m) {
    const auto& pi = kernels[static_cast<std::size_t>(m - 1)].total;
    const auto term = convolve(pi, series[n - m]);
    for (const auto& [x, v] : term.entries()) acc[x] += S(-v);
  }
  RecursionReport<S> r{n, S(0), false, LatticeField<S>(D.dim(), n)};
  for (const auto& [x, s] : acc) {
    r.residual.set(x, s.value());
  }
  r.max_abs_residual = r.residual.norm_inf();
  if constexpr (ScalarOps<S>::exact) {
    r.holds = ScalarOps<S>::is_zero(r.max_abs_residual);
  } else {
    r.holds = r.max_abs_residual <= 1e-12;
  }
  return r;
}

template <class S>
RecursionReport<S> verify_recursion(int n, const StepDistribution& D, const Potential& U, int max_lace_size,
                                    const EnumerationOptions& opts) {
  const auto series = enumerate_connectivities<S>(n, D, U, opts);
  std::vector<PiKernels<S>> kernels;
  for (int m = 1; m <= n; ++m) kernels.push_back(pi_kernels<S>(m, D, U, max_lace_size, opts));
  return recursion_residual(n, D, series, kernels);
}

template <class S>
GraphSumReport<S> verify_graph_sum_equivalence(int n, const StepDistribution& D, const Potential& U) {
  if (n < 1 || n > 5) throw std::invalid_argument("graph-sum equivalence is limited to 1 <= n <= 5");
  const auto all = IntervalGraph::all_edges(0, n);
  const std::uint64_t graph_count = 1ull << all.size();

  std::vector<std::uint64_t> connected;
  for (std::uint64_t mask = 1; mask < graph_count; ++mask) {
    if (is_connected(IntervalGraph::from_mask(0, n, mask))) connected.push_back(mask);
  }
  struct Grouped {
    std::uint64_t lace = 0;
    std::uint64_t compatible = 0;
  };
  std::vector<Grouped> laces;
  for (int N = 1; N <= n; ++N) {
    for (const auto& L : enumerate_laces(0, n, N)) {
      Grouped g;
      for (std::size_t k = 0; k < all.size(); ++k) {
        if (L.graph().contains(all[k])) {
          g.lace |= 1ull << k;
        } else if (is_compatible(all[k], L)) {
          g.compatible |= 1ull << k;
        }
      }
      laces.push_back(g);
    }
  }

  GraphSumReport<S> r{n, 0, connected.size(), S(0), S(0), true};
  CompensatedSum<S> aggregate;
  std::vector<LatticePoint> w(static_cast<std::size_t>(n) + 1, LatticePoint::origin(D.dim()));
  std::vector<S> minus_u(all.size(), S(0));
  std::vector<S> one_minus_u(all.size(), S(0));

  auto walk_rec = [&](auto&& self, int t, const S& dw) -> void {
    if (t == n) {
      for (std::size_t k = 0; k < all.size(); ++k) {
        const auto r2 = (w[static_cast<std::size_t>(all[k].s)] - w[static_cast<std::size_t>(all[k].t)]).norm2();
        minus_u[k] = -U.template value<S>(r2);
        one_minus_u[k] = U.template pair_factor<S>(r2);
      }
      CompensatedSum<S> direct;
      for (auto mask : connected) {
        S p(1);
        for (std::size_t k = 0; k < all.size(); ++k) {
          if ((mask >> k) & 1u) p *= minus_u[k];
        }
        direct += p;
      }
      CompensatedSum<S> grouped;
      for (const auto& g : laces) {
        S p(1);
        for (std::size_t k = 0; k < all.size(); ++k) {
          if ((g.lace >> k) & 1u) p *= minus_u[k];
          if ((g.compatible >> k) & 1u) p *= one_minus_u[k];
        }
        grouped += p;
      }
      const S diff = direct.value() - grouped.value();
      const S a = ScalarOps<S>::abs(diff);
      if (a > r.max_abs_difference) r.max_abs_difference = a;
      aggregate += dw * diff;
      ++r.walks;
      return;
    }
    for (std::size_t i = 0; i < D.size(); ++i) {
      w[static_cast<std::size_t>(t) + 1] = w[static_cast<std::size_t>(t)] + D.entries()[i].offset;
      self(self, t + 1, dw * D.weight_as<S>(i));
    }
  };
  walk_rec(walk_rec, 0, S(1));

  r.aggregate_residual = aggregate.value();
  if constexpr (ScalarOps<S>::exact) {
    r.holds = ScalarOps<S>::is_zero(r.max_abs_difference);
  } else {
    r.holds = r.max_abs_difference <= 1e-12;
  }
  return r;
}

const char* to_string(KernelBound which) {
  switch (which) {
    case KernelBound::I: return "i";
    case KernelBound::II: return "ii";
    case KernelBound::III: return "iii";
    case KernelBound::IV: return "iv";
  }
  return "?";
}

KernelBound kernel_bound_from_string(const std::string& text) {
  if (text == "i") return KernelBound::I;
  if (text == "ii") return KernelBound::II;
  if (text == "iii") return KernelBound::III;
  if (text == "iv") return KernelBound::IV;
  throw std::invalid_argument("unknown kernel bound '" + text + "' (expected i, ii, iii or iv)");
}

template <class S>
KernelBoundReport evaluate_kernel_bound(KernelBound which, int N, double gamma, const ConnectivitySeries<S>& series,
                                        const PiKernels<S>& kernels, const StepDistribution& D, const Potential& U) {
  const int n = kernels.n;
  if (series.nmax() < n - 1) throw std::invalid_argument("kernel bounds need C_m for m <= n-1");
  if (N > kernels.max_lace_size) throw std::invalid_argument("kernels were computed without lace size N");
  switch (which) {
    case KernelBound::I:
    case KernelBound::III:
      if (N != 1) throw std::invalid_argument("bounds i and iii are stated for N = 1");
      break;
    case KernelBound::II:
      if (N < 2) throw std::invalid_argument("bound ii is stated for N >= 2");
      break;
    case KernelBound::IV:
      if (N < 2) throw std::invalid_argument("bound iv is stated for N >= 2");
      if (!(gamma >= 1.0 && gamma <= 2.0)) throw std::invalid_argument("bound iv needs 1 <= gamma <= 2");
      break;
  }
  if (which == KernelBound::III && !(gamma > 0.0)) throw std::invalid_argument("bound iii needs gamma > 0");

  const int d = D.dim();
  const auto& pi = kernels[N];
  const S kappa = U.template kappa_as<S>();
  const S one_plus = S(1) + S(2 * d) * kappa;

  KernelBoundReport r{which, n, N, gamma, 0.0, 0.0, false, false, small_attraction_hypothesis(U, D)};
  auto norm_inf = [&](int m) { return series[m].norm_inf(); };
  auto norm1 = [&](int m) { return series[m].norm1(); };

  if (which == KernelBound::I || which == KernelBound::II) {
    const S lhs = pi.norm1();
    S rhs(0);
    if (which == KernelBound::I) {
      rhs = one_plus * norm_inf(n - 1);
    } else {
      CompensatedSum<S> sum;
      for (const auto& m : compositions(n, N)) {
        S term(1);
        for (std::size_t j = 0; j < m.size(); ++j) {
          // m[0] is m_1: even zero-based index = odd leg.
          term *= j % 2 == 0 ? norm_inf(m[j]) : norm1(m[j]);
        }
        sum += term;
      }
      rhs = S(2 * N - 1) * pow_int(S(2), N - 1) * pow_int(one_plus, N) * sum.value();
    }
    r.lhs = ScalarOps<S>::to_double(lhs);
    r.rhs = ScalarOps<S>::to_double(rhs);
    r.holds = holds_le(lhs, rhs);
    r.exact = ScalarOps<S>::exact;
    return r;
  }

  const double kappa_d = ScalarOps<S>::to_double(kappa);
  if (which == KernelBound::III) {
    r.lhs = pi.weighted_abs_sum([gamma](const LatticePoint& x) { return std::pow(x.norm(), gamma); });
    r.rhs = 2.0 * d * kappa_d * ScalarOps<S>::to_double(norm_inf(n - 1));
    r.holds = holds_le(r.lhs, r.rhs);
    return r;
  }

  // bound iv
  auto plus_one = [gamma](const LatticePoint& x) { return std::pow(x.norm(), gamma) + 1.0; };
  r.lhs = pi.weighted_abs_sum([gamma](const LatticePoint& x) { return std::pow(x.norm(), 2.0 * gamma); });
  std::map<int, double> inf_norm, l1_norm, inf_w, l1_w;
  for (int m = 0; m < n; ++m) {
    inf_norm[m] = ScalarOps<S>::to_double(norm_inf(m));
    l1_norm[m] = ScalarOps<S>::to_double(norm1(m));
    inf_w[m] = series[m].weighted_abs_max(plus_one);
    l1_w[m] = series[m].weighted_abs_sum(plus_one);
  }
  CompensatedSum<double> sum;
  for (const auto& m : compositions(n, N)) {
    // zero-based even positions hold the odd legs m_1, m_3, ...
    CompensatedSum<double> odd_part;
    for (std::size_t i = 2; i < m.size(); i += 2) {
      double term = inf_w[m[i]];
      for (std::size_t k = 0; k < m.size(); k += 2) {
        if (k != i) term *= inf_norm[m[k]];
      }
      odd_part += term;
    }
    CompensatedSum<double> even_part;
    for (std::size_t j = 1; j < m.size(); j += 2) {
      double term = l1_w[m[j]];
      for (std::size_t k = 1; k < m.size(); k += 2) {
        if (k != j) term *= l1_norm[m[k]];
      }
      even_part += term;
    }
    sum += odd_part.value() * even_part.value();
  }
  const double prefactor = std::pow(static_cast<double>(N - 1), 2.0 * gamma - 2.0) * (2.0 * N - 1.0) *
                           std::pow(2.0, 2.0 * gamma - 2.0 + N) * std::pow(1.0 + 2.0 * d * kappa_d, N);
  r.rhs = prefactor * sum.value();
  r.holds = holds_le(r.lhs, r.rhs);
  return r;
}

template <class S>
KernelBoundReport verify_prop31(int n, int N, KernelBound which, double gamma, const StepDistribution& D,
                                const Potential& U, const EnumerationOptions& opts) {
  if (n < 1) throw std::invalid_argument("kernel bounds need n >= 1");
  const auto series = enumerate_connectivities<S>(n - 1, D, U, opts);
  const auto kernels = pi_kernels<S>(n, D, U, std::max(N, 1), opts);
  return evaluate_kernel_bound(which, N, gamma, series, kernels, D, U);
}

#define LACEWALK_INSTANTIATE(S)                                                                                    \
  template PiKernels<S> pi_kernels<S>(int, const StepDistribution&, const Potential&, int,                        \
                                      const EnumerationOptions&);                                                 \
  template RecursionReport<S> recursion_residual<S>(int, const StepDistribution&, const ConnectivitySeries<S>&,   \
                                                    const std::vector<PiKernels<S>>&);                            \
  template RecursionReport<S> verify_recursion<S>(int, const StepDistribution&, const Potential&, int,            \
                                                  const EnumerationOptions&);                                     \
  template GraphSumReport<S> verify_graph_sum_equivalence<S>(int, const StepDistribution&, const Potential&);     \
  template KernelBoundReport evaluate_kernel_bound<S>(KernelBound, int, double, const ConnectivitySeries<S>&,      \
                                                      const PiKernels<S>&, const StepDistribution&,               \
                                                      const Potential&);                                          \
  template KernelBoundReport verify_prop31<S>(int, int, KernelBound, double, const StepDistribution&,             \
                                              const Potential&, const EnumerationOptions&);

LACEWALK_INSTANTIATE(double)
LACEWALK_INSTANTIATE(Rational)

#undef LACEWALK_INSTANTIATE

}  // namespace lacewalk
