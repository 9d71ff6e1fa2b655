#include "lacewalk/enumerate.hpp"

#include <limits>
#include <map>
#include <memory>

#include "detail/box_accumulator.hpp"
#include "detail/parallel.hpp"

namespace lacewalk {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

/// Flat copy of the step table used by the depth-first workers.
template <class S>
struct StepTable {
  int dim;
  std::vector<int> offsets;  // size() * dim
  std::vector<S> weights;

  StepTable(const StepDistribution& D) : dim(D.dim()) {
    for (std::size_t i = 0; i < D.size(); ++i) {
      const auto& x = D.entries()[i].offset;
      for (int k = 0; k < dim; ++k) offsets.push_back(x[k]);
      weights.push_back(D.weight_as<S>(i));
    }
  }
  std::size_t size() const { return weights.size(); }
  const int* offset(std::size_t i) const { return offsets.data() + i * static_cast<std::size_t>(dim); }
};

/// (1+kappa)^k for k = 0..kmax.
template <class S>
std::vector<S> contact_powers(const Potential& U, int kmax) {
  std::vector<S> p(static_cast<std::size_t>(kmax) + 1, S(1));
  for (std::size_t k = 1; k < p.size(); ++k) p[k] = p[k - 1] * U.pair_factor<S>(1);
  return p;
}

inline std::int64_t dist2(const int* a, const int* b, int dim) {
  std::int64_t s = 0;
  for (int k = 0; k < dim; ++k) {
    const std::int64_t d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

constexpr std::uint64_t kBudgetBatch = 1u << 14;

template <class S>
class ConnectivityWorker {
 public:
  ConnectivityWorker(const StepTable<S>& steps, const Potential& U, const std::vector<S>& powers, int nmax,
                     int step_radius, detail::NodeBudget& budget)
      : steps_(steps),
        U_(U),
        powers_(powers),
        nmax_(nmax),
        dim_(steps.dim),
        budget_(budget),
        path_(static_cast<std::size_t>((nmax + 1) * steps.dim), 0) {
    for (int t = 0; t <= nmax; ++t) acc_.emplace_back(dim_, t * step_radius);
  }

  void run_branch(std::size_t first) {
    const int* off = steps_.offset(first);
    for (int k = 0; k < dim_; ++k) path_[static_cast<std::size_t>(dim_ + k)] = off[k];
    count_node();
    // a single step never revisits the origin (D(0) = 0); its only pair is
    // (0,1) at distance |step|
    S w = steps_.weights[first] * U_.template pair_factor<S>(dist2(off, path_.data(), dim_));
    if (!ScalarOps<S>::is_zero(w)) extend(1, w);
    flush();
  }

  std::vector<detail::BoxAccumulator<S>>& accumulators() { return acc_; }

 private:
  const int* site(int t) const { return path_.data() + static_cast<std::size_t>(t * dim_); }

  void extend(int t, const S& w) {
    acc_[static_cast<std::size_t>(t)].add(site(t), w);
    if (t == nmax_) return;
    int* next = path_.data() + static_cast<std::size_t>((t + 1) * dim_);
    const int* cur = site(t);
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      const int* off = steps_.offset(i);
      for (int k = 0; k < dim_; ++k) next[k] = cur[k] + off[k];
      count_node();
      int contacts = 0;
      bool blocked = false;
      if (U_.interacting()) {
        for (int u = 0; u <= t; ++u) {
          const auto r2 = dist2(site(u), next, dim_);
          if (r2 == 0) {
            blocked = true;
            break;
          }
          contacts += r2 == 1;
        }
      }
      if (blocked) continue;
      S child = w * steps_.weights[i];
      if (contacts > 0) child *= powers_[static_cast<std::size_t>(contacts)];
      if (ScalarOps<S>::is_zero(child)) continue;
      extend(t + 1, child);
    }
  }

  void count_node() {
    if (++pending_ == kBudgetBatch) flush();
  }

  void flush() {
    if (pending_ == 0) return;
    const auto n = pending_;
    pending_ = 0;
    if (!budget_.charge(n)) {
      throw BudgetExceeded("connectivity enumeration", budget_.used(), budget_.cap());
    }
  }

  const StepTable<S>& steps_;
  const Potential& U_;
  const std::vector<S>& powers_;
  int nmax_;
  int dim_;
  detail::NodeBudget& budget_;
  std::vector<int> path_;
  std::vector<detail::BoxAccumulator<S>> acc_;
  std::uint64_t pending_ = 0;
};

}  // namespace

std::uint64_t projected_walk_count(int nmax, const StepDistribution& D, const Potential& U) {
  const std::uint64_t k = D.size();
  const std::uint64_t branching = U.interacting() ? (k > 0 ? k - 1 : 0) : k;
  std::uint64_t total = 0;
  std::uint64_t level = k;
  for (int t = 1; t <= nmax; ++t) {
    total = saturating_add(total, level);
    level = saturating_mul(level, branching);
  }
  return total;
}

template <class S>
ConnectivitySeries<S> enumerate_connectivities(int nmax, const StepDistribution& D, const Potential& U,
                                               const EnumerationOptions& opts) {
  if (nmax < 0) throw std::invalid_argument("step count must be >= 0");
  const auto projected = projected_walk_count(nmax, D, U);
  if (projected > opts.budget) throw BudgetExceeded("connectivity enumeration", projected, opts.budget);

  ConnectivitySeries<S> out;
  out.fields.push_back(LatticeField<S>::delta(D.dim()));
  if (nmax == 0) return out;

  const StepTable<S> steps(D);
  const auto powers = contact_powers<S>(U, nmax + 1);
  const int radius = detail::max_coordinate_step(D);
  detail::NodeBudget budget(opts.budget);

  // One worker per first step; partial fields merged in branch order so the
  // result does not depend on the thread count.
  std::vector<std::unique_ptr<ConnectivityWorker<S>>> workers(steps.size());
  detail::for_each_task(steps.size(), opts.threads, [&](std::size_t b) {
    workers[b] = std::make_unique<ConnectivityWorker<S>>(steps, U, powers, nmax, radius, budget);
    workers[b]->run_branch(b);
  });

  auto& total = workers.front()->accumulators();
  for (std::size_t b = 1; b < workers.size(); ++b) {
    auto& part = workers[b]->accumulators();
    for (int t = 1; t <= nmax; ++t) total[static_cast<std::size_t>(t)].merge(part[static_cast<std::size_t>(t)]);
    workers[b].reset();
  }
  for (int t = 1; t <= nmax; ++t) out.fields.push_back(total[static_cast<std::size_t>(t)].to_field(t));
  out.nodes = budget.used();
  return out;
}

template <class S>
InequalityReport<S> verify_subadditivity(const ConnectivitySeries<S>& series, int m, int n) {
  if (m < 0 || n < 0 || m + n > series.nmax()) throw std::out_of_range("subadditivity indices beyond enumerated range");
  InequalityReport<S> r{series.partition_value(m + n), series.partition_value(m) * series.partition_value(n), false};
  r.holds = holds_le(r.lhs, r.rhs);
  return r;
}

template <class S>
KeyInequalitySweep<S> key_inequality_sweep(const Walk& prefix, int j, int n, const StepDistribution& D,
                                           const Potential& U) {
  const int m = static_cast<int>(prefix.steps());
  if (m < 1) throw std::invalid_argument("key inequality needs a prefix with at least one step");
  if (j < 0 || j >= m) throw std::invalid_argument("key inequality index j must satisfy 0 <= j < m");
  if (n < 0) throw std::invalid_argument("suffix length must be >= 0");
  if (prefix.dim() != D.dim()) throw std::invalid_argument("prefix dimension does not match D");
  if (ScalarOps<S>::is_zero(walk_weight<S>(prefix, D, U))) {
    throw std::invalid_argument("prefix has zero weight: the inequality is vacuous");
  }

  const int dim = D.dim();
  const StepTable<S> steps(D);
  std::vector<LatticePoint> suffix(static_cast<std::size_t>(n) + 1, prefix.back());
  std::map<LatticePoint, std::pair<CompensatedSum<S>, CompensatedSum<S>>> sums;

  // weight: W of the suffix so far times factors against w_{j+1..m-1};
  // extra: factors against w_j only.
  auto visit = [&](auto&& self, int t, const S& weight, const S& extra) -> void {
    if (t == n) {
      auto& [lhs, rhs] = sums[suffix[static_cast<std::size_t>(t)]];
      lhs += weight * extra;
      rhs += weight;
      return;
    }
    for (std::size_t i = 0; i < steps.size(); ++i) {
      LatticePoint next = suffix[static_cast<std::size_t>(t)];
      const int* off = steps.offset(i);
      for (int k = 0; k < dim; ++k) next[k] += off[k];
      S w = weight * steps.weights[i];
      for (int u = 0; u <= t && !ScalarOps<S>::is_zero(w); ++u) {
        w *= U.template pair_factor<S>((suffix[static_cast<std::size_t>(u)] - next).norm2());
      }
      for (int s = j + 1; s < m && !ScalarOps<S>::is_zero(w); ++s) {
        w *= U.template pair_factor<S>((prefix[static_cast<std::size_t>(s)] - next).norm2());
      }
      if (ScalarOps<S>::is_zero(w)) continue;
      const S e = extra * U.template pair_factor<S>((prefix[static_cast<std::size_t>(j)] - next).norm2());
      suffix[static_cast<std::size_t>(t) + 1] = next;
      self(self, t + 1, w, e);
    }
  };
  visit(visit, 0, S(1), S(1));

  KeyInequalitySweep<S> out{{}, S(0), S(0), true, true, 0};
  CompensatedSum<S> lhs_total;
  CompensatedSum<S> rhs_total;
  for (const auto& [y, pair] : sums) {
    KeyInequalityEntry<S> e{y, pair.first.value(), pair.second.value(), false};
    e.holds = holds_le(e.lhs, e.rhs);
    if (!e.holds) {
      out.all_endpoints_hold = false;
      ++out.failing_endpoints;
    }
    lhs_total += e.lhs;
    rhs_total += e.rhs;
    out.per_endpoint.push_back(std::move(e));
  }
  out.lhs_total = lhs_total.value();
  out.rhs_total = rhs_total.value();
  out.summed_holds = holds_le(out.lhs_total, out.rhs_total);
  return out;
}

template <class S>
KeyInequalityEntry<S> verify_key_inequality(const Walk& prefix, int j, int n, const LatticePoint& y,
                                            const StepDistribution& D, const Potential& U) {
  const auto sweep = key_inequality_sweep<S>(prefix, j, n, D, U);
  for (const auto& e : sweep.per_endpoint) {
    if (e.y == y) return e;
  }
  return {y, S(0), S(0), true};
}

#define LACEWALK_INSTANTIATE(S)                                                                                  \
  template ConnectivitySeries<S> enumerate_connectivities<S>(int, const StepDistribution&, const Potential&,    \
                                                             const EnumerationOptions&);                        \
  template InequalityReport<S> verify_subadditivity<S>(const ConnectivitySeries<S>&, int, int);                 \
  template KeyInequalitySweep<S> key_inequality_sweep<S>(const Walk&, int, int, const StepDistribution&,        \
                                                         const Potential&);                                     \
  template KeyInequalityEntry<S> verify_key_inequality<S>(const Walk&, int, int, const LatticePoint&,          \
                                                          const StepDistribution&, const Potential&);

LACEWALK_INSTANTIATE(double)
LACEWALK_INSTANTIATE(Rational)

#undef LACEWALK_INSTANTIATE

}  // namespace lacewalk
