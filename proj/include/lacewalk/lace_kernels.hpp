#pragma once

#include <cstdint>
#include <vector>

#include "lacewalk/enumerate.hpp"
#include "lacewalk/field.hpp"
#include "lacewalk/laces.hpp"
#include "lacewalk/model.hpp"

namespace lacewalk {

/// Pi_n^{(N)}(x) for N = 1..max_lace_size, computed lace by lace from one
/// walk tree:
///   sum_{w: 0 -> x, |w| = n} D(w) sum_{L in L^{(N)}[0,n]}
///       prod_{st in L} (-U(w_s - w_t)) prod_{st ~ L} (1 - U(w_s - w_t)).
template <class S>
struct PiKernels {
  int n = 0;
  int max_lace_size = 0;
  /// by_size[N] = Pi_n^{(N)}; by_size[0] is unused and empty.
  std::vector<LatticeField<S>> by_size;
  /// Pi_n restricted to laces with at most max_lace_size edges.
  LatticeField<S> total;
  /// sum |terms| / sum_x |Pi_n(x)|; 1 when both vanish, +inf when only the
  /// result does.
  double condition_estimate = 1.0;
  std::uint64_t nodes = 0;

  const LatticeField<S>& operator[](int N) const { return by_size.at(static_cast<std::size_t>(N)); }
};

/// Pi_n^{(N)} for all N <= max_lace_size (default n, which is complete).
template <class S>
PiKernels<S> pi_kernels(int n, const StepDistribution& D, const Potential& U, int max_lace_size = -1,
                        const EnumerationOptions& opts = {});

template <class S>
LatticeField<S> pi_kernel(int n, int N, const StepDistribution& D, const Potential& U,
                          const EnumerationOptions& opts = {}) {
  if (N < 1) throw std::invalid_argument("lace size N must be >= 1");
  if (N > n) return LatticeField<S>(D.dim(), n);
  return pi_kernels<S>(n, D, U, N, opts)[N];
}

template <class S>
struct RecursionReport {
  int n;
  S max_abs_residual;
  bool holds;
  LatticeField<S> residual;
};

/// residual = C_n - D*C_{n-1} - sum_{m=1}^n Pi_m * C_{n-m} over precomputed
/// inputs; kernels[m-1] must hold Pi_m.
template <class S>
RecursionReport<S> recursion_residual(int n, const StepDistribution& D, const ConnectivitySeries<S>& series,
                                      const std::vector<PiKernels<S>>& kernels);

/// Exact in rational mode; max |residual| <= 1e-12 in float mode.
template <class S>
RecursionReport<S> verify_recursion(int n, const StepDistribution& D, const Potential& U, int max_lace_size = -1,
                                    const EnumerationOptions& opts = {});

template <class S>
struct GraphSumReport {
  int n;
  std::uint64_t walks = 0;
  std::uint64_t connected_graphs = 0;
  /// max over walks of |connected-graph sum - lace-grouped sum|
  S max_abs_difference;
  /// sum over walks of D(w) (connected-graph sum - lace-grouped sum)
  S aggregate_residual;
  bool holds;
};

/// For every n-step walk from the origin with steps in the support of D,
/// compares sum_{G in C[0,n]} prod_{st in G} (-U) with
/// sum_L prod_{st in L} (-U) prod_{st ~ L} (1 - U). Requires 1 <= n <= 5.
template <class S>
GraphSumReport<S> verify_graph_sum_equivalence(int n, const StepDistribution& D, const Potential& U);

enum class KernelBound { I, II, III, IV };

const char* to_string(KernelBound which);
KernelBound kernel_bound_from_string(const std::string& text);

struct KernelBoundReport {
  KernelBound which;
  int n;
  int N;
  double gamma;
  double lhs;
  double rhs;
  bool holds;
  /// Verdict taken in exact arithmetic (bounds I and II in rational mode).
  bool exact;
  /// Whether the small-attraction hypothesis holds for (U, D); the bounds
  /// are only claimed when it does.
  bool hypothesis;
};

/// Norm bounds on Pi_n^{(N)} in terms of ||C_m||_inf and ||C_m||_1:
///   I   (N = 1)        ||Pi||_1 <= (1+2d kappa) ||C_{n-1}||_inf
///   II  (N >= 2)       ||Pi||_1 <= (2N-1) 2^{N-1} (1+2d kappa)^N
///                        sum_m prod_{j odd} ||C_{m_j}||_inf prod_{j even} ||C_{m_j}||_1
///   III (N = 1, g > 0) || |x|^g Pi ||_1 <= 2d kappa ||C_{n-1}||_inf
///   IV  (N >= 2, 1 <= g <= 2)
///       || |x|^{2g} Pi ||_1 <= (N-1)^{2g-2} (2N-1) 2^{2g-2+N} (1+2d kappa)^N
///         sum_m [sum_{i odd >= 3} ||(|x|^g+1) C_{m_i}||_inf prod_{i' odd != i} ||C_{m_i'}||_inf]
///               [sum_{j even} ||(|x|^g+1) C_{m_j}||_1 prod_{j' even != j} ||C_{m_j'}||_1]
/// with m ranging over compositions(n, N). `series` must reach n-1 and
/// `kernels` must be Pi_n with max_lace_size >= N.
template <class S>
KernelBoundReport evaluate_kernel_bound(KernelBound which, int N, double gamma, const ConnectivitySeries<S>& series,
                                        const PiKernels<S>& kernels, const StepDistribution& D, const Potential& U);

template <class S>
KernelBoundReport verify_prop31(int n, int N, KernelBound which, double gamma, const StepDistribution& D,
                                const Potential& U, const EnumerationOptions& opts = {});

}  // namespace lacewalk
