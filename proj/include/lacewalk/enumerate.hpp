#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lacewalk/field.hpp"
#include "lacewalk/model.hpp"

namespace lacewalk {

struct EnumerationOptions {
  /// Cap on walk-tree node expansions.
  std::uint64_t budget = 1'000'000'000ull;
  /// Worker threads for the first-step fan-out. Results do not depend on it.
  unsigned threads = 1;
};

/// Thrown when a computation would exceed its node budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t estimate, std::uint64_t budget)
      : std::runtime_error(what + ": " + std::to_string(estimate) + " nodes needed, budget " +
                           std::to_string(budget)),
        estimate_(estimate),
        budget_(budget) {}
  std::uint64_t estimate() const { return estimate_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t estimate_;
  std::uint64_t budget_;
};

/// Upper bound on the nodes visited when enumerating walks of up to nmax
/// steps: |S|(|S|-1)^{t-1} per depth with self-avoidance, |S|^t without.
/// Saturates at UINT64_MAX.
std::uint64_t projected_walk_count(int nmax, const StepDistribution& D, const Potential& U);

/// Exact connectivities C_0, ..., C_nmax from a single depth-first pass.
template <class S>
struct ConnectivitySeries {
  std::vector<LatticeField<S>> fields;
  std::uint64_t nodes = 0;

  int nmax() const { return static_cast<int>(fields.size()) - 1; }
  const LatticeField<S>& operator[](int n) const { return fields.at(static_cast<std::size_t>(n)); }

  /// c_n = sum_x C_n(x)
  S partition_value(int n) const { return (*this)[n].sum(); }
  /// sum_x |x|^p C_n(x), p in {2, 4}
  S moment(int n, int p) const {
    if (p != 2 && p != 4) throw std::invalid_argument("moment exponent must be 2 or 4");
    return (*this)[n].even_moment(p);
  }
  /// (1/c_n) sum_x |x|^2 C_n(x)
  double msd(int n) const {
    return ScalarOps<S>::to_double(moment(n, 2)) / ScalarOps<S>::to_double(partition_value(n));
  }
};

template <class S>
ConnectivitySeries<S> enumerate_connectivities(int nmax, const StepDistribution& D, const Potential& U,
                                               const EnumerationOptions& opts = {});

/// C_n(x) = sum over n-step walks 0 -> x of walk_weight.
template <class S>
LatticeField<S> connectivity(int n, const StepDistribution& D, const Potential& U,
                             const EnumerationOptions& opts = {}) {
  return enumerate_connectivities<S>(n, D, U, opts)[n];
}

template <class S>
struct InequalityReport {
  S lhs;
  S rhs;
  bool holds;
};

/// c_{m+n} <= c_m c_n.
template <class S>
InequalityReport<S> verify_subadditivity(const ConnectivitySeries<S>& series, int m, int n);

template <class S>
InequalityReport<S> verify_subadditivity(int m, int n, const StepDistribution& D, const Potential& U,
                                         const EnumerationOptions& opts = {}) {
  return verify_subadditivity(enumerate_connectivities<S>(m + n, D, U, opts), m, n);
}

template <class S>
struct KeyInequalityEntry {
  LatticePoint y;
  S lhs;
  S rhs;
  bool holds;
};

/// Both sides of the one-site removal inequality for a fixed prefix w of m
/// steps, index j < m, and n-step suffixes w' starting at x = w_m:
///   lhs(y) = sum_{w': x -> y} W(w') prod_{j <= s < m, 0 < t <= n} (1 - U(w_s - w'_t))
///   rhs(y) = the same with s starting at j + 1.
/// Reported per endpoint y and summed over y.
template <class S>
struct KeyInequalitySweep {
  std::vector<KeyInequalityEntry<S>> per_endpoint;
  S lhs_total;
  S rhs_total;
  bool summed_holds;
  bool all_endpoints_hold;
  std::size_t failing_endpoints;
};

/// Throws std::invalid_argument if the prefix has zero weight (the
/// inequality is vacuous) or j is out of range.
template <class S>
KeyInequalitySweep<S> key_inequality_sweep(const Walk& prefix, int j, int n, const StepDistribution& D,
                                           const Potential& U);

/// Single endpoint y of key_inequality_sweep; an unreachable y gives 0 <= 0.
template <class S>
KeyInequalityEntry<S> verify_key_inequality(const Walk& prefix, int j, int n, const LatticePoint& y,
                                            const StepDistribution& D, const Potential& U);

}  // namespace lacewalk
