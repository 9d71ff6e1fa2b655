#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lacewalk/field.hpp"
#include "lacewalk/lattice.hpp"
#include "lacewalk/scalar.hpp"

namespace lacewalk {

/// Radial profile h(xi) used to build spread-out step distributions
/// D(x) ∝ h(|x|/L).
class Profile {
 public:
  enum class Kind { Exponential, Gaussian, Tabulated };

  static Profile exponential() { return Profile(Kind::Exponential); }
  static Profile gaussian() { return Profile(Kind::Gaussian); }
  /// Piecewise-linear h through (xi_k, h_k), zero past the last knot. No
  /// integrability or smoothness checks are made on user profiles.
  static Profile tabulated(std::vector<double> xi, std::vector<double> h);
  /// "exponential" or "gaussian"; throws std::invalid_argument otherwise.
  static Profile from_name(const std::string& name);

  Kind kind() const { return kind_; }
  std::string name() const;
  double operator()(double xi) const;

 private:
  explicit Profile(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<double> xi_;
  std::vector<double> h_;
};

struct StepEntry {
  LatticePoint offset;
  double weight;
};

/// Finite-support symmetric jump distribution D on Z^d with D(0) = 0 and
/// total mass 1. Entries are sorted by offset. When exact weights are
/// present every weight is also known as a rational and the rational
/// weights sum to exactly 1.
class StepDistribution {
 public:
  /// User table of exact weights; normalized exactly. Throws on entries at
  /// the origin, nonpositive weights, duplicates, or a table that is not
  /// invariant under signed coordinate permutations.
  static StepDistribution from_table(int dim, const std::vector<std::pair<LatticePoint, Rational>>& table);
  static StepDistribution from_table(int dim, const std::vector<std::pair<LatticePoint, double>>& table);
  /// D(±e_i) = 1/(2d), exact.
  static StepDistribution uniform_nearest_neighbor(int dim);

  int dim() const { return dim_; }
  std::span<const StepEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool has_exact_weights() const { return !exact_.empty(); }
  const Rational& exact_weight(std::size_t i) const;

  template <class S>
  S weight_as(std::size_t i) const {
    if constexpr (ScalarOps<S>::exact) {
      return exact_weight(i);
    } else {
      return entries_[i].weight;
    }
  }

  /// Index of offset x in entries(), if present.
  std::optional<std::size_t> find(const LatticePoint& x) const;
  double weight(const LatticePoint& x) const;
  template <class S>
  S weight_at(const LatticePoint& x) const {
    auto i = find(x);
    return i ? weight_as<S>(*i) : S(0);
  }

  /// D(1) = D(e_1).
  template <class S>
  S nearest_neighbor_weight() const {
    return weight_at<S>(LatticePoint::unit(dim_, 0));
  }

  /// delta_0 = sum_x |x|^2 D(x).
  template <class S>
  S second_moment() const {
    CompensatedSum<S> acc;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      acc += S(static_cast<long>(entries_[i].offset.norm2())) * weight_as<S>(i);
    }
    return acc.value();
  }

  template <class S>
  LatticeField<S> as_field() const {
    LatticeField<S> f(dim_, 1);
    for (std::size_t i = 0; i < entries_.size(); ++i) f.set(entries_[i].offset, weight_as<S>(i));
    return f;
  }

  /// Largest |x| over the support.
  double max_step_length() const;

  std::string family() const { return family_; }
  std::optional<double> scale() const { return scale_; }
  /// Support radius in lattice units (cutoff * L for built families).
  double cutoff_radius() const { return cutoff_radius_; }
  /// Estimated fraction of the untruncated mass discarded by the cutoff.
  double truncated_mass() const { return truncated_mass_; }
  /// inf over x with D(x) > 0 and y != 0, |x - y| = 1, of D(y)/D(x).
  double delta_empirical() const { return delta_empirical_; }
  /// Ratio bound of the untruncated family, when one is known.
  std::optional<double> delta_analytic() const { return delta_analytic_; }
  /// As delta_empirical but with both x and y in the support; empty when no
  /// such pair exists.
  std::optional<double> support_interior_delta() const { return interior_delta_; }
  /// The smoothness constant used for hypothesis checks: delta_analytic if
  /// known, otherwise delta_empirical.
  double theorem_delta() const { return delta_analytic_.value_or(delta_empirical_); }

  /// Copy whose weights are replaced by exact rationals: each double weight
  /// is converted exactly and the table renormalized in rational arithmetic.
  StepDistribution rationalized() const;

  /// Sum of weights, in the requested arithmetic.
  template <class S>
  S total_mass() const {
    CompensatedSum<S> acc;
    for (std::size_t i = 0; i < entries_.size(); ++i) acc += weight_as<S>(i);
    return acc.value();
  }

 private:
  friend StepDistribution build_step_distribution(const Profile&, double, int, double);

  StepDistribution(int dim, std::vector<StepEntry> entries, std::vector<Rational> exact,
                   std::string family);
  void compute_deltas();

  int dim_;
  std::vector<StepEntry> entries_;
  std::vector<Rational> exact_;
  std::unordered_map<LatticePoint, std::size_t, LatticePointHash> index_;
  std::string family_;
  std::optional<double> scale_;
  double cutoff_radius_ = 0.0;
  double truncated_mass_ = 0.0;
  double delta_empirical_ = 0.0;
  std::optional<double> delta_analytic_;
  std::optional<double> interior_delta_;
};

/// D(x) = h(|x|/L) / sum_y h(|y|/L) over 0 < |x| <= cutoff * L.
/// Requires L > 0 and cutoff >= 1; throws std::invalid_argument otherwise or
/// when the support is empty.
StepDistribution build_step_distribution(const Profile& profile, double L, int dim, double cutoff);

/// Nearest-neighbor attraction of strength kappa with hard-core self
/// avoidance: U(0) = 1, U(x) = -kappa for |x| = 1, 0 otherwise. The disabled
/// potential is U ≡ 0 (simple random walk).
class Potential {
 public:
  explicit Potential(Rational kappa);
  static Potential from_double(double kappa) { return Potential(exact_rational(kappa)); }
  static Potential disabled();

  bool interacting() const { return interacting_; }
  const Rational& kappa() const { return kappa_; }
  double kappa_value() const { return kappa_d_; }

  template <class S>
  S kappa_as() const {
    if constexpr (ScalarOps<S>::exact) {
      return kappa_;
    } else {
      return kappa_d_;
    }
  }

  /// U at a displacement of squared length r2.
  template <class S>
  S value(std::int64_t r2) const {
    if (!interacting_) return S(0);
    if (r2 == 0) return S(1);
    if (r2 == 1) return S(-kappa_as<S>());
    return S(0);
  }

  /// 1 - U at a displacement of squared length r2.
  template <class S>
  S pair_factor(std::int64_t r2) const {
    if (!interacting_) return S(1);
    if (r2 == 0) return S(0);
    if (r2 == 1) return S(1) + kappa_as<S>();
    return S(1);
  }

  double operator()(const LatticePoint& x) const { return value<double>(x.norm2()); }

 private:
  Potential() = default;
  Rational kappa_ = 0;
  double kappa_d_ = 0.0;
  bool interacting_ = true;
};

/// U(x) for the attractive self-avoiding potential of strength kappa.
double potential(const LatticePoint& x, double kappa);

/// Finite lattice path w_0, ..., w_n.
class Walk {
 public:
  explicit Walk(std::vector<LatticePoint> sites);

  std::size_t steps() const { return sites_.size() - 1; }
  const std::vector<LatticePoint>& sites() const { return sites_; }
  const LatticePoint& operator[](std::size_t t) const { return sites_[t]; }
  const LatticePoint& front() const { return sites_.front(); }
  const LatticePoint& back() const { return sites_.back(); }
  bool starts_at_origin() const { return sites_.front().is_origin(); }
  int dim() const { return sites_.front().dim(); }
  bool is_self_avoiding() const;
  Walk reversed() const;

 private:
  std::vector<LatticePoint> sites_;
};

/// prod_t D(w_t - w_{t-1}) * prod_{s<t} (1 - U(w_s - w_t)).
template <class S>
S walk_weight(const Walk& w, const StepDistribution& D, const Potential& U) {
  if (w.steps() < 1) throw std::invalid_argument("walk_weight needs at least one step");
  S weight(1);
  for (std::size_t t = 1; t <= w.steps(); ++t) {
    weight *= D.weight_at<S>(w[t] - w[t - 1]);
    if (ScalarOps<S>::is_zero(weight)) return weight;
  }
  for (std::size_t s = 0; s <= w.steps(); ++s) {
    for (std::size_t t = s + 1; t <= w.steps(); ++t) {
      weight *= U.pair_factor<S>((w[s] - w[t]).norm2());
      if (ScalarOps<S>::is_zero(weight)) return weight;
    }
  }
  return weight;
}

/// (1+kappa)^{2d} <= 1 + delta^2 / (2d (1+kappa)^{2d-1}). Throws
/// std::domain_error when delta is not in (0, 1] or kappa < 0.
bool theorem1_condition(double kappa, double delta, int dim);

/// Whether the small-attraction hypothesis can be asserted for (U, D): true
/// for U ≡ 0 or kappa = 0, otherwise theorem1_condition with
/// D.theorem_delta(), false when that delta is not positive.
bool small_attraction_hypothesis(const Potential& U, const StepDistribution& D);

}  // namespace lacewalk
