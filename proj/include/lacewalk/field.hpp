#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "lacewalk/lattice.hpp"
#include "lacewalk/scalar.hpp"

namespace lacewalk {

/// Sparse real-valued field on Z^d, e.g. C_n(.) or Pi_n(.). Entries are kept
/// in lexicographic point order so that every reduction and every dump
/// visits them in the same order.
template <class S>
class LatticeField {
 public:
  using Ops = ScalarOps<S>;

  LatticeField() = default;
  LatticeField(int dim, int steps) : dim_(dim), steps_(steps) {}

  static LatticeField delta(int dim) {
    LatticeField f(dim, 0);
    f.set(LatticePoint::origin(dim), S(1));
    return f;
  }

  int dim() const { return dim_; }
  /// Step-count label n.
  int steps() const { return steps_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<LatticePoint, S>& entries() const { return entries_; }

  S at(const LatticePoint& x) const {
    auto it = entries_.find(x);
    return it == entries_.end() ? S(0) : it->second;
  }

  void set(const LatticePoint& x, const S& v) {
    check(x);
    if (Ops::is_zero(v)) {
      entries_.erase(x);
    } else {
      entries_[x] = v;
    }
  }

  void add(const LatticePoint& x, const S& v) {
    check(x);
    if (Ops::is_zero(v)) return;
    auto [it, inserted] = entries_.try_emplace(x, v);
    if (!inserted) {
      it->second += v;
      if (Ops::is_zero(it->second)) entries_.erase(it);
    }
  }

  LatticeField& operator+=(const LatticeField& o) {
    for (const auto& [x, v] : o.entries_) add(x, v);
    return *this;
  }

  /// sum_x f(x)
  S sum() const {
    CompensatedSum<S> acc;
    for (const auto& [x, v] : entries_) acc += v;
    return acc.value();
  }

  /// sum_x |f(x)|
  S norm1() const {
    CompensatedSum<S> acc;
    for (const auto& [x, v] : entries_) acc += Ops::abs(v);
    return acc.value();
  }

  /// max_x |f(x)|
  S norm_inf() const {
    S m(0);
    for (const auto& [x, v] : entries_) {
      S a = Ops::abs(v);
      if (a > m) m = a;
    }
    return m;
  }

  /// sum_x |x|^p f(x) for even p, exact in rational mode.
  S even_moment(int p) const {
    if (p < 0 || p % 2 != 0) throw std::invalid_argument("even_moment needs an even exponent >= 0");
    CompensatedSum<S> acc;
    for (const auto& [x, v] : entries_) {
      S w(1);
      const S r2(static_cast<long>(x.norm2()));
      for (int k = 0; k < p / 2; ++k) w *= r2;
      acc += w * v;
    }
    return acc.value();
  }

  /// sum_x g(x) |f(x)| evaluated in double precision.
  double weighted_abs_sum(const std::function<double(const LatticePoint&)>& g) const {
    CompensatedSum<double> acc;
    for (const auto& [x, v] : entries_) acc += g(x) * std::fabs(Ops::to_double(v));
    return acc.value();
  }

  /// max_x g(x) |f(x)| evaluated in double precision.
  double weighted_abs_max(const std::function<double(const LatticePoint&)>& g) const {
    double m = 0.0;
    for (const auto& [x, v] : entries_) m = std::max(m, g(x) * std::fabs(Ops::to_double(v)));
    return m;
  }

  LatticeField<double> to_double() const {
    LatticeField<double> out(dim_, steps_);
    for (const auto& [x, v] : entries_) out.set(x, Ops::to_double(v));
    return out;
  }

  /// True iff f(sigma x) == f(x) for every signed permutation sigma.
  bool is_hyperoctahedral_symmetric() const {
    for (const auto& [x, v] : entries_) {
      for (const auto& y : x.orbit()) {
        if (!(at(y) == v)) return false;
      }
    }
    return true;
  }

 private:
  void check(const LatticePoint& x) const {
    if (x.dim() != dim_) throw std::invalid_argument("point dimension does not match field");
  }

  int dim_ = 1;
  int steps_ = 0;
  std::map<LatticePoint, S> entries_;
};

/// (a * b)(x) = sum_y a(y) b(x - y). Products are accumulated per target in
/// the fixed order of a's then b's entries.
template <class S>
LatticeField<S> convolve(const LatticeField<S>& a, const LatticeField<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("convolution of fields of different dimension");
  std::map<LatticePoint, CompensatedSum<S>> acc;
  for (const auto& [y, u] : a.entries()) {
    for (const auto& [z, v] : b.entries()) acc[y + z] += u * v;
  }
  LatticeField<S> out(a.dim(), a.steps() + b.steps());
  for (const auto& [x, s] : acc) out.set(x, s.value());
  return out;
}

/// max_x |a(x) - b(x)| over the union of supports.
template <class S>
S max_abs_difference(const LatticeField<S>& a, const LatticeField<S>& b) {
  S m(0);
  for (const auto& [x, v] : a.entries()) {
    S d = ScalarOps<S>::abs(v - b.at(x));
    if (d > m) m = d;
  }
  for (const auto& [x, v] : b.entries()) {
    S d = ScalarOps<S>::abs(a.at(x) - v);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace lacewalk
