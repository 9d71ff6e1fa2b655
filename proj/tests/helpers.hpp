#pragma once

#include <map>
#include <vector>

#include "lacewalk/field.hpp"
#include "lacewalk/model.hpp"
#include "oracle.hpp"

namespace testing_util {

inline std::vector<oracle::Step> steps_of(const lacewalk::StepDistribution& D) {
  std::vector<oracle::Step> out;
  for (std::size_t i = 0; i < D.size(); ++i) out.push_back({D.entries()[i].offset.coords(), D.exact_weight(i)});
  return out;
}

/// Exact field equality against an oracle map (zeros absent on both sides).
inline bool same_field(const lacewalk::LatticeField<lacewalk::Rational>& f, const std::map<oracle::Pt, oracle::Q>& g) {
  std::size_t nonzero = 0;
  for (const auto& [x, v] : g) {
    if (v == 0) continue;
    ++nonzero;
    if (f.at(lacewalk::LatticePoint(x)) != v) return false;
  }
  return f.entries().size() == nonzero;
}

inline double max_diff(const lacewalk::LatticeField<double>& f, const std::map<oracle::Pt, oracle::Q>& g) {
  double m = 0;
  for (const auto& [x, v] : g) m = std::max(m, std::abs(f.at(lacewalk::LatticePoint(x)) - v.get_d()));
  for (const auto& [x, v] : f.entries())
    if (!g.count(x.coords())) m = std::max(m, std::abs(v));
  return m;
}

/// D(±1) = 3/10, D(±2) = 1/5.
inline lacewalk::StepDistribution table_1d() {
  using lacewalk::LatticePoint;
  using lacewalk::Rational;
  return lacewalk::StepDistribution::from_table(1, {{LatticePoint{1}, Rational(3, 10)},
                                                    {LatticePoint{-1}, Rational(3, 10)},
                                                    {LatticePoint{2}, Rational(1, 5)},
                                                    {LatticePoint{-2}, Rational(1, 5)}});
}

/// Nearest neighbors 1/6 each, diagonals 1/12 each.
inline lacewalk::StepDistribution table_2d() {
  using lacewalk::LatticePoint;
  using lacewalk::Rational;
  std::vector<std::pair<LatticePoint, Rational>> t;
  for (int s : {-1, 1}) {
    t.push_back({LatticePoint{s, 0}, Rational(1, 6)});
    t.push_back({LatticePoint{0, s}, Rational(1, 6)});
    for (int r : {-1, 1}) t.push_back({LatticePoint{s, r}, Rational(1, 12)});
  }
  return lacewalk::StepDistribution::from_table(2, t);
}

}  // namespace testing_util
