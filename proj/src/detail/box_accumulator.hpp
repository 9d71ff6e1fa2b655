#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <vector>

#include "lacewalk/field.hpp"
#include "lacewalk/model.hpp"

namespace lacewalk::detail {

/// Per-point running sums for points in the box [-r, r]^d. Uses a dense
/// array when the box is small and an ordered map otherwise; either way
/// to_field() emits entries in lexicographic order.
template <class S>
class BoxAccumulator {
 public:
  static constexpr std::uint64_t kDenseLimit = 1ull << 22;

  BoxAccumulator(int dim, int radius) : dim_(dim), radius_(radius), side_(2 * radius + 1) {
    std::uint64_t cells = 1;
    for (int i = 0; i < dim; ++i) {
      cells *= static_cast<std::uint64_t>(side_);
      if (cells > kDenseLimit) break;
    }
    dense_ = cells <= kDenseLimit;
    if (dense_) cells_.resize(cells);
  }

  void add(const int* x, const S& v) {
    if (dense_) {
      cells_[index(x)] += v;
    } else {
      LatticePoint p(dim_);
      for (int i = 0; i < dim_; ++i) p[i] = x[i];
      sparse_[p] += v;
    }
  }

  void merge(const BoxAccumulator& o) {
    if (dense_) {
      for (std::size_t k = 0; k < cells_.size(); ++k) cells_[k] += o.cells_[k];
    } else {
      for (const auto& [p, s] : o.sparse_) sparse_[p] += s;
    }
  }

  LatticeField<S> to_field(int steps) const {
    LatticeField<S> f(dim_, steps);
    if (dense_) {
      LatticePoint p(dim_);
      for (std::size_t k = 0; k < cells_.size(); ++k) {
        const S v = cells_[k].value();
        if (ScalarOps<S>::is_zero(v)) continue;
        std::size_t rest = k;
        // index() puts axis 0 in the least significant digit.
        for (int i = 0; i < dim_; ++i) {
          p[i] = static_cast<int>(rest % static_cast<std::size_t>(side_)) - radius_;
          rest /= static_cast<std::size_t>(side_);
        }
        f.set(p, v);
      }
    } else {
      for (const auto& [p, s] : sparse_) f.set(p, s.value());
    }
    return f;
  }

 private:
  std::size_t index(const int* x) const {
    std::size_t k = 0;
    for (int i = dim_ - 1; i >= 0; --i) k = k * static_cast<std::size_t>(side_) + static_cast<std::size_t>(x[i] + radius_);
    return k;
  }

  int dim_;
  int radius_;
  int side_;
  bool dense_ = true;
  std::vector<CompensatedSum<S>> cells_;
  std::map<LatticePoint, CompensatedSum<S>> sparse_;
};

/// Largest |coordinate| over the step support.
inline int max_coordinate_step(const StepDistribution& D) {
  int r = 0;
  for (const auto& e : D.entries()) {
    for (int i = 0; i < D.dim(); ++i) r = std::max(r, std::abs(e.offset[i]));
  }
  return r;
}

}  // namespace lacewalk::detail
