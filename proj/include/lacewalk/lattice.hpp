#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace lacewalk {

inline constexpr int kMaxDimension = 8;

/// A point of Z^d, 1 <= d <= kMaxDimension. Unused trailing coordinates are
/// kept at zero so that comparison and hashing only need the raw array.
class LatticePoint {
 public:
  explicit LatticePoint(int dim) : dim_(check_dim(dim)) {}
  LatticePoint(std::initializer_list<int> coords);
  explicit LatticePoint(const std::vector<int>& coords);

  static LatticePoint origin(int dim) { return LatticePoint(dim); }
  static LatticePoint unit(int dim, int axis, int sign = 1);

  int dim() const { return dim_; }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  /// Squared Euclidean norm.
  std::int64_t norm2() const {
    std::int64_t s = 0;
    for (int i = 0; i < dim_; ++i) s += static_cast<std::int64_t>(c_[i]) * c_[i];
    return s;
  }
  double norm() const;
  bool is_origin() const { return norm2() == 0; }

  std::vector<int> coords() const { return {c_.begin(), c_.begin() + dim_}; }
  std::string to_string() const;

  LatticePoint& operator+=(const LatticePoint& o);
  LatticePoint& operator-=(const LatticePoint& o);
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }
  LatticePoint operator-() const;

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;

  /// Canonical representative of the hyperoctahedral orbit: absolute values
  /// sorted in decreasing order.
  LatticePoint canonical() const;

  /// All images under signed coordinate permutations (with repetitions
  /// removed).
  std::vector<LatticePoint> orbit() const;

 private:
  static int check_dim(int dim) {
    if (dim < 1 || dim > kMaxDimension) {
      throw std::invalid_argument("lattice dimension must be in [1, " +
                                  std::to_string(kMaxDimension) + "], got " +
                                  std::to_string(dim));
    }
    return dim;
  }

  int dim_;
  std::array<int, kMaxDimension> c_{};
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept {
    std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(p.dim());
    for (int i = 0; i < p.dim(); ++i) {
      h ^= static_cast<std::uint32_t>(p[i]);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Visits every point of Z^d with |x|^2 <= radius2, in lexicographic order.
template <class F>
void for_each_point_in_ball(int dim, std::int64_t radius2, F&& f) {
  int r = 0;
  while (static_cast<std::int64_t>(r + 1) * (r + 1) <= radius2) ++r;
  LatticePoint p(dim);
  for (int i = 0; i < dim; ++i) p[i] = -r;
  while (true) {
    if (p.norm2() <= radius2) f(static_cast<const LatticePoint&>(p));
    int i = dim - 1;
    while (i >= 0 && p[i] == r) {
      p[i] = -r;
      --i;
    }
    if (i < 0) break;
    ++p[i];
  }
}

}  // namespace lacewalk
