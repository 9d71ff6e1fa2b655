#include "lacewalk/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>

namespace lacewalk {

LatticePoint::LatticePoint(std::initializer_list<int> coords)
    : dim_(check_dim(static_cast<int>(coords.size()))) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

LatticePoint::LatticePoint(const std::vector<int>& coords)
    : dim_(check_dim(static_cast<int>(coords.size()))) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

LatticePoint LatticePoint::unit(int dim, int axis, int sign) {
  LatticePoint p(dim);
  if (axis < 0 || axis >= dim) throw std::out_of_range("unit vector axis out of range");
  p[axis] = sign;
  return p;
}

double LatticePoint::norm() const { return std::sqrt(static_cast<double>(norm2())); }

std::string LatticePoint::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

LatticePoint& LatticePoint::operator+=(const LatticePoint& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch in point addition");
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

LatticePoint& LatticePoint::operator-=(const LatticePoint& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch in point subtraction");
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint p(*this);
  for (int i = 0; i < dim_; ++i) p.c_[i] = -p.c_[i];
  return p;
}

LatticePoint LatticePoint::canonical() const {
  LatticePoint p(*this);
  for (int i = 0; i < dim_; ++i) p.c_[i] = std::abs(p.c_[i]);
  std::sort(p.c_.begin(), p.c_.begin() + dim_, std::greater<>());
  return p;
}

std::vector<LatticePoint> LatticePoint::orbit() const {
  std::array<int, kMaxDimension> perm{};
  for (int i = 0; i < dim_; ++i) perm[i] = i;
  std::set<LatticePoint> images;
  do {
    for (unsigned mask = 0; mask < (1u << dim_); ++mask) {
      LatticePoint q(dim_);
      for (int i = 0; i < dim_; ++i) {
        const int v = c_[perm[i]];
        q.c_[i] = (mask >> i) & 1u ? -v : v;
      }
      images.insert(q);
    }
  } while (std::next_permutation(perm.begin(), perm.begin() + dim_));
  return {images.begin(), images.end()};
}

}  // namespace lacewalk
