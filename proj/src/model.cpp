#include "lacewalk/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace lacewalk {

// ---------------------------------------------------------------- Profile

Profile Profile::tabulated(std::vector<double> xi, std::vector<double> h) {
  if (xi.size() != h.size() || xi.empty()) {
    throw std::invalid_argument("tabulated profile needs matching, nonempty knot lists");
  }
  for (std::size_t k = 1; k < xi.size(); ++k) {
    if (!(xi[k] > xi[k - 1])) throw std::invalid_argument("tabulated profile knots must increase");
  }
  for (double v : h) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("tabulated profile values must be finite and >= 0");
  }
  Profile p(Kind::Tabulated);
  p.xi_ = std::move(xi);
  p.h_ = std::move(h);
  return p;
}

Profile Profile::from_name(const std::string& name) {
  if (name == "exponential") return exponential();
  if (name == "gaussian") return gaussian();
  throw std::invalid_argument("unknown profile family '" + name + "'");
}

std::string Profile::name() const {
  switch (kind_) {
    case Kind::Exponential: return "exponential";
    case Kind::Gaussian: return "gaussian";
    case Kind::Tabulated: return "tabulated";
  }
  return "?";
}

double Profile::operator()(double xi) const {
  xi = std::fabs(xi);
  switch (kind_) {
    case Kind::Exponential: return std::exp(-xi);
    case Kind::Gaussian: return std::exp(-xi * xi);
    case Kind::Tabulated: {
      if (xi <= xi_.front()) return h_.front();
      if (xi > xi_.back()) return 0.0;
      auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
      const auto k = static_cast<std::size_t>(it - xi_.begin());
      if (k >= xi_.size()) return h_.back();
      const double f = (xi - xi_[k - 1]) / (xi_[k] - xi_[k - 1]);
      return h_[k - 1] + f * (h_[k] - h_[k - 1]);
    }
  }
  return 0.0;
}

// ------------------------------------------------------- StepDistribution

StepDistribution::StepDistribution(int dim, std::vector<StepEntry> entries, std::vector<Rational> exact,
                                   std::string family)
    : dim_(dim), entries_(std::move(entries)), exact_(std::move(exact)), family_(std::move(family)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].offset, i);
  double r = 0.0;
  for (const auto& e : entries_) r = std::max(r, e.offset.norm());
  cutoff_radius_ = r;
  compute_deltas();
}

void StepDistribution::compute_deltas() {
  double empirical = std::numeric_limits<double>::infinity();
  double interior = std::numeric_limits<double>::infinity();
  bool any_interior = false;
  for (const auto& e : entries_) {
    for (int axis = 0; axis < dim_; ++axis) {
      for (int sign : {-1, 1}) {
        const LatticePoint y = e.offset + LatticePoint::unit(dim_, axis, sign);
        if (y.is_origin()) continue;
        const double dy = weight(y);
        empirical = std::min(empirical, dy / e.weight);
        if (dy > 0.0) {
          interior = std::min(interior, dy / e.weight);
          any_interior = true;
        }
      }
    }
  }
  delta_empirical_ = std::isfinite(empirical) ? empirical : 0.0;
  if (any_interior) interior_delta_ = interior;
}

const Rational& StepDistribution::exact_weight(std::size_t i) const {
  if (exact_.empty()) {
    throw std::logic_error("step distribution has no exact weights; use rationalized() for rational mode");
  }
  return exact_.at(i);
}

std::optional<std::size_t> StepDistribution::find(const LatticePoint& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double StepDistribution::weight(const LatticePoint& x) const {
  auto i = find(x);
  return i ? entries_[*i].weight : 0.0;
}

double StepDistribution::max_step_length() const { return cutoff_radius_; }

namespace {

void check_table_symmetry(int dim, const std::map<LatticePoint, std::size_t>& pos,
                          const std::vector<LatticePoint>& points, const auto& equal) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (const auto& image : points[i].orbit()) {
      auto it = pos.find(image);
      if (it == pos.end() || !equal(i, it->second)) {
        throw std::invalid_argument("step table is not invariant under coordinate permutations and sign flips: " +
                                    points[i].to_string() + " vs " + image.to_string());
      }
    }
  }
  (void)dim;
}

template <class W>
std::map<LatticePoint, std::size_t> validate_table(int dim, const std::vector<std::pair<LatticePoint, W>>& table) {
  if (table.empty()) throw std::invalid_argument("step table is empty");
  std::map<LatticePoint, std::size_t> pos;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& [x, w] = table[i];
    if (x.dim() != dim) throw std::invalid_argument("step table entry " + x.to_string() + " has wrong dimension");
    if (x.is_origin()) throw std::invalid_argument("step table must not contain the origin (D(0) = 0)");
    if (!(w > 0)) throw std::invalid_argument("step table weights must be positive at " + x.to_string());
    if (!pos.emplace(x, i).second) throw std::invalid_argument("duplicate step table entry " + x.to_string());
  }
  return pos;
}

}  // namespace

StepDistribution StepDistribution::from_table(int dim, const std::vector<std::pair<LatticePoint, Rational>>& table) {
  auto pos = validate_table(dim, table);
  std::vector<LatticePoint> points;
  for (const auto& [x, w] : table) points.push_back(x);
  check_table_symmetry(dim, pos, points, [&](std::size_t a, std::size_t b) { return table[a].second == table[b].second; });

  Rational total = 0;
  for (const auto& [x, w] : table) total += w;
  std::vector<StepEntry> entries;
  std::vector<Rational> exact;
  for (const auto& [x, i] : pos) {
    Rational q = table[i].second / total;
    entries.push_back({x, to_double(q)});
    exact.push_back(q);
  }
  return StepDistribution(dim, std::move(entries), std::move(exact), "table");
}

StepDistribution StepDistribution::from_table(int dim, const std::vector<std::pair<LatticePoint, double>>& table) {
  auto pos = validate_table(dim, table);
  std::vector<LatticePoint> points;
  for (const auto& [x, w] : table) points.push_back(x);
  check_table_symmetry(dim, pos, points, [&](std::size_t a, std::size_t b) { return table[a].second == table[b].second; });

  CompensatedSum<double> total;
  for (const auto& [x, i] : pos) total += table[i].second;
  std::vector<StepEntry> entries;
  for (const auto& [x, i] : pos) entries.push_back({x, table[i].second / total.value()});
  return StepDistribution(dim, std::move(entries), {}, "table");
}

StepDistribution StepDistribution::uniform_nearest_neighbor(int dim) {
  std::vector<std::pair<LatticePoint, Rational>> table;
  for (int i = 0; i < dim; ++i) {
    table.emplace_back(LatticePoint::unit(dim, i, 1), Rational(1));
    table.emplace_back(LatticePoint::unit(dim, i, -1), Rational(1));
  }
  return from_table(dim, table);
}

StepDistribution StepDistribution::rationalized() const {
  std::vector<Rational> exact;
  Rational total = 0;
  for (const auto& e : entries_) {
    exact.push_back(exact_rational(e.weight));
    total += exact.back();
  }
  std::vector<StepEntry> entries = entries_;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    exact[i] /= total;
    entries[i].weight = to_double(exact[i]);
  }
  StepDistribution out(dim_, std::move(entries), std::move(exact), family_);
  out.scale_ = scale_;
  out.cutoff_radius_ = cutoff_radius_;
  out.truncated_mass_ = truncated_mass_;
  out.delta_analytic_ = delta_analytic_;
  return out;
}

StepDistribution build_step_distribution(const Profile& profile, double L, int dim, double cutoff) {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("profile scale L must be positive");
  if (!(cutoff >= 1.0) || !std::isfinite(cutoff)) throw std::invalid_argument("cutoff must be >= 1");
  (void)LatticePoint(dim);

  const double radius = cutoff * L;
  const auto radius2 = static_cast<std::int64_t>(std::floor(radius * radius + 1e-9));
  if (radius2 < 1) throw std::invalid_argument("cutoff * L < 1: support would be empty");

  // h depends on |x| only, so weights are computed once per squared norm and
  // orbit members share the identical double.
  std::map<std::int64_t, double> h_by_norm2;
  auto h_of = [&](std::int64_t r2) {
    auto [it, inserted] = h_by_norm2.try_emplace(r2, 0.0);
    if (inserted) it->second = profile(std::sqrt(static_cast<double>(r2)) / L);
    return it->second;
  };

  std::vector<StepEntry> entries;
  CompensatedSum<double> z;
  for_each_point_in_ball(dim, radius2, [&](const LatticePoint& x) {
    if (x.is_origin()) return;
    const double h = h_of(x.norm2());
    if (h <= 0.0) return;
    entries.push_back({x, h});
    z += h;
  });
  if (entries.empty()) throw std::invalid_argument("profile vanishes on the whole support");

  // Tail mass out to three times the cutoff, summed over the nonnegative
  // orthant with multiplicity 2^(#nonzero coordinates).
  const double outer = 3.0 * radius;
  const auto outer2 = static_cast<std::int64_t>(std::floor(outer * outer + 1e-9));
  int r_outer = 0;
  while (static_cast<std::int64_t>(r_outer + 1) * (r_outer + 1) <= outer2) ++r_outer;
  CompensatedSum<double> tail;
  {
    LatticePoint p(dim);
    while (true) {
      const auto r2 = p.norm2();
      if (r2 > radius2 && r2 <= outer2) {
        int nonzero = 0;
        for (int i = 0; i < dim; ++i) nonzero += p[i] != 0;
        tail += std::ldexp(h_of(r2), nonzero);
      }
      int i = dim - 1;
      while (i >= 0 && p[i] == r_outer) {
        p[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++p[i];
    }
  }

  for (auto& e : entries) e.weight /= z.value();
  StepDistribution D(dim, std::move(entries), {}, profile.name());
  D.scale_ = L;
  D.cutoff_radius_ = radius;
  D.truncated_mass_ = tail.value() / (z.value() + tail.value());
  if (profile.kind() == Profile::Kind::Exponential) D.delta_analytic_ = std::exp(-1.0 / L);
  return D;
}

// -------------------------------------------------------------- Potential

Potential::Potential(Rational kappa) : kappa_(std::move(kappa)), kappa_d_(to_double(kappa_)) {
  if (sgn(kappa_) < 0) throw std::invalid_argument("kappa must be >= 0");
}

Potential Potential::disabled() {
  Potential p;
  p.interacting_ = false;
  return p;
}

double potential(const LatticePoint& x, double kappa) {
  const auto r2 = x.norm2();
  if (r2 == 0) return 1.0;
  if (r2 == 1) return -kappa;
  return 0.0;
}

// ------------------------------------------------------------------- Walk

Walk::Walk(std::vector<LatticePoint> sites) : sites_(std::move(sites)) {
  if (sites_.empty()) throw std::invalid_argument("a walk needs at least one site");
  for (const auto& p : sites_) {
    if (p.dim() != sites_.front().dim()) throw std::invalid_argument("walk sites of mixed dimension");
  }
}

bool Walk::is_self_avoiding() const {
  std::set<LatticePoint> seen(sites_.begin(), sites_.end());
  return seen.size() == sites_.size();
}

Walk Walk::reversed() const { return Walk({sites_.rbegin(), sites_.rend()}); }

// ------------------------------------------------- small-attraction condition

bool theorem1_condition(double kappa, double delta, int dim) {
  if (!(kappa >= 0.0)) throw std::domain_error("theorem1_condition: kappa must be >= 0");
  if (!(delta > 0.0) || delta > 1.0) {
    throw std::domain_error("theorem1_condition: delta must lie in (0, 1], got " + format_double(delta));
  }
  if (dim < 1) throw std::domain_error("theorem1_condition: dimension must be >= 1");
  const double lhs = std::pow(1.0 + kappa, 2 * dim);
  const double rhs = 1.0 + delta * delta / (2.0 * dim * std::pow(1.0 + kappa, 2 * dim - 1));
  return lhs <= rhs;
}

bool small_attraction_hypothesis(const Potential& U, const StepDistribution& D) {
  if (!U.interacting() || sgn(U.kappa()) == 0) return true;
  const double delta = D.theorem_delta();
  if (!(delta > 0.0)) return false;
  return theorem1_condition(U.kappa_value(), std::min(delta, 1.0), D.dim());
}

}  // namespace lacewalk
