#pragma once

// Brute-force reference computations used by the tests. Deliberately naive:
// plain vectors, full walk enumeration, and graph sums straight from the
// definitions, so they share no code paths with the library.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Q = mpq_class;
using Pt = std::vector<int>;

struct Step {
  Pt x;
  Q w;
};

inline long sq(const Pt& a, const Pt& b) {
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long>(a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

/// U with hard core and nearest-neighbor attraction kappa.
inline Q U(long r2, const Q& kappa) {
  if (r2 == 0) return 1;
  if (r2 == 1) return -kappa;
  return 0;
}

/// Calls f(walk, D(w)) for every n-step walk from the origin.
inline void walks(int n, const std::vector<Step>& D,
                  const std::function<void(const std::vector<Pt>&, const Q&)>& f) {
  const std::size_t d = D.front().x.size();
  std::vector<Pt> w(1, Pt(d, 0));
  std::function<void(const Q&)> rec = [&](const Q& dw) {
    if (static_cast<int>(w.size()) == n + 1) {
      f(w, dw);
      return;
    }
    for (const auto& s : D) {
      Pt next = w.back();
      for (std::size_t i = 0; i < d; ++i) next[i] += s.x[i];
      w.push_back(next);
      rec(dw * s.w);
      w.pop_back();
    }
  };
  rec(Q(1));
}

inline Q interaction(const std::vector<Pt>& w, const Q& kappa) {
  Q p = 1;
  for (std::size_t s = 0; s < w.size(); ++s)
    for (std::size_t t = s + 1; t < w.size(); ++t) p *= 1 - U(sq(w[s], w[t]), kappa);
  return p;
}

inline std::map<Pt, Q> connectivity(int n, const std::vector<Step>& D, const Q& kappa) {
  std::map<Pt, Q> c;
  walks(n, D, [&](const std::vector<Pt>& w, const Q& dw) {
    Q v = dw * interaction(w, kappa);
    if (v != 0) c[w.back()] += v;
  });
  return c;
}

inline Q total(const std::map<Pt, Q>& f) {
  Q s = 0;
  for (const auto& [x, v] : f) s += v;
  return s;
}

/// Edges (s, t) on [0, n] in lexicographic order.
inline std::vector<std::pair<int, int>> edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int s = 0; s <= n; ++s)
    for (int t = s + 1; t <= n; ++t) e.emplace_back(s, t);
  return e;
}

/// Straight from the definition: endpoints used, every interior integer
/// strictly inside some edge.
inline bool connected(int n, const std::vector<std::pair<int, int>>& g) {
  bool a = false, b = false;
  for (auto [s, t] : g) {
    a |= s == 0;
    b |= t == n;
  }
  if (!a || !b) return false;
  for (int c = 1; c < n; ++c) {
    bool hit = false;
    for (auto [s, t] : g) hit |= s < c && c < t;
    if (!hit) return false;
  }
  return true;
}

/// Pi_n(x) = sum_w D(w) sum_{G connected on [0,n]} prod_{st in G} (-U(w_s - w_t)).
inline std::map<Pt, Q> pi(int n, const std::vector<Step>& D, const Q& kappa) {
  const auto E = edges(n);
  std::vector<std::vector<std::pair<int, int>>> graphs;
  for (std::uint64_t mask = 1; mask < (1ull << E.size()); ++mask) {
    std::vector<std::pair<int, int>> g;
    for (std::size_t k = 0; k < E.size(); ++k)
      if ((mask >> k) & 1u) g.push_back(E[k]);
    if (connected(n, g)) graphs.push_back(std::move(g));
  }
  std::map<Pt, Q> out;
  walks(n, D, [&](const std::vector<Pt>& w, const Q& dw) {
    Q sum = 0;
    for (const auto& g : graphs) {
      Q p = 1;
      for (auto [s, t] : g) p *= -U(sq(w[s], w[t]), kappa);
      sum += p;
    }
    if (sum != 0) out[w.back()] += dw * sum;
  });
  return out;
}

/// Pi_n^{(1)}: the single edge 0n carries -U, every other pair 1 - U.
inline std::map<Pt, Q> pi1(int n, const std::vector<Step>& D, const Q& kappa) {
  std::map<Pt, Q> out;
  walks(n, D, [&](const std::vector<Pt>& w, const Q& dw) {
    Q p = -U(sq(w.front(), w.back()), kappa);
    for (std::size_t s = 0; s < w.size(); ++s)
      for (std::size_t t = s + 1; t < w.size(); ++t)
        if (!(s == 0 && t + 1 == w.size())) p *= 1 - U(sq(w[s], w[t]), kappa);
    if (p != 0) out[w.back()] += dw * p;
  });
  return out;
}

inline std::vector<Step> nearest_neighbor(int d) {
  std::vector<Step> D;
  for (int i = 0; i < d; ++i)
    for (int sign : {-1, 1}) {
      Pt x(static_cast<std::size_t>(d), 0);
      x[static_cast<std::size_t>(i)] = sign;
      D.push_back({x, Q(1, 2 * d)});
    }
  return D;
}

}  // namespace oracle
