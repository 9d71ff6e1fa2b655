#include "lacewalk/laces.hpp"

#include <algorithm>
#include <stdexcept>

namespace lacewalk {

IntervalGraph::IntervalGraph(int a, int b, std::vector<Edge> edges) : a_(a), b_(b), edges_(std::move(edges)) {
  if (!(a < b)) throw std::invalid_argument("interval graph needs a < b");
  for (const auto& e : edges_) {
    if (!(a <= e.s && e.s < e.t && e.t <= b)) {
      throw std::invalid_argument("edge (" + std::to_string(e.s) + "," + std::to_string(e.t) + ") is not within [" +
                                  std::to_string(a) + "," + std::to_string(b) + "]");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("interval graph has a repeated edge");
  }
}

std::vector<Edge> IntervalGraph::all_edges(int a, int b) {
  std::vector<Edge> out;
  for (int s = a; s <= b; ++s) {
    for (int t = s + 1; t <= b; ++t) out.push_back({s, t});
  }
  return out;
}

IntervalGraph IntervalGraph::from_mask(int a, int b, std::uint64_t mask) {
  const auto all = all_edges(a, b);
  if (all.size() < 64 && (mask >> all.size()) != 0) throw std::invalid_argument("edge mask has bits beyond the interval");
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < all.size() && k < 64; ++k) {
    if ((mask >> k) & 1u) edges.push_back(all[k]);
  }
  return IntervalGraph(a, b, std::move(edges));
}

bool IntervalGraph::contains(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

IntervalGraph IntervalGraph::with_edge(const Edge& e) const {
  if (contains(e)) return *this;
  auto edges = edges_;
  edges.push_back(e);
  return IntervalGraph(a_, b_, std::move(edges));
}

IntervalGraph IntervalGraph::without_edge(const Edge& e) const {
  auto edges = edges_;
  edges.erase(std::remove(edges.begin(), edges.end(), e), edges.end());
  return IntervalGraph(a_, b_, std::move(edges));
}

bool IntervalGraph::is_subgraph_of(const IntervalGraph& other) const {
  if (a_ != other.a_ || b_ != other.b_) return false;
  return std::includes(other.edges_.begin(), other.edges_.end(), edges_.begin(), edges_.end());
}

std::string IntervalGraph::to_string() const {
  std::string s = "[" + std::to_string(a_) + "," + std::to_string(b_) + "]{";
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (i) s += ",";
    s += "(" + std::to_string(edges_[i].s) + "," + std::to_string(edges_[i].t) + ")";
  }
  return s + "}";
}

bool is_connected(const IntervalGraph& G) {
  const auto& E = G.edges();
  if (E.empty()) return false;
  bool touches_a = false;
  bool touches_b = false;
  for (const auto& e : E) {
    touches_a |= e.s == G.a();
    touches_b |= e.t == G.b();
  }
  if (!touches_a || !touches_b) return false;
  for (int c = G.a() + 1; c < G.b(); ++c) {
    const bool straddled = std::any_of(E.begin(), E.end(), [c](const Edge& e) { return e.s < c && c < e.t; });
    if (!straddled) return false;
  }
  return true;
}

bool is_minimally_connected(const IntervalGraph& G) {
  if (!is_connected(G)) return false;
  for (const auto& e : G.edges()) {
    if (is_connected(G.without_edge(e))) return false;
  }
  return true;
}

Lace Lace::from_graph(const IntervalGraph& G) {
  if (!is_minimally_connected(G)) throw std::invalid_argument("graph " + G.to_string() + " is not a lace");
  const auto& E = G.edges();
  const std::size_t N = E.size();
  std::vector<int> m;
  if (N == 1) {
    m.push_back(E[0].t - E[0].s);
  } else {
    // In a lace, sorting edges lexicographically orders both s and t.
    m.push_back(E[1].s - E[0].s);
    for (std::size_t i = 0; i + 1 < N; ++i) {
      m.push_back(E[i].t - E[i + 1].s);
      if (i + 2 < N) m.push_back(E[i + 2].s - E[i].t);
    }
    m.push_back(E[N - 1].t - E[N - 2].t);
  }
  return Lace(G, std::move(m));
}

Lace Lace::from_composition(int a, const std::vector<int>& m) {
  if (m.empty() || m.size() % 2 == 0) throw std::invalid_argument("lace composition must have odd length 2N-1");
  const std::size_t N = (m.size() + 1) / 2;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const bool may_be_zero = j % 2 == 0 && j != 0 && j + 1 != m.size();
    if (m[j] < (may_be_zero ? 0 : 1)) throw std::invalid_argument("lace composition violates its positivity pattern");
  }
  std::vector<Edge> edges;
  if (N == 1) {
    edges.push_back({a, a + m[0]});
  } else {
    std::vector<int> s(N), t(N);
    s[0] = a;
    s[1] = a + m[0];
    t[0] = s[1] + m[1];
    for (std::size_t i = 1; i + 1 < N; ++i) {
      s[i + 1] = t[i - 1] + m[2 * i];
      t[i] = s[i + 1] + m[2 * i + 1];
    }
    t[N - 1] = t[N - 2] + m[2 * N - 2];
    for (std::size_t i = 0; i < N; ++i) edges.push_back({s[i], t[i]});
  }
  int b = a;
  for (int v : m) b += v;
  return Lace(IntervalGraph(a, b, std::move(edges)), m);
}

Lace lace_of(const IntervalGraph& G) {
  if (!is_connected(G)) throw std::invalid_argument("lace_of needs a connected graph, got " + G.to_string());
  const auto& E = G.edges();
  std::vector<Edge> kept;
  int s = G.a();
  int t = G.a();
  for (const auto& e : E) {
    if (e.s == s) t = std::max(t, e.t);
  }
  kept.push_back({s, t});
  while (t != G.b()) {
    int next_t = t;
    for (const auto& e : E) {
      if (e.s < t) next_t = std::max(next_t, e.t);
    }
    int next_s = next_t;
    for (const auto& e : E) {
      if (e.t == next_t) next_s = std::min(next_s, e.s);
    }
    s = next_s;
    t = next_t;
    kept.push_back({s, t});
  }
  return Lace::from_graph(IntervalGraph(G.a(), G.b(), std::move(kept)));
}

bool is_compatible(const Edge& e, const Lace& L) {
  if (L.graph().contains(e)) throw std::invalid_argument("compatibility is defined for edges not in the lace");
  return lace_of(L.graph().with_edge(e)) == L;
}

std::vector<std::vector<int>> lace_compositions(int n, int N) {
  if (N < 1 || n < 1) return {};
  const std::size_t parts = static_cast<std::size_t>(2 * N - 1);
  std::vector<std::vector<int>> out;
  std::vector<int> m(parts, 0);
  auto min_at = [&](std::size_t j) { return (j % 2 == 0 && j != 0 && j + 1 != parts) ? 0 : 1; };
  auto rec = [&](auto&& self, std::size_t j, int remaining) -> void {
    if (j + 1 == parts) {
      if (remaining >= min_at(j)) {
        m[j] = remaining;
        out.push_back(m);
      }
      return;
    }
    int reserve = 0;
    for (std::size_t k = j + 1; k < parts; ++k) reserve += min_at(k);
    for (int v = min_at(j); v <= remaining - reserve; ++v) {
      m[j] = v;
      self(self, j + 1, remaining - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

std::vector<std::vector<int>> compositions(int n, int N) {
  if (N < 2) throw std::invalid_argument("constrained compositions are defined for N >= 2");
  std::vector<std::vector<int>> out;
  for (auto& m : lace_compositions(n, N)) {
    if (*std::max_element(m.begin(), m.end()) != m[0]) continue;
    bool ok = true;
    for (int j = 1; j <= N - 1 && ok; ++j) ok = m[static_cast<std::size_t>(2 * j - 1)] <= m[static_cast<std::size_t>(2 * j)];
    if (ok) out.push_back(std::move(m));
  }
  return out;
}

std::vector<Lace> enumerate_laces(int a, int b, int N) {
  if (!(b - a >= 1) || N < 1) throw std::invalid_argument("enumerate_laces needs b - a >= 1 and N >= 1");
  std::vector<Lace> out;
  for (const auto& m : lace_compositions(b - a, N)) out.push_back(Lace::from_composition(a, m));
  return out;
}

}  // namespace lacewalk
