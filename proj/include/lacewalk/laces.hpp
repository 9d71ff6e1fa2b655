#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace lacewalk {

/// Edge st of a graph on an integer interval, s < t.
struct Edge {
  int s;
  int t;
  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Graph on the vertex interval [a, b] (a < b) with edges a <= s < t <= b.
/// Edges are stored sorted and duplicate-free.
class IntervalGraph {
 public:
  IntervalGraph(int a, int b, std::vector<Edge> edges = {});

  /// Graph whose edges are the set bits of mask, indexed as in all_edges(a, b).
  static IntervalGraph from_mask(int a, int b, std::uint64_t mask);
  /// Every admissible edge on [a, b], in lexicographic order.
  static std::vector<Edge> all_edges(int a, int b);

  int a() const { return a_; }
  int b() const { return b_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool contains(const Edge& e) const;
  IntervalGraph with_edge(const Edge& e) const;
  IntervalGraph without_edge(const Edge& e) const;
  /// Subset test on edge sets (same interval required).
  bool is_subgraph_of(const IntervalGraph& other) const;
  std::string to_string() const;

  friend bool operator==(const IntervalGraph&, const IntervalGraph&) = default;

 private:
  int a_;
  int b_;
  std::vector<Edge> edges_;
};

/// Connected on [a, b]: a and b are endpoints of edges, and every integer c
/// with a < c < b is strictly straddled by some edge (s < c < t).
bool is_connected(const IntervalGraph& G);

/// Connected, and removing any single edge disconnects it.
bool is_minimally_connected(const IntervalGraph& G);

/// Minimally connected graph together with its interval lengths
/// m = (m_1, ..., m_{2N-1}): for edges s_1 t_1, ..., s_N t_N in increasing
/// order, m_1 = s_2 - s_1, m_{2i} = t_i - s_{i+1}, m_{2i+1} = s_{i+2} - t_i,
/// and m_{2N-1} = t_N - t_{N-1} (m_1 = b - a when N = 1).
class Lace {
 public:
  /// Throws std::invalid_argument if G is not minimally connected.
  static Lace from_graph(const IntervalGraph& G);
  /// Inverse of composition(); throws on lengths violating m_1, m_{2N-1},
  /// m_{2j} >= 1 and m_{2j+1} >= 0.
  static Lace from_composition(int a, const std::vector<int>& m);

  const IntervalGraph& graph() const { return graph_; }
  const std::vector<Edge>& edges() const { return graph_.edges(); }
  int edge_count() const { return static_cast<int>(graph_.size()); }
  const std::vector<int>& composition() const { return composition_; }
  int a() const { return graph_.a(); }
  int b() const { return graph_.b(); }

  friend bool operator==(const Lace& x, const Lace& y) { return x.graph_ == y.graph_; }

 private:
  Lace(IntervalGraph g, std::vector<int> m) : graph_(std::move(g)), composition_(std::move(m)) {}
  IntervalGraph graph_;
  std::vector<int> composition_;
};

/// The lace L(G) kept by the greedy rule: s_1 = a, t_1 = max{t : at in G};
/// t_{i+1} = max{t : exists s < t_i with st in G}, s_{i+1} = min{s : s t_{i+1} in G};
/// until t_i = b. Throws std::invalid_argument if G is not connected.
Lace lace_of(const IntervalGraph& G);

/// st ~ L: lace_of(L + st) == L. Throws std::invalid_argument if st is
/// already an edge of L or lies outside [a, b].
bool is_compatible(const Edge& e, const Lace& L);

/// Every lace on [a, b] with exactly N edges, ordered by composition.
std::vector<Lace> enumerate_laces(int a, int b, int N);

/// Interval-length vectors of all N-edge laces on an interval of length n.
std::vector<std::vector<int>> lace_compositions(int n, int N);

/// Lace compositions restricted to m_1 >= every other entry and
/// m_{2j} <= m_{2j+1} for 1 <= j <= N-1 (the sums of the kernel norm
/// bounds). Requires N >= 2.
std::vector<std::vector<int>> compositions(int n, int N);

}  // namespace lacewalk
