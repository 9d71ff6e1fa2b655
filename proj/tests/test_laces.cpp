#include <doctest.h>

#include <algorithm>
#include <set>

#include "lacewalk/laces.hpp"

using namespace lacewalk;

namespace {

std::vector<IntervalGraph> all_graphs(int n) {
  const auto E = IntervalGraph::all_edges(0, n);
  std::vector<IntervalGraph> out;
  for (std::uint64_t mask = 0; mask < (1ull << E.size()); ++mask) out.push_back(IntervalGraph::from_mask(0, n, mask));
  return out;
}

}  // namespace

TEST_CASE("connectivity of interval graphs") {
  CHECK(is_connected(IntervalGraph(0, 3, {{0, 3}})));
  CHECK(is_connected(IntervalGraph(0, 3, {{0, 2}, {1, 3}})));
  CHECK_FALSE(is_connected(IntervalGraph(0, 3, {{0, 1}, {2, 3}})));
  // sharing a vertex is not enough: 1 is not strictly inside either edge
  CHECK_FALSE(is_connected(IntervalGraph(0, 2, {{0, 1}, {1, 2}})));
  CHECK(is_connected(IntervalGraph(0, 1, {{0, 1}})));
  CHECK_FALSE(is_connected(IntervalGraph(0, 3)));
  CHECK_THROWS_AS(IntervalGraph(0, 3, {{1, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalGraph(0, 3, {{1, 2}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalGraph(2, 2), std::invalid_argument);
}

TEST_CASE("greedy lace map") {
  const IntervalGraph crossing(0, 3, {{0, 2}, {1, 3}});
  CHECK(lace_of(crossing).graph() == crossing);
  CHECK(lace_of(IntervalGraph(0, 3, {{0, 3}, {0, 2}, {1, 3}})).graph() == IntervalGraph(0, 3, {{0, 3}}));
  CHECK_THROWS_AS(lace_of(IntervalGraph(0, 3, {{0, 1}, {2, 3}})), std::invalid_argument);
  // s_{i+1} is the smallest start of an edge reaching t_{i+1}
  const IntervalGraph g(0, 5, {{0, 2}, {1, 4}, {0, 1}, {1, 3}, {3, 5}, {2, 5}});
  CHECK(lace_of(g).graph() == IntervalGraph(0, 5, {{0, 2}, {1, 4}, {2, 5}}));
}

TEST_CASE("compatibility") {
  const auto span = Lace::from_graph(IntervalGraph(0, 3, {{0, 3}}));
  CHECK(is_compatible({1, 2}, span));
  CHECK(is_compatible({0, 2}, span));
  const auto crossing = Lace::from_graph(IntervalGraph(0, 3, {{0, 2}, {1, 3}}));
  CHECK_FALSE(is_compatible({0, 3}, crossing));
  CHECK(is_compatible({1, 2}, crossing));
  CHECK_THROWS_AS(is_compatible({0, 2}, crossing), std::invalid_argument);
}

TEST_CASE("lace map properties on every graph up to length 4") {
  for (int n = 1; n <= 4; ++n) {
    for (const auto& G : all_graphs(n)) {
      if (!is_connected(G)) continue;
      const auto L = lace_of(G);
      CHECK(L.graph().is_subgraph_of(G));
      CHECK(is_minimally_connected(L.graph()));
      CHECK(lace_of(L.graph()) == L);
      for (const auto& e : G.edges()) {
        if (!L.graph().contains(e)) CHECK(is_compatible(e, L));
      }
    }
  }
}

TEST_CASE("enumerated laces are exactly the minimally connected graphs") {
  for (int n = 1; n <= 5; ++n) {
    std::set<std::vector<Edge>> brute;
    for (const auto& G : all_graphs(n))
      if (is_minimally_connected(G)) brute.insert(G.edges());
    std::set<std::vector<Edge>> listed;
    std::size_t total = 0;
    for (int N = 1; N <= n; ++N) {
      for (const auto& L : enumerate_laces(0, n, N)) {
        CHECK(L.edge_count() == N);
        CHECK(L.edges().front().s == 0);
        CHECK(L.edges().back().t == n);
        CHECK(Lace::from_composition(0, L.composition()) == L);
        CHECK(Lace::from_graph(L.graph()).composition() == L.composition());
        listed.insert(L.edges());
        ++total;
      }
    }
    CHECK(total == listed.size());
    CHECK(listed == brute);
  }
  REQUIRE(enumerate_laces(0, 6, 1).size() == 1);
  CHECK(enumerate_laces(0, 6, 1).front().graph() == IntervalGraph(0, 6, {{0, 6}}));
}

TEST_CASE("lace composition positivity") {
  const auto L = Lace::from_composition(0, {2, 1, 0, 1, 1});
  CHECK(L.graph() == IntervalGraph(0, 5, {{0, 3}, {2, 4}, {3, 5}}));
  CHECK(Lace::from_graph(L.graph()).composition() == std::vector<int>{2, 1, 0, 1, 1});
  CHECK_THROWS_AS(Lace::from_composition(0, {1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Lace::from_composition(0, {0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Lace::from_composition(0, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Lace::from_graph(IntervalGraph(0, 3, {{0, 3}, {1, 2}})), std::invalid_argument);
}

TEST_CASE("constrained compositions") {
  using V = std::vector<std::vector<int>>;
  CHECK(compositions(4, 2) == V{{2, 1, 1}});
  CHECK(compositions(3, 2) == V{{1, 1, 1}});
  CHECK(compositions(2, 2).empty());
  CHECK_THROWS_AS(compositions(4, 1), std::invalid_argument);
  // direct filter of all weak compositions
  for (int n = 2; n <= 8; ++n) {
    for (int N = 2; N <= 3; ++N) {
      const int parts = 2 * N - 1;
      V expect;
      std::vector<int> m(static_cast<std::size_t>(parts));
      auto rec = [&](auto&& self, int j, int left) -> void {
        if (j == parts - 1) {
          m.back() = left;
          bool ok = m[0] >= 1 && m.back() >= 1;
          for (int k = 1; k < parts - 1; k += 2) ok = ok && m[static_cast<std::size_t>(k)] >= 1;
          ok = ok && *std::max_element(m.begin(), m.end()) == m[0];
          for (int k = 1; k + 1 < parts; k += 2) ok = ok && m[static_cast<std::size_t>(k)] <= m[static_cast<std::size_t>(k) + 1];
          if (ok) expect.push_back(m);
          return;
        }
        for (int v = 0; v <= left; ++v) {
          m[static_cast<std::size_t>(j)] = v;
          self(self, j + 1, left - v);
        }
      };
      rec(rec, 0, n);
      CHECK(compositions(n, N) == expect);
    }
  }
}
