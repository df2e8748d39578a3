#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace fogran;

namespace {

using G = WeightedGraph<int>;

G random_graph(Semantics s, std::size_t n, double p, std::mt19937_64& rng) {
  G g(s);
  std::uniform_real_distribution<double> w(0.1, 5.0), coin(0.0, 1.0);
  for (std::size_t v = 0; v < n; ++v) g.add_vertex(0, w(rng));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (coin(rng) < p) g.add_edge(a, b);
  return g;
}

// Best total weight over all vertex subsets where every pair is (clique) or is not (IS) adjacent.
double brute_best(const GraphCore& g, bool clique) {
  double best = 0.0;
  for (std::uint32_t m = 1; m < (1U << g.size()); ++m) {
    bool ok = true;
    double w = 0.0;
    for (std::size_t a = 0; a < g.size() && ok; ++a) {
      if (!(m >> a & 1U)) continue;
      w += g.weight(a);
      for (std::size_t b = a + 1; b < g.size(); ++b)
        if ((m >> b & 1U) && g.adjacent(a, b) != clique) ok = false;
    }
    if (ok) best = std::max(best, w);
  }
  return best;
}

template <class G>
std::size_t find_vertex(const G& g, auto pred) {
  for (std::size_t v = 0; v < g.size(); ++v)
    if (pred(g.payload(v))) return v;
  return g.size();
}

}  // namespace

TEST(Graph, EdgesAreSymmetric) {
  G g(Semantics::conflict);
  for (int i = 0; i < 70; ++i) g.add_vertex(0, 1.0);
  g.add_edge(3, 68);
  EXPECT_TRUE(g.adjacent(68, 3));
  EXPECT_FALSE(g.adjacent(3, 4));
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.degree(3), 1u);
  EXPECT_THROW(g.add_vertex(0, -1.0), std::invalid_argument);
}

TEST(Graph, SemanticsAreChecked) {
  G conflict(Semantics::conflict), compat(Semantics::compatibility);
  EXPECT_THROW(greedy_max_weight_clique(conflict), std::invalid_argument);
  EXPECT_THROW(greedy_max_weight_independent_set(compat), std::invalid_argument);
}

TEST(Oracles, MatchBruteForce) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 14;
    const G c = random_graph(Semantics::compatibility, n, 0.5, rng);
    const VertexSet q = exhaustive_clique_oracle(c);
    EXPECT_TRUE(is_clique(c, q));
    EXPECT_NEAR(total_weight(c, q), brute_best(c, true), 1e-9);
    const G d = random_graph(Semantics::conflict, n, 0.4, rng);
    const VertexSet s = exhaustive_is_oracle(d);
    EXPECT_TRUE(is_independent_set(d, s));
    EXPECT_NEAR(total_weight(d, s), brute_best(d, false), 1e-9);
  }
}

TEST(Oracles, RefuseLargeGraphs) {
  std::mt19937_64 rng(1);
  const G g = random_graph(Semantics::conflict, kOracleVertexCap + 1, 0.3, rng);
  EXPECT_THROW(exhaustive_is_oracle(g), std::length_error);
}

TEST(Greedy, ResultsAreMaximalAndBelowOptimum) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 16;
    const G c = random_graph(Semantics::compatibility, n, 0.6, rng);
    const VertexSet q = greedy_max_weight_clique(c);
    EXPECT_TRUE(is_maximal_clique(c, q));
    EXPECT_LE(total_weight(c, q), brute_best(c, true) + 1e-9);
    const G d = random_graph(Semantics::conflict, n, 0.3, rng);
    for (WeightMode m : {WeightMode::original, WeightMode::modified}) {
      const VertexSet s = greedy_max_weight_independent_set(d, m);
      EXPECT_TRUE(is_maximal_independent_set(d, s));
      EXPECT_LE(total_weight(d, s), brute_best(d, false) + 1e-9);
    }
  }
}

TEST(Greedy, ModifiedWeightsPreferTheLessBlockingVertex) {
  // star: centre 0 (weight 3) conflicts with leaves 1..3 (weight 2 each)
  G g(Semantics::conflict);
  g.add_vertex(0, 3.0);
  for (int i = 0; i < 3; ++i) g.add_vertex(0, 2.0);
  for (std::size_t v = 1; v <= 3; ++v) g.add_edge(0, v);
  // original: centre first, total 3; modified: leaf score 2 * 6 = 12 > 3 * 3 = 9
  EXPECT_EQ(greedy_max_weight_independent_set(g, WeightMode::original), (VertexSet{0}));
  const VertexSet s = greedy_max_weight_independent_set(g, WeightMode::modified);
  EXPECT_DOUBLE_EQ(total_weight(g, s), 6.0);
}

TEST(Greedy, CliqueTiesGoToLowestId) {
  G g(Semantics::compatibility);
  g.add_vertex(0, 1.0);
  g.add_vertex(0, 1.0);
  EXPECT_EQ(greedy_max_weight_clique(g), (VertexSet{0}));
}

TEST(IaIdncGraph, ExampleHasTheCompatibleFirstSlotPlans) {
  const Scenario sc = fixtures::example1();
  const IaIdncGraph g = build_ia_idnc_graph(sc.instance, sc.side, sc.instance.fixed->errh, 1.0, 4);
  const std::size_t a = find_vertex(g, [](const IaIdncVertex& v) {
    return v.errh == 1 && v.files == FileSet{1, 3} && v.rate == 5.0;
  });
  const std::size_t b = find_vertex(g, [](const IaIdncVertex& v) {
    return v.errh == 0 && v.files == FileSet{0, 3} && v.rate == 2.5;
  });
  ASSERT_LT(a, g.size());
  ASSERT_LT(b, g.size());
  EXPECT_EQ(g.payload(a).targets, (UserSet{1, 2}));
  EXPECT_EQ(g.payload(b).targets, (UserSet{3, 5}));
  EXPECT_TRUE(g.adjacent(a, b));
  EXPECT_DOUBLE_EQ(g.weight(a), 2 * 5.0 / 10.0);
  // vertices of one eRRH never connect; overlapping targets never connect
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = x + 1; y < g.size(); ++y)
      if (g.payload(x).errh == g.payload(y).errh || g.payload(x).targets.intersects(g.payload(y).targets)) {
        EXPECT_FALSE(g.adjacent(x, y));
      }
}

TEST(IaIdncGraph, RateFloorDropsSlowUsers) {
  const Scenario sc = fixtures::example1();
  const IaIdncGraph g = build_ia_idnc_graph(sc.instance, sc.side, sc.instance.fixed->errh, 1.0, 4);
  for (const IaIdncVertex& v : g.payloads()) {
    EXPECT_GE(v.rate, 1.0);
    for (std::size_t u : v.targets) EXPECT_GE(sc.instance.fixed->errh(u, v.errh), v.rate);
  }
  // u2 and u3 only reach e1 at 0.5 b/s
  for (const IaIdncVertex& v : g.payloads())
    if (v.errh == 0) {
      EXPECT_FALSE(v.targets.intersects(UserSet{1, 2}));
    }
}

TEST(D2dGraph, ExampleIndependentSet) {
  const Scenario sc = fixtures::example1();
  std::vector<D2dTransmitter> txs;
  for (std::size_t u : {0u, 1u, 2u}) txs.push_back({u, sc.side.has[u], 1.0, {}});
  const D2dGraph g = build_d2d_conflict_graph(sc.instance, sc.side, sc.instance.fixed->csm, txs,
                                              sc.instance.all_users());
  auto v = [&](std::size_t k, double r, std::size_t i, std::size_t f) {
    return find_vertex(g, [&](const D2dVertex& x) {
      return x.transmitter == k && x.rate == r && x.receiver == i && x.file == f;
    });
  };
  const VertexSet sel{v(0, 5.0, 3, 3), v(0, 5.0, 4, 3), v(2, 1.5, 1, 1)};
  for (std::size_t x : sel) ASSERT_LT(x, g.size());
  EXPECT_TRUE(is_independent_set(g, sel));
  // u5 lacks f4, so u1 cannot send f4 to u4 and f3 to u5 in one packet
  EXPECT_TRUE(g.adjacent(v(0, 5.0, 3, 3), v(0, 5.0, 4, 2)));
  const std::vector<D2dPlan> plans = plans_from_selection(g, sel, txs);
  ASSERT_EQ(plans.size(), 2u);
  EXPECT_EQ(plans[0].targets, (UserSet{3, 4}));
  EXPECT_EQ(plans[0].files, FileSet{3});
}

TEST(D2dGraph, ConflictConditions) {
  const Scenario sc = fixtures::example1();
  // u4 sends to u6; u1 sends to u4: u4 cannot both send and receive
  std::vector<D2dTransmitter> txs{{0, sc.side.has[0], 0.0, {}}, {3, sc.side.has[3], 0.0, {}}};
  const D2dGraph g = build_d2d_conflict_graph(sc.instance, sc.side, sc.instance.fixed->csm, txs,
                                              sc.instance.all_users());
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      const D2dVertex &x = g.payload(a), &y = g.payload(b);
      const bool cc4 = x.transmitter != y.transmitter && (x.transmitter == y.receiver || y.transmitter == x.receiver);
      const bool cc3 = x.transmitter != y.transmitter && x.receiver == y.receiver;
      const bool cc2 = x.transmitter == y.transmitter && x.rate != y.rate;
      if (cc2 || cc3 || cc4) {
        EXPECT_TRUE(g.adjacent(a, b));
      }
    }
}
