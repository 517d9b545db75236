#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "mtbound/generator.hpp"
#include "mtbound/graph.hpp"

using namespace mtbound;

namespace {

Instance paper_default(int n, InstanceKind kind, std::uint64_t seed) {
  return generate(GeneratorConfig::defaults(n, kind, seed));
}

// Parent node (coarser level) covering a child interval of the same target.
const IntervalNode* covering_node(const ClusteredGraph& parent, const IntervalNode& child) {
  for (const IntervalNode& n : parent.nodes) {
    if (n.role != child.role) continue;
    if (n.role == NodeRole::target && n.target_id != child.target_id) continue;
    if (n.t_lo <= child.t_lo + 1e-9 && n.t_hi >= child.t_hi - 1e-9) return &n;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("partition reproduces the per-level interval counts", "[graph]") {
  struct Level {
    int level;
    double delta;
    int count;
  };
  for (auto [level, delta, count] :
       {Level{1, 5.0, 4}, Level{2, 2.5, 8}, Level{3, 1.25, 16}, Level{4, 0.625, 32}}) {
    CHECK(delta_for_level(level) == delta);
    for (auto kind : {InstanceKind::simple, InstanceKind::complex_kind}) {
      Instance inst = paper_default(3, kind, 5);
      auto clusters = partition(inst, delta);
      REQUIRE(clusters.size() == 3);
      for (const auto& c : clusters) CHECK(static_cast<int>(c.size()) == count);
    }
  }
}

TEST_CASE("partition with delta equal to the window length", "[graph]") {
  Instance inst = paper_default(2, InstanceKind::simple, 9);
  auto clusters = partition(inst, 20.0);
  for (const auto& c : clusters) {
    REQUIRE(c.size() == 1);
    CHECK(c[0].t_hi - c[0].t_lo == Catch::Approx(20.0));
  }
}

TEST_CASE("partition tiles windows exactly", "[graph]") {
  Instance inst = paper_default(3, InstanceKind::complex_kind, 13);
  auto clusters = partition(inst, 1.25);
  for (std::size_t t = 0; t < clusters.size(); ++t) {
    const Target& tg = inst.targets[t];
    std::size_t k = 0;
    for (const TimeWindow& w : tg.windows) {
      double expect_lo = w.lo;
      while (k < clusters[t].size() && clusters[t][k].t_lo < w.hi - 1e-9) {
        CHECK(clusters[t][k].t_lo == Catch::Approx(expect_lo));
        expect_lo = clusters[t][k].t_hi;
        ++k;
      }
      CHECK(expect_lo == Catch::Approx(w.hi));
    }
    CHECK(k == clusters[t].size());
  }
}

TEST_CASE("build node and edge combinatorics", "[graph]") {
  Instance inst = paper_default(5, InstanceKind::simple, 2);
  ClusteredGraph g = build(inst, delta_for_level(4), Variant::lite);
  CHECK(g.n_nodes() == 162);  // 5 x 32 target nodes + 2 depot copies
  CHECK(g.n_target_nodes() == 160);
  long structural = 0;
  for (int u = 0; u < g.n_nodes(); ++u)
    for (int v = 0; v < g.n_nodes(); ++v)
      if (g.is_structural_edge(u, v)) ++structural;
  CHECK(structural == 160L * (160 - 32) + 2L * 160);
  CHECK(g.build_seconds > 0.0);
}

TEST_CASE("no intra-cluster, self, or depot-wrong-way edges", "[graph]") {
  Instance inst = paper_default(3, InstanceKind::simple, 4);
  ClusteredGraph g = build(inst, 5.0, Variant::geometric);
  for (int u = 0; u < g.n_nodes(); ++u) {
    CHECK(!g.is_structural_edge(u, u));
    CHECK(!g.is_structural_edge(g.depot_in, u));
    CHECK(!g.is_structural_edge(u, g.depot_out));
    for (int v = 0; v < g.n_nodes(); ++v) {
      if (u != v && g.nodes[u].role == NodeRole::target &&
          g.nodes[v].role == NodeRole::target &&
          g.nodes[u].target_id == g.nodes[v].target_id) {
        CHECK(!g.is_structural_edge(u, v));
        CHECK(std::isinf(g.raw_cost(u, v)));
      }
    }
  }
}

TEST_CASE("finite edge costs are non-negative", "[graph]") {
  Instance inst = paper_default(4, InstanceKind::complex_kind, 21);
  for (Variant v : {Variant::lite, Variant::geometric, Variant::sampling, Variant::linear}) {
    ClusteredGraph g = build(inst, 2.5, v);
    for (int a = 0; a < g.n_nodes(); ++a)
      for (int b = 0; b < g.n_nodes(); ++b)
        if (auto c = g.edge(a, b)) CHECK(*c >= 0.0);
  }
}

TEST_CASE("identical inputs build identical serialized graphs", "[graph]") {
  Instance inst = paper_default(3, InstanceKind::complex_kind, 17);
  ClusteredGraph a = build(inst, 2.5, Variant::linear);
  ClusteredGraph b = build(inst, 2.5, Variant::linear);
  CHECK(graph_to_json(a).dump() == graph_to_json(b).dump());
}

TEST_CASE("graph dump round-trips losslessly", "[graph]") {
  Instance inst = paper_default(3, InstanceKind::generic, 19);
  ClusteredGraph g = build(inst, 5.0, Variant::sampling);
  std::string path = "graph_roundtrip.json";
  dump(g, path);
  ClusteredGraph loaded = load_graph(path);
  CHECK(graph_to_json(loaded).dump() == graph_to_json(g).dump());
  // Infeasible edges survive as null.
  bool saw_infeasible = false;
  for (int u = 0; u < g.n_nodes() && !saw_infeasible; ++u)
    for (int v = 0; v < g.n_nodes() && !saw_infeasible; ++v)
      if (g.is_structural_edge(u, v) && !g.edge(u, v)) {
        saw_infeasible = true;
        CHECK(!loaded.edge(u, v));
      }
  CHECK(saw_infeasible);
  std::remove(path.c_str());
}

TEST_CASE("graph load rejects version mismatches", "[graph]") {
  std::string path = "graph_badversion.json";
  {
    std::ofstream f(path);
    f << R"({"version": 99, "variant": "lite", "delta": 5.0, "nodes": [], "edges": []})";
  }
  CHECK_THROWS_AS(load_graph(path), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("variant linear refuses arc instances", "[graph]") {
  Instance inst = paper_default(2, InstanceKind::generic, 3);
  CHECK_THROWS_AS(build(inst, 5.0, Variant::linear), VariantUnsupported);
  CHECK_NOTHROW(build(inst, 5.0, Variant::geometric));
}

TEST_CASE("edge costs are monotone under partition refinement", "[graph]") {
  Instance simple = paper_default(3, InstanceKind::simple, 23);
  Instance generic = paper_default(3, InstanceKind::generic, 23);
  struct Case {
    const Instance* inst;
    Variant variant;
  };
  std::vector<Case> cases = {{&simple, Variant::lite},     {&simple, Variant::geometric},
                             {&simple, Variant::linear},   {&simple, Variant::sampling},
                             {&generic, Variant::lite},    {&generic, Variant::geometric}};
  for (const auto& c : cases) {
    CAPTURE(to_string(c.variant), to_string(c.inst->kind));
    ClusteredGraph coarse = build(*c.inst, delta_for_level(1), c.variant);
    ClusteredGraph fine = build(*c.inst, delta_for_level(2), c.variant);
    for (int u = 0; u < fine.n_nodes(); ++u) {
      for (int v = 0; v < fine.n_nodes(); ++v) {
        if (!fine.is_structural_edge(u, v)) continue;
        const IntervalNode* pu = covering_node(coarse, fine.nodes[u]);
        const IntervalNode* pv = covering_node(coarse, fine.nodes[v]);
        REQUIRE(pu != nullptr);
        REQUIRE(pv != nullptr);
        if (!coarse.is_structural_edge(pu->node_id, pv->node_id)) continue;
        double parent = coarse.raw_cost(pu->node_id, pv->node_id);
        double child = fine.raw_cost(u, v);
        if (std::isinf(parent)) {
          CHECK(std::isinf(child));
        } else if (!std::isinf(child)) {
          CHECK(parent <= child + 1e-9);
        }
      }
    }
  }
}
