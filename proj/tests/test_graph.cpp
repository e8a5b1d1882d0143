#include <doctest.h>

#include <algorithm>
#include <map>

#include "fixtures.hpp"
#include "gridflow/errors.hpp"
#include "gridflow/graph.hpp"

using namespace gridflow;

namespace {

bool has_violation(const ValidationReport& report, const std::string& code) {
    return std::any_of(report.violations.begin(), report.violations.end(),
                       [&](const Violation& v) { return v.code == code; });
}

}  // namespace

TEST_CASE("validate accepts the minimal legal graph") {
    MetricGraph g({{"v1", VertexKind::Interior}, {"v2", VertexKind::Interior}},
                  {{"e1", "v1", "v2", 1.0}});
    const auto report = validate(g);
    CHECK(report.ok);
    CHECK(report.violations.empty());
}

TEST_CASE("validate flags loops") {
    MetricGraph g({{"v1", VertexKind::Interior}, {"v2", VertexKind::Interior}},
                  {{"e1", "v1", "v1", 1.0}, {"e2", "v1", "v2", 1.0}});
    const auto report = validate(g);
    CHECK_FALSE(report.ok);
    CHECK(has_violation(report, "loop"));
}

TEST_CASE("validate flags disconnected graphs") {
    MetricGraph g({{"v1", VertexKind::Interior},
                   {"v2", VertexKind::Interior},
                   {"v3", VertexKind::Interior},
                   {"v4", VertexKind::Interior}},
                  {{"e1", "v1", "v2", 1.0}, {"e2", "v3", "v4", 1.0}});
    const auto report = validate(g);
    CHECK_FALSE(report.ok);
    CHECK(has_violation(report, "disconnected"));
}

TEST_CASE("validate flags duplicates, bad lengths and unknown endpoints") {
    MetricGraph g({{"v1", VertexKind::Interior},
                   {"v1", VertexKind::Interior},
                   {"v2", VertexKind::Interior}},
                  {{"e1", "v1", "v2", 0.0}, {"e1", "v1", "vX", 1.0}});
    const auto report = validate(g);
    CHECK_FALSE(report.ok);
    CHECK(has_violation(report, "duplicate_vertex_id"));
    CHECK(has_violation(report, "duplicate_edge_id"));
    CHECK(has_violation(report, "nonpositive_length"));
    CHECK(has_violation(report, "unknown_vertex"));
}

TEST_CASE("incident edges partition by orientation") {
    const MetricGraph g = fixtures::six_vertex_graph();

    const auto at_n4 = incident_edges(g, "n4");
    CHECK(at_n4.incoming == std::vector<std::string>{"e1", "e2"});
    CHECK(at_n4.outgoing == std::vector<std::string>{"e3"});

    // dead end: one incoming edge, nothing outgoing
    const auto at_n6 = incident_edges(g, "n6");
    CHECK(at_n6.incoming == std::vector<std::string>{"e5"});
    CHECK(at_n6.outgoing.empty());

    CHECK_THROWS_AS(incident_edges(g, "nope"), Error);
}

TEST_CASE("incident edges on a vertex without edges") {
    MetricGraph g({{"v1", VertexKind::Interior},
                   {"v2", VertexKind::Interior},
                   {"v3", VertexKind::Interior}},
                  {{"e1", "v1", "v2", 1.0}});
    const auto inc = incident_edges(g, "v3");
    CHECK(inc.incoming.empty());
    CHECK(inc.outgoing.empty());
}

TEST_CASE("tree recognition") {
    CHECK(is_simple_connected_acyclic(fixtures::branching_graph()));
    CHECK_FALSE(is_simple_connected_acyclic(fixtures::diamond_graph()));
    MetricGraph single({{"v1", VertexKind::Interior}, {"v2", VertexKind::Interior}},
                       {{"e1", "v1", "v2", 1.0}});
    CHECK(is_simple_connected_acyclic(single));

    // parallel edges break simplicity
    MetricGraph parallel({{"v1", VertexKind::Interior},
                          {"v2", VertexKind::Interior},
                          {"v3", VertexKind::Interior}},
                         {{"e1", "v1", "v2", 1.0},
                          {"e2", "v2", "v1", 1.0},
                          {"e3", "v2", "v3", 1.0}});
    CHECK_FALSE(has_no_parallel_edges(parallel));
    CHECK_FALSE(is_simple_connected_acyclic(parallel));
}

TEST_CASE("degree sum formula and incidence partition on random graphs") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> nv(2, 12), extra(0, 4);
        const MetricGraph g = fixtures::random_graph(rng, nv(rng), extra(rng));

        std::size_t degree_sum = 0;
        std::map<std::string, int> in_count, out_count;
        for (const auto& v : g.vertices()) {
            const auto inc = incident_edges(g, v.id);
            degree_sum += inc.incoming.size() + inc.outgoing.size();
            for (const auto& e : inc.incoming) in_count[e]++;
            for (const auto& e : inc.outgoing) out_count[e]++;
        }
        CHECK(degree_sum == 2 * g.edges().size());
        // every edge shows up exactly once as incoming and once as outgoing
        for (const auto& e : g.edges()) {
            CHECK(in_count[e.id] == 1);
            CHECK(out_count[e.id] == 1);
        }

        if (is_simple_connected_acyclic(g))
            CHECK(g.edges().size() + 1 == g.vertices().size());
    }
}
