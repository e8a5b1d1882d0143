#include "gridflow/graph.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "gridflow/errors.hpp"

namespace gridflow {

const char* to_string(VertexKind kind) {
    switch (kind) {
        case VertexKind::Interior: return "interior";
        case VertexKind::Source: return "source";
        case VertexKind::Sink: return "sink";
    }
    return "?";
}

MetricGraph::MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        vertex_index_.emplace(vertices_[i].id, i);  // keeps first occurrence
    for (std::size_t i = 0; i < edges_.size(); ++i)
        edge_index_.emplace(edges_[i].id, i);
}

bool MetricGraph::has_vertex(const std::string& id) const {
    return vertex_index_.count(id) > 0;
}

bool MetricGraph::has_edge(const std::string& id) const {
    return edge_index_.count(id) > 0;
}

std::size_t MetricGraph::vertex_index(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end())
        throw Error(ErrorKind::UnknownId, "unknown vertex id '" + id + "'");
    return it->second;
}

std::size_t MetricGraph::edge_index(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end())
        throw Error(ErrorKind::UnknownId, "unknown edge id '" + id + "'");
    return it->second;
}

const Vertex& MetricGraph::vertex(const std::string& id) const {
    return vertices_[vertex_index(id)];
}

const Edge& MetricGraph::edge(const std::string& id) const {
    return edges_[edge_index(id)];
}

std::vector<std::size_t> MetricGraph::interior_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i].kind == VertexKind::Interior) out.push_back(i);
    return out;
}

std::vector<std::size_t> MetricGraph::source_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i].kind == VertexKind::Source) out.push_back(i);
    return out;
}

std::vector<std::size_t> MetricGraph::sink_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i].kind == VertexKind::Sink) out.push_back(i);
    return out;
}

std::size_t MetricGraph::boundary_count() const {
    std::size_t n = 0;
    for (const auto& v : vertices_)
        if (v.kind != VertexKind::Interior) ++n;
    return n;
}

namespace {

// Union-find over vertex indices, used for the connectivity check.
struct DisjointSet {
    explicit DisjointSet(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::vector<std::size_t> parent;
};

}  // namespace

ValidationReport validate(const MetricGraph& graph) {
    ValidationReport report;
    auto add = [&](const std::string& code, const std::string& element,
                   const std::string& message) {
        report.ok = false;
        report.violations.push_back({code, element, message});
    };

    const auto& vs = graph.vertices();
    const auto& es = graph.edges();

    std::set<std::string> seen;
    for (const auto& v : vs) {
        if (!seen.insert(v.id).second)
            add("duplicate_vertex_id", v.id, "vertex id '" + v.id + "' declared twice");
    }
    seen.clear();
    for (const auto& e : es) {
        if (!seen.insert(e.id).second)
            add("duplicate_edge_id", e.id, "edge id '" + e.id + "' declared twice");
    }

    if (es.empty()) add("empty", "", "graph has no edges (need at least one)");
    if (vs.size() < 2) add("too_few_vertices", "", "graph needs at least two vertices");

    bool endpoints_ok = true;
    for (const auto& e : es) {
        if (!graph.has_vertex(e.start)) {
            add("unknown_vertex", e.id,
                "edge '" + e.id + "' starts at undeclared vertex '" + e.start + "'");
            endpoints_ok = false;
        }
        if (!graph.has_vertex(e.end)) {
            add("unknown_vertex", e.id,
                "edge '" + e.id + "' ends at undeclared vertex '" + e.end + "'");
            endpoints_ok = false;
        }
        if (e.start == e.end)
            add("loop", e.id, "edge '" + e.id + "' is a loop at vertex '" + e.start + "'");
        if (!(e.length > 0.0))
            add("nonpositive_length", e.id, "edge '" + e.id + "' has nonpositive length");
    }

    if (endpoints_ok && !vs.empty()) {
        DisjointSet ds(vs.size());
        for (const auto& e : es)
            ds.unite(graph.vertex_index(e.start), graph.vertex_index(e.end));
        const std::size_t root = ds.find(0);
        for (std::size_t i = 1; i < vs.size(); ++i) {
            if (ds.find(i) != root) {
                add("disconnected", vs[i].id,
                    "vertex '" + vs[i].id + "' is not reachable from '" + vs[0].id + "'");
                break;
            }
        }
    }

    return report;
}

IncidentEdges incident_edges(const MetricGraph& graph, const std::string& vertex_id) {
    graph.vertex_index(vertex_id);  // throws for unknown ids
    IncidentEdges out;
    for (const auto& e : graph.edges()) {
        if (e.end == vertex_id) out.incoming.push_back(e.id);
        if (e.start == vertex_id) out.outgoing.push_back(e.id);
    }
    return out;
}

std::size_t degree(const MetricGraph& graph, const std::string& vertex_id) {
    const auto inc = incident_edges(graph, vertex_id);
    return inc.incoming.size() + inc.outgoing.size();
}

bool has_no_parallel_edges(const MetricGraph& graph) {
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& e : graph.edges()) {
        auto key = std::minmax(e.start, e.end);
        if (!pairs.insert(key).second) return false;
    }
    return true;
}

bool is_simple_connected_acyclic(const MetricGraph& graph) {
    if (!has_no_parallel_edges(graph)) return false;
    // validate() established connectivity and no loops; a connected graph is a
    // tree exactly when |E| + 1 == |V|.
    return graph.edges().size() + 1 == graph.vertices().size();
}

}  // namespace gridflow
