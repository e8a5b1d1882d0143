#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace gridflow {

enum class VertexKind { Interior, Source, Sink };

const char* to_string(VertexKind kind);

struct Vertex {
    std::string id;
    VertexKind kind = VertexKind::Interior;
};

// Oriented edge: the local coordinate runs from `start` (x = 0) to `end`
// (x = length), fixing the positive flux direction.
struct Edge {
    std::string id;
    std::string start;
    std::string end;
    double length = 1.0;
};

struct Violation {
    std::string code;     // e.g. "loop", "disconnected"
    std::string element;  // offending vertex/edge id ("" for global checks)
    std::string message;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

struct IncidentEdges {
    std::vector<std::string> incoming;  // edges with end == vertex
    std::vector<std::string> outgoing;  // edges with start == vertex
};

// Immutable oriented metric graph. Construction is permissive (any id set is
// accepted so that validate() can enumerate problems); all queries beyond
// validate() assume a graph that passed validation.
class MetricGraph {
  public:
    MetricGraph() = default;
    MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_vertex(const std::string& id) const;
    bool has_edge(const std::string& id) const;
    // Declaration-order index; throws Error(UnknownId) if absent.
    std::size_t vertex_index(const std::string& id) const;
    std::size_t edge_index(const std::string& id) const;
    const Vertex& vertex(const std::string& id) const;
    const Edge& edge(const std::string& id) const;

    // Vertices of a given class, in declaration order.
    std::vector<std::size_t> interior_vertices() const;
    std::vector<std::size_t> source_vertices() const;
    std::vector<std::size_t> sink_vertices() const;
    std::size_t boundary_count() const;

  private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::size_t> vertex_index_;
    std::unordered_map<std::string, std::size_t> edge_index_;
};

// Checks the structural invariants: unique ids, known endpoints, no loops,
// positive lengths, at least one edge (hence two vertices), connectivity of
// the undirected skeleton. Violations are data, not exceptions.
ValidationReport validate(const MetricGraph& graph);

// Partition of the edges touching `vertex_id` by orientation.
// Throws Error(UnknownId) for an unknown vertex.
IncidentEdges incident_edges(const MetricGraph& graph, const std::string& vertex_id);

std::size_t degree(const MetricGraph& graph, const std::string& vertex_id);

// True iff the undirected skeleton is a tree: no parallel edges, connected,
// and |E| + 1 == |V|. Assumes the graph passed validate().
bool is_simple_connected_acyclic(const MetricGraph& graph);

// True iff no two edges join the same unordered vertex pair.
bool has_no_parallel_edges(const MetricGraph& graph);

}  // namespace gridflow
