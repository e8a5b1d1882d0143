#pragma once

// Shared graph/problem fixtures for the test suites.

#include <random>
#include <vector>

#include "gridflow/problem.hpp"

namespace fixtures {

using namespace gridflow;

// Y-shaped network: one trunk edge feeding two symmetric branch edges.
inline MetricGraph branching_graph(VertexKind root_kind = VertexKind::Interior,
                                   VertexKind leaf_kind = VertexKind::Interior) {
    return MetricGraph(
        {{"v1", root_kind},
         {"v2", VertexKind::Interior},
         {"v3", leaf_kind},
         {"v4", leaf_kind}},
        {{"e1", "v1", "v2", 1.0}, {"e2", "v2", "v3", 1.0}, {"e3", "v2", "v4", 1.0}});
}

// Diamond with a chord: contains the cycle v2-v3-v4.
inline MetricGraph diamond_graph() {
    return MetricGraph({{"v1", VertexKind::Source},
                        {"v2", VertexKind::Interior},
                        {"v3", VertexKind::Sink},
                        {"v4", VertexKind::Sink}},
                       {{"e1", "v1", "v2", 1.0},
                        {"e2", "v2", "v3", 1.0},
                        {"e3", "v2", "v4", 1.0},
                        {"e4", "v3", "v4", 1.0}});
}

// Six-vertex network with two supplies, one demand and a dead end.
inline MetricGraph six_vertex_graph() {
    return MetricGraph({{"n1", VertexKind::Source},
                        {"n2", VertexKind::Source},
                        {"n3", VertexKind::Sink},
                        {"n4", VertexKind::Interior},
                        {"n5", VertexKind::Interior},
                        {"n6", VertexKind::Interior}},
                       {{"e1", "n1", "n4", 45.0},
                        {"e2", "n2", "n4", 72.0},
                        {"e3", "n4", "n5", 40.0},
                        {"e4", "n5", "n3", 45.0},
                        {"e5", "n5", "n6", 63.0}});
}

// Single unit edge with interior endpoints, no boundary data.
inline TransportProblem single_edge_problem() {
    TransportProblem p;
    p.graph = MetricGraph({{"v1", VertexKind::Interior}, {"v2", VertexKind::Interior}},
                          {{"e1", "v1", "v2", 1.0}});
    p.initial_density = {DensityProfile::constant(1.0)};
    p.final_density = {DensityProfile::constant(1.0)};
    return p;
}

// Trunk-and-branches transport: unit block on the trunk splits evenly onto
// the two branches.
inline TransportProblem branching_problem(Coupling coupling) {
    TransportProblem p;
    p.graph = branching_graph();
    p.coupling = coupling;
    p.initial_density = {DensityProfile::indicator(0.0, 0.4, 1.0),
                         DensityProfile::constant(0.0), DensityProfile::constant(0.0)};
    p.final_density = {DensityProfile::constant(0.0),
                       DensityProfile::indicator(0.6, 1.0, 0.5),
                       DensityProfile::indicator(0.6, 1.0, 0.5)};
    if (coupling == Coupling::Generalized)
        for (const char* id : {"v1", "v2", "v3", "v4"}) {
            p.initial_vertex_mass[id] = 0.0;
            p.final_vertex_mass[id] = 0.0;
        }
    return p;
}

// Diamond network fed from one source and drained at two sinks, with vertex
// storage at the junction. `symmetric` picks between equal demands at both
// sinks and the full demand at the far sink.
inline TransportProblem inout_problem(bool symmetric) {
    TransportProblem p;
    p.graph = diamond_graph();
    p.coupling = Coupling::Generalized;
    p.boundary = BoundaryMode::TimeDependent;
    p.initial_density.assign(4, DensityProfile::constant(0.225));
    p.final_density = {DensityProfile::constant(0.0), DensityProfile::constant(0.0),
                       DensityProfile::constant(0.0),
                       DensityProfile::gaussian(0.5, 0.2, 1.0).normalize_mass(0.6)};
    p.initial_vertex_mass["v2"] = 0.1;
    p.final_vertex_mass["v2"] = 0.4;
    p.boundary_flux["v1"] = FluxProfile::linear(1.0);
    if (symmetric) {
        p.boundary_flux["v3"] = FluxProfile::linear(0.5);
        p.boundary_flux["v4"] = FluxProfile::linear(0.5);
    } else {
        p.boundary_flux["v3"] = FluxProfile::zero();
        p.boundary_flux["v4"] = FluxProfile::linear(1.0);
    }
    return p;
}

// Random connected graph: a spanning tree plus optional extra edges.
inline MetricGraph random_graph(std::mt19937& rng, int n_vertices, int n_extra) {
    std::vector<Vertex> vertices;
    for (int v = 0; v < n_vertices; ++v)
        vertices.push_back({"v" + std::to_string(v), VertexKind::Interior});
    std::vector<Edge> edges;
    std::uniform_real_distribution<double> len(0.5, 3.0);
    for (int v = 1; v < n_vertices; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        const int u = parent(rng);
        edges.push_back({"e" + std::to_string(edges.size()), "v" + std::to_string(u),
                         "v" + std::to_string(v), len(rng)});
    }
    std::uniform_int_distribution<int> pick(0, n_vertices - 1);
    while (n_extra > 0) {
        const int a = pick(rng), b = pick(rng);
        if (a == b) continue;
        edges.push_back({"e" + std::to_string(edges.size()), "v" + std::to_string(a),
                         "v" + std::to_string(b), len(rng)});
        --n_extra;
    }
    return MetricGraph(std::move(vertices), std::move(edges));
}

}  // namespace fixtures
