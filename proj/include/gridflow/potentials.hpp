#pragma once

#include <string>
#include <vector>

#include "gridflow/graph.hpp"

namespace gridflow {

// Physical parameters of one pipe, used for the entropy and slope terms.
struct PipeParams {
    double friction = 1.0;         // lambda_e, dimensionless, > 0
    double diameter = 1.0;         // m
    double inclination = 0.0;      // rad, in [0, 2*pi]
    double gravity = 9.81;         // m/s^2
    double gas_constant = 8.3;     // J/(K*mol)
    double temperature = 288.0;    // K
    double compressibility = 1.0;  // z >= 0
};

// c_e = (2 * diameter * g / friction) * sin(inclination).
// Throws Error(Usage) when friction <= 0.
double edge_slope(const PipeParams& params);

// First derivative of the edge entropy for the linear pressure law
// p(s) = R*T*z*s: F'(s) = (2*diameter*R*T*z/friction) * ln(s), anchored by
// F'(1) = 0. Throws Error(Usage) for s <= 0 or friction <= 0.
double entropy_prime(const PipeParams& params, double s);

// Linear system tying the per-edge integration constants d_e to nodal
// potential values Phi_nu: for every edge, d_e = Phi at its start vertex and
// c_e L_e + d_e = Phi at its end vertex, plus the normalization sum d_e = 0.
// Unknown order: all d_e (edge declaration order), then all Phi_nu.
struct PotentialSystem {
    std::size_t edge_count = 0;
    std::size_t vertex_count = 0;
    std::vector<std::vector<double>> rows;  // dense, (2|E|+1) x (|E|+|V|)
    std::vector<double> rhs;
    bool square() const { return rows.size() == edge_count + vertex_count; }
};

PotentialSystem assemble_potential_system(const MetricGraph& graph,
                                          const std::vector<double>& slopes,
                                          const std::vector<double>& lengths);

struct PotentialSolution {
    std::vector<double> d;    // per edge
    std::vector<double> phi;  // per vertex
};

// Unique exact solution on simple connected acyclic graphs; refuses other
// graphs (Error(Usage)) since uniqueness is not guaranteed there.
PotentialSolution solve_potential_system(const MetricGraph& graph,
                                         const std::vector<double>& slopes,
                                         const std::vector<double>& lengths);

// Rank/consistency report for graphs outside the tree case.
struct PotentialDiagnostics {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t rank = 0;
    bool consistent = false;  // least-squares residual numerically zero
};

PotentialDiagnostics analyze_potential_system(const MetricGraph& graph,
                                              const std::vector<double>& slopes,
                                              const std::vector<double>& lengths);

}  // namespace gridflow
