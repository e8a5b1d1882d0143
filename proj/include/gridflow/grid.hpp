#pragma once

#include <cstddef>
#include <vector>

#include "gridflow/problem.hpp"

namespace gridflow {

// Space grid of one edge: nx intervals, nodes x_i = (i-1)*dx for i = 1..nx+1,
// composite trapezoid weights (dx/2 at the two boundary nodes, dx inside).
struct EdgeGrid {
    int nx = 0;
    double dx = 0.0;
    std::vector<double> wx;  // length nx + 1, sums to the edge length
};

struct GridSpec {
    std::vector<EdgeGrid> edge;  // aligned with graph edge order
    int nt = 0;
    double dt = 0.0;
    std::vector<double> wt;  // length nt + 1, sums to the horizon T
    double horizon = 1.0;

    double time(int k) const { return dt * k; }            // k is 0-based
    double space(std::size_t e, int i) const { return edge[e].dx * i; }
};

constexpr int kDefaultNx = 150;
constexpr int kDefaultNt = 75;

// Throws Error(Usage) unless every nx >= 2 and nt >= 1.
GridSpec build_grid(const TransportProblem& problem, const std::vector<int>& nx_per_edge,
                    int nt);
GridSpec build_grid(const TransportProblem& problem, int nx_uniform = kDefaultNx,
                    int nt = kDefaultNt);

// Canonical layout of the flattened unknown vector:
//   per edge (declaration order): all rho values, then all flux values, each
//   ordered space-inner/time-outer;
//   then per interior vertex (generalized coupling): gamma series, excess
//   flux series;
//   then per source vertex (time-independent boundary): remaining-supply
//   series S, supply flux series s; then per sink vertex: delivered-demand
//   series D, demand flux series d.
// All vertex series have length nt + 1.
class Layout {
  public:
    Layout(const TransportProblem& problem, const GridSpec& grid);

    std::size_t size() const { return total_; }
    std::size_t edge_count() const { return edge_offsets_.size(); }
    int nx(std::size_t e) const { return nx_[e]; }
    int nt() const { return nt_; }

    // 0-based node indices: i in [0, nx], k in [0, nt].
    std::size_t rho(std::size_t e, int i, int k) const {
        return edge_offsets_[e] + std::size_t(k) * (nx_[e] + 1) + i;
    }
    std::size_t flux(std::size_t e, int i, int k) const {
        return edge_offsets_[e] + field_size_[e] + std::size_t(k) * (nx_[e] + 1) + i;
    }

    bool has_vertex_storage() const { return !interior_.empty() && storage_; }
    bool has_ti_series() const { return ti_; }

    // The graph vertex indices behind each series group.
    const std::vector<std::size_t>& interior() const { return interior_; }
    const std::vector<std::size_t>& sources() const { return sources_; }
    const std::vector<std::size_t>& sinks() const { return sinks_; }

    // iv/is/id index into the vectors above; k in [0, nt].
    std::size_t gamma(std::size_t iv, int k) const {
        return vertex_offset_ + (2 * iv) * series_ + k;
    }
    std::size_t excess(std::size_t iv, int k) const {
        return vertex_offset_ + (2 * iv + 1) * series_ + k;
    }
    std::size_t supply_mass(std::size_t is, int k) const {
        return ti_offset_ + (2 * is) * series_ + k;
    }
    std::size_t supply_flux(std::size_t is, int k) const {
        return ti_offset_ + (2 * is + 1) * series_ + k;
    }
    std::size_t demand_mass(std::size_t id, int k) const {
        return ti_offset_ + (2 * sources_.size() + 2 * id) * series_ + k;
    }
    std::size_t demand_flux(std::size_t id, int k) const {
        return ti_offset_ + (2 * sources_.size() + 2 * id + 1) * series_ + k;
    }

    // Diagonal of the grid-function inner product: wx*wt on edge slots,
    // wt on vertex series slots.
    std::vector<double> weights(const GridSpec& grid) const;

  private:
    std::vector<std::size_t> edge_offsets_;
    std::vector<std::size_t> field_size_;  // (nx+1)*(nt+1) per edge
    std::vector<int> nx_;
    int nt_ = 0;
    std::size_t series_ = 0;  // nt + 1
    bool storage_ = false;
    bool ti_ = false;
    std::vector<std::size_t> interior_, sources_, sinks_;
    std::size_t vertex_offset_ = 0;
    std::size_t ti_offset_ = 0;
    std::size_t total_ = 0;
};

// Structured view of a flattened vector; pack/unpack round-trip exactly.
struct SolutionFields {
    // per edge, row-major with time outer: value(i, k) = field[k*(nx+1)+i]
    std::vector<std::vector<double>> rho, flux;
    // per interior vertex
    std::vector<std::vector<double>> gamma, excess;
    // per source / sink vertex (time-independent mode)
    std::vector<std::vector<double>> supply_mass, supply_flux;
    std::vector<std::vector<double>> demand_mass, demand_flux;
};

SolutionFields unpack(const Layout& layout, const std::vector<double>& u);
std::vector<double> pack(const Layout& layout, const SolutionFields& fields);

// Endpoint data sampled on the grid. Each density row is rescaled so its
// discrete trapezoid mass matches the profile's analytic mass; otherwise the
// endpoint blocks and the mass block disagree at O(dx) and tight tolerances
// make the problem infeasible.
struct EndpointData {
    std::vector<std::vector<double>> rho0, rhoT;  // per edge, length nx+1
    std::vector<double> gamma0, gammaT;           // aligned with Layout::interior()
    std::vector<double> supply_total;             // |S^G| per source
    std::vector<double> demand_total;             // D^G per sink
};

EndpointData sample_endpoint_data(const TransportProblem& problem, const GridSpec& grid);

}  // namespace gridflow
