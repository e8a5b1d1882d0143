#include "gridflow/grid.hpp"

#include <cmath>

#include "gridflow/errors.hpp"

namespace gridflow {

GridSpec build_grid(const TransportProblem& problem, const std::vector<int>& nx_per_edge,
                    int nt) {
    const auto& edges = problem.graph.edges();
    if (nx_per_edge.size() != edges.size())
        throw Error(ErrorKind::Usage, "need one spatial resolution per edge");
    if (nt < 1) throw Error(ErrorKind::Usage, "nt must be at least 1");

    GridSpec grid;
    grid.horizon = problem.horizon;
    grid.nt = nt;
    grid.dt = problem.horizon / nt;
    grid.wt.assign(nt + 1, grid.dt);
    grid.wt.front() = grid.wt.back() = 0.5 * grid.dt;

    grid.edge.resize(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const int nx = nx_per_edge[e];
        if (nx < 2)
            throw Error(ErrorKind::Usage,
                        "edge '" + edges[e].id + "': nx must be at least 2");
        EdgeGrid& eg = grid.edge[e];
        eg.nx = nx;
        eg.dx = edges[e].length / nx;
        eg.wx.assign(nx + 1, eg.dx);
        eg.wx.front() = eg.wx.back() = 0.5 * eg.dx;
    }
    return grid;
}

GridSpec build_grid(const TransportProblem& problem, int nx_uniform, int nt) {
    return build_grid(problem,
                      std::vector<int>(problem.graph.edges().size(), nx_uniform), nt);
}

Layout::Layout(const TransportProblem& problem, const GridSpec& grid) {
    const std::size_t m = problem.graph.edges().size();
    nt_ = grid.nt;
    series_ = std::size_t(grid.nt) + 1;

    edge_offsets_.resize(m);
    field_size_.resize(m);
    nx_.resize(m);
    std::size_t pos = 0;
    for (std::size_t e = 0; e < m; ++e) {
        nx_[e] = grid.edge[e].nx;
        field_size_[e] = std::size_t(nx_[e] + 1) * series_;
        edge_offsets_[e] = pos;
        pos += 2 * field_size_[e];  // rho then flux
    }

    storage_ = problem.coupling == Coupling::Generalized;
    ti_ = problem.boundary == BoundaryMode::TimeIndependent;

    interior_ = problem.graph.interior_vertices();
    sources_ = problem.graph.source_vertices();
    sinks_ = problem.graph.sink_vertices();

    vertex_offset_ = pos;
    if (storage_) pos += 2 * interior_.size() * series_;
    ti_offset_ = pos;
    if (ti_) pos += 2 * (sources_.size() + sinks_.size()) * series_;
    total_ = pos;
}

std::vector<double> Layout::weights(const GridSpec& grid) const {
    std::vector<double> w(total_, 0.0);
    for (std::size_t e = 0; e < edge_offsets_.size(); ++e) {
        for (int k = 0; k <= nt_; ++k) {
            for (int i = 0; i <= nx_[e]; ++i) {
                const double wij = grid.edge[e].wx[i] * grid.wt[k];
                w[rho(e, i, k)] = wij;
                w[flux(e, i, k)] = wij;
            }
        }
    }
    if (storage_) {
        for (std::size_t iv = 0; iv < interior_.size(); ++iv)
            for (int k = 0; k <= nt_; ++k) {
                w[gamma(iv, k)] = grid.wt[k];
                w[excess(iv, k)] = grid.wt[k];
            }
    }
    if (ti_) {
        for (std::size_t is = 0; is < sources_.size(); ++is)
            for (int k = 0; k <= nt_; ++k) {
                w[supply_mass(is, k)] = grid.wt[k];
                w[supply_flux(is, k)] = grid.wt[k];
            }
        for (std::size_t id = 0; id < sinks_.size(); ++id)
            for (int k = 0; k <= nt_; ++k) {
                w[demand_mass(id, k)] = grid.wt[k];
                w[demand_flux(id, k)] = grid.wt[k];
            }
    }
    return w;
}

SolutionFields unpack(const Layout& layout, const std::vector<double>& u) {
    if (u.size() != layout.size())
        throw Error(ErrorKind::Usage, "vector length does not match layout");
    SolutionFields f;
    const std::size_t m = layout.edge_count();
    const std::size_t series = std::size_t(layout.nt()) + 1;
    f.rho.resize(m);
    f.flux.resize(m);
    for (std::size_t e = 0; e < m; ++e) {
        const std::size_t n = std::size_t(layout.nx(e) + 1) * series;
        f.rho[e].resize(n);
        f.flux[e].resize(n);
        for (int k = 0; k <= layout.nt(); ++k)
            for (int i = 0; i <= layout.nx(e); ++i) {
                const std::size_t local = std::size_t(k) * (layout.nx(e) + 1) + i;
                f.rho[e][local] = u[layout.rho(e, i, k)];
                f.flux[e][local] = u[layout.flux(e, i, k)];
            }
    }
    auto copy_series = [&](auto index_fn, std::size_t count,
                           std::vector<std::vector<double>>& dst) {
        dst.resize(count);
        for (std::size_t v = 0; v < count; ++v) {
            dst[v].resize(series);
            for (int k = 0; k <= layout.nt(); ++k) dst[v][k] = u[index_fn(v, k)];
        }
    };
    if (layout.has_vertex_storage()) {
        copy_series([&](std::size_t v, int k) { return layout.gamma(v, k); },
                    layout.interior().size(), f.gamma);
        copy_series([&](std::size_t v, int k) { return layout.excess(v, k); },
                    layout.interior().size(), f.excess);
    }
    if (layout.has_ti_series()) {
        copy_series([&](std::size_t v, int k) { return layout.supply_mass(v, k); },
                    layout.sources().size(), f.supply_mass);
        copy_series([&](std::size_t v, int k) { return layout.supply_flux(v, k); },
                    layout.sources().size(), f.supply_flux);
        copy_series([&](std::size_t v, int k) { return layout.demand_mass(v, k); },
                    layout.sinks().size(), f.demand_mass);
        copy_series([&](std::size_t v, int k) { return layout.demand_flux(v, k); },
                    layout.sinks().size(), f.demand_flux);
    }
    return f;
}

std::vector<double> pack(const Layout& layout, const SolutionFields& f) {
    std::vector<double> u(layout.size(), 0.0);
    for (std::size_t e = 0; e < layout.edge_count(); ++e)
        for (int k = 0; k <= layout.nt(); ++k)
            for (int i = 0; i <= layout.nx(e); ++i) {
                const std::size_t local = std::size_t(k) * (layout.nx(e) + 1) + i;
                u[layout.rho(e, i, k)] = f.rho[e][local];
                u[layout.flux(e, i, k)] = f.flux[e][local];
            }
    auto put_series = [&](auto index_fn, const std::vector<std::vector<double>>& src) {
        for (std::size_t v = 0; v < src.size(); ++v)
            for (int k = 0; k <= layout.nt(); ++k) u[index_fn(v, k)] = src[v][k];
    };
    if (layout.has_vertex_storage()) {
        put_series([&](std::size_t v, int k) { return layout.gamma(v, k); }, f.gamma);
        put_series([&](std::size_t v, int k) { return layout.excess(v, k); }, f.excess);
    }
    if (layout.has_ti_series()) {
        put_series([&](std::size_t v, int k) { return layout.supply_mass(v, k); },
                   f.supply_mass);
        put_series([&](std::size_t v, int k) { return layout.supply_flux(v, k); },
                   f.supply_flux);
        put_series([&](std::size_t v, int k) { return layout.demand_mass(v, k); },
                   f.demand_mass);
        put_series([&](std::size_t v, int k) { return layout.demand_flux(v, k); },
                   f.demand_flux);
    }
    return u;
}

namespace {

std::vector<double> sample_density(const DensityProfile& profile, const EdgeGrid& eg,
                                   double length, const std::string& edge_id) {
    std::vector<double> row(eg.nx + 1);
    for (int i = 0; i <= eg.nx; ++i) row[i] = profile.value(eg.dx * i, length);

    double raw = 0.0;
    for (int i = 0; i <= eg.nx; ++i) raw += eg.wx[i] * row[i];
    const double target = profile.mass(length);

    if (raw > 0.0) {
        const double factor = target / raw;
        for (double& v : row) v *= factor;
    } else if (target > 0.0) {
        throw Error(ErrorKind::Invariant,
                    "edge '" + edge_id + "': grid too coarse to resolve the density "
                    "profile (all samples are zero but the mass is positive)");
    }
    return row;
}

}  // namespace

EndpointData sample_endpoint_data(const TransportProblem& problem, const GridSpec& grid) {
    const auto& g = problem.graph;
    EndpointData data;
    data.rho0.resize(g.edges().size());
    data.rhoT.resize(g.edges().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const double L = g.edges()[e].length;
        data.rho0[e] = sample_density(problem.initial_density[e], grid.edge[e], L,
                                      g.edges()[e].id);
        data.rhoT[e] = sample_density(problem.final_density[e], grid.edge[e], L,
                                      g.edges()[e].id);
    }
    for (std::size_t vi : g.interior_vertices()) {
        const std::string& id = g.vertices()[vi].id;
        data.gamma0.push_back(problem.vertex_mass(Endpoint::Initial, id));
        data.gammaT.push_back(problem.vertex_mass(Endpoint::Final, id));
    }
    for (std::size_t vi : g.source_vertices()) {
        const std::string& id = g.vertices()[vi].id;
        double total = 0.0;
        if (problem.boundary == BoundaryMode::TimeDependent) {
            auto it = problem.boundary_flux.find(id);
            if (it != problem.boundary_flux.end())
                total = it->second.integral(0.0, problem.horizon);
        } else if (problem.boundary == BoundaryMode::TimeIndependent) {
            auto it = problem.boundary_total.find(id);
            if (it != problem.boundary_total.end()) total = it->second;
        }
        data.supply_total.push_back(total);
    }
    for (std::size_t vi : g.sink_vertices()) {
        const std::string& id = g.vertices()[vi].id;
        double total = 0.0;
        if (problem.boundary == BoundaryMode::TimeDependent) {
            auto it = problem.boundary_flux.find(id);
            if (it != problem.boundary_flux.end())
                total = it->second.integral(0.0, problem.horizon);
        } else if (problem.boundary == BoundaryMode::TimeIndependent) {
            auto it = problem.boundary_total.find(id);
            if (it != problem.boundary_total.end()) total = it->second;
        }
        data.demand_total.push_back(total);
    }
    return data;
}

}  // namespace gridflow
