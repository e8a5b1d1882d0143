#include "gridflow/constraints.hpp"

#include <cmath>
#include <random>

#include "gridflow/errors.hpp"

namespace gridflow {

const std::array<const char*, kBlockCount> kBlockNames = {
    "continuity",   "rho_initial", "rho_final",  "vertex_initial",
    "vertex_final", "coupling",    "vertex_ode", "mass"};

SystemBuilder::SystemBuilder(std::size_t cols, std::vector<double> weights) {
    sys_.cols_ = cols;
    sys_.weights_ = std::move(weights);
}

void SystemBuilder::begin_block(BlockId id) {
    current_ = int(id);
    sys_.blocks_[current_].name = kBlockNames[current_];
    sys_.blocks_[current_].begin = sys_.rows();
}

void SystemBuilder::end_block() { sys_.blocks_[current_].end = sys_.rows(); }

void SystemBuilder::add_row(std::initializer_list<std::pair<std::size_t, double>> entries,
                            double rhs, double weight) {
    for (const auto& [c, v] : entries) push(c, v * weight);
    finish_row(rhs * weight);
}

void SystemBuilder::push(std::size_t c, double v) {
    sys_.col_.push_back(c);
    sys_.val_.push_back(v);
}

void SystemBuilder::finish_row(double rhs) {
    sys_.row_ptr_.push_back(sys_.col_.size());
    sys_.rhs_.push_back(rhs);
}

ConstraintSystem SystemBuilder::take(const BlockTolerances& tol) {
    for (std::size_t b = 0; b < kBlockCount; ++b) {
        auto& blk = sys_.blocks_[b];
        if (blk.name.empty()) blk.name = kBlockNames[b];
        blk.delta = tol.absolute[b] ? *tol.absolute[b]
                                    : tol.scale * std::sqrt(double(blk.rows()));
    }
    return std::move(sys_);
}

namespace {

struct Incidence {
    std::vector<std::vector<std::size_t>> in;   // edges whose end is the vertex
    std::vector<std::vector<std::size_t>> out;  // edges whose start is the vertex
};

Incidence build_incidence(const MetricGraph& g) {
    Incidence inc;
    inc.in.resize(g.vertices().size());
    inc.out.resize(g.vertices().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        inc.in[g.vertex_index(g.edges()[e].end)].push_back(e);
        inc.out[g.vertex_index(g.edges()[e].start)].push_back(e);
    }
    return inc;
}

}  // namespace

void ConstraintSystem::apply_forward(const std::vector<double>& u,
                                     std::vector<double>& y) const {
    if (u.size() != cols_)
        throw Error(ErrorKind::Usage, "forward: vector length does not match columns");
    y.assign(rows(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
        double acc = 0.0;
        for (std::size_t n = row_ptr_[r]; n < row_ptr_[r + 1]; ++n)
            acc += val_[n] * u[col_[n]];
        y[r] = acc;
    }
}

std::vector<double> ConstraintSystem::apply_forward(const std::vector<double>& u) const {
    std::vector<double> y;
    apply_forward(u, y);
    return y;
}

void ConstraintSystem::apply_adjoint(const std::vector<double>& y,
                                     std::vector<double>& v) const {
    if (y.size() != rows())
        throw Error(ErrorKind::Usage, "adjoint: vector length does not match rows");
    v.assign(cols_, 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        for (std::size_t n = row_ptr_[r]; n < row_ptr_[r + 1]; ++n)
            v[col_[n]] += val_[n] * yr;
    }
    for (std::size_t c = 0; c < cols_; ++c) v[c] /= weights_[c];
}

std::vector<double> ConstraintSystem::apply_adjoint(const std::vector<double>& y) const {
    std::vector<double> v;
    apply_adjoint(y, v);
    return v;
}

std::array<double, kBlockCount> ConstraintSystem::block_residual_norms(
    const std::vector<double>& y) const {
    if (y.size() != rows())
        throw Error(ErrorKind::Usage, "residual: vector length does not match rows");
    std::array<double, kBlockCount> out{};
    for (std::size_t b = 0; b < kBlockCount; ++b) {
        double acc = 0.0;
        for (std::size_t r = blocks_[b].begin; r < blocks_[b].end; ++r) {
            const double d = y[r] - rhs_[r];
            acc += d * d;
        }
        out[b] = std::sqrt(acc);
    }
    return out;
}

ConstraintSystem assemble_constraints(const TransportProblem& problem,
                                      const GridSpec& grid, const Layout& layout,
                                      const EndpointData& endpoint,
                                      const BlockTolerances& tolerances) {
    const auto& g = problem.graph;
    const bool storage = problem.coupling == Coupling::Generalized;
    const bool td = problem.boundary == BoundaryMode::TimeDependent;
    const bool ti = problem.boundary == BoundaryMode::TimeIndependent;

    if ((td || ti) && g.boundary_count() == 0)
        throw Error(ErrorKind::ModeMismatch,
                    "boundary constraints requested but no boundary vertex declared");
    if (!td && !ti && g.boundary_count() > 0)
        throw Error(ErrorKind::ModeMismatch,
                    "graph declares boundary vertices but boundary mode is 'none'");

    const Incidence inc = build_incidence(g);
    const int nt = grid.nt;
    const double dt = grid.dt;

    // Position of each vertex within its series group.
    std::vector<std::size_t> group_pos(g.vertices().size(), 0);
    for (std::size_t n = 0; n < layout.interior().size(); ++n)
        group_pos[layout.interior()[n]] = n;
    for (std::size_t n = 0; n < layout.sources().size(); ++n)
        group_pos[layout.sources()[n]] = n;
    for (std::size_t n = 0; n < layout.sinks().size(); ++n)
        group_pos[layout.sinks()[n]] = n;

    // Boundary flux magnitude at a time node (time-dependent mode).
    auto flux_mag = [&](std::size_t v, double t) {
        auto it = problem.boundary_flux.find(g.vertices()[v].id);
        return it == problem.boundary_flux.end() ? 0.0 : it->second.value(t);
    };
    auto flux_int = [&](std::size_t v, double t) {
        auto it = problem.boundary_flux.find(g.vertices()[v].id);
        return it == problem.boundary_flux.end() ? 0.0 : it->second.integral(0.0, t);
    };

    SystemBuilder builder(layout.size(), layout.weights(grid));

    // Continuity: backward difference in time, centred difference in space at
    // interior nodes, one-sided at the two edge boundary nodes.
    builder.begin_block(BlockId::Continuity);
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const int nx = grid.edge[e].nx;
        const double dx = grid.edge[e].dx;
        for (int k = 1; k <= nt; ++k) {
            for (int i = 0; i <= nx; ++i) {
                const double w = std::sqrt(grid.wt[k] * grid.edge[e].wx[i]);
                if (i == 0) {
                    builder.add_row({{layout.rho(e, 0, k), 1.0 / dt},
                                     {layout.rho(e, 0, k - 1), -1.0 / dt},
                                     {layout.flux(e, 1, k), 1.0 / dx},
                                     {layout.flux(e, 0, k), -1.0 / dx}},
                                    0.0, w);
                } else if (i == nx) {
                    builder.add_row({{layout.rho(e, nx, k), 1.0 / dt},
                                     {layout.rho(e, nx, k - 1), -1.0 / dt},
                                     {layout.flux(e, nx, k), 1.0 / dx},
                                     {layout.flux(e, nx - 1, k), -1.0 / dx}},
                                    0.0, w);
                } else {
                    builder.add_row({{layout.rho(e, i, k), 1.0 / dt},
                                     {layout.rho(e, i, k - 1), -1.0 / dt},
                                     {layout.flux(e, i + 1, k), 0.5 / dx},
                                     {layout.flux(e, i - 1, k), -0.5 / dx}},
                                    0.0, w);
                }
            }
        }
    }
    builder.end_block();

    builder.begin_block(BlockId::RhoInitial);
    for (std::size_t e = 0; e < g.edges().size(); ++e)
        for (int i = 0; i <= grid.edge[e].nx; ++i)
            builder.add_row({{layout.rho(e, i, 0), 1.0}}, endpoint.rho0[e][i],
                            std::sqrt(grid.edge[e].wx[i]));
    builder.end_block();

    builder.begin_block(BlockId::RhoFinal);
    for (std::size_t e = 0; e < g.edges().size(); ++e)
        for (int i = 0; i <= grid.edge[e].nx; ++i)
            builder.add_row({{layout.rho(e, i, nt), 1.0}}, endpoint.rhoT[e][i],
                            std::sqrt(grid.edge[e].wx[i]));
    builder.end_block();

    const double w_first = std::sqrt(grid.wt[0]);
    const double w_last = std::sqrt(grid.wt[nt]);

    builder.begin_block(BlockId::VertexInitial);
    if (storage)
        for (std::size_t iv = 0; iv < layout.interior().size(); ++iv)
            builder.add_row({{layout.gamma(iv, 0), 1.0}}, endpoint.gamma0[iv], w_first);
    if (ti) {
        for (std::size_t is = 0; is < layout.sources().size(); ++is)
            builder.add_row({{layout.supply_mass(is, 0), 1.0}},
                            endpoint.supply_total[is], w_first);
        for (std::size_t id = 0; id < layout.sinks().size(); ++id)
            builder.add_row({{layout.demand_mass(id, 0), 1.0}}, 0.0, w_first);
    }
    builder.end_block();

    builder.begin_block(BlockId::VertexFinal);
    if (storage)
        for (std::size_t iv = 0; iv < layout.interior().size(); ++iv)
            builder.add_row({{layout.gamma(iv, nt), 1.0}}, endpoint.gammaT[iv], w_last);
    if (ti) {
        for (std::size_t is = 0; is < layout.sources().size(); ++is)
            builder.add_row({{layout.supply_mass(is, nt), 1.0}}, 0.0, w_last);
        for (std::size_t id = 0; id < layout.sinks().size(); ++id)
            builder.add_row({{layout.demand_mass(id, nt), 1.0}},
                            endpoint.demand_total[id], w_last);
    }
    builder.end_block();

    // Coupling: one row per vertex and time node. Interior rows are the
    // excess-flux balance (or plain flux balance without storage); boundary
    // rows pin the edge fluxes to the given supply/demand (time-dependent) or
    // tie them to the supply/demand flux unknowns (time-independent).
    builder.begin_block(BlockId::Coupling);
    for (std::size_t v = 0; v < g.vertices().size(); ++v) {
        const VertexKind kind = g.vertices()[v].kind;
        for (int k = 0; k <= nt; ++k) {
            const double w = std::sqrt(grid.wt[k]);
            double rhs = 0.0;
            if (kind == VertexKind::Interior) {
                if (storage) builder.push(layout.excess(group_pos[v], k), w);
                for (std::size_t e : inc.in[v])
                    builder.push(layout.flux(e, grid.edge[e].nx, k), -w);
                for (std::size_t e : inc.out[v]) builder.push(layout.flux(e, 0, k), w);
            } else if (td) {
                for (std::size_t e : inc.in[v])
                    builder.push(layout.flux(e, grid.edge[e].nx, k), w);
                for (std::size_t e : inc.out[v]) builder.push(layout.flux(e, 0, k), -w);
                const double mag = flux_mag(v, grid.time(k));
                rhs = kind == VertexKind::Source ? -mag : mag;
            } else {  // time-independent: s = out - in (supply), d = in - out
                if (kind == VertexKind::Source) {
                    builder.push(layout.supply_flux(group_pos[v], k), w);
                    for (std::size_t e : inc.out[v]) builder.push(layout.flux(e, 0, k), -w);
                    for (std::size_t e : inc.in[v])
                        builder.push(layout.flux(e, grid.edge[e].nx, k), w);
                } else {
                    builder.push(layout.demand_flux(group_pos[v], k), w);
                    for (std::size_t e : inc.in[v])
                        builder.push(layout.flux(e, grid.edge[e].nx, k), -w);
                    for (std::size_t e : inc.out[v]) builder.push(layout.flux(e, 0, k), w);
                }
            }
            builder.finish_row(rhs * w);
        }
    }
    builder.end_block();

    builder.begin_block(BlockId::VertexOde);
    if (storage)
        for (std::size_t iv = 0; iv < layout.interior().size(); ++iv)
            for (int k = 1; k <= nt; ++k)
                builder.add_row({{layout.gamma(iv, k), 1.0 / dt},
                                 {layout.gamma(iv, k - 1), -1.0 / dt},
                                 {layout.excess(iv, k), -1.0}},
                                0.0, std::sqrt(grid.wt[k]));
    if (ti) {
        for (std::size_t is = 0; is < layout.sources().size(); ++is)
            for (int k = 1; k <= nt; ++k)
                builder.add_row({{layout.supply_mass(is, k), 1.0 / dt},
                                 {layout.supply_mass(is, k - 1), -1.0 / dt},
                                 {layout.supply_flux(is, k), -1.0}},
                                0.0, std::sqrt(grid.wt[k]));
        for (std::size_t id = 0; id < layout.sinks().size(); ++id)
            for (int k = 1; k <= nt; ++k)
                builder.add_row({{layout.demand_mass(id, k), 1.0 / dt},
                                 {layout.demand_mass(id, k - 1), -1.0 / dt},
                                 {layout.demand_flux(id, k), -1.0}},
                                0.0, std::sqrt(grid.wt[k]));
    }
    builder.end_block();

    // Mass bookkeeping per time node. The right-hand side is the initial
    // book content, shifted in time-dependent mode by the net boundary
    // inflow up to t_k (exact profile integrals). Rows are unweighted, so
    // each residual entry is the bookkeeping error at one time node.
    double base = 0.0;
    for (std::size_t e = 0; e < g.edges().size(); ++e)
        for (int i = 0; i <= grid.edge[e].nx; ++i)
            base += grid.edge[e].wx[i] * endpoint.rho0[e][i];
    if (storage)
        for (double g0 : endpoint.gamma0) base += g0;
    if (ti)
        for (double s0 : endpoint.supply_total) base += s0;

    builder.begin_block(BlockId::Mass);
    for (int k = 1; k <= nt; ++k) {
        for (std::size_t e = 0; e < g.edges().size(); ++e)
            for (int i = 0; i <= grid.edge[e].nx; ++i)
                builder.push(layout.rho(e, i, k), grid.edge[e].wx[i]);
        if (storage)
            for (std::size_t iv = 0; iv < layout.interior().size(); ++iv)
                builder.push(layout.gamma(iv, k), 1.0);
        if (ti) {
            for (std::size_t is = 0; is < layout.sources().size(); ++is)
                builder.push(layout.supply_mass(is, k), 1.0);
            for (std::size_t id = 0; id < layout.sinks().size(); ++id)
                builder.push(layout.demand_mass(id, k), 1.0);
        }
        double rhs = base;
        if (td) {
            const double t = grid.time(k);
            for (std::size_t v : g.source_vertices()) rhs += flux_int(v, t);
            for (std::size_t v : g.sink_vertices()) rhs -= flux_int(v, t);
        }
        builder.finish_row(rhs);
    }
    builder.end_block();

    return builder.take(tolerances);
}

double estimate_operator_norm(const ConstraintSystem& system, int iterations,
                              unsigned seed) {
    if (system.rows() == 0 || system.cols() == 0) return 0.0;
    const std::vector<double>& W = system.weights();

    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(system.cols());
    for (double& x : v) x = dist(rng);

    auto w_norm = [&](const std::vector<double>& x) {
        double acc = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) acc += W[c] * x[c] * x[c];
        return std::sqrt(acc);
    };

    const double nv0 = w_norm(v);
    if (nv0 == 0.0) return 0.0;
    for (double& x : v) x /= nv0;

    std::vector<double> y, z;
    double rayleigh = 0.0;
    for (int it = 0; it < iterations; ++it) {
        system.apply_forward(v, y);
        double yy = 0.0;
        for (double x : y) yy += x * x;
        rayleigh = yy;  // = <v, A*Av>_W for unit ||v||_W
        if (yy == 0.0) return 0.0;
        system.apply_adjoint(y, z);
        const double nz = w_norm(z);
        if (nz == 0.0) return 0.0;
        for (std::size_t c = 0; c < z.size(); ++c) v[c] = z[c] / nz;
    }
    return std::sqrt(rayleigh);
}

}  // namespace gridflow
