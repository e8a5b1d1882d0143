#include "gridflow/solver.hpp"

#include <cmath>
#include <limits>

#include "gridflow/errors.hpp"
#include "gridflow/parallel.hpp"
#include "gridflow/prox.hpp"

namespace gridflow {

namespace {

// One (density, flux) pair of layout slots run through the kinetic prox.
// Supply pairs flip the flux sign first (the stored supply flux is <= 0, the
// prox acts on its magnitude); supply and demand fluxes are clamped to the
// physical sign afterwards. The clamp composition is a heuristic for the
// sign-constrained time-independent mode and is flagged experimental.
struct PairSlot {
    std::size_t density;
    std::size_t flux;
    enum class Kind : char { Plain, SupplyFlux, DemandFlux } kind = Kind::Plain;
};

std::vector<PairSlot> collect_pairs(const Layout& layout) {
    std::vector<PairSlot> pairs;
    for (std::size_t e = 0; e < layout.edge_count(); ++e)
        for (int k = 0; k <= layout.nt(); ++k)
            for (int i = 0; i <= layout.nx(e); ++i)
                pairs.push_back({layout.rho(e, i, k), layout.flux(e, i, k),
                                 PairSlot::Kind::Plain});
    if (layout.has_vertex_storage())
        for (std::size_t iv = 0; iv < layout.interior().size(); ++iv)
            for (int k = 0; k <= layout.nt(); ++k)
                pairs.push_back({layout.gamma(iv, k), layout.excess(iv, k),
                                 PairSlot::Kind::Plain});
    if (layout.has_ti_series()) {
        for (std::size_t is = 0; is < layout.sources().size(); ++is)
            for (int k = 0; k <= layout.nt(); ++k)
                pairs.push_back({layout.supply_mass(is, k), layout.supply_flux(is, k),
                                 PairSlot::Kind::SupplyFlux});
        for (std::size_t id = 0; id < layout.sinks().size(); ++id)
            for (int k = 0; k <= layout.nt(); ++k)
                pairs.push_back({layout.demand_mass(id, k), layout.demand_flux(id, k),
                                 PairSlot::Kind::DemandFlux});
    }
    return pairs;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

ObjectiveValue evaluate_objective(const std::vector<double>& u, const GridSpec& grid,
                                  const Layout& layout, const TransportProblem& problem,
                                  double density_floor) {
    if (u.size() != layout.size())
        throw Error(ErrorKind::Usage, "objective: vector length does not match layout");
    const double p = problem.exponent;
    ObjectiveValue out;

    auto cell = [&](double density, double flux, double weight) {
        if (density <= density_floor) {
            if (std::abs(flux) <= density_floor) return;  // empty cell, no cost
            out.infeasible = true;
            out.value = std::numeric_limits<double>::infinity();
            return;
        }
        out.value += weight * helper_h(flux, density, p);
    };

    for (std::size_t e = 0; e < layout.edge_count() && !out.infeasible; ++e)
        for (int k = 0; k <= layout.nt(); ++k)
            for (int i = 0; i <= layout.nx(e); ++i)
                cell(u[layout.rho(e, i, k)], u[layout.flux(e, i, k)],
                     grid.edge[e].wx[i] * grid.wt[k]);

    if (layout.has_vertex_storage())
        for (std::size_t iv = 0; iv < layout.interior().size() && !out.infeasible; ++iv)
            for (int k = 0; k <= layout.nt(); ++k)
                cell(u[layout.gamma(iv, k)], u[layout.excess(iv, k)], grid.wt[k]);

    if (layout.has_ti_series()) {
        for (std::size_t is = 0; is < layout.sources().size() && !out.infeasible; ++is)
            for (int k = 0; k <= layout.nt(); ++k)
                cell(u[layout.supply_mass(is, k)], u[layout.supply_flux(is, k)],
                     grid.wt[k]);
        for (std::size_t id = 0; id < layout.sinks().size() && !out.infeasible; ++id)
            for (int k = 0; k <= layout.nt(); ++k)
                cell(u[layout.demand_mass(id, k)], u[layout.demand_flux(id, k)],
                     grid.wt[k]);
    }

    if (!out.infeasible)
        out.value *= std::pow(problem.horizon, p - 1.0);
    return out;
}

std::vector<double> initial_primal(const Layout& layout, const GridSpec& grid,
                                   const EndpointData& endpoint) {
    std::vector<double> u(layout.size(), 0.0);
    const int nt = layout.nt();
    for (std::size_t e = 0; e < layout.edge_count(); ++e) {
        for (int k = 0; k <= nt; ++k) {
            const double a = nt == 0 ? 0.0 : double(k) / double(nt);
            for (int i = 0; i <= layout.nx(e); ++i) {
                u[layout.rho(e, i, k)] =
                    (1.0 - a) * endpoint.rho0[e][i] + a * endpoint.rhoT[e][i];
                u[layout.flux(e, i, k)] = k == 0 ? 1.0 : 0.0;  // first level is free
            }
        }
    }
    if (layout.has_vertex_storage())
        for (std::size_t iv = 0; iv < layout.interior().size(); ++iv)
            for (int k = 0; k <= nt; ++k) {
                const double a = nt == 0 ? 0.0 : double(k) / double(nt);
                u[layout.gamma(iv, k)] =
                    (1.0 - a) * endpoint.gamma0[iv] + a * endpoint.gammaT[iv];
            }
    if (layout.has_ti_series()) {
        for (std::size_t is = 0; is < layout.sources().size(); ++is)
            for (int k = 0; k <= nt; ++k) {
                const double a = nt == 0 ? 0.0 : double(k) / double(nt);
                u[layout.supply_mass(is, k)] = (1.0 - a) * endpoint.supply_total[is];
            }
        for (std::size_t id = 0; id < layout.sinks().size(); ++id)
            for (int k = 0; k <= nt; ++k) {
                const double a = nt == 0 ? 0.0 : double(k) / double(nt);
                u[layout.demand_mass(id, k)] = a * endpoint.demand_total[id];
            }
    }
    return u;
}

SolveResult solve(const TransportProblem& problem, const GridSpec& grid,
                  const Layout& layout, const EndpointData& endpoint,
                  const ConstraintSystem& system, const SolverConfig& config) {
    if (system.cols() != layout.size())
        throw Error(ErrorKind::Usage, "solver: system and layout disagree on size");

    SolveResult result;
    result.operator_norm = estimate_operator_norm(system, config.norm_iterations);
    const double L = std::max(result.operator_norm, 1e-12);
    result.tau = config.tau_primal.value_or(0.99 / L);
    result.sigma = config.sigma_dual.value_or(0.99 / L);
    const double lambda = result.tau;
    const double sigma = result.sigma;
    const double kappa =
        lambda * std::pow(problem.horizon, problem.exponent - 1.0);
    const double p = problem.exponent;

    const std::vector<PairSlot> pairs = collect_pairs(layout);
    const std::vector<double>& W = system.weights();

    std::vector<double> u = initial_primal(layout, grid, endpoint);
    std::vector<double> ubar = u;
    std::vector<double> phi(system.rows(), 0.0);
    std::vector<double> y, adj, dual_in(system.rows());

    auto w_norm = [&](const std::vector<double>& x) {
        double acc = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) acc += W[c] * x[c] * x[c];
        return std::sqrt(acc);
    };

    double last_change = std::numeric_limits<double>::infinity();
    int it = 0;
    for (it = 1; it <= config.max_iters; ++it) {
        // Dual step: shrink towards the relaxation balls.
        system.apply_forward(ubar, y);
        for (std::size_t r = 0; r < dual_in.size(); ++r)
            dual_in[r] = phi[r] + sigma * y[r];
        phi = prox_dual(dual_in, sigma, system, config.projection_margin);

        // Primal step: gradient move against the multipliers, then the
        // pointwise kinetic prox. The quadrature weights cancel between the
        // W-metric and the objective, so kappa is the same for every pair.
        system.apply_adjoint(phi, adj);
        double change2 = 0.0, norm2 = 0.0;
        parallel_for(pairs.size(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t n = begin; n < end; ++n) {
                const PairSlot& slot = pairs[n];
                const double rho_t = u[slot.density] - lambda * adj[slot.density];
                double m_t = u[slot.flux] - lambda * adj[slot.flux];
                if (slot.kind == PairSlot::Kind::SupplyFlux) m_t = -m_t;
                auto [rho_new, m_new] = prox_kinetic(rho_t, m_t, kappa, p);
                if (slot.kind != PairSlot::Kind::Plain && m_new < 0.0) m_new = 0.0;
                if (slot.kind == PairSlot::Kind::SupplyFlux) m_new = -m_new;
                ubar[slot.density] = rho_new;  // reuse ubar as the new iterate
                ubar[slot.flux] = m_new;
            }
        });
        for (std::size_t c = 0; c < u.size(); ++c) {
            const double d = ubar[c] - u[c];
            change2 += W[c] * d * d;
            norm2 += W[c] * ubar[c] * ubar[c];
        }
        last_change = std::sqrt(change2) / std::max(1.0, std::sqrt(norm2));

        // Extrapolate: ubar currently holds u_new.
        for (std::size_t c = 0; c < u.size(); ++c) {
            const double u_new = ubar[c];
            ubar[c] = 2.0 * u_new - u[c];
            u[c] = u_new;
        }

        const bool checkpoint =
            it % config.diagnostic_interval == 0 || it == config.max_iters;
        if (!checkpoint) continue;

        if (!all_finite(u) || !all_finite(phi))
            throw Error(ErrorKind::Numeric,
                        "non-finite iterate at iteration " + std::to_string(it));

        system.apply_forward(u, y);
        const auto residuals = system.block_residual_norms(y);
        const ObjectiveValue obj =
            evaluate_objective(u, grid, layout, problem, config.density_floor);

        IterationRecord rec;
        rec.iteration = it;
        rec.objective = obj.value;
        rec.primal_change = last_change;
        rec.residuals = residuals;
        result.history.push_back(rec);

        bool feasible = true;
        for (std::size_t b = 0; b < kBlockCount; ++b)
            feasible = feasible && residuals[b] <= system.blocks()[b].delta;
        if (feasible && last_change <= config.rel_tol) {
            result.converged = true;
            break;
        }
    }

    result.iterations = std::min(it, config.max_iters);
    result.u = std::move(u);
    result.phi = std::move(phi);
    system.apply_forward(result.u, y);
    result.residuals = system.block_residual_norms(y);
    result.objective =
        evaluate_objective(result.u, grid, layout, problem, config.density_floor);
    return result;
}

}  // namespace gridflow
