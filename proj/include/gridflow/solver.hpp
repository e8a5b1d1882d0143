#pragma once

#include <array>
#include <optional>
#include <vector>

#include "gridflow/constraints.hpp"
#include "gridflow/grid.hpp"
#include "gridflow/problem.hpp"

namespace gridflow {

struct SolverConfig {
    int max_iters = 20000;
    double rel_tol = 1e-6;  // relative primal change in the W-norm
    // Step sizes; when unset both are 0.99 / ||A||.
    std::optional<double> tau_primal;
    std::optional<double> sigma_dual;
    double density_floor = 1e-12;  // below this, a grid cell counts as empty
    int diagnostic_interval = 100;  // iteration log / convergence check cadence
    int norm_iterations = 100;      // power iterations for the step-size rule
    // The dual prox projects onto balls of margin*delta_j, keeping the
    // residuals of active blocks strictly inside their stated tolerances.
    double projection_margin = 0.75;
};

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;
    double primal_change = 0.0;
    std::array<double, kBlockCount> residuals{};
};

struct ObjectiveValue {
    double value = 0.0;
    // Set when some cell holds flux without density (transport through
    // vacuum); the value is +inf in that case.
    bool infeasible = false;
};

struct SolveResult {
    std::vector<double> u;    // primal solution
    std::vector<double> phi;  // dual multipliers, one per constraint row
    ObjectiveValue objective;
    std::array<double, kBlockCount> residuals{};
    int iterations = 0;
    bool converged = false;
    double tau = 0.0, sigma = 0.0, operator_norm = 0.0;
    std::vector<IterationRecord> history;
};

// Discrete transport cost: T^(p-1) times the quadrature-weighted sum of the
// kinetic helper over all edge cells, plus the time-weighted sum over vertex
// series pairs (interior storage, and supply/demand in time-independent mode).
ObjectiveValue evaluate_objective(const std::vector<double>& u, const GridSpec& grid,
                                  const Layout& layout, const TransportProblem& problem,
                                  double density_floor = 1e-12);

// Deterministic warm start: densities interpolate linearly in time between
// the sampled endpoint rows, fluxes are zero except the (untouched) first
// time level which is set to one, vertex masses interpolate, vertex fluxes
// start at zero.
std::vector<double> initial_primal(const Layout& layout, const GridSpec& grid,
                                   const EndpointData& endpoint);

// Primal-dual iteration: dual ball-shrinkage step, pointwise kinetic prox on
// every (density, flux) pair, extrapolation. Stops when every block residual
// is within its delta and the relative primal change drops below rel_tol, or
// when max_iters is reached (converged = false then, not an error). Throws
// Error(Numeric) if the iterates lose finiteness.
SolveResult solve(const TransportProblem& problem, const GridSpec& grid,
                  const Layout& layout, const EndpointData& endpoint,
                  const ConstraintSystem& system, const SolverConfig& config = {});

}  // namespace gridflow
