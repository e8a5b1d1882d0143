#pragma once

#include <string>
#include <vector>

#include "gridflow/grid.hpp"
#include "gridflow/solver.hpp"

namespace gridflow {

// Everything the output files need, decoupled from the solver state.
struct SolutionBundle {
    const TransportProblem* problem = nullptr;
    const GridSpec* grid = nullptr;
    const Layout* layout = nullptr;
    SolutionFields fields;
    ObjectiveValue objective;
    std::array<double, kBlockCount> residuals{};
    std::array<double, kBlockCount> deltas{};
    int iterations = 0;
    bool converged = false;
    double tau = 0.0, sigma = 0.0, operator_norm = 0.0;
    double wall_time_s = 0.0;
    std::vector<IterationRecord> history;
    // Network book mass (pipes + interior storage) at every time node.
    std::vector<double> total_mass_per_time;
};

SolutionBundle make_bundle(const TransportProblem& problem, const GridSpec& grid,
                           const Layout& layout, const ConstraintSystem& system,
                           const SolveResult& result, double wall_time_s);

// Writes the file set under out_dir (created on demand):
//   rho_<edge>.csv, j_<edge>.csv   snapshot tables, first row/column carry
//                                  the space/time coordinates
//   vertex_<id>.csv                vertex time series (gamma/f, S/s or D/d)
//   summary.json                   objective, residuals, iterations, timing
//   convergence.csv                iteration log
//   plotdata/snapshot_<n>.csv      long-format rows (edge, x, t, rho) for the
//                                  requested times (nearest grid node)
//   solution.json                  full-field mirror when json_mirror is set
void write_solution(const SolutionBundle& bundle, const std::string& out_dir,
                    bool json_mirror = false,
                    const std::vector<double>& snapshot_times = {});

}  // namespace gridflow
