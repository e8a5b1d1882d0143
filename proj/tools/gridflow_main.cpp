// gridflow: dynamic p-Wasserstein optimal transport on gas networks.
//
// Subcommands:
//   solve       run the primal-dual solver and write the solution file set
//   check       feasibility audits (mass conservation, demand bound)
//   potentials  interface constants d_e / Phi_nu from pipe parameters
//   info        grid sizes, unknown counts, constraint row counts
//
// Exit codes: 0 success/feasible, 1 infeasible or non-converged, 2 usage or
// parse error.

#include <chrono>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gridflow/constraints.hpp"
#include "gridflow/errors.hpp"
#include "gridflow/potentials.hpp"
#include "gridflow/problem_io.hpp"
#include "gridflow/solution_io.hpp"
#include "gridflow/solver.hpp"

namespace {

using namespace gridflow;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Syntax:
        case ErrorKind::UnknownId:
        case ErrorKind::ModeMismatch:
        case ErrorKind::Invariant:
        case ErrorKind::Usage:
            return 2;
        default:
            return 1;
    }
}

SolverConfig config_from(const SolverOverrides& overrides, int max_iters_cli,
                         double tol_cli) {
    SolverConfig config;
    if (overrides.max_iters) config.max_iters = *overrides.max_iters;
    if (overrides.rel_tol) config.rel_tol = *overrides.rel_tol;
    if (overrides.tau_primal) config.tau_primal = *overrides.tau_primal;
    if (overrides.sigma_dual) config.sigma_dual = *overrides.sigma_dual;
    if (overrides.projection_margin) config.projection_margin = *overrides.projection_margin;
    if (max_iters_cli > 0) config.max_iters = max_iters_cli;
    (void)tol_cli;  // tolerance scale feeds the constraint assembly, not the solver
    return config;
}

int run_solve(const std::string& problem_path, const std::string& out_dir,
              int max_iters_cli, double tol_cli, const std::string& snapshot_spec,
              bool json_mirror) {
    const ParsedProblem parsed = parse_problem(problem_path);
    const GridSpec grid = build_grid(parsed.problem, parsed.nx, parsed.nt);
    const Layout layout(parsed.problem, grid);
    const EndpointData endpoint = sample_endpoint_data(parsed.problem, grid);

    BlockTolerances tolerances = parsed.solver.tolerances();
    if (tol_cli > 0.0) tolerances.scale = tol_cli;
    const ConstraintSystem system =
        assemble_constraints(parsed.problem, grid, layout, endpoint, tolerances);

    const SolverConfig config = config_from(parsed.solver, max_iters_cli, tol_cli);

    const auto start = std::chrono::steady_clock::now();
    const SolveResult result =
        solve(parsed.problem, grid, layout, endpoint, system, config);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::vector<double> snapshot_times;
    if (!snapshot_spec.empty()) {
        std::stringstream ss(snapshot_spec);
        std::string item;
        while (std::getline(ss, item, ',')) snapshot_times.push_back(std::stod(item));
    }

    const SolutionBundle bundle =
        make_bundle(parsed.problem, grid, layout, system, result, wall);
    write_solution(bundle, out_dir, json_mirror, snapshot_times);

    std::cout << (result.converged ? "converged" : "NOT converged") << " after "
              << result.iterations << " iterations, objective "
              << result.objective.value << ", wall time " << wall << " s\n";
    std::cout << "residuals:";
    for (std::size_t b = 0; b < kBlockCount; ++b)
        std::cout << ' ' << kBlockNames[b] << '=' << result.residuals[b] << "/"
                  << system.blocks()[b].delta;
    std::cout << "\nsolution written to " << out_dir << "\n";
    return result.converged ? 0 : 1;
}

int run_check(const std::string& problem_path) {
    const ParsedProblem parsed = parse_problem(problem_path);
    const TransportProblem& problem = parsed.problem;

    bool pass = true;
    const MassBalanceReport gmc = check_gmc(problem);
    std::cout << "mass conservation: lhs=" << gmc.lhs << " rhs=" << gmc.rhs
              << " slack=" << gmc.slack << " -> "
              << (gmc.balanced ? "balanced" : "UNBALANCED") << '\n';
    pass = pass && gmc.balanced;

    if (problem.boundary != BoundaryMode::None) {
        const DemandBoundReport demand = check_demand_bound(problem);
        std::cout << "demand bound: bound=" << demand.bound
                  << " demand=" << demand.demand << " -> "
                  << (demand.feasible ? "feasible" : "INFEASIBLE");
        if (demand.first_violation_time)
            std::cout << " (first violated at t=" << *demand.first_violation_time << ")";
        std::cout << '\n';
        pass = pass && demand.feasible;
    } else {
        std::cout << "demand bound: not applicable (no boundary vertices)\n";
    }
    return pass ? 0 : 1;
}

int run_potentials(const std::string& problem_path) {
    const ParsedProblem parsed = parse_problem(problem_path);
    const MetricGraph& g = parsed.problem.graph;

    std::vector<double> slopes, lengths;
    for (const auto& edge : g.edges()) {
        auto it = parsed.pipes.find(edge.id);
        if (it == parsed.pipes.end())
            throw Error(ErrorKind::ModeMismatch,
                        "pipes section: missing parameters for edge '" + edge.id + "'");
        slopes.push_back(edge_slope(it->second));
        lengths.push_back(edge.length);
    }

    if (!is_simple_connected_acyclic(g)) {
        const PotentialDiagnostics diag = analyze_potential_system(g, slopes, lengths);
        std::cout << "graph is not a simple tree; interface constants are not "
                     "uniquely determined\n"
                  << "system: " << diag.rows << " equations, " << diag.cols
                  << " unknowns, rank " << diag.rank << ", "
                  << (diag.consistent ? "consistent" : "inconsistent") << '\n';
        return 1;
    }

    const PotentialSolution sol = solve_potential_system(g, slopes, lengths);
    std::cout << "edge constants:\n";
    for (std::size_t e = 0; e < g.edges().size(); ++e)
        std::cout << "  " << g.edges()[e].id << ": c=" << slopes[e]
                  << " d=" << sol.d[e] << '\n';
    std::cout << "vertex potentials:\n";
    for (std::size_t v = 0; v < g.vertices().size(); ++v)
        std::cout << "  " << g.vertices()[v].id << ": Phi=" << sol.phi[v] << '\n';
    return 0;
}

int run_info(const std::string& problem_path) {
    const ParsedProblem parsed = parse_problem(problem_path);
    const GridSpec grid = build_grid(parsed.problem, parsed.nx, parsed.nt);
    const Layout layout(parsed.problem, grid);
    const EndpointData endpoint = sample_endpoint_data(parsed.problem, grid);
    const ConstraintSystem system = assemble_constraints(
        parsed.problem, grid, layout, endpoint, parsed.solver.tolerances());

    const MetricGraph& g = parsed.problem.graph;
    std::cout << "graph: " << g.vertices().size() << " vertices, " << g.edges().size()
              << " edges (" << g.interior_vertices().size() << " interior, "
              << g.source_vertices().size() << " sources, "
              << g.sink_vertices().size() << " sinks)\n";
    std::cout << "coupling " << to_string(parsed.problem.coupling) << ", boundary "
              << to_string(parsed.problem.boundary) << ", p "
              << parsed.problem.exponent << ", T " << parsed.problem.horizon << '\n';
    std::cout << "time grid: Nt=" << grid.nt << " (dt=" << grid.dt << ")\n";
    for (std::size_t e = 0; e < g.edges().size(); ++e)
        std::cout << "edge " << g.edges()[e].id << ": Nx=" << grid.edge[e].nx
                  << " (dx=" << grid.edge[e].dx << ")\n";
    std::cout << "unknowns: " << layout.size() << '\n';
    std::cout << "constraint rows: " << system.rows() << '\n';
    for (const auto& blk : system.blocks())
        std::cout << "  " << blk.name << ": " << blk.rows() << " rows, delta="
                  << blk.delta << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic p-Wasserstein optimal transport on gas networks"};
    app.require_subcommand(1);

    std::string problem_path, out_dir = "out", snapshot_spec;
    int max_iters_cli = 0;
    double tol_cli = 0.0;
    std::string format = "csv";

    CLI::App* solve_cmd = app.add_subcommand("solve", "run the transport solver");
    solve_cmd->add_option("--problem", problem_path, "problem file")->required();
    solve_cmd->add_option("--out", out_dir, "output directory");
    solve_cmd->add_option("--max-iters", max_iters_cli, "iteration cap override");
    solve_cmd->add_option("--tol", tol_cli, "tolerance scale override");
    solve_cmd->add_option("--snapshot-times", snapshot_spec,
                          "comma-separated times for plotdata/ snapshots");
    solve_cmd->add_option("--format", format, "csv (default) or json (adds a mirror)");

    CLI::App* check_cmd = app.add_subcommand("check", "feasibility audits");
    check_cmd->add_option("--problem", problem_path, "problem file")->required();

    CLI::App* pot_cmd = app.add_subcommand("potentials", "interface constants");
    pot_cmd->add_option("--problem", problem_path, "problem file")->required();

    CLI::App* info_cmd = app.add_subcommand("info", "problem and grid summary");
    info_cmd->add_option("--problem", problem_path, "problem file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed())
            return run_solve(problem_path, out_dir, max_iters_cli, tol_cli,
                             snapshot_spec, format == "json");
        if (check_cmd->parsed()) return run_check(problem_path);
        if (pot_cmd->parsed()) return run_potentials(problem_path);
        if (info_cmd->parsed()) return run_info(problem_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
