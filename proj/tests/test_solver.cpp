#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gridflow/solver.hpp"

using namespace gridflow;

namespace {

struct Setup {
    TransportProblem problem;
    GridSpec grid;
    Layout layout;
    EndpointData endpoint;
    ConstraintSystem system;
};

Setup make_setup(TransportProblem problem, int nx, int nt,
                 BlockTolerances tol = {}) {
    GridSpec grid = build_grid(problem, nx, nt);
    Layout layout(problem, grid);
    EndpointData endpoint = sample_endpoint_data(problem, grid);
    ConstraintSystem system = assemble_constraints(problem, grid, layout, endpoint, tol);
    return {std::move(problem), std::move(grid), std::move(layout),
            std::move(endpoint), std::move(system)};
}

}  // namespace

TEST_CASE("objective of constructed fields") {
    SUBCASE("stationary state costs nothing") {
        auto s = make_setup(fixtures::single_edge_problem(), 8, 4);
        std::vector<double> u(s.layout.size(), 0.0);
        for (int k = 0; k <= 4; ++k)
            for (int i = 0; i <= 8; ++i) u[s.layout.rho(0, i, k)] = 1.0;
        const auto obj = evaluate_objective(u, s.grid, s.layout, s.problem);
        CHECK_FALSE(obj.infeasible);
        CHECK(obj.value == doctest::Approx(0.0));
    }
    SUBCASE("uniform unit density with constant flux costs flux squared") {
        auto s = make_setup(fixtures::single_edge_problem(), 10, 5);
        const double c = 0.37;
        std::vector<double> u(s.layout.size(), 0.0);
        for (int k = 0; k <= 5; ++k)
            for (int i = 0; i <= 10; ++i) {
                u[s.layout.rho(0, i, k)] = 1.0;
                u[s.layout.flux(0, i, k)] = c;
            }
        const auto obj = evaluate_objective(u, s.grid, s.layout, s.problem);
        CHECK(obj.value == doctest::Approx(c * c).epsilon(1e-12));
    }
    SUBCASE("flux through vacuum is flagged infeasible") {
        auto s = make_setup(fixtures::single_edge_problem(), 4, 2);
        std::vector<double> u(s.layout.size(), 0.0);
        u[s.layout.flux(0, 2, 1)] = 0.5;
        const auto obj = evaluate_objective(u, s.grid, s.layout, s.problem);
        CHECK(obj.infeasible);
        CHECK(std::isinf(obj.value));
    }
}

TEST_CASE("degenerate stationary problem converges immediately") {
    auto problem = fixtures::single_edge_problem();
    auto s = make_setup(std::move(problem), 8, 1);
    SolverConfig config;
    config.max_iters = 2000;
    config.diagnostic_interval = 10;
    const auto result = solve(s.problem, s.grid, s.layout, s.endpoint, s.system, config);
    CHECK(result.converged);
    CHECK(result.objective.value <= 1e-8);
    const auto fields = unpack(s.layout, result.u);
    for (int i = 0; i <= 8; ++i)
        CHECK(std::abs(fields.flux[0][std::size_t(1) * 9 + i]) <= 1e-4);
}

TEST_CASE("degenerate storage problem keeps the vertex mass flat") {
    auto problem = fixtures::branching_problem(Coupling::Generalized);
    // same start and end: nothing should move, gamma stays at its endpoints
    problem.initial_density = {DensityProfile::constant(0.4),
                               DensityProfile::constant(0.0),
                               DensityProfile::constant(0.0)};
    problem.final_density = problem.initial_density;
    auto s = make_setup(std::move(problem), 6, 3);
    SolverConfig config;
    config.max_iters = 4000;
    config.diagnostic_interval = 20;
    const auto result = solve(s.problem, s.grid, s.layout, s.endpoint, s.system, config);
    CHECK(result.converged);
    CHECK(result.objective.value <= 1e-8);
    // the relaxation lets gamma drift within the endpoint-block slack
    const auto fields = unpack(s.layout, result.u);
    for (const auto& series : fields.gamma)
        for (double g : series) CHECK(std::abs(g) <= 1e-3);
}

TEST_CASE("translation on a single edge approximates the analytic cost") {
    // unit-mass block moved by 0.2 at unit horizon: squared distance 0.04
    auto problem = fixtures::single_edge_problem();
    problem.initial_density = {
        DensityProfile::indicator(0.15, 0.45, 1.0).normalize_mass(1.0)};
    problem.final_density = {
        DensityProfile::indicator(0.35, 0.65, 1.0).normalize_mass(1.0)};
    auto s = make_setup(std::move(problem), 40, 20);
    SolverConfig config;
    config.max_iters = 20000;
    const auto result = solve(s.problem, s.grid, s.layout, s.endpoint, s.system, config);
    CHECK(result.converged);
    for (std::size_t b = 0; b < kBlockCount; ++b)
        CHECK(result.residuals[b] <= s.system.blocks()[b].delta + 1e-12);
    // coarse grid: allow a generous band around 0.04
    CHECK(result.objective.value > 0.025);
    CHECK(result.objective.value < 0.055);

    // density slots stay essentially nonnegative (the prox clamps them)
    const auto fields = unpack(s.layout, result.u);
    double min_rho = 0.0;
    for (const auto& row : fields.rho)
        for (double v : row) min_rho = std::min(min_rho, v);
    CHECK(min_rho >= -1e-8);
}
