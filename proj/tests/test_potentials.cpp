#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gridflow/errors.hpp"
#include "gridflow/potentials.hpp"

using namespace gridflow;

TEST_CASE("edge slope formula") {
    PipeParams params;
    params.diameter = 0.5;
    params.friction = 1.0;
    params.gravity = 9.81;

    SUBCASE("horizontal pipe") {
        params.inclination = 0.0;
        CHECK(edge_slope(params) == 0.0);
    }
    SUBCASE("vertical pipe") {
        params.inclination = M_PI / 2.0;
        CHECK(edge_slope(params) == doctest::Approx(9.81).epsilon(1e-12));
    }
    SUBCASE("sine symmetry") {
        params.inclination = 0.7;
        const double a = edge_slope(params);
        params.inclination = M_PI - 0.7;
        CHECK(edge_slope(params) == doctest::Approx(a).epsilon(1e-12));
    }
    SUBCASE("zero friction refused") {
        params.friction = 0.0;
        CHECK_THROWS_AS(edge_slope(params), Error);
    }
}

TEST_CASE("entropy derivative for the linear pressure law") {
    PipeParams params;
    params.diameter = 0.4;
    params.friction = 0.011;
    params.temperature = 283.15;
    params.compressibility = 0.9;
    const double prefactor = 2.0 * params.diameter * params.gas_constant *
                             params.temperature * params.compressibility /
                             params.friction;

    CHECK(entropy_prime(params, 1.0) == 0.0);
    const double f2 = entropy_prime(params, 2.0);
    const double f4 = entropy_prime(params, 4.0);
    CHECK(f4 - f2 == doctest::Approx(prefactor * std::log(2.0)).epsilon(1e-12));

    // prefactor scales linearly
    PipeParams scaled = params;
    scaled.diameter *= 3.0;
    CHECK(entropy_prime(scaled, 2.0) == doctest::Approx(3.0 * f2).epsilon(1e-12));

    CHECK_THROWS_AS(entropy_prime(params, 0.0), Error);
    CHECK_THROWS_AS(entropy_prime(params, -1.0), Error);
}

TEST_CASE("potential system assembly") {
    SUBCASE("tree with three edges prints seven equations") {
        const auto g = fixtures::branching_graph();
        const auto sys = assemble_potential_system(g, {1.0, 2.0, 3.0}, {1.0, 1.0, 1.0});
        CHECK(sys.rows.size() == 7);
        CHECK(sys.square());
        // unknown order d1 d2 d3 phi1..phi4; first two rows describe edge e1
        CHECK(sys.rows[0][0] == 1.0);   // d1
        CHECK(sys.rows[0][3] == -1.0);  // -phi(v1)
        CHECK(sys.rhs[0] == 0.0);
        CHECK(sys.rows[1][0] == 1.0);   // d1
        CHECK(sys.rows[1][4] == -1.0);  // -phi(v2)
        CHECK(sys.rhs[1] == doctest::Approx(-1.0));  // -c1 L1
        // last row is the normalization
        CHECK(sys.rows[6][0] == 1.0);
        CHECK(sys.rows[6][1] == 1.0);
        CHECK(sys.rows[6][2] == 1.0);
        CHECK(sys.rhs[6] == 0.0);
    }
    SUBCASE("single edge gives three equations in three unknowns") {
        MetricGraph g({{"v1", VertexKind::Interior}, {"v2", VertexKind::Interior}},
                      {{"e1", "v1", "v2", 2.0}});
        const auto sys = assemble_potential_system(g, {0.5}, {2.0});
        CHECK(sys.rows.size() == 3);
        CHECK(sys.square());
    }
    SUBCASE("cycle graph is overdetermined") {
        const auto sys = assemble_potential_system(fixtures::diamond_graph(),
                                                   {1.0, 1.0, 1.0, 1.0},
                                                   {1.0, 1.0, 1.0, 1.0});
        CHECK(sys.rows.size() == 9);
        CHECK_FALSE(sys.square());
        CHECK(sys.rows[0].size() == 8);
    }
}

TEST_CASE("interface constants on the example tree") {
    const auto g = fixtures::branching_graph();

    SUBCASE("reference values") {
        // c.L = (3, 5, 7) with unit lengths
        const auto sol = solve_potential_system(g, {3.0, 5.0, 7.0}, {1.0, 1.0, 1.0});
        CHECK(sol.d[0] == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(sol.d[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sol.d[2] == doctest::Approx(1.0).epsilon(1e-12));
        // nodal values follow from the edge relations
        CHECK(sol.phi[0] == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(sol.phi[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sol.phi[2] == doctest::Approx(6.0).epsilon(1e-12));
        CHECK(sol.phi[3] == doctest::Approx(8.0).epsilon(1e-12));
        // d1 carries -2/3 of the trunk drop
        CHECK(sol.d[0] == doctest::Approx(-(2.0 / 3.0) * 3.0));
    }
    SUBCASE("downstream constants ignore the branch parameters") {
        const auto base = solve_potential_system(g, {3.0, 5.0, 7.0}, {1.0, 1.0, 1.0});
        const auto perturbed =
            solve_potential_system(g, {3.0, 11.0, 0.25}, {1.0, 4.0, 9.0});
        CHECK(base.d[1] == doctest::Approx(perturbed.d[1]).epsilon(1e-12));
        CHECK(base.d[2] == doctest::Approx(perturbed.d[2]).epsilon(1e-12));
    }
    SUBCASE("homogeneous system has only the trivial solution") {
        const auto sol = solve_potential_system(g, {0.0, 0.0, 0.0}, {1.0, 2.0, 3.0});
        for (double d : sol.d) CHECK(d == doctest::Approx(0.0).epsilon(1e-14));
        for (double phi : sol.phi) CHECK(phi == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("solution properties") {
        const auto sol = solve_potential_system(g, {1.3, -0.4, 2.2}, {1.5, 0.7, 2.0});
        // constants sum to zero
        double sum = 0.0;
        for (double d : sol.d) sum += d;
        CHECK(std::abs(sum) <= 1e-12);
        // scaling all slopes scales the whole solution
        const auto scaled = solve_potential_system(g, {2.6, -0.8, 4.4}, {1.5, 0.7, 2.0});
        for (std::size_t e = 0; e < 3; ++e)
            CHECK(scaled.d[e] == doctest::Approx(2.0 * sol.d[e]).epsilon(1e-12));
        for (std::size_t v = 0; v < 4; ++v)
            CHECK(scaled.phi[v] == doctest::Approx(2.0 * sol.phi[v]).epsilon(1e-12));
        // residual of every assembled equation
        const auto sys = assemble_potential_system(g, {1.3, -0.4, 2.2}, {1.5, 0.7, 2.0});
        for (std::size_t r = 0; r < sys.rows.size(); ++r) {
            double acc = 0.0;
            for (std::size_t e = 0; e < 3; ++e) acc += sys.rows[r][e] * sol.d[e];
            for (std::size_t v = 0; v < 4; ++v) acc += sys.rows[r][3 + v] * sol.phi[v];
            CHECK(acc == doctest::Approx(sys.rhs[r]).epsilon(1e-12));
        }
    }
    SUBCASE("edge relabeling permutes the constants") {
        MetricGraph permuted({{"v1", VertexKind::Interior},
                              {"v2", VertexKind::Interior},
                              {"v3", VertexKind::Interior},
                              {"v4", VertexKind::Interior}},
                             {{"e2", "v2", "v3", 1.0},
                              {"e3", "v2", "v4", 1.0},
                              {"e1", "v1", "v2", 1.0}});
        const auto base = solve_potential_system(g, {3.0, 5.0, 7.0}, {1.0, 1.0, 1.0});
        const auto perm = solve_potential_system(permuted, {5.0, 7.0, 3.0}, {1.0, 1.0, 1.0});
        CHECK(perm.d[2] == doctest::Approx(base.d[0]).epsilon(1e-12));
        CHECK(perm.d[0] == doctest::Approx(base.d[1]).epsilon(1e-12));
        CHECK(perm.d[1] == doctest::Approx(base.d[2]).epsilon(1e-12));
    }
}

TEST_CASE("non-tree graphs are refused with diagnostics available") {
    const auto g = fixtures::diamond_graph();
    CHECK_THROWS_AS(
        solve_potential_system(g, {1.0, 1.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}), Error);
    const auto diag =
        analyze_potential_system(g, {1.0, 1.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0});
    CHECK(diag.rows == 9);
    CHECK(diag.cols == 8);
    CHECK(diag.rank <= 8);
}
