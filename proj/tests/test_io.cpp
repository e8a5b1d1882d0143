#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "gridflow/errors.hpp"
#include "gridflow/problem_io.hpp"
#include "gridflow/solution_io.hpp"
#include "gridflow/solver.hpp"

using namespace gridflow;
using nlohmann::json;

namespace {
const std::string kProblemDir = GRIDFLOW_PROBLEM_DIR;
}

TEST_CASE("shipped problem files parse to the expected instances") {
    SUBCASE("branching network") {
        const auto parsed = parse_problem(kProblemDir + "/branching.json");
        CHECK(parsed.problem.graph.edges().size() == 3);
        CHECK(parsed.problem.graph.vertices().size() == 4);
        CHECK(parsed.problem.coupling == Coupling::Classical);
        CHECK(parsed.problem.boundary == BoundaryMode::None);
        CHECK(parsed.nt == 75);
        CHECK(parsed.nx == std::vector<int>(3, 150));
        CHECK(total_mass(parsed.problem, Endpoint::Initial) ==
              doctest::Approx(0.4).epsilon(1e-13));
    }
    SUBCASE("diamond with ramp boundary fluxes") {
        const auto parsed = parse_problem(kProblemDir + "/inout_sym.json");
        CHECK(parsed.problem.graph.edges().size() == 4);
        CHECK(parsed.problem.boundary == BoundaryMode::TimeDependent);
        CHECK(parsed.problem.boundary_flux.at("v1").value(0.7) == doctest::Approx(0.7));
        CHECK(check_gmc(parsed.problem).balanced);
        CHECK(check_demand_bound(parsed.problem).feasible);
    }
    SUBCASE("all shipped files validate") {
        for (const char* name :
             {"branching.json", "branching_vertex.json", "inout_sym.json",
              "inout_asym.json", "translation.json", "inout_total.json",
              "potentials_tree.json", "infeasible_demand.json"}) {
            CAPTURE(name);
            CHECK_NOTHROW(parse_problem(kProblemDir + "/" + name));
        }
    }
}

TEST_CASE("parse errors carry distinct categories") {
    SUBCASE("unknown vertex in an edge") {
        json j = json::parse(R"({
            "graph": {
                "vertices": [{"id": "v1"}, {"id": "v2"}],
                "edges": [{"id": "e1", "from": "v1", "to": "vX"}]
            },
            "initial": {"edges": {}},
            "final": {"edges": {}}
        })");
        try {
            parse_problem_json(j);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::UnknownId);
            CHECK(std::string(e.what()).find("unknown vertex id") != std::string::npos);
        }
    }
    SUBCASE("unknown edge id in a density section") {
        json j = json::parse(R"({
            "graph": {
                "vertices": [{"id": "v1"}, {"id": "v2"}],
                "edges": [{"id": "e1", "from": "v1", "to": "v2"}]
            },
            "initial": {"edges": {"eX": {"shape": "constant", "value": 1.0}}},
            "final": {"edges": {}}
        })");
        try {
            parse_problem_json(j);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::UnknownId);
            CHECK(std::string(e.what()).find("eX") != std::string::npos);
        }
    }
    SUBCASE("missing section for the declared mode") {
        json j = json::parse(R"({
            "graph": {
                "vertices": [{"id": "v1", "kind": "source"}, {"id": "v2", "kind": "sink"}],
                "edges": [{"id": "e1", "from": "v1", "to": "v2"}]
            },
            "boundary": "time_dependent",
            "initial": {"edges": {}},
            "final": {"edges": {}}
        })");
        try {
            parse_problem_json(j);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Invariant);  // missing flux profiles
        }
    }
    SUBCASE("malformed file is a syntax error") {
        const std::string path = "bad_problem.json";
        std::ofstream(path) << "{ not json";
        try {
            parse_problem(path);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Syntax);
        }
        std::filesystem::remove(path);
    }
}

TEST_CASE("problem serialization round trip") {
    for (const char* name : {"branching.json", "branching_vertex.json",
                             "inout_sym.json", "inout_total.json",
                             "potentials_tree.json"}) {
        CAPTURE(name);
        const auto first = parse_problem(kProblemDir + "/" + name);
        const json dumped = serialize_problem(first);
        const auto second = parse_problem_json(dumped);
        CHECK(serialize_problem(second) == dumped);
    }
}

TEST_CASE("solution files") {
    auto problem = fixtures::branching_problem(Coupling::Generalized);
    const GridSpec grid = build_grid(problem, 10, 5);
    const Layout layout(problem, grid);
    const EndpointData endpoint = sample_endpoint_data(problem, grid);
    const ConstraintSystem system =
        assemble_constraints(problem, grid, layout, endpoint);
    SolverConfig config;
    config.max_iters = 400;
    config.diagnostic_interval = 50;
    const SolveResult result = solve(problem, grid, layout, endpoint, system, config);

    const std::string dir = "io_test_out";
    std::filesystem::remove_all(dir);
    const SolutionBundle bundle = make_bundle(problem, grid, layout, system, result, 0.1);
    write_solution(bundle, dir, true, {0.0, 0.5, 1.0});

    SUBCASE("expected file set exists") {
        for (const char* name :
             {"rho_e1.csv", "rho_e2.csv", "rho_e3.csv", "j_e1.csv", "j_e2.csv",
              "j_e3.csv", "vertex_v1.csv", "vertex_v2.csv", "summary.json",
              "convergence.csv", "solution.json", "plotdata/snapshot_0.csv",
              "plotdata/snapshot_2.csv"}) {
            CAPTURE(name);
            CHECK(std::filesystem::exists(std::filesystem::path(dir) / name));
        }
    }

    SUBCASE("snapshot tables match the grid and conserve the logged mass") {
        std::ifstream in(std::filesystem::path(dir) / "rho_e1.csv");
        REQUIRE(in.good());
        std::string header;
        std::getline(in, header);
        // header: coordinate label plus 11 space nodes
        CHECK(std::count(header.begin(), header.end(), ',') == 11);

        // integrate every row of every edge table and add the vertex masses
        std::vector<std::vector<std::vector<double>>> rows(3);
        for (int e = 0; e < 3; ++e) {
            std::ifstream fin(std::filesystem::path(dir) /
                              ("rho_e" + std::to_string(e + 1) + ".csv"));
            std::string line;
            std::getline(fin, line);  // coordinates
            while (std::getline(fin, line)) {
                std::vector<double> vals;
                std::stringstream ss(line);
                std::string cell;
                while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
                rows[e].push_back(vals);
            }
            REQUIRE(rows[e].size() == 6);
        }
        std::vector<std::vector<double>> gammas(4);
        for (int v = 0; v < 4; ++v) {
            std::ifstream fin(std::filesystem::path(dir) /
                              ("vertex_v" + std::to_string(v + 1) + ".csv"));
            std::string line;
            std::getline(fin, line);
            while (std::getline(fin, line)) {
                std::stringstream ss(line);
                std::string cell;
                std::getline(ss, cell, ',');
                std::getline(ss, cell, ',');
                gammas[v].push_back(std::stod(cell));
            }
        }
        for (int k = 0; k <= 5; ++k) {
            double mass = 0.0;
            for (int e = 0; e < 3; ++e)
                for (int i = 0; i <= 10; ++i)
                    mass += grid.edge[e].wx[i] * rows[e][k][i + 1];  // col 0 is t
            for (int v = 0; v < 4; ++v) mass += gammas[v][k];
            CHECK(mass == doctest::Approx(bundle.total_mass_per_time[k]).epsilon(1e-12));
        }
    }

    std::filesystem::remove_all(dir);
}
