#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridflow/graph.hpp"
#include "gridflow/profiles.hpp"

namespace gridflow {

enum class Coupling { Classical, Generalized };
enum class BoundaryMode { None, TimeDependent, TimeIndependent };

const char* to_string(Coupling c);
const char* to_string(BoundaryMode b);

enum class Endpoint { Initial, Final };

// One transport task: graph, mode flags, endpoint densities, boundary data.
// Edge-indexed vectors follow the graph's edge declaration order; vertex data
// is keyed by vertex id.
struct TransportProblem {
    MetricGraph graph;
    double horizon = 1.0;   // T
    double exponent = 2.0;  // p
    Coupling coupling = Coupling::Classical;
    BoundaryMode boundary = BoundaryMode::None;

    std::vector<DensityProfile> initial_density;  // per edge
    std::vector<DensityProfile> final_density;    // per edge

    // Generalized coupling only: storage at interior vertices.
    std::map<std::string, double> initial_vertex_mass;  // gamma at t = 0
    std::map<std::string, double> final_vertex_mass;    // gamma at t = T

    // Time-dependent boundary data: flux magnitude profiles per boundary
    // vertex (|s^G| at sources, d^G at sinks).
    std::map<std::string, FluxProfile> boundary_flux;

    // Time-independent boundary data: totals per boundary vertex
    // (|S^G| at sources, D^G at sinks).
    std::map<std::string, double> boundary_total;

    double vertex_mass(Endpoint which, const std::string& id) const;
};

// Mode/section consistency plus per-profile well-formedness. Assumes the
// graph itself passed validate().
ValidationReport validate_problem(const TransportProblem& problem);

// Mass held by the network itself (pipes plus interior storage when the
// coupling models it) at one endpoint. Closed form per profile shape.
double total_mass(const TransportProblem& problem, Endpoint which);

// Sum over sources of |S^G| (TD: integral of the magnitude profile over
// [0, T]; TI: the given total). Zero without boundary vertices.
double total_supply(const TransportProblem& problem);

// Sum over sinks of D^G.
double total_demand(const TransportProblem& problem);

// Remaining supply S(t) at a source, or delivered demand D(t) at a sink.
// Requires time-dependent boundary data. Throws Error(Usage) on an interior
// vertex or when boundary data is absent.
double boundary_mass_profile(const TransportProblem& problem,
                             const std::string& vertex_id, double t);

struct MassBalanceReport {
    double lhs = 0.0;      // initial network mass + total supply
    double rhs = 0.0;      // final network mass + total demand
    bool balanced = false;
    double slack = 0.0;    // |lhs - rhs|
};

// Conservation audit at t = T: the mass entering the books must equal the
// mass leaving them. Tolerance 1e-10 relative, since endpoint data is
// analytic and only rounding error is admissible.
MassBalanceReport check_gmc(const TransportProblem& problem);

struct DemandBoundReport {
    double bound = 0.0;    // initial stored mass + total supply
    double demand = 0.0;   // total accumulated demand
    bool feasible = false;
    // Time-dependent mode only: first sample time where the running bound
    // fails, if any.
    std::optional<double> first_violation_time;
};

// Upper bound for the accumulated demand. For time-dependent data the
// running bound is additionally sampled at 100 points in [0, T].
// Throws Error(Usage) when the problem has no boundary vertices.
DemandBoundReport check_demand_bound(const TransportProblem& problem);

}  // namespace gridflow
