#include "gridflow/problem.hpp"

#include <cmath>

#include "gridflow/errors.hpp"

namespace gridflow {

const char* to_string(Coupling c) {
    return c == Coupling::Classical ? "classical" : "generalized";
}

const char* to_string(BoundaryMode b) {
    switch (b) {
        case BoundaryMode::None: return "none";
        case BoundaryMode::TimeDependent: return "time_dependent";
        case BoundaryMode::TimeIndependent: return "time_independent";
    }
    return "?";
}

double TransportProblem::vertex_mass(Endpoint which, const std::string& id) const {
    const auto& table = which == Endpoint::Initial ? initial_vertex_mass : final_vertex_mass;
    auto it = table.find(id);
    return it == table.end() ? 0.0 : it->second;
}

ValidationReport validate_problem(const TransportProblem& problem) {
    ValidationReport report;
    auto add = [&](const std::string& code, const std::string& element,
                   const std::string& message) {
        report.ok = false;
        report.violations.push_back({code, element, message});
    };

    const auto& g = problem.graph;

    if (!(problem.horizon > 0.0)) add("horizon", "", "horizon T must be positive");
    if (!(problem.exponent >= 1.0)) add("exponent", "", "exponent p must be >= 1");

    if (problem.initial_density.size() != g.edges().size() ||
        problem.final_density.size() != g.edges().size()) {
        add("density_count", "", "need one initial and one final density per edge");
        return report;
    }

    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const double L = g.edges()[e].length;
        for (auto which : {Endpoint::Initial, Endpoint::Final}) {
            const auto& prof = which == Endpoint::Initial ? problem.initial_density[e]
                                                          : problem.final_density[e];
            const std::string msg = prof.check(L);
            if (!msg.empty()) add("density_profile", g.edges()[e].id, msg);
        }
    }

    const std::size_t n_boundary = g.boundary_count();
    if (problem.boundary == BoundaryMode::None && n_boundary > 0)
        add("mode", "", "boundary mode 'none' but the graph declares source/sink vertices");
    if (problem.boundary != BoundaryMode::None && n_boundary == 0)
        add("mode", "", "boundary conditions requested but no source/sink vertex declared");

    if (problem.coupling == Coupling::Classical &&
        (!problem.initial_vertex_mass.empty() || !problem.final_vertex_mass.empty()))
        add("mode", "", "classical coupling stores no vertex mass; remove gamma data");

    auto check_vertex_key = [&](const std::map<std::string, double>& table,
                                const char* what) {
        for (const auto& [id, value] : table) {
            if (!g.has_vertex(id)) {
                add("unknown_vertex", id, std::string(what) + " refers to unknown vertex '" + id + "'");
                continue;
            }
            if (g.vertex(id).kind != VertexKind::Interior)
                add("mode", id, std::string(what) + " only applies to interior vertices");
            if (value < 0.0) add("negative_mass", id, std::string(what) + " is negative");
        }
    };
    check_vertex_key(problem.initial_vertex_mass, "initial vertex mass");
    check_vertex_key(problem.final_vertex_mass, "final vertex mass");

    if (problem.boundary == BoundaryMode::TimeDependent) {
        if (!problem.boundary_total.empty())
            add("mode", "", "ti_totals section is only valid for time_independent boundary");
        for (const auto& v : g.vertices()) {
            if (v.kind == VertexKind::Interior) continue;
            auto it = problem.boundary_flux.find(v.id);
            if (it == problem.boundary_flux.end()) {
                add("mode", v.id, "missing flux profile for boundary vertex '" + v.id + "'");
                continue;
            }
            const std::string msg = it->second.check(problem.horizon);
            if (!msg.empty()) add("flux_profile", v.id, msg);
        }
        for (const auto& [id, flux] : problem.boundary_flux) {
            (void)flux;
            if (!g.has_vertex(id))
                add("unknown_vertex", id, "flux profile refers to unknown vertex '" + id + "'");
            else if (g.vertex(id).kind == VertexKind::Interior)
                add("mode", id, "flux profile declared for interior vertex '" + id + "'");
        }
    } else if (problem.boundary == BoundaryMode::TimeIndependent) {
        if (!problem.boundary_flux.empty())
            add("mode", "", "fluxes section is only valid for time_dependent boundary");
        for (const auto& v : g.vertices()) {
            if (v.kind == VertexKind::Interior) continue;
            auto it = problem.boundary_total.find(v.id);
            if (it == problem.boundary_total.end())
                add("mode", v.id, "missing supply/demand total for boundary vertex '" + v.id + "'");
            else if (it->second < 0.0)
                add("negative_mass", v.id, "supply/demand totals are magnitudes and must be >= 0");
        }
        for (const auto& [id, total] : problem.boundary_total) {
            (void)total;
            if (!g.has_vertex(id))
                add("unknown_vertex", id, "total refers to unknown vertex '" + id + "'");
            else if (g.vertex(id).kind == VertexKind::Interior)
                add("mode", id, "total declared for interior vertex '" + id + "'");
        }
    } else {
        if (!problem.boundary_flux.empty() || !problem.boundary_total.empty())
            add("mode", "", "boundary data present but boundary mode is 'none'");
    }

    return report;
}

double total_mass(const TransportProblem& problem, Endpoint which) {
    const auto& g = problem.graph;
    double acc = 0.0;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const auto& prof = which == Endpoint::Initial ? problem.initial_density[e]
                                                      : problem.final_density[e];
        acc += prof.mass(g.edges()[e].length);
    }
    if (problem.coupling == Coupling::Generalized) {
        for (std::size_t vi : g.interior_vertices())
            acc += problem.vertex_mass(which, g.vertices()[vi].id);
    }
    return acc;
}

double total_supply(const TransportProblem& problem) {
    const auto& g = problem.graph;
    double acc = 0.0;
    for (std::size_t vi : g.source_vertices()) {
        const std::string& id = g.vertices()[vi].id;
        if (problem.boundary == BoundaryMode::TimeDependent) {
            auto it = problem.boundary_flux.find(id);
            if (it != problem.boundary_flux.end())
                acc += it->second.integral(0.0, problem.horizon);
        } else if (problem.boundary == BoundaryMode::TimeIndependent) {
            auto it = problem.boundary_total.find(id);
            if (it != problem.boundary_total.end()) acc += it->second;
        }
    }
    return acc;
}

double total_demand(const TransportProblem& problem) {
    const auto& g = problem.graph;
    double acc = 0.0;
    for (std::size_t vi : g.sink_vertices()) {
        const std::string& id = g.vertices()[vi].id;
        if (problem.boundary == BoundaryMode::TimeDependent) {
            auto it = problem.boundary_flux.find(id);
            if (it != problem.boundary_flux.end())
                acc += it->second.integral(0.0, problem.horizon);
        } else if (problem.boundary == BoundaryMode::TimeIndependent) {
            auto it = problem.boundary_total.find(id);
            if (it != problem.boundary_total.end()) acc += it->second;
        }
    }
    return acc;
}

double boundary_mass_profile(const TransportProblem& problem,
                             const std::string& vertex_id, double t) {
    if (problem.boundary != BoundaryMode::TimeDependent)
        throw Error(ErrorKind::Usage,
                    "boundary mass profiles need time-dependent boundary data");
    const Vertex& v = problem.graph.vertex(vertex_id);
    if (v.kind == VertexKind::Interior)
        throw Error(ErrorKind::Usage,
                    "vertex '" + vertex_id + "' is interior, not a boundary vertex");
    auto it = problem.boundary_flux.find(vertex_id);
    const FluxProfile flux = it == problem.boundary_flux.end() ? FluxProfile::zero()
                                                               : it->second;
    if (v.kind == VertexKind::Source)
        return flux.integral(t, problem.horizon);  // remaining supply S(t)
    return flux.integral(0.0, t);                  // delivered demand D(t)
}

MassBalanceReport check_gmc(const TransportProblem& problem) {
    MassBalanceReport report;
    report.lhs = total_mass(problem, Endpoint::Initial) + total_supply(problem);
    report.rhs = total_mass(problem, Endpoint::Final) + total_demand(problem);
    report.slack = std::abs(report.lhs - report.rhs);
    report.balanced = report.slack <= 1e-10 * std::max(1.0, report.lhs);
    return report;
}

DemandBoundReport check_demand_bound(const TransportProblem& problem) {
    if (problem.boundary == BoundaryMode::None)
        throw Error(ErrorKind::Usage, "demand bound needs boundary vertices");

    DemandBoundReport report;
    report.bound = total_mass(problem, Endpoint::Initial) + total_supply(problem);
    report.demand = total_demand(problem);
    report.feasible = report.demand <= report.bound + 1e-10 * std::max(1.0, report.bound);

    if (problem.boundary == BoundaryMode::TimeDependent) {
        // Running form of the bound: supplied-so-far mass plus the initial
        // content must cover the demand delivered so far, at every time.
        const auto& g = problem.graph;
        const double base = total_mass(problem, Endpoint::Initial);
        const int samples = 100;
        for (int s = 1; s <= samples; ++s) {
            const double t = problem.horizon * double(s) / double(samples);
            double supplied = 0.0, demanded = 0.0;
            for (std::size_t vi : g.source_vertices()) {
                auto it = problem.boundary_flux.find(g.vertices()[vi].id);
                if (it != problem.boundary_flux.end()) supplied += it->second.integral(0.0, t);
            }
            for (std::size_t vi : g.sink_vertices()) {
                auto it = problem.boundary_flux.find(g.vertices()[vi].id);
                if (it != problem.boundary_flux.end()) demanded += it->second.integral(0.0, t);
            }
            const double bound_t = base + supplied;
            if (demanded > bound_t + 1e-10 * std::max(1.0, bound_t)) {
                report.feasible = false;
                report.first_violation_time = t;
                break;
            }
        }
    }
    return report;
}

}  // namespace gridflow
