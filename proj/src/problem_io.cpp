#include "gridflow/problem_io.hpp"

#include <fstream>

#include "gridflow/errors.hpp"

namespace gridflow {

using nlohmann::json;

BlockTolerances SolverOverrides::tolerances() const {
    BlockTolerances tol;
    if (tolerance_scale) tol.scale = *tolerance_scale;
    tol.absolute = block_tolerance;
    return tol;
}

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        fail(ErrorKind::ModeMismatch, where + ": missing field '" + key + "'");
    if (!j[key].is_number())
        fail(ErrorKind::Syntax, where + ": field '" + key + "' must be a number");
    return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& key,
                           const std::string& where) {
    if (!j.contains(key))
        fail(ErrorKind::ModeMismatch, where + ": missing field '" + key + "'");
    if (!j[key].is_string())
        fail(ErrorKind::Syntax, where + ": field '" + key + "' must be a string");
    return j[key].get<std::string>();
}

DensityProfile parse_density(const json& j, const std::string& where) {
    if (!j.is_object()) fail(ErrorKind::Syntax, where + ": profile must be an object");
    const std::string shape = require_string(j, "shape", where);
    DensityProfile profile;
    if (shape == "constant") {
        profile = DensityProfile::constant(require_number(j, "value", where));
    } else if (shape == "indicator") {
        profile = DensityProfile::indicator(require_number(j, "a", where),
                                            require_number(j, "b", where),
                                            require_number(j, "height", where));
    } else if (shape == "gaussian") {
        profile = DensityProfile::gaussian(require_number(j, "center", where),
                                           require_number(j, "width", where),
                                           require_number(j, "scale", where));
    } else if (shape == "samples") {
        if (!j.contains("values") || !j["values"].is_array())
            fail(ErrorKind::Syntax, where + ": samples need a 'values' array");
        profile = DensityProfile::samples(j["values"].get<std::vector<double>>());
    } else {
        fail(ErrorKind::Syntax, where + ": unknown density shape '" + shape + "'");
    }
    if (j.contains("normalize_mass"))
        profile.normalize_mass(require_number(j, "normalize_mass", where));
    return profile;
}

json serialize_density(const DensityProfile& p) {
    json j;
    switch (p.shape()) {
        case DensityProfile::Shape::Constant:
            j["shape"] = "constant";
            j["value"] = p.param_a();
            break;
        case DensityProfile::Shape::Indicator:
            j["shape"] = "indicator";
            j["a"] = p.param_a();
            j["b"] = p.param_b();
            j["height"] = p.param_c();
            break;
        case DensityProfile::Shape::Gaussian:
            j["shape"] = "gaussian";
            j["center"] = p.param_a();
            j["width"] = p.param_b();
            j["scale"] = p.param_c();
            break;
        case DensityProfile::Shape::Samples:
            j["shape"] = "samples";
            j["values"] = p.sample_values();
            break;
    }
    if (p.normalize_target()) j["normalize_mass"] = *p.normalize_target();
    return j;
}

FluxProfile parse_flux(const json& j, const std::string& where) {
    if (!j.is_object()) fail(ErrorKind::Syntax, where + ": profile must be an object");
    const std::string shape = require_string(j, "shape", where);
    if (shape == "zero") return FluxProfile::zero();
    if (shape == "constant") return FluxProfile::constant(require_number(j, "value", where));
    if (shape == "linear") return FluxProfile::linear(require_number(j, "slope", where));
    fail(ErrorKind::Syntax, where + ": unknown flux shape '" + shape + "'");
}

json serialize_flux(const FluxProfile& p) {
    json j;
    switch (p.shape()) {
        case FluxProfile::Shape::Zero:
            j["shape"] = "zero";
            break;
        case FluxProfile::Shape::Constant:
            j["shape"] = "constant";
            j["value"] = p.param();
            break;
        case FluxProfile::Shape::Linear:
            j["shape"] = "linear";
            j["slope"] = p.param();
            break;
    }
    return j;
}

VertexKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "interior") return VertexKind::Interior;
    if (s == "source") return VertexKind::Source;
    if (s == "sink") return VertexKind::Sink;
    fail(ErrorKind::Syntax, where + ": vertex kind must be interior, source or sink");
}

int block_index(const std::string& name) {
    for (std::size_t b = 0; b < kBlockCount; ++b)
        if (name == kBlockNames[b]) return int(b);
    return -1;
}

}  // namespace

ParsedProblem parse_problem_json(const json& root) {
    if (!root.is_object()) fail(ErrorKind::Syntax, "problem file must be a JSON object");

    ParsedProblem parsed;
    TransportProblem& problem = parsed.problem;

    // meta
    problem.horizon = 1.0;
    problem.exponent = 2.0;
    parsed.nt = kDefaultNt;
    if (root.contains("meta")) {
        const json& meta = root["meta"];
        if (meta.contains("T")) problem.horizon = require_number(meta, "T", "meta");
        if (meta.contains("p")) problem.exponent = require_number(meta, "p", "meta");
        if (meta.contains("Nt")) parsed.nt = int(require_number(meta, "Nt", "meta"));
    }

    // graph
    if (!root.contains("graph"))
        fail(ErrorKind::ModeMismatch, "missing 'graph' section");
    const json& jg = root["graph"];
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    if (!jg.contains("vertices") || !jg["vertices"].is_array())
        fail(ErrorKind::ModeMismatch, "graph: missing 'vertices' array");
    if (!jg.contains("edges") || !jg["edges"].is_array())
        fail(ErrorKind::ModeMismatch, "graph: missing 'edges' array");
    for (const json& jv : jg["vertices"]) {
        Vertex v;
        v.id = require_string(jv, "id", "vertex");
        v.kind = jv.contains("kind")
                     ? parse_kind(require_string(jv, "kind", "vertex"), "vertex '" + v.id + "'")
                     : VertexKind::Interior;
        vertices.push_back(v);
    }
    for (const json& je : jg["edges"]) {
        Edge e;
        e.id = require_string(je, "id", "edge");
        e.start = require_string(je, "from", "edge '" + e.id + "'");
        e.end = require_string(je, "to", "edge '" + e.id + "'");
        e.length = je.contains("length") ? require_number(je, "length", "edge '" + e.id + "'")
                                         : 1.0;
        edges.push_back(e);
        parsed.nx.push_back(je.contains("Nx")
                                ? int(require_number(je, "Nx", "edge '" + e.id + "'"))
                                : kDefaultNx);
    }
    problem.graph = MetricGraph(std::move(vertices), std::move(edges));
    for (const auto& e : problem.graph.edges()) {
        if (!problem.graph.has_vertex(e.start))
            fail(ErrorKind::UnknownId,
                 "edge '" + e.id + "': unknown vertex id '" + e.start + "'");
        if (!problem.graph.has_vertex(e.end))
            fail(ErrorKind::UnknownId,
                 "edge '" + e.id + "': unknown vertex id '" + e.end + "'");
    }

    // modes
    const std::string coupling =
        root.contains("coupling") ? root["coupling"].get<std::string>() : "classical";
    if (coupling == "classical")
        problem.coupling = Coupling::Classical;
    else if (coupling == "generalized")
        problem.coupling = Coupling::Generalized;
    else
        fail(ErrorKind::Syntax, "coupling must be 'classical' or 'generalized'");

    const std::string boundary =
        root.contains("boundary") ? root["boundary"].get<std::string>() : "none";
    if (boundary == "none")
        problem.boundary = BoundaryMode::None;
    else if (boundary == "time_dependent")
        problem.boundary = BoundaryMode::TimeDependent;
    else if (boundary == "time_independent")
        problem.boundary = BoundaryMode::TimeIndependent;
    else
        fail(ErrorKind::Syntax,
             "boundary must be 'none', 'time_dependent' or 'time_independent'");

    // endpoint data; edges without an entry default to the zero profile
    auto parse_endpoint = [&](const char* section, std::vector<DensityProfile>& densities,
                              std::map<std::string, double>& vertex_masses) {
        densities.assign(problem.graph.edges().size(), DensityProfile::constant(0.0));
        if (!root.contains(section))
            fail(ErrorKind::ModeMismatch, std::string("missing '") + section + "' section");
        const json& js = root[section];
        if (js.contains("edges")) {
            for (const auto& [id, jp] : js["edges"].items()) {
                if (!problem.graph.has_edge(id))
                    fail(ErrorKind::UnknownId,
                         std::string(section) + ".edges: unknown edge id '" + id + "'");
                densities[problem.graph.edge_index(id)] =
                    parse_density(jp, std::string(section) + ".edges." + id);
            }
        }
        if (js.contains("vertices")) {
            for (const auto& [id, jv] : js["vertices"].items()) {
                if (!problem.graph.has_vertex(id))
                    fail(ErrorKind::UnknownId,
                         std::string(section) + ".vertices: unknown vertex id '" + id + "'");
                if (!jv.is_number())
                    fail(ErrorKind::Syntax,
                         std::string(section) + ".vertices." + id + " must be a number");
                vertex_masses[id] = jv.get<double>();
            }
        }
    };
    parse_endpoint("initial", problem.initial_density, problem.initial_vertex_mass);
    parse_endpoint("final", problem.final_density, problem.final_vertex_mass);

    if (root.contains("fluxes")) {
        for (const auto& [id, jp] : root["fluxes"].items()) {
            if (!problem.graph.has_vertex(id))
                fail(ErrorKind::UnknownId, "fluxes: unknown vertex id '" + id + "'");
            problem.boundary_flux[id] = parse_flux(jp, "fluxes." + id);
        }
    }
    if (root.contains("ti_totals")) {
        for (const auto& [id, jv] : root["ti_totals"].items()) {
            if (!problem.graph.has_vertex(id))
                fail(ErrorKind::UnknownId, "ti_totals: unknown vertex id '" + id + "'");
            if (!jv.is_number())
                fail(ErrorKind::Syntax, "ti_totals." + id + " must be a number");
            problem.boundary_total[id] = jv.get<double>();
        }
    }

    if (root.contains("pipes")) {
        for (const auto& [id, jp] : root["pipes"].items()) {
            if (!problem.graph.has_edge(id))
                fail(ErrorKind::UnknownId, "pipes: unknown edge id '" + id + "'");
            PipeParams params;
            const std::string where = "pipes." + id;
            params.friction = require_number(jp, "friction", where);
            params.diameter = require_number(jp, "diameter", where);
            params.inclination = require_number(jp, "inclination", where);
            if (jp.contains("gravity")) params.gravity = jp["gravity"].get<double>();
            if (jp.contains("gas_constant"))
                params.gas_constant = jp["gas_constant"].get<double>();
            if (jp.contains("temperature"))
                params.temperature = jp["temperature"].get<double>();
            if (jp.contains("compressibility"))
                params.compressibility = jp["compressibility"].get<double>();
            parsed.pipes[id] = params;
        }
    }

    if (root.contains("solver")) {
        const json& js = root["solver"];
        if (js.contains("max_iters")) parsed.solver.max_iters = js["max_iters"].get<int>();
        if (js.contains("rel_tol")) parsed.solver.rel_tol = js["rel_tol"].get<double>();
        if (js.contains("tau_primal"))
            parsed.solver.tau_primal = js["tau_primal"].get<double>();
        if (js.contains("sigma_dual"))
            parsed.solver.sigma_dual = js["sigma_dual"].get<double>();
        if (js.contains("tolerance_scale"))
            parsed.solver.tolerance_scale = js["tolerance_scale"].get<double>();
        if (js.contains("projection_margin"))
            parsed.solver.projection_margin = js["projection_margin"].get<double>();
        if (js.contains("tolerances")) {
            for (const auto& [name, jv] : js["tolerances"].items()) {
                const int b = block_index(name);
                if (b < 0)
                    fail(ErrorKind::Syntax, "solver.tolerances: unknown block '" + name + "'");
                parsed.solver.block_tolerance[b] = jv.get<double>();
            }
        }
    }

    // validation gate: structural graph checks first, then problem checks
    const ValidationReport graph_report = validate(problem.graph);
    if (!graph_report.ok)
        fail(ErrorKind::Invariant, "graph: " + graph_report.violations.front().message);
    const ValidationReport problem_report = validate_problem(problem);
    if (!problem_report.ok)
        fail(ErrorKind::Invariant, problem_report.violations.front().message);

    return parsed;
}

ParsedProblem parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open problem file '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Syntax, "syntax error in '" + path + "': " + e.what());
    }
    return parse_problem_json(root);
}

json serialize_problem(const ParsedProblem& parsed) {
    const TransportProblem& problem = parsed.problem;
    json root;
    root["meta"] = {{"T", problem.horizon}, {"p", problem.exponent}, {"Nt", parsed.nt}};

    json jverts = json::array();
    for (const auto& v : problem.graph.vertices())
        jverts.push_back({{"id", v.id}, {"kind", to_string(v.kind)}});
    json jedges = json::array();
    for (std::size_t e = 0; e < problem.graph.edges().size(); ++e) {
        const Edge& edge = problem.graph.edges()[e];
        jedges.push_back({{"id", edge.id},
                          {"from", edge.start},
                          {"to", edge.end},
                          {"length", edge.length},
                          {"Nx", parsed.nx[e]}});
    }
    root["graph"] = {{"vertices", jverts}, {"edges", jedges}};
    root["coupling"] = to_string(problem.coupling);
    root["boundary"] = to_string(problem.boundary);

    auto endpoint_json = [&](const std::vector<DensityProfile>& densities,
                             const std::map<std::string, double>& masses) {
        json js;
        json je = json::object();
        for (std::size_t e = 0; e < densities.size(); ++e)
            je[problem.graph.edges()[e].id] = serialize_density(densities[e]);
        js["edges"] = je;
        if (!masses.empty()) {
            json jv = json::object();
            for (const auto& [id, m] : masses) jv[id] = m;
            js["vertices"] = jv;
        }
        return js;
    };
    root["initial"] = endpoint_json(problem.initial_density, problem.initial_vertex_mass);
    root["final"] = endpoint_json(problem.final_density, problem.final_vertex_mass);

    if (!problem.boundary_flux.empty()) {
        json jf = json::object();
        for (const auto& [id, flux] : problem.boundary_flux) jf[id] = serialize_flux(flux);
        root["fluxes"] = jf;
    }
    if (!problem.boundary_total.empty()) {
        json jt = json::object();
        for (const auto& [id, total] : problem.boundary_total) jt[id] = total;
        root["ti_totals"] = jt;
    }
    if (!parsed.pipes.empty()) {
        json jp = json::object();
        for (const auto& [id, params] : parsed.pipes)
            jp[id] = {{"friction", params.friction},
                      {"diameter", params.diameter},
                      {"inclination", params.inclination},
                      {"gravity", params.gravity},
                      {"gas_constant", params.gas_constant},
                      {"temperature", params.temperature},
                      {"compressibility", params.compressibility}};
        root["pipes"] = jp;
    }

    json js = json::object();
    const SolverOverrides& so = parsed.solver;
    if (so.max_iters) js["max_iters"] = *so.max_iters;
    if (so.rel_tol) js["rel_tol"] = *so.rel_tol;
    if (so.tau_primal) js["tau_primal"] = *so.tau_primal;
    if (so.sigma_dual) js["sigma_dual"] = *so.sigma_dual;
    if (so.tolerance_scale) js["tolerance_scale"] = *so.tolerance_scale;
    if (so.projection_margin) js["projection_margin"] = *so.projection_margin;
    json jt = json::object();
    for (std::size_t b = 0; b < kBlockCount; ++b)
        if (so.block_tolerance[b]) jt[kBlockNames[b]] = *so.block_tolerance[b];
    if (!jt.empty()) js["tolerances"] = jt;
    if (!js.empty()) root["solver"] = js;

    return root;
}

}  // namespace gridflow
