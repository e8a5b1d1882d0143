#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridflow/constraints.hpp"
#include "gridflow/potentials.hpp"
#include "gridflow/problem.hpp"

namespace gridflow {

struct SolverOverrides {
    std::optional<int> max_iters;
    std::optional<double> rel_tol;
    std::optional<double> tau_primal;
    std::optional<double> sigma_dual;
    std::optional<double> tolerance_scale;  // delta_j = scale * sqrt(rows_j)
    std::optional<double> projection_margin;
    // Absolute per-block radii, by block name.
    std::array<std::optional<double>, kBlockCount> block_tolerance{};

    BlockTolerances tolerances() const;
};

// A fully validated problem plus everything else the file carries.
struct ParsedProblem {
    TransportProblem problem;
    std::vector<int> nx;  // per edge, file value or the default 150
    int nt = kDefaultNt;
    SolverOverrides solver;
    std::map<std::string, PipeParams> pipes;  // optional, per edge id
};

// Reads and validates a problem file. Throws Error with kind Syntax,
// UnknownId, ModeMismatch, Invariant or Io; the message names the offending
// field or element.
ParsedProblem parse_problem(const std::string& path);
ParsedProblem parse_problem_json(const nlohmann::json& j);

// Canonical serialization; parse(serialize(p)) reproduces p exactly.
nlohmann::json serialize_problem(const ParsedProblem& parsed);

}  // namespace gridflow
