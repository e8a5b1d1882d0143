#include "gridflow/potentials.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "gridflow/errors.hpp"

namespace gridflow {

double edge_slope(const PipeParams& params) {
    if (!(params.friction > 0.0))
        throw Error(ErrorKind::Usage, "pipe friction must be positive");
    return 2.0 * params.diameter * params.gravity / params.friction *
           std::sin(params.inclination);
}

double entropy_prime(const PipeParams& params, double s) {
    if (!(params.friction > 0.0))
        throw Error(ErrorKind::Usage, "pipe friction must be positive");
    if (!(s > 0.0))
        throw Error(ErrorKind::Usage, "entropy derivative needs a positive density");
    const double prefactor = 2.0 * params.diameter * params.gas_constant *
                             params.temperature * params.compressibility /
                             params.friction;
    return prefactor * std::log(s);
}

PotentialSystem assemble_potential_system(const MetricGraph& graph,
                                          const std::vector<double>& slopes,
                                          const std::vector<double>& lengths) {
    const std::size_t m = graph.edges().size();
    const std::size_t n = graph.vertices().size();
    if (slopes.size() != m || lengths.size() != m)
        throw Error(ErrorKind::Usage, "need one slope and one length per edge");

    PotentialSystem sys;
    sys.edge_count = m;
    sys.vertex_count = n;
    const std::size_t cols = m + n;

    auto add_row = [&](double rhs) -> std::vector<double>& {
        sys.rows.emplace_back(cols, 0.0);
        sys.rhs.push_back(rhs);
        return sys.rows.back();
    };

    for (std::size_t e = 0; e < m; ++e) {
        const Edge& edge = graph.edges()[e];
        // d_e - Phi_start = 0
        auto& rs = add_row(0.0);
        rs[e] = 1.0;
        rs[m + graph.vertex_index(edge.start)] = -1.0;
        // d_e - Phi_end = -c_e L_e
        auto& re = add_row(-slopes[e] * lengths[e]);
        re[e] = 1.0;
        re[m + graph.vertex_index(edge.end)] = -1.0;
    }
    // sum of the integration constants vanishes
    auto& rn = add_row(0.0);
    for (std::size_t e = 0; e < m; ++e) rn[e] = 1.0;

    return sys;
}

namespace {

Eigen::MatrixXd to_matrix(const PotentialSystem& sys) {
    Eigen::MatrixXd A(sys.rows.size(), sys.edge_count + sys.vertex_count);
    for (std::size_t r = 0; r < sys.rows.size(); ++r)
        for (std::size_t c = 0; c < sys.rows[r].size(); ++c) A(r, c) = sys.rows[r][c];
    return A;
}

}  // namespace

PotentialSolution solve_potential_system(const MetricGraph& graph,
                                         const std::vector<double>& slopes,
                                         const std::vector<double>& lengths) {
    if (!is_simple_connected_acyclic(graph))
        throw Error(ErrorKind::Usage,
                    "interface constants are only determined on simple connected "
                    "acyclic graphs; run the diagnostics for other topologies");

    const PotentialSystem sys = assemble_potential_system(graph, slopes, lengths);
    const Eigen::MatrixXd A = to_matrix(sys);
    Eigen::VectorXd b(sys.rhs.size());
    for (std::size_t r = 0; r < sys.rhs.size(); ++r) b(r) = sys.rhs[r];

    // Square by the tree condition; full-pivot LU for a clean singularity
    // signal should the precondition ever be violated upstream.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < A.cols())
        throw Error(ErrorKind::Usage, "potential system is singular");
    const Eigen::VectorXd x = lu.solve(b);

    PotentialSolution out;
    out.d.resize(sys.edge_count);
    out.phi.resize(sys.vertex_count);
    for (std::size_t e = 0; e < sys.edge_count; ++e) out.d[e] = x(e);
    for (std::size_t v = 0; v < sys.vertex_count; ++v)
        out.phi[v] = x(sys.edge_count + v);
    return out;
}

PotentialDiagnostics analyze_potential_system(const MetricGraph& graph,
                                              const std::vector<double>& slopes,
                                              const std::vector<double>& lengths) {
    const PotentialSystem sys = assemble_potential_system(graph, slopes, lengths);
    const Eigen::MatrixXd A = to_matrix(sys);
    Eigen::VectorXd b(sys.rhs.size());
    for (std::size_t r = 0; r < sys.rhs.size(); ++r) b(r) = sys.rhs[r];

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    PotentialDiagnostics diag;
    diag.rows = A.rows();
    diag.cols = A.cols();
    diag.rank = std::size_t(lu.rank());

    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
    const double residual = (A * x - b).norm();
    diag.consistent = residual <= 1e-10 * std::max(1.0, b.norm());
    return diag;
}

}  // namespace gridflow
