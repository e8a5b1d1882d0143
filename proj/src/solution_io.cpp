#include "gridflow/solution_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gridflow/errors.hpp"

namespace gridflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Full round-trip precision for every numeric cell.
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_file(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    return out;
}

void write_field_csv(const fs::path& path, const GridSpec& grid, std::size_t e,
                     const std::vector<double>& field, int nx, int nt) {
    std::ofstream out = open_file(path);
    out << "t\\x";
    for (int i = 0; i <= nx; ++i) out << ',' << fmt(grid.space(e, i));
    out << '\n';
    for (int k = 0; k <= nt; ++k) {
        out << fmt(grid.time(k));
        for (int i = 0; i <= nx; ++i)
            out << ',' << fmt(field[std::size_t(k) * (nx + 1) + i]);
        out << '\n';
    }
}

void write_series_csv(const fs::path& path, const GridSpec& grid, const char* mass_name,
                      const char* flux_name, const std::vector<double>& mass,
                      const std::vector<double>& flux) {
    std::ofstream out = open_file(path);
    out << "t," << mass_name << ',' << flux_name << '\n';
    for (std::size_t k = 0; k < mass.size(); ++k)
        out << fmt(grid.time(int(k))) << ',' << fmt(mass[k]) << ',' << fmt(flux[k])
            << '\n';
}

}  // namespace

SolutionBundle make_bundle(const TransportProblem& problem, const GridSpec& grid,
                           const Layout& layout, const ConstraintSystem& system,
                           const SolveResult& result, double wall_time_s) {
    SolutionBundle bundle;
    bundle.problem = &problem;
    bundle.grid = &grid;
    bundle.layout = &layout;
    bundle.fields = unpack(layout, result.u);
    bundle.objective = result.objective;
    bundle.residuals = result.residuals;
    for (std::size_t b = 0; b < kBlockCount; ++b)
        bundle.deltas[b] = system.blocks()[b].delta;
    bundle.iterations = result.iterations;
    bundle.converged = result.converged;
    bundle.tau = result.tau;
    bundle.sigma = result.sigma;
    bundle.operator_norm = result.operator_norm;
    bundle.wall_time_s = wall_time_s;
    bundle.history = result.history;

    bundle.total_mass_per_time.assign(grid.nt + 1, 0.0);
    for (int k = 0; k <= grid.nt; ++k) {
        double acc = 0.0;
        for (std::size_t e = 0; e < layout.edge_count(); ++e)
            for (int i = 0; i <= layout.nx(e); ++i)
                acc += grid.edge[e].wx[i] *
                       bundle.fields.rho[e][std::size_t(k) * (layout.nx(e) + 1) + i];
        if (layout.has_vertex_storage())
            for (const auto& series : bundle.fields.gamma) acc += series[k];
        bundle.total_mass_per_time[k] = acc;
    }
    return bundle;
}

void write_solution(const SolutionBundle& bundle, const std::string& out_dir,
                    bool json_mirror, const std::vector<double>& snapshot_times) {
    const GridSpec& grid = *bundle.grid;
    const Layout& layout = *bundle.layout;
    const MetricGraph& g = bundle.problem->graph;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + out_dir + "': " + ec.message());
    const fs::path dir(out_dir);

    for (std::size_t e = 0; e < layout.edge_count(); ++e) {
        const std::string& id = g.edges()[e].id;
        write_field_csv(dir / ("rho_" + id + ".csv"), grid, e, bundle.fields.rho[e],
                        layout.nx(e), grid.nt);
        write_field_csv(dir / ("j_" + id + ".csv"), grid, e, bundle.fields.flux[e],
                        layout.nx(e), grid.nt);
    }

    if (layout.has_vertex_storage())
        for (std::size_t iv = 0; iv < layout.interior().size(); ++iv) {
            const std::string& id = g.vertices()[layout.interior()[iv]].id;
            write_series_csv(dir / ("vertex_" + id + ".csv"), grid, "gamma", "f",
                             bundle.fields.gamma[iv], bundle.fields.excess[iv]);
        }
    if (layout.has_ti_series()) {
        for (std::size_t is = 0; is < layout.sources().size(); ++is) {
            const std::string& id = g.vertices()[layout.sources()[is]].id;
            write_series_csv(dir / ("vertex_" + id + ".csv"), grid, "S", "s",
                             bundle.fields.supply_mass[is], bundle.fields.supply_flux[is]);
        }
        for (std::size_t id_ = 0; id_ < layout.sinks().size(); ++id_) {
            const std::string& id = g.vertices()[layout.sinks()[id_]].id;
            write_series_csv(dir / ("vertex_" + id + ".csv"), grid, "D", "d",
                             bundle.fields.demand_mass[id_], bundle.fields.demand_flux[id_]);
        }
    }

    {
        json summary;
        summary["objective"] = bundle.objective.infeasible
                                   ? json("inf")
                                   : json(bundle.objective.value);
        summary["objective_infeasible"] = bundle.objective.infeasible;
        json res = json::object(), del = json::object();
        for (std::size_t b = 0; b < kBlockCount; ++b) {
            res[kBlockNames[b]] = bundle.residuals[b];
            del[kBlockNames[b]] = bundle.deltas[b];
        }
        summary["residuals"] = res;
        summary["tolerances"] = del;
        summary["iterations"] = bundle.iterations;
        summary["converged"] = bundle.converged;
        summary["tau"] = bundle.tau;
        summary["sigma"] = bundle.sigma;
        summary["operator_norm"] = bundle.operator_norm;
        summary["wall_time_s"] = bundle.wall_time_s;
        summary["total_mass_per_time"] = bundle.total_mass_per_time;
        open_file(dir / "summary.json") << summary.dump(2) << '\n';
    }

    {
        std::ofstream out = open_file(dir / "convergence.csv");
        out << "iteration,objective,primal_change";
        for (std::size_t b = 0; b < kBlockCount; ++b) out << ",res_" << kBlockNames[b];
        out << '\n';
        for (const auto& rec : bundle.history) {
            out << rec.iteration << ',' << fmt(rec.objective) << ','
                << fmt(rec.primal_change);
            for (std::size_t b = 0; b < kBlockCount; ++b) out << ',' << fmt(rec.residuals[b]);
            out << '\n';
        }
    }

    if (!snapshot_times.empty()) {
        fs::create_directories(dir / "plotdata", ec);
        for (std::size_t n = 0; n < snapshot_times.size(); ++n) {
            const int k = std::min(
                grid.nt,
                std::max(0, int(std::lround(snapshot_times[n] / grid.dt))));
            std::ofstream out =
                open_file(dir / "plotdata" / ("snapshot_" + std::to_string(n) + ".csv"));
            out << "edge,x,t,rho\n";
            for (std::size_t e = 0; e < layout.edge_count(); ++e)
                for (int i = 0; i <= layout.nx(e); ++i)
                    out << g.edges()[e].id << ',' << fmt(grid.space(e, i)) << ','
                        << fmt(grid.time(k)) << ','
                        << fmt(bundle.fields.rho[e][std::size_t(k) * (layout.nx(e) + 1) + i])
                        << '\n';
        }
    }

    if (json_mirror) {
        json mirror;
        for (std::size_t e = 0; e < layout.edge_count(); ++e) {
            const std::string& id = g.edges()[e].id;
            mirror["edges"][id]["rho"] = bundle.fields.rho[e];
            mirror["edges"][id]["j"] = bundle.fields.flux[e];
            mirror["edges"][id]["nx"] = layout.nx(e);
        }
        if (layout.has_vertex_storage())
            for (std::size_t iv = 0; iv < layout.interior().size(); ++iv) {
                const std::string& id = g.vertices()[layout.interior()[iv]].id;
                mirror["vertices"][id]["gamma"] = bundle.fields.gamma[iv];
                mirror["vertices"][id]["f"] = bundle.fields.excess[iv];
            }
        if (layout.has_ti_series()) {
            for (std::size_t is = 0; is < layout.sources().size(); ++is) {
                const std::string& id = g.vertices()[layout.sources()[is]].id;
                mirror["vertices"][id]["S"] = bundle.fields.supply_mass[is];
                mirror["vertices"][id]["s"] = bundle.fields.supply_flux[is];
            }
            for (std::size_t id_ = 0; id_ < layout.sinks().size(); ++id_) {
                const std::string& id = g.vertices()[layout.sinks()[id_]].id;
                mirror["vertices"][id]["D"] = bundle.fields.demand_mass[id_];
                mirror["vertices"][id]["d"] = bundle.fields.demand_flux[id_];
            }
        }
        mirror["time_nodes"] = [&] {
            std::vector<double> t(grid.nt + 1);
            for (int k = 0; k <= grid.nt; ++k) t[k] = grid.time(k);
            return t;
        }();
        open_file(dir / "solution.json") << mirror.dump() << '\n';
    }
}

}  // namespace gridflow
