// Command-line front end: solve / residual / oracle / implicit / young / check.
// Exit codes: 0 success, 1 acceptance failure, 2 bad usage or config, 3
// runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "supinf/acceptance.hpp"
#include "supinf/aronsson.hpp"
#include "supinf/implicit1d.hpp"
#include "supinf/io.hpp"
#include "supinf/lp_solver.hpp"
#include "supinf/oracle1d.hpp"
#include "supinf/young.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace supinf;

namespace {

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config " + path);
    json j;
    is >> j;
    return j;
}

Grid grid_from(const json& cfg) {
    const json& g = cfg.at("grid");
    if (g.contains("ay"))
        return Grid::rectangle(g.at("ax"), g.at("bx"), g.at("mx"), g.at("ay"), g.at("by"),
                               g.at("my"));
    return Grid::interval(g.at("a"), g.at("b"), g.at("m"));
}

BoundaryData boundary_from(const json& cfg, const Grid& g) {
    const json& b = cfg.at("boundary");
    if (g.n == 1)
        return BoundaryData::clamped1d(b.at("A"), b.at("Ap"), b.at("B"), b.at("Bp"));
    return boundary_from_json(b);
}

SolverOptions solver_from(const json& cfg, std::uint64_t seed) {
    SolverOptions o;
    if (cfg.contains("solver")) {
        const json& s = cfg["solver"];
        o.M = s.value("M", o.M);
        o.eps = s.value("eps", o.eps);
        o.gtol = s.value("gtol", o.gtol);
        o.max_iterations = s.value("max_iterations", o.max_iterations);
        o.restarts = s.value("restarts", o.restarts);
    }
    o.seed = seed;
    return o;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open " + p.string());
    os << s;
}

int cmd_solve(const json& cfg, const fs::path& out, std::uint64_t seed) {
    Grid g = grid_from(cfg);
    BoundaryData bd = boundary_from(cfg, g);
    SupremandPtr H = make_supremand(cfg.value("supremand", std::string("smoothed-hessian-norm")), g.n);
    std::vector<double> schedule = cfg.value("schedule", std::vector<double>{4, 16, 64, 256});
    auto res = continuation(H, g, bd, schedule, solver_from(cfg, seed));

    write_function(res.limit(), (out / "solution.csv").string());
    std::string diag = "p,E_p,E_inf,grad_norm,iters,converged\n";
    for (const auto& st : res.steps)
        diag += fmt_double(st.p) + ',' + fmt_double(st.diagonal) + ',' +
                fmt_double(st.report.final_einf) + ',' + fmt_double(st.report.grad_norm) + ',' +
                std::to_string(st.report.iterations) + ',' + std::to_string(int(st.report.converged)) +
                '\n';
    write_text(out / "continuation.csv", diag);
    std::cout << "final E_inf = " << fmt_double(res.steps.back().report.final_einf) << "\n";
    return 0;
}

int cmd_residual(const json& cfg, const fs::path& out) {
    DiscreteFunction u = read_function(cfg.at("input"));
    SupremandPtr H = make_supremand(cfg.value("supremand", std::string("squared-hessian")), u.grid.n);
    auto res = aronsson_residuals(*H, u);
    write_residual_csv(res, (out / "residual.csv").string());
    std::cout << "max |contracted| = " << fmt_double(res.max_abs_contracted())
              << ", max |expanded| = " << fmt_double(res.max_abs_expanded()) << "\n";
    return 0;
}

int cmd_oracle(const json& cfg, const fs::path& out) {
    double a = cfg.at("a"), b = cfg.at("b");
    auto u = absolute_minimizer_pure(a, b, cfg.at("A"), cfg.at("Ap"), cfg.at("B"), cfg.at("Bp"));
    int m = cfg.value("m", 201);
    write_function(u.sample(Grid::interval(a, b, m)), (out / "oracle.csv").string());
    json j;
    j["sup_curvature"] = u.sup_curvature();
    j["breakpoints"] = u.breakpoints;
    j["curvature"] = u.curvature;
    write_text(out / "oracle.json", j.dump(2) + "\n");
    std::cout << "sup curvature = " << fmt_double(u.sup_curvature()) << "\n";
    return 0;
}

int cmd_implicit(const json& cfg, const fs::path& out) {
    auto prof = make_identity_profile();
    double a = cfg.value("a", 0.0), b = cfg.value("b", 1.0);
    double A = cfg.value("A", 0.0), Ap = cfg.value("Ap", 0.0);
    double B = cfg.value("B", 0.0), Bp = cfg.value("Bp", 0.0);
    double C;
    if (cfg.contains("C")) {
        C = cfg.at("C");
    } else {
        auto zero = [](double) { return 0.0; };
        C = energy_level_threshold(prof, a, b, zero, zero, zero) + 1.0;
    }
    auto sol = construct_bang_bang(prof, a, b, A, Ap, B, Bp, C, cfg.value("m", 401),
                                   cfg.value("sign0", 0));
    write_function(sol.u, (out / "implicit.csv").string());
    write_text(out / "implicit.json", bang_bang_json(sol));
    std::cout << "switches at " << fmt_double(sol.switches[0]) << ", "
              << fmt_double(sol.switches[1]) << "\n";
    return 0;
}

int cmd_young(const json& cfg, const fs::path& out) {
    DiscreteFunction u = read_function(cfg.at("input"));
    SupremandPtr H = make_supremand(cfg.value("supremand", std::string("squared-hessian")), u.grid.n);
    YoungOptions opts;
    opts.tol = cfg.value("tol", opts.tol);
    if (cfg.contains("step_multiples"))
        opts.step_multiples = cfg["step_multiples"].get<std::vector<int>>();
    auto rep = dsolution_criterion(*H, u, opts);
    write_criterion_csv(rep, (out / "criterion.csv").string());
    std::cout << "pass rate = " << fmt_double(rep.pass_rate()) << " over " << rep.admissible
              << " nodes\n";
    return 0;
}

int cmd_check() {
    auto results = acceptance::run_all();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << fmt_double(r.seconds)
                  << "s)  " << r.detail << "\n";
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"supremal functional toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 0;
    int jobs = 1;
    app.fallthrough();  // accept the global flags after a subcommand name
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--seed", seed, "RNG seed override");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker threads (reserved)");

    auto* s_solve = app.add_subcommand("solve", "variable-exponent continuation solve");
    auto* s_residual = app.add_subcommand("residual", "operator residuals of a nodal function");
    auto* s_oracle = app.add_subcommand("oracle", "closed-form 1D minimizer");
    auto* s_implicit = app.add_subcommand("implicit", "level-set two-switch construction");
    auto* s_young = app.add_subcommand("young", "difference-quotient solution criterion");
    auto* s_check = app.add_subcommand("check", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        json cfg = load_config(config_path);
        fs::path out(out_dir);
        fs::create_directories(out);
        if (s_check->parsed()) return cmd_check();
        if (s_solve->parsed()) return cmd_solve(cfg, out, seed);
        if (s_residual->parsed()) return cmd_residual(cfg, out);
        if (s_oracle->parsed()) return cmd_oracle(cfg, out);
        if (s_implicit->parsed()) return cmd_implicit(cfg, out);
        if (s_young->parsed()) return cmd_young(cfg, out);
        return 2;
    } catch (const contract_violation& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
