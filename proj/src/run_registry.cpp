#include "bosedyn/run_registry.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>

#include "bosedyn/bogoliubov_bounds.hpp"
#include "bosedyn/excitation.hpp"
#include "bosedyn/fluctuation_generator.hpp"
#include "bosedyn/hartree.hpp"
#include "bosedyn/lattice_hamiltonian.hpp"
#include "bosedyn/pair_dynamics.hpp"
#include "bosedyn/townes.hpp"

namespace bosedyn {

namespace fs = std::filesystem;

namespace {

double wall_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string iso_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

void append_registry(const std::string& path, const nlohmann::json& line) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) throw std::runtime_error("registry: cannot open " + path);
    ::flock(fd, LOCK_EX);
    const std::string s = line.dump() + "\n";
    const ssize_t written = ::write(fd, s.data(), s.size());
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (written != static_cast<ssize_t>(s.size()))
        throw std::runtime_error("registry: short write to " + path);
}

void write_json(const nlohmann::json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << doc.dump(2) << "\n";
}

SweepConfig single_run_config(const RunConfig& cfg) {
    // reuse the sweep plumbing for single-run commands
    SweepConfig s;
    const auto& g = cfg.parameters.at("grid");
    const auto& w = cfg.parameters.at("potential");
    const auto& in = cfg.parameters.at("initial");
    s.d = g.at("d").get<int>();
    s.grid_points = g.at("points").get<int>();
    s.box_length = g.at("box_length").get<double>();
    s.potential_name = w.at("name").get<std::string>();
    s.potential_amplitude = w.at("amplitude").get<double>();
    s.potential_width = w.at("width").get<double>();
    s.initial_width = in.at("width").get<double>();
    s.phi0 = in.at("phi0").get<std::string>();
    s.squeeze = in.at("squeeze").get<double>();
    return s;
}

nlohmann::json run_hartree(const RunConfig& cfg, const std::string& dir, bool limiting_nls) {
    const SweepConfig sc = single_run_config(cfg);
    PeriodicGrid grid(sc.d, sc.grid_points, sc.box_length);
    Potential w = make_potential_from_config(sc, grid);
    ComplexField u0 = make_initial_datum(sc, grid);
    const auto& ev = cfg.parameters.at("evolution");
    EvolveOptions opt;
    opt.sample_cadence = ev.at("sample_cadence").get<double>();
    opt.snapshot_cadence = ev.at("snapshot_cadence").get<double>();
    const double t_final = ev.at("t_final").get<double>();
    const double dt = ev.at("dt").get<double>();

    HartreeTrajectory traj;
    nlohmann::json summary;
    if (limiting_nls) {
        nls_evolve(u0, w.total_integral(), t_final, dt, &traj, opt);
        summary["coupling_a"] = w.total_integral();
    } else {
        const int N = cfg.scaling_N();
        const double beta = cfg.scaling_beta();
        auto wN = std::make_shared<ScaledPotential>(w, N, beta, grid);
        summary["resolution_warning"] = wN->resolution_warning();
        HartreeState hs{u0, 0.0, wN, 0.0};
        HartreeState end = hartree_evolve(hs, t_final, dt, &traj, opt);
        summary["phase_integral"] = end.phase_integral;
        const ConservedQuantities q = conserved_quantities(end);
        summary["final"] = {{"mass", q.mass}, {"energy", q.energy}, {"h1", q.h1},
                            {"h2", q.h2},    {"linf", q.linf}};
    }
    traj.export_csv(dir + "/trajectory.csv");
    traj.export_snapshots(dir + "/snapshots.bin");
    summary["series"] = {{"trajectory", {{"file", "trajectory.csv"},
                                         {"columns", {"t", "mass", "energy", "h1", "h2", "linf"}}}}};
    return summary;
}

nlohmann::json run_bogoliubov(const RunConfig& cfg, const std::string& dir) {
    const SweepConfig sc = single_run_config(cfg);
    PeriodicGrid grid(sc.d, sc.grid_points, sc.box_length);
    Potential w = make_potential_from_config(sc, grid);
    ComplexField u0 = make_initial_datum(sc, grid);
    const auto& ev = cfg.parameters.at("evolution");
    const double t_final = ev.at("t_final").get<double>();
    const double dt = ev.at("dt").get<double>();
    const int N = cfg.scaling_N();
    const double beta = cfg.scaling_beta();
    const int L = cfg.parameters.at("bogoliubov").at("modes").get<int>();

    auto wN = std::make_shared<ScaledPotential>(w, N, beta, grid);
    HartreeTrajectory traj;
    EvolveOptions opt;
    opt.sample_cadence = dt;
    opt.snapshot_cadence = dt;
    HartreeState hs{u0, 0.0, wN, 0.0};
    hartree_evolve(hs, t_final, dt, &traj, opt);

    ModeBasis basis(grid, L);
    KernelsAt kernels = [&](double t) {
        return build_generator_kernels(traj.interpolate(t), *wN, basis);
    };
    PairEvolveDiagnostics diag;
    DensityPair pair =
        evolve_dm(DensityPair::vacuum(L), kernels, 0.0, t_final, dt, basis, &diag);
    export_pair_csv(pair, dir + "/gamma.csv", dir + "/alpha.csv");
    export_diagnostics_csv(diag, dir + "/diagnostics.csv");

    nlohmann::json summary;
    summary["trace_gamma"] = std::real(pair.gamma.trace());
    summary["kinetic"] = kinetic_expectation(pair, basis);
    summary["purity_defect"] = purity_defect(pair);
    summary["hermiticity_defect"] = diag.max_hermiticity_defect;
    summary["series"] = {{"dm_diagnostics",
                          {{"file", "diagnostics.csv"},
                           {"columns", {"t", "trace_gamma", "kinetic", "purity_defect"}}}}};
    return summary;
}

nlohmann::json run_exact(const RunConfig& cfg, const std::string& dir) {
    const SweepConfig sc = single_run_config(cfg);
    if (sc.d != 1) throw std::invalid_argument("exact: d must be 1");
    PeriodicGrid grid(sc.d, sc.grid_points, sc.box_length);
    Potential w = make_potential_from_config(sc, grid);
    ComplexField u0 = make_initial_datum(sc, grid);
    const auto& ev = cfg.parameters.at("evolution");
    const double t_final = ev.at("t_final").get<double>();
    const double dt = ev.at("dt").get<double>();
    const double cadence = ev.at("sample_cadence").get<double>();
    const int N = cfg.scaling_N();
    const double beta = cfg.scaling_beta();

    ModeBasis modes(grid);
    auto wN = std::make_shared<ScaledPotential>(w, N, beta, grid);
    const Eigen::VectorXcd c0 = modes.coefficients(u0);
    BosonBasis tb = BosonBasis::truncated(modes.size(), N);
    FockVector psi = excitation_unmap(vacuum_state(tb), c0, N);
    ApplyFn HN = make_hn_apply(psi.basis, modes, *wN, N);

    Eigen::VectorXd kin(modes.size());
    for (int m = 0; m < modes.size(); ++m) kin[m] = 1.0 + modes.mode_ksq(m);

    std::ofstream out(dir + "/sectors.jsonl");
    const int steps = std::max(1, static_cast<int>(std::lround(t_final / cadence)));
    const double h = t_final / steps;
    double t = 0.0;
    auto dump = [&](const FockVector& v) {
        // sector decomposition relative to the initial condensate
        FockVector phi = excitation_map(v, c0);
        nlohmann::json line;
        line["time"] = t;
        line["sector_norms"] = phi.sector_norms2();
        line["number_expectation"] = number_expectation(phi);
        line["kinetic_expectation"] = dgamma_diag_expectation(phi, kin);
        out << line.dump() << "\n";
    };
    dump(psi);
    for (int s = 0; s < steps; ++s) {
        psi = exact_evolve(psi, HN, t, t + h, dt, true, 1e-12);
        t += h;
        dump(psi);
    }
    nlohmann::json summary;
    summary["final_norm"] = psi.norm();
    summary["series"] = {{"sectors", {{"file", "sectors.jsonl"}, {"columns", {"time"}}}}};
    return summary;
}

nlohmann::json run_sweep(const RunConfig& cfg, const std::string& dir) {
    const SweepConfig sc = cfg.sweep();
    const std::string kind = cfg.sweep_kind();
    nlohmann::json summary;
    summary["kind"] = kind;
    if (kind == "norm_error") {
        ScalingResult r = norm_error_vs_N(sc);
        write_sweep_csv(r.rows, dir + "/sweep.csv");
        write_scaling_csv(r, dir + "/scaling.csv", "err_norm2");
        summary["slope"] = r.fit.slope;
        summary["stderr"] = r.fit.stderr_;
        summary["r2"] = r.fit.r2;
        bool dec = true;
        for (std::size_t i = 1; i < r.table.size(); ++i)
            dec = dec && r.table[i].second < r.table[i - 1].second;
        summary["monotone_decreasing"] = dec;
        summary["series"] = {
            {"norm_error_vs_N", {{"file", "scaling.csv"}, {"columns", {"N", "err_norm2"}}}}};
    } else if (kind == "reduced_density") {
        ScalingResult r = reduced_density_error(sc);
        write_sweep_csv(r.rows, dir + "/sweep.csv");
        write_scaling_csv(r, dir + "/scaling.csv", "err_trace");
        summary["slope"] = r.fit.slope;
        summary["stderr"] = r.fit.stderr_;
        bool dec = true;
        for (std::size_t i = 1; i < r.table.size(); ++i)
            dec = dec && r.table[i].second < r.table[i - 1].second;
        summary["monotone_decreasing"] = dec;
        summary["series"] = {
            {"reduced_density_error", {{"file", "scaling.csv"}, {"columns", {"N", "err_trace"}}}}};
    } else if (kind == "dynamics_comparison") {
        ComparisonResult r = dynamics_comparison(sc);
        std::ofstream out(dir + "/comparison.csv");
        out << "N,M,err_full_vs_truncated,err_truncated_vs_quadratic,tail_mass\n";
        out.precision(17);
        bool dec1 = true, dec2 = true;
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            const auto& row = r.rows[i];
            out << row.N << "," << row.M << "," << row.err_full_vs_truncated << ","
                << row.err_truncated_vs_quadratic << "," << row.tail_mass << "\n";
            if (i > 0) {
                dec1 = dec1 && row.err_full_vs_truncated <= r.rows[i - 1].err_full_vs_truncated;
                dec2 = dec2 &&
                       row.err_truncated_vs_quadratic <= r.rows[i - 1].err_truncated_vs_quadratic;
            }
        }
        summary["err_full_vs_truncated_decreasing"] = dec1;
        summary["err_truncated_vs_quadratic_decreasing"] = dec2;
        summary["series"] = {{"dynamics_comparison",
                              {{"file", "comparison.csv"},
                               {"columns",
                                {"N", "M", "err_full_vs_truncated",
                                 "err_truncated_vs_quadratic", "tail_mass"}}}}};
    } else if (kind == "kernel_scaling") {
        ScalingResult r = kernel_scaling_sweep(sc);
        write_scaling_csv(r, dir + "/scaling.csv", "sobolev_hs2");
        summary["degenerate"] = r.degenerate;
        if (!r.degenerate) {
            summary["slope"] = r.fit.slope;
            summary["stderr"] = r.fit.stderr_;
            summary["contrast_slope"] = r.contrast_fit.slope;
        }
        summary["series"] = {{"kernel_scaling",
                              {{"file", "scaling.csv"},
                               {"columns", {"N", "sobolev_hs2", "raw_hs2"}}}}};
    } else {
        throw std::invalid_argument("sweep: unknown kind '" + kind + "'");
    }
    return summary;
}

nlohmann::json run_gn_constant(const RunConfig& cfg, const std::string& dir) {
    const auto& g = cfg.parameters.at("grid");
    PeriodicGrid grid(g.at("d").get<int>(), g.at("points").get<int>(),
                      g.at("box_length").get<double>());
    TownesSolution sol = townes_ground_state(grid);
    nlohmann::json summary;
    summary["a_star"] = sol.a_star;
    summary["residual"] = sol.residual;
    summary["flow_iterations"] = sol.flow_iterations;
    summary["newton_iterations"] = sol.newton_iterations;
    // radial profile along the box midline
    std::ofstream out(dir + "/profile.csv");
    out << "r,Q\n";
    out.precision(17);
    const int n = grid.points_per_axis();
    for (int i = n / 2; i < n; ++i)
        out << grid.coord(i) - grid.box_length() / 2.0 << ","
            << sol.Q[grid.flat(i, n / 2)].real() << "\n";
    summary["series"] = {{"townes_profile", {{"file", "profile.csv"}, {"columns", {"r", "Q"}}}}};
    return summary;
}

}  // namespace

std::string registry_path(const std::string& output_dir) {
    if (const char* env = std::getenv("BOSEDYN_REGISTRY")) return env;
    return output_dir + "/registry.jsonl";
}

RunRecord dispatch(const RunConfig& cfg) {
    RunRecord rec;
    rec.command = cfg.command;
    rec.run_id = cfg.run_id();
    rec.run_dir = cfg.output_dir + "/" + rec.run_id;
    fs::create_directories(rec.run_dir);

    const std::string started = iso_now();
    const double t0 = wall_seconds();
    nlohmann::json summary;
    try {
        switch (cfg.command) {
            case Command::hartree:
                summary = run_hartree(cfg, rec.run_dir, false);
                break;
            case Command::nls:
                summary = run_hartree(cfg, rec.run_dir, true);
                break;
            case Command::bogoliubov:
                summary = run_bogoliubov(cfg, rec.run_dir);
                break;
            case Command::exact:
                summary = run_exact(cfg, rec.run_dir);
                break;
            case Command::sweep:
                summary = run_sweep(cfg, rec.run_dir);
                break;
            case Command::gn_constant:
                summary = run_gn_constant(cfg, rec.run_dir);
                break;
            case Command::check: {
                const auto items = run_check_suite();
                bool all = true;
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& it : items) {
                    all = all && it.pass;
                    arr.push_back({{"name", it.name}, {"pass", it.pass}, {"value", it.value}});
                }
                summary["checks"] = arr;
                summary["all_pass"] = all;
                rec.exit_code = all ? 0 : 1;
                break;
            }
        }
    } catch (const DivergenceError& e) {
        rec.exit_code = 2;
        rec.message = e.what();
    } catch (const ResourceError& e) {
        rec.exit_code = 3;
        rec.message = std::string(e.what()) +
                      (e.suggestion.empty() ? "" : " (" + e.suggestion + ")");
    } catch (const TruncationError& e) {
        rec.exit_code = 3;
        rec.message = std::string(e.what()) + " (suggested truncation " +
                      std::to_string(e.suggested_m) + ")";
    } catch (const std::invalid_argument& e) {
        rec.exit_code = 1;
        rec.message = e.what();
    } catch (const std::domain_error& e) {
        rec.exit_code = 1;
        rec.message = e.what();
    }

    summary["run_id"] = rec.run_id;
    summary["command"] = command_to_string(cfg.command);
    if (!rec.message.empty()) summary["error"] = rec.message;
    write_json(summary, rec.run_dir + "/summary.json");
    {
        std::ofstream cfg_echo(rec.run_dir + "/config.json");
        nlohmann::json doc;
        doc["command"] = command_to_string(cfg.command);
        doc["parameters"] = cfg.parameters;
        doc["seed"] = cfg.seed;
        cfg_echo << doc.dump(2) << "\n";
    }
    rec.summary = summary;

    nlohmann::json line;
    line["run_id"] = rec.run_id;
    line["command"] = command_to_string(cfg.command);
    line["started"] = started;
    line["finished"] = iso_now();
    line["wall_seconds"] = wall_seconds() - t0;
    line["exit_code"] = rec.exit_code;
    line["run_dir"] = rec.run_dir;
    if (!rec.message.empty()) line["error"] = rec.message;
    append_registry(registry_path(cfg.output_dir), line);
    return rec;
}

void emit_plotdata(const std::string& run_dir, const std::string& series,
                   const std::string& out_csv) {
    std::ifstream in(run_dir + "/summary.json");
    if (!in) throw std::runtime_error("emit_plotdata: no summary.json in " + run_dir);
    nlohmann::json summary;
    in >> summary;
    if (!summary.contains("series") || !summary["series"].contains(series)) {
        std::string names;
        if (summary.contains("series"))
            for (auto it = summary["series"].begin(); it != summary["series"].end(); ++it)
                names += (names.empty() ? "" : ", ") + it.key();
        throw std::invalid_argument("emit_plotdata: unknown series '" + series +
                                    "' (available: " + names + ")");
    }
    const std::string file = summary["series"][series]["file"].get<std::string>();
    std::ifstream src(run_dir + "/" + file, std::ios::binary);
    if (!src) throw std::runtime_error("emit_plotdata: missing " + file);
    std::ofstream dst(out_csv, std::ios::binary);
    dst << src.rdbuf();
}

std::vector<CheckItem> run_check_suite() {
    std::vector<CheckItem> items;
    auto add = [&](const std::string& name, bool pass, double value) {
        items.push_back({name, pass, value});
    };

    // spectral layer: Parseval, multiplier composition, convolution identity
    {
        PeriodicGrid g(1, 64, 10.0);
        ComplexField f = ComplexField::from_function(g, [](double x, double) {
            return cplx(std::sin(1.3 * x) + 0.2, 0.4 * std::cos(2.1 * x));
        });
        const double a = norm_l2(f);
        const double b = norm_l2(fourier_forward(f));
        add("parseval", std::abs(a - b) < 1e-12 * a, std::abs(a - b));

        auto m1 = FourierMultiplier::bessel_power(g, 0.5);
        auto m2 = FourierMultiplier::bessel_power(g, -0.5);
        ComplexField r = apply(m1, apply(m2, f));
        add("multiplier_composition", norm_l2(r - f) < 1e-10 * a, norm_l2(r - f));
    }
    // Hartree conservation over a short run
    {
        PeriodicGrid g(1, 128, 16.0);
        Potential w(g, make_analytic_potential("gaussian", 1, 0.4, 0.8));
        auto wN = std::make_shared<ScaledPotential>(w, 8, 1.0, g);
        ComplexField u0 = normalized(ComplexField::from_function(g, [](double x, double) {
            return cplx(std::exp(-(x - 8.0) * (x - 8.0) / 2.0), 0.0);
        }));
        HartreeState s{u0, 0.0, wN, 0.0};
        const double e0 = conserved_quantities(s).energy;
        HartreeState e = hartree_evolve(s, 0.2, 1e-3);
        const double drexp = std::abs(conserved_quantities(e).energy - e0) / std::abs(e0);
        add("hartree_energy", drexp < 1e-7, drexp);
        add("hartree_mass", std::abs(norm_l2(e.u) - 1.0) < 1e-10,
            std::abs(norm_l2(e.u) - 1.0));
    }
    // excitation map round trip
    {
        PeriodicGrid g(1, 4, 2.0 * M_PI);
        ModeBasis modes(g);
        ComplexField u = normalized(ComplexField::from_function(g, [](double x, double) {
            return cplx(1.0 + 0.3 * std::cos(x), 0.1 * std::sin(x));
        }));
        Eigen::VectorXcd c = modes.coefficients(u);
        BosonBasis fixed = BosonBasis::fixed(4, 3);
        Vec psi(fixed.size());
        for (Eigen::Index i = 0; i < psi.size(); ++i)
            psi[i] = cplx(std::sin(0.7 * static_cast<double>(i) + 0.3),
                          std::cos(1.1 * static_cast<double>(i)));
        psi.normalize();
        FockVector v{fixed, psi};
        FockVector phi = excitation_map(v, c);
        FockVector back = excitation_unmap(phi, c, 3);
        add("excitation_roundtrip", (back.coeff - psi).norm() < 1e-10,
            (back.coeff - psi).norm());
    }
    return items;
}

}  // namespace bosedyn
