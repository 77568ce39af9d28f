// Acceptance suite: one pass/fail line per criterion, selected by number on
// the command line (no argument runs everything). Exit code counts failures.

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "bosedyn/bogoliubov_bounds.hpp"
#include "bosedyn/excitation.hpp"
#include "bosedyn/experiments.hpp"
#include "bosedyn/fluctuation_generator.hpp"
#include "bosedyn/hartree.hpp"
#include "bosedyn/kernel_norms.hpp"
#include "bosedyn/lattice_hamiltonian.hpp"
#include "bosedyn/pair_dynamics.hpp"
#include "bosedyn/run_registry.hpp"
#include "bosedyn/townes.hpp"
#include "tests/oracles/radial_shooting.hpp"

using namespace bosedyn;

namespace {

char detail[4096];

ComplexField centered_gaussian(const PeriodicGrid& g, double width) {
    const double c = g.box_length() / 2.0;
    return normalized(ComplexField::from_function(g, [&](double x, double y) {
        const double r2 = (x - c) * (x - c) + (g.dimension() == 2 ? (y - c) * (y - c) : 0.0);
        return cplx(std::exp(-r2 / (2.0 * width * width)), 0.0);
    }));
}

// 1. mass/energy conservation across dimensions and interaction signs
bool criterion_conservation() {
    double worst_mass = 0.0, worst_energy = 0.0;
    for (int d : {1, 2}) {
        for (double amp : {0.5, -0.5}) {
            PeriodicGrid g(d, d == 1 ? 256 : 64, d == 1 ? 16.0 : 12.0);
            Potential w(g, make_analytic_potential("gaussian", d, amp, 0.9));
            auto wN = std::make_shared<ScaledPotential>(w, 8, d == 1 ? 1.0 : 0.5, g);
            HartreeState s{centered_gaussian(g, 1.0), 0.0, wN, 0.0};
            const double e0 = conserved_quantities(s).energy;
            HartreeState end = hartree_evolve(s, 1.0, 1e-3);
            const ConservedQuantities q = conserved_quantities(end);
            worst_mass = std::max(worst_mass, std::abs(q.mass - 1.0));
            worst_energy = std::max(worst_energy, std::abs(q.energy - e0) / std::abs(e0));

            ComplexField phi = nls_evolve(s.u, w.total_integral(), 1.0, 1e-3);
            worst_mass = std::max(worst_mass, std::abs(norm_l2(phi) - 1.0));
        }
    }
    std::snprintf(detail, sizeof(detail), "mass drift %.2e (gate 1e-9), energy drift %.2e (gate 1e-7)",
                  worst_mass, worst_energy);
    return worst_mass < 1e-9 && worst_energy < 1e-7;
}

// 2. critical constant from the ground-state profile vs the shooting oracle
bool criterion_gn_constant() {
    PeriodicGrid g(2, 128, 16.0);
    TownesSolution sol = townes_ground_state(g);
    const auto shot = bosedyn_oracle::townes_mass_by_shooting();
    const double rel = std::abs(sol.a_star - shot.mass) / shot.mass;
    const GNReport at_q = gn_inequality_check(sol.Q, sol.a_star);
    const double ratio = at_q.lhs / at_q.rhs;

    std::mt19937_64 rng(2024);
    std::normal_distribution<double> nd;
    PeriodicGrid gr(2, 64, 12.0);
    int holds = 0;
    const int n = gr.points_per_axis();
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<cplx> spec(gr.size(), cplx(0.0, 0.0));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const int sa = (a < n / 2) ? a : a - n;
                const int sb = (b < n / 2) ? b : b - n;
                if (std::abs(sa) <= 8 && std::abs(sb) <= 8)
                    spec[static_cast<std::size_t>(a) * n + b] = cplx(nd(rng), nd(rng));
            }
        if (gn_inequality_check(field_from_spectral(gr, spec), sol.a_star).holds) ++holds;
    }
    std::snprintf(detail, sizeof(detail),
                  "a*=%.8f vs oracle %.8f (rel %.1e, gate 1e-4); residual %.1e; "
                  "equality ratio %.6f; random fields %d/1000",
                  sol.a_star, shot.mass, rel, sol.residual, ratio, holds);
    return rel < 1e-4 && sol.residual < 1e-8 && std::abs(ratio - 1.0) < 1e-4 && holds == 1000;
}

// 3. focusing stability threshold at the guard level
bool criterion_stability_gate() {
    const double a_star = 11.70094682;
    PeriodicGrid g(2, 64, 12.0);
    auto unit_bump = make_analytic_potential("compact_bump", 2, -1.0, 0.8);
    const double unit_mass = -unit_bump->integral();

    bool stable_ok = false, unstable_ok = false;
    {
        Potential w(g, make_analytic_potential("compact_bump", 2,
                                               -0.9 * a_star / unit_mass, 0.8));
        auto wN = std::make_shared<ScaledPotential>(w, 16, 0.5, g);
        try {
            hartree_evolve({centered_gaussian(g, 0.8), 0.0, wN, 0.0}, 1.0, 1e-3);
            stable_ok = true;
        } catch (const DivergenceError&) {
        }
    }
    double trip_time = -1.0;
    {
        Potential w(g, make_analytic_potential("compact_bump", 2,
                                               -1.5 * a_star / unit_mass, 0.8));
        auto wN = std::make_shared<ScaledPotential>(w, 16, 0.5, g);
        try {
            hartree_evolve({centered_gaussian(g, 0.45), 0.0, wN, 0.0}, 1.0, 1e-3);
        } catch (const DivergenceError& e) {
            unstable_ok = true;
            trip_time = e.last_finite_time;
        }
    }
    std::snprintf(detail, sizeof(detail),
                  "0.9 a*: completed without guard = %d; 1.5 a*: guard tripped = %d (t=%.3f)",
                  stable_ok, unstable_ok, trip_time);
    return stable_ok && unstable_ok;
}

// 4. density-pair dynamics vs the quadratic Fock flow from vacuum
bool criterion_bogoliubov_equivalence() {
    PeriodicGrid g(1, 8, 2.0 * M_PI);
    Potential w(g, make_analytic_potential("gaussian", 1, 0.1, 0.8));
    const int N = 20;
    auto wN = std::make_shared<ScaledPotential>(w, N, 0.5, g);
    ComplexField u0 = centered_gaussian(g, 0.9);
    const double t_final = 0.5, dt = 1e-3;

    HartreeTrajectory traj;
    EvolveOptions opt;
    opt.sample_cadence = dt;
    opt.snapshot_cadence = dt;
    hartree_evolve({u0, 0.0, wN, 0.0}, t_final, dt, &traj, opt);

    ModeBasis basis(g, 6);
    KernelsAt kernels = [&](double t) {
        return build_generator_kernels(traj.interpolate(t), *wN, basis);
    };
    DensityPair pair = evolve_dm(DensityPair::vacuum(6), kernels, 0.0, t_final, dt, basis);

    BosonBasis fb = BosonBasis::truncated(6, 10);
    FockVector phi = vacuum_state(fb);
    const int steps = static_cast<int>(std::lround(t_final / dt));
    for (int s = 0; s < steps; ++s) {
        FluctuationGenerator gen(kernels((s + 0.5) * dt), *wN, basis, N, false);
        phi.coeff = krylov_exp_step(gen.apply_fn(fb), phi.coeff, dt, 1e-12);
    }
    const Mat gamma_f = one_body_density(phi);
    const Mat alpha_f = pairing_density(phi);
    const double dg = (pair.gamma - gamma_f).operatorNorm();
    const double da = (pair.alpha - alpha_f).operatorNorm();
    const double purity = purity_defect(pair);
    std::snprintf(detail, sizeof(detail),
                  "|gamma_dm - gamma_F| = %.2e, |alpha_dm - alpha_F| = %.2e (gate 1e-4); "
                  "tr gamma = %.3e; purity defect %.1e",
                  dg, da, std::real(pair.gamma.trace()), purity);
    return dg < 1e-4 && da < 1e-4;
}

// 5. quadratic Hamiltonians stay above the Hilbert-Schmidt bound
bool criterion_quadratic_bound() {
    const double om = 1.4, kk = 0.9;
    QuadraticBoundReport single = quadratic_lower_bound_check(
        Mat::Constant(1, 1, om), Mat::Constant(1, 1, kk), 60);
    const double exact = 0.5 * (std::sqrt(om * om - kk * kk) - om);
    const double single_err = std::abs(single.ground_energy - exact);

    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    int holds = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Mat A = Mat::Zero(4, 4), B = Mat::Zero(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                A(i, j) = cplx(nd(rng), nd(rng));
                B(i, j) = cplx(nd(rng), nd(rng));
            }
        Mat H = (A * A.adjoint() + 0.3 * Mat::Identity(4, 4)).eval();
        Mat K = ((B + B.transpose()) / 2.0).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        Mat His = es.operatorInverseSqrt();
        K *= 0.85 / std::max((His * K * His.conjugate()).operatorNorm(), 1e-12);
        if (quadratic_lower_bound_check(H, K, 12).holds) ++holds;
    }
    std::snprintf(detail, sizeof(detail),
                  "single-mode error %.1e (gate 1e-8); random instances %d/100", single_err,
                  holds);
    return single_err < 1e-8 && holds == 100;
}

// 6. pairing-kernel norm scaling
bool criterion_kernel_scaling() {
    SweepConfig d1;
    d1.d = 1;
    d1.grid_points = 256;
    d1.box_length = 16.0;
    d1.beta = 2.0;
    d1.potential_name = "gaussian";
    d1.potential_amplitude = 0.5;
    d1.potential_width = 1.0;
    d1.initial_width = 1.0;
    d1.freeze_time = 0.1;
    d1.dt = 1e-3;
    d1.N_list = {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    ScalingResult r1 = kernel_scaling_sweep(d1);

    SweepConfig d2 = d1;
    d2.d = 2;
    d2.grid_points = 64;
    d2.beta = 0.5;
    d2.potential_name = "compact_bump";
    d2.potential_amplitude = 0.4;
    d2.potential_width = 0.2;
    d2.initial_width = 2.0;
    d2.N_list = {16, 32, 64, 128, 256, 512, 1024};
    ScalingResult r2 = kernel_scaling_sweep(d2);

    std::snprintf(detail, sizeof(detail),
                  "d=1: weighted slope %.4f (gate < 0.05), contrast slope %.3f (gate > 0.5); "
                  "d=2: weighted slope %.4f (gate < 0.15)",
                  r1.fit.slope, r1.contrast_fit.slope, r2.fit.slope);
    return r1.fit.slope < 0.05 && r1.contrast_fit.slope > 0.5 && r2.fit.slope < 0.15;
}

// 7. decay of the norm error of the full description (d = 1)
bool criterion_theorem_trend() {
    SweepConfig cfg;
    cfg.d = 1;
    cfg.grid_points = 8;
    cfg.box_length = 2.0 * M_PI;
    cfg.beta = 1.0;
    cfg.potential_amplitude = 0.3;
    cfg.potential_width = 0.8;
    cfg.initial_width = 0.8;
    cfg.t_final = 0.3;
    cfg.dt = 1e-3;
    cfg.m_trunc = 10;
    cfg.N_list = {4, 6, 8, 10, 12};
    ScalingResult r = norm_error_vs_N(cfg);

    bool strictly_decreasing = true;
    for (std::size_t i = 1; i < r.table.size(); ++i)
        strictly_decreasing = strictly_decreasing && r.table[i].second < r.table[i - 1].second;

    SweepConfig zero = cfg;
    zero.potential_amplitude = 0.0;
    zero.N_list = {4, 8, 12};
    ScalingResult rz = norm_error_vs_N(zero);
    double worst_zero = 0.0;
    for (const auto& [n, v] : rz.table) worst_zero = std::max(worst_zero, v);

    std::snprintf(detail, sizeof(detail),
                  "err2: %.3e .. %.3e, strictly decreasing = %d, slope %.3f (gate < -0.2); "
                  "w=0 worst %.1e (gate 1e-8)",
                  r.table.front().second, r.table.back().second, strictly_decreasing,
                  r.fit.slope, worst_zero);
    return strictly_decreasing && r.fit.slope < -0.2 && worst_zero < 1e-8;
}

// 8. truncated dynamics closes on the full and quadratic flows
bool criterion_truncation_trend() {
    SweepConfig cfg;
    cfg.d = 1;
    cfg.grid_points = 8;
    cfg.box_length = 2.0 * M_PI;
    cfg.beta = 0.5;
    cfg.m_rule = MRule::pow_two_beta_plus_one_third;
    cfg.potential_amplitude = 0.4;
    cfg.potential_width = 0.8;
    cfg.initial_width = 0.8;
    cfg.t_final = 0.2;
    cfg.dt = 4e-3;
    cfg.m_trunc = 10;
    cfg.N_list = {6, 8, 10, 12, 14};
    ComparisonResult r = dynamics_comparison(cfg);

    bool dec1 = true, dec2 = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        dec1 = dec1 && r.rows[i].err_full_vs_truncated < r.rows[i - 1].err_full_vs_truncated;
        dec2 = dec2 &&
               r.rows[i].err_truncated_vs_quadratic < r.rows[i - 1].err_truncated_vs_quadratic;
    }

    SweepConfig same = cfg;
    same.N_list = {6};
    same.m_rule = MRule::fixed;
    same.m_fixed = 6;
    same.m_trunc = 6;
    ComparisonResult rs = dynamics_comparison(same);
    const bool exact_zero = rs.rows[0].err_full_vs_truncated == 0.0;

    std::snprintf(detail, sizeof(detail),
                  "err(Phi_N, Phi_NM): %.2e .. %.2e dec=%d; err(Phi_NM, Phi): %.2e .. %.2e "
                  "dec=%d; M=N gives exactly 0 = %d",
                  r.rows.front().err_full_vs_truncated, r.rows.back().err_full_vs_truncated,
                  dec1, r.rows.front().err_truncated_vs_quadratic,
                  r.rows.back().err_truncated_vs_quadratic, dec2, exact_zero);
    return dec1 && dec2 && exact_zero;
}

// 9. mutual-oracle identities of the excitation picture
bool criterion_oracle_equivalences() {
    // round trip
    std::mt19937_64 rng(55);
    std::normal_distribution<double> nd;
    double worst_rt = 0.0;
    {
        BosonBasis fixed = BosonBasis::fixed(6, 4);
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::VectorXcd c(6);
            for (int i = 0; i < 6; ++i) c[i] = cplx(nd(rng), nd(rng));
            c.normalize();
            Vec psi(fixed.size());
            for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = cplx(nd(rng), nd(rng));
            psi.normalize();
            FockVector v{fixed, psi};
            FockVector phi = excitation_map(v, c);
            FockVector back = excitation_unmap(phi, c, 4);
            worst_rt = std::max(worst_rt, (back.coeff - psi).norm());
            worst_rt = std::max(worst_rt, std::abs(phi.norm() - 1.0));
        }
    }

    // conjugation identity
    double conj_err = 0.0;
    {
        PeriodicGrid g(1, 8, 2.0 * M_PI);
        ModeBasis modes(g);
        Potential w(g, make_analytic_potential("gaussian", 1, 0.3, 0.8));
        const int N = 5;
        auto wN = std::make_shared<ScaledPotential>(w, N, 0.5, g);
        ComplexField u0 = centered_gaussian(g, 0.8);
        const double t_final = 0.2, dt = 1e-3;
        HartreeTrajectory traj;
        EvolveOptions opt;
        opt.sample_cadence = dt;
        opt.snapshot_cadence = dt;
        HartreeState hend = hartree_evolve({u0, 0.0, wN, 0.0}, t_final, dt, &traj, opt);
        BosonBasis tb = BosonBasis::truncated(8, N);
        FockVector phi0 = vacuum_state(tb);
        FockVector psi0 = excitation_unmap(phi0, modes.coefficients(u0), N);
        ApplyFn HN = make_hn_apply(psi0.basis, modes, *wN, N);
        FockVector psit = exact_evolve(psi0, HN, 0.0, t_final, 0.01, false, 1e-13);
        FockVector via_exact = excitation_map(psit, modes.coefficients(hend.u));
        KernelsAt kernels = [&](double t) {
            return build_generator_kernels(traj.interpolate(t), *wN, modes);
        };
        FockVector via_gen =
            evolve_fluctuation(phi0, kernels, *wN, modes, N, 0.0, t_final, dt, true, 1e-13);
        conj_err = (via_exact.coeff - via_gen.coeff).norm();
    }

    // two-body assembly vs the direct symmetric-subspace construction
    double twobody_err = 0.0;
    {
        PeriodicGrid g(1, 4, 2.0 * M_PI);
        ModeBasis modes(g);
        Potential w(g, make_analytic_potential("gaussian", 1, 0.9, 0.7));
        ScaledPotential wN(w, 2, 0.6, g);
        Mat dense = Mat(build_HN(modes, wN, 2));

        const int n = 4;
        Mat hone = Mat::Zero(n, n);
        for (int p = 0; p < n; ++p) hone(p, p) = modes.mode_ksq(p);
        Mat two = Mat::Zero(n * n, n * n);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                two(p * n + q, p * n + q) += hone(p, p) + hone(q, q);
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) {
                        if (modes.mode_shift(p, q) != modes.mode_shift(r, s)) continue;
                        const int dpr = modes.mode_shift(p, modes.mode_negate(r));
                        two(p * n + q, r * n + s) +=
                            wN.spectral()[modes.flat_index(dpr)].real() / g.volume();
                    }
            }
        BosonBasis b2 = BosonBasis::fixed(n, 2);
        Mat sym = Mat::Zero(static_cast<Eigen::Index>(b2.size()), n * n);
        for (std::size_t i = 0; i < b2.size(); ++i)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    const std::uint64_t t = (1ull << (8 * p)) + (1ull << (8 * q));
                    if (t == b2.packed(i))
                        sym(static_cast<Eigen::Index>(i), p * n + q) =
                            (p == q) ? 1.0 : 1.0 / std::sqrt(2.0);
                }
        Mat direct = sym * two * sym.adjoint();
        Eigen::SelfAdjointEigenSolver<Mat> e1(direct), e2(dense);
        twobody_err = (e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff();
    }

    std::snprintf(detail, sizeof(detail),
                  "round trip %.1e (gate 1e-10); conjugation %.1e (gate 1e-6); two-body "
                  "assembly %.1e (gate 1e-10)",
                  worst_rt, conj_err, twobody_err);
    return worst_rt < 1e-10 && conj_err < 1e-6 && twobody_err < 1e-10;
}

// 10. byte-identical result files on a config rerun
bool criterion_determinism() {
    namespace fs = std::filesystem;
    const fs::path td = fs::temp_directory_path() / "bosedyn_acceptance_determinism";
    fs::remove_all(td);
    fs::create_directories(td);
    RunConfig cfg = load_config(
        Command::sweep, "",
        {"sweep.kind=norm_error", "sweep.N_list=[3,4,5]", "sweep.t_final=0.1",
         "sweep.dt=0.002", "potential.amplitude=0.3"},
        td.string());
    RunRecord r1 = dispatch(cfg);
    std::string first_sweep, first_scaling, first_summary;
    {
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        first_sweep = slurp(td / r1.run_id / "sweep.csv");
        first_scaling = slurp(td / r1.run_id / "scaling.csv");
        first_summary = slurp(td / r1.run_id / "summary.json");
        RunRecord r2 = dispatch(cfg);
        const bool same = r1.run_id == r2.run_id &&
                          slurp(td / r2.run_id / "sweep.csv") == first_sweep &&
                          slurp(td / r2.run_id / "scaling.csv") == first_scaling &&
                          slurp(td / r2.run_id / "summary.json") == first_summary;
        std::snprintf(detail, sizeof(detail),
                      "run %s repeated: files byte-identical = %d (exit %d)",
                      r1.run_id.c_str(), same, r1.exit_code);
        fs::remove_all(td);
        return same && r1.exit_code == 0;
    }
}

struct Criterion {
    const char* name;
    std::function<bool()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const Criterion table[] = {
        {"conservation suite", criterion_conservation},
        {"gagliardo-nirenberg constant", criterion_gn_constant},
        {"stability gate", criterion_stability_gate},
        {"bogoliubov equivalence", criterion_bogoliubov_equivalence},
        {"quadratic lower bound", criterion_quadratic_bound},
        {"kernel scaling", criterion_kernel_scaling},
        {"norm-error trend", criterion_theorem_trend},
        {"truncation trend", criterion_truncation_trend},
        {"oracle equivalences", criterion_oracle_equivalences},
        {"determinism", criterion_determinism},
    };
    int selected = -1;
    if (argc > 1) selected = std::atoi(argv[1]);
    int failures = 0;
    for (int i = 0; i < 10; ++i) {
        if (selected > 0 && selected != i + 1) continue;
        bool ok = false;
        detail[0] = '\0';
        try {
            ok = table[i].run();
        } catch (const std::exception& e) {
            std::snprintf(detail, sizeof(detail), "exception: %s", e.what());
        }
        std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", i + 1, table[i].name,
                    detail);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
