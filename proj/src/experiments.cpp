#include "bosedyn/experiments.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>

#include "bosedyn/excitation.hpp"
#include "bosedyn/fluctuation_generator.hpp"
#include "bosedyn/hartree.hpp"
#include "bosedyn/kernel_norms.hpp"
#include "bosedyn/lattice_hamiltonian.hpp"

namespace bosedyn {

void SweepConfig::validate() const {
    if (d != 1 && d != 2) throw std::invalid_argument("config: d must be 1 or 2");
    if (!(beta > 0.0)) throw std::invalid_argument("config: beta must be positive");
    if (d == 2 && !(beta < 1.0))
        throw std::invalid_argument(
            "config: d=2 requires 0 < beta < 1 (norm approximation range)");
    if (d == 2 && alpha_probe != 0.0 && !(alpha_probe < (1.0 - beta) / 3.0))
        throw std::invalid_argument("config: d=2 exponent probe must satisfy alpha < (1-beta)/3");
    if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
    if (t_final < 0.0) throw std::invalid_argument("config: t_final must be nonnegative");
    if (grid_points < 2 || (grid_points & (grid_points - 1)) != 0)
        throw std::invalid_argument("config: grid_points must be a power of two");
    if (!(box_length > 0.0)) throw std::invalid_argument("config: box_length must be positive");
    if (phi0 != "vacuum" && phi0 != "squeezed")
        throw std::invalid_argument("config: phi0 must be vacuum or squeezed");
    for (int N : N_list)
        if (N < 2) throw std::invalid_argument("config: every N must be >= 2");
    if (m_rule == MRule::fixed && m_fixed < 1)
        throw std::invalid_argument("config: fixed M rule needs m_fixed >= 1");
    if (m_rule == MRule::pow_one_minus_delta && !(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("config: delta must lie in (0,1)");
}

int SweepConfig::m_of(int N) const {
    switch (m_rule) {
        case MRule::fixed:
            return std::min(N, m_fixed);
        case MRule::pow_two_beta_plus_one_third:
            return std::min(
                N, std::max(1, static_cast<int>(std::lround(
                                   std::pow(static_cast<double>(N), (2.0 * beta + 1.0) / 3.0)))));
        case MRule::pow_one_minus_delta:
            return std::min(N, std::max(1, static_cast<int>(std::lround(std::pow(
                                               static_cast<double>(N), 1.0 - delta)))));
    }
    return N;
}

FitResult slope_fit(const std::vector<std::pair<double, double>>& table) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, v] : table)
        if (v > 0.0) pts.emplace_back(std::log(n), std::log(v));
    if (pts.size() < 3)
        throw std::invalid_argument("slope_fit: need at least 3 positive values");
    const double m = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    FitResult f;
    const double denom = m * sxx - sx * sx;
    f.slope = (m * sxy - sx * sy) / denom;
    const double icpt = (sy - f.slope * sx) / m;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / m;
    for (const auto& [x, y] : pts) {
        const double e = y - (icpt + f.slope * x);
        ss_res += e * e;
        ss_tot += (y - ybar) * (y - ybar);
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.stderr_ = pts.size() > 2
                    ? std::sqrt(ss_res / (m - 2.0) * m / denom)
                    : 0.0;
    return f;
}

Potential make_potential_from_config(const SweepConfig& cfg, const PeriodicGrid& grid) {
    return Potential(grid, make_analytic_potential(cfg.potential_name, cfg.d,
                                                   cfg.potential_amplitude, cfg.potential_width));
}

ComplexField make_initial_datum(const SweepConfig& cfg, const PeriodicGrid& grid) {
    const double c = grid.box_length() / 2.0;
    const double s2 = 2.0 * cfg.initial_width * cfg.initial_width;
    return normalized(ComplexField::from_function(grid, [&](double x, double y) {
        const double r2 = (x - c) * (x - c) + (grid.dimension() == 2 ? (y - c) * (y - c) : 0.0);
        return cplx(std::exp(-r2 / s2), 0.0);
    }));
}

namespace {

// initial fluctuation vector on a <=M basis over the full mode set
FockVector make_phi0(const SweepConfig& cfg, const BosonBasis& basis, const ModeBasis& modes,
                     const Eigen::VectorXcd& ucoef) {
    FockVector phi = vacuum_state(basis);
    if (cfg.phi0 == "squeezed") {
        // two-quantum coherences on the first excitation direction: the
        // lowest mode orthogonalized against the condensate
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(modes.size());
        v[0] = 1.0;
        v -= ucoef * (ucoef.dot(v));
        const double nv = v.norm();
        if (nv < 1e-8) {
            v.setZero();
            v[1] = 1.0;
            v -= ucoef * (ucoef.dot(v));
        }
        v.normalize();
        const double r = cfg.squeeze;
        // exp(r/2 (adag(v)^2 - a(v)^2)) |0>, truncated
        Vec cur = phi.coeff;
        Vec acc = phi.coeff;
        double fact = 1.0;
        for (int k = 1; k <= basis.max_total() / 2 + 2; ++k) {
            Vec next = Vec::Zero(cur.size());
            Vec mid = Vec::Zero(cur.size());
            acc_create(basis, v, cur, mid, cplx(1.0, 0.0));
            acc_create(basis, v, mid, next, cplx(r / 2.0, 0.0));
            Vec mid2 = Vec::Zero(cur.size());
            acc_annihilate(basis, v, cur, mid2, cplx(1.0, 0.0));
            Vec down = Vec::Zero(cur.size());
            acc_annihilate(basis, v, mid2, down, cplx(-r / 2.0, 0.0));
            next += down;
            cur = next;
            fact *= k;
            acc += cur / fact;
        }
        phi.coeff = acc / acc.norm();
    }
    return phi;
}

struct PreparedRun {
    PeriodicGrid grid;
    Potential w;
    ComplexField u0;
    ModeBasis modes;
};

PreparedRun prepare(const SweepConfig& cfg) {
    cfg.validate();
    PeriodicGrid grid(cfg.d, cfg.grid_points, cfg.box_length);
    Potential w = make_potential_from_config(cfg, grid);
    ComplexField u0 = make_initial_datum(cfg, grid);
    return PreparedRun{grid, w, u0, ModeBasis(grid)};
}

double top_sector_mass(const FockVector& v) {
    const auto sn = v.sector_norms2();
    return sn.empty() ? 0.0 : sn.back();
}

KernelsAt kernels_along(const HartreeTrajectory& traj, const ScaledPotential& wN,
                        const ModeBasis& modes) {
    return [&traj, &wN, &modes](double t) {
        return build_generator_kernels(traj.interpolate(t), wN, modes);
    };
}

}  // namespace

ScalingResult norm_error_vs_N(const SweepConfig& cfg) {
    if (cfg.d != 1)
        throw std::invalid_argument("norm_error_vs_N: exact reference requires d = 1");
    PreparedRun run = prepare(cfg);
    ScalingResult result;

    for (int N : cfg.N_list) {
        auto wN = std::make_shared<ScaledPotential>(run.w, N, cfg.beta, run.grid);
        const int Mtr = cfg.m_trunc > 0 ? std::min(cfg.m_trunc, N) : N;
        const BosonBasis tb = BosonBasis::truncated(run.modes.size(), Mtr);
        const Eigen::VectorXcd c0 = run.modes.coefficients(run.u0);
        FockVector phi0 = make_phi0(cfg, tb, run.modes, c0);
        FockVector psi0 = excitation_unmap(phi0, c0, N, cfg.support_tol);

        SweepRow row;
        row.N = N;
        row.M = Mtr;
        row.beta = cfg.beta;
        row.t = cfg.t_final;

        if (cfg.t_final == 0.0) {
            row.err_norm2 = 0.0;
            result.rows.push_back(row);
            result.table.emplace_back(N, row.err_norm2);
            continue;
        }

        HartreeTrajectory traj;
        EvolveOptions opt;
        opt.sample_cadence = cfg.dt;
        opt.snapshot_cadence = cfg.dt;
        HartreeState hs{run.u0, 0.0, wN, 0.0};
        HartreeState hend = hartree_evolve(hs, cfg.t_final, cfg.dt, &traj, opt);

        FockVector phi = evolve_fluctuation(phi0, kernels_along(traj, *wN, run.modes), *wN,
                                            run.modes, N, 0.0, cfg.t_final, cfg.dt,
                                            /*include_error_terms=*/false);
        row.tail_mass = top_sector_mass(phi);
        if (Mtr < N && row.tail_mass > cfg.tail_target)
            throw TruncationError("norm_error_vs_N: sector tail above target", Mtr + 2);

        ApplyFn HN = make_hn_apply(psi0.basis, run.modes, *wN, N);
        FockVector psit =
            exact_evolve(psi0, HN, 0.0, cfg.t_final, 0.02, /*allow_unnormalized=*/true, 1e-12);

        const Eigen::VectorXcd ct = run.modes.coefficients(hend.u);
        FockVector recon = excitation_unmap(phi, ct, N, cfg.support_tol);
        const double err2 = (psit.coeff - recon.coeff).squaredNorm();
        row.err_norm2 = err2;
        result.rows.push_back(row);
        result.table.emplace_back(N, err2);
    }
    bool any_pos = false;
    for (const auto& [n, v] : result.table) any_pos = any_pos || v > 0.0;
    if (any_pos && result.table.size() >= 3)
        result.fit = slope_fit(result.table);
    else
        result.degenerate = true;
    return result;
}

ScalingResult reduced_density_error(const SweepConfig& cfg) {
    if (cfg.d != 1)
        throw std::invalid_argument("reduced_density_error: exact reference requires d = 1");
    PreparedRun run = prepare(cfg);
    ScalingResult result;

    // limiting one-body state: cubic NLS with a = int w, no phase
    ComplexField phi_lim = cfg.t_final > 0.0
                               ? nls_evolve(run.u0, run.w.total_integral(), cfg.t_final, cfg.dt)
                               : run.u0;
    const Eigen::VectorXcd cl = run.modes.coefficients(phi_lim);
    const Mat proj = cl * cl.adjoint();

    for (int N : cfg.N_list) {
        auto wN = std::make_shared<ScaledPotential>(run.w, N, cfg.beta, run.grid);
        const Eigen::VectorXcd c0 = run.modes.coefficients(run.u0);
        const int Mtr = cfg.m_trunc > 0 ? std::min(cfg.m_trunc, N) : N;
        const BosonBasis tb = BosonBasis::truncated(run.modes.size(), Mtr);
        FockVector phi0 = make_phi0(cfg, tb, run.modes, c0);
        FockVector psi0 = excitation_unmap(phi0, c0, N, cfg.support_tol);
        FockVector psit = psi0;
        if (cfg.t_final > 0.0) {
            ApplyFn HN = make_hn_apply(psi0.basis, run.modes, *wN, N);
            psit = exact_evolve(psi0, HN, 0.0, cfg.t_final, 0.02, true, 1e-12);
        }
        Mat gamma1 = one_body_density(psit) / (static_cast<double>(N) * psit.coeff.squaredNorm());
        Eigen::SelfAdjointEigenSolver<Mat> es(gamma1 - proj);
        const double tracedist = 0.5 * es.eigenvalues().cwiseAbs().sum();

        SweepRow row;
        row.N = N;
        row.M = Mtr;
        row.beta = cfg.beta;
        row.t = cfg.t_final;
        row.err_trace = tracedist;
        result.rows.push_back(row);
        result.table.emplace_back(N, tracedist);
    }
    if (result.table.size() >= 3) result.fit = slope_fit(result.table);
    return result;
}

ComparisonResult dynamics_comparison(const SweepConfig& cfg) {
    if (cfg.d != 1)
        throw std::invalid_argument("dynamics_comparison: exact-oracle layer requires d = 1");
    PreparedRun run = prepare(cfg);
    ComparisonResult result;

    for (int N : cfg.N_list) {
        auto wN = std::make_shared<ScaledPotential>(run.w, N, cfg.beta, run.grid);
        const int M = cfg.m_of(N);
        const int Mbig = cfg.m_trunc > 0 ? std::min(cfg.m_trunc, N) : N;

        HartreeTrajectory traj;
        EvolveOptions opt;
        opt.sample_cadence = cfg.dt;
        opt.snapshot_cadence = cfg.dt;
        HartreeState hs{run.u0, 0.0, wN, 0.0};
        hartree_evolve(hs, std::max(cfg.t_final, cfg.dt), cfg.dt, &traj, opt);
        KernelsAt kernels = kernels_along(traj, *wN, run.modes);

        const Eigen::VectorXcd c0 = run.modes.coefficients(run.u0);
        const BosonBasis big = BosonBasis::truncated(run.modes.size(), Mbig);
        const BosonBasis small = BosonBasis::truncated(run.modes.size(), M);
        FockVector phi0_big = make_phi0(cfg, big, run.modes, c0);
        // Phi_{N,M}(0) = 1^{<=M} Phi(0)
        FockVector phi0_small{small, Vec::Zero(static_cast<Eigen::Index>(small.size()))};
        for (int n = 0; n <= M; ++n) {
            const std::size_t d1 = big.sector_dim(n), o1 = big.sector_begin(n),
                              o2 = small.sector_begin(n);
            for (std::size_t i = 0; i < d1; ++i)
                phi0_small.coeff[static_cast<Eigen::Index>(o2 + i)] =
                    phi0_big.coeff[static_cast<Eigen::Index>(o1 + i)];
        }

        FockVector phiN = evolve_fluctuation(phi0_big, kernels, *wN, run.modes, N, 0.0,
                                             cfg.t_final, cfg.dt, true);
        FockVector phiNM = evolve_fluctuation(phi0_small, kernels, *wN, run.modes, N, 0.0,
                                              cfg.t_final, cfg.dt, true);
        FockVector phiH = evolve_fluctuation(phi0_big, kernels, *wN, run.modes, N, 0.0,
                                             cfg.t_final, cfg.dt, false);

        ComparisonRow row;
        row.N = N;
        row.M = M;
        row.tail_mass = top_sector_mass(phiN);
        if (Mbig < N && row.tail_mass > cfg.tail_target)
            throw TruncationError("dynamics_comparison: sector tail above target", Mbig + 2);

        // embed the small vector into the big space for norms
        Vec small_in_big = Vec::Zero(phiN.coeff.size());
        for (int n = 0; n <= M; ++n) {
            const std::size_t d1 = small.sector_dim(n), o1 = small.sector_begin(n),
                              o2 = big.sector_begin(n);
            for (std::size_t i = 0; i < d1; ++i)
                small_in_big[static_cast<Eigen::Index>(o2 + i)] =
                    phiNM.coeff[static_cast<Eigen::Index>(o1 + i)];
        }
        row.err_full_vs_truncated = (phiN.coeff - small_in_big).squaredNorm();
        row.err_truncated_vs_quadratic = (small_in_big - phiH.coeff).squaredNorm();
        result.rows.push_back(row);
    }
    return result;
}

ScalingResult kernel_scaling_sweep(const SweepConfig& cfg) {
    PreparedRun run = prepare(cfg);
    ScalingResult result;

    // frozen condensate snapshot from the N-independent limiting flow
    ComplexField u_frozen = run.u0;
    if (cfg.freeze_time > 0.0)
        u_frozen = nls_evolve(run.u0, run.w.total_integral(), cfg.freeze_time, cfg.dt);

    bool all_zero = true;
    for (int N : cfg.N_list) {
        const KernelNormReport rep = extended_kernel_norms(u_frozen, run.w, N, cfg.beta);
        result.table.emplace_back(N, rep.sobolev_hs2);
        result.contrast.emplace_back(N, rep.hs2);
        all_zero = all_zero && rep.sobolev_hs2 <= 0.0;

        SweepRow row;
        row.N = N;
        row.beta = cfg.beta;
        row.t = cfg.freeze_time;
        row.err_norm2 = rep.sobolev_hs2;
        row.err_trace = rep.hs2;
        result.rows.push_back(row);
    }
    if (all_zero) {
        result.degenerate = true;
        return result;
    }
    result.fit = slope_fit(result.table);
    result.contrast_fit = slope_fit(result.contrast);
    return result;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "N,M,beta,t,err_norm2,err_trace,tail_mass\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.N << "," << r.M << "," << r.beta << "," << r.t << "," << r.err_norm2 << ","
            << r.err_trace << "," << r.tail_mass << "\n";
}

void write_scaling_csv(const ScalingResult& r, const std::string& path,
                       const std::string& value_name) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "N," << value_name;
    if (!r.contrast.empty()) out << ",raw_hs2";
    out << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < r.table.size(); ++i) {
        out << r.table[i].first << "," << r.table[i].second;
        if (!r.contrast.empty()) out << "," << r.contrast[i].second;
        out << "\n";
    }
}

}  // namespace bosedyn
