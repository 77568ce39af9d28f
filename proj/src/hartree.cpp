#include "bosedyn/hartree.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace bosedyn {

namespace {

ComplexField density(const ComplexField& u) {
    ComplexField rho = u;
    for (auto& c : rho.values()) c = cplx(std::norm(c), 0.0);
    return rho;
}

bool finite(const ComplexField& u) {
    for (const auto& c : u.values())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

// one potential half-step: u <- exp(-i dt2 (V - mu)) u; returns mu
double potential_half_step(ComplexField& u, const ScaledPotential* wN, double a_local,
                           double dt2, bool include_phase) {
    ComplexField rho = density(u);
    double mu = 0.0;
    if (wN != nullptr) {
        ComplexField V = wN->convolve_with(rho);
        mu = include_phase ? 0.5 * std::real(inner(rho, V)) : 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] *= std::polar(1.0, -dt2 * (V[i].real() - mu));
    } else {
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] *= std::polar(1.0, -dt2 * a_local * rho[i].real());
    }
    return mu;
}

struct StepPlan {
    int nsteps;
    double dt;
};

StepPlan plan_steps(double t0, double t_final, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
    if (!(t_final > t0)) throw std::invalid_argument("evolve: t_final must exceed current time");
    const double span = t_final - t0;
    int n = static_cast<int>(std::lround(span / dt));
    if (n < 1) n = 1;
    return {n, span / n};
}

class SplitEvolver {
public:
    SplitEvolver(const PeriodicGrid& grid, double dt)
        : kinetic_(FourierMultiplier::kinetic_phase(grid, dt)) {}

    const FourierMultiplier& kinetic() const { return kinetic_; }

private:
    FourierMultiplier kinetic_;
};

void record_sample(HartreeTrajectory* traj, const ComplexField& u, double t, double energy) {
    if (traj == nullptr) return;
    const NormSet n = norms(u);
    traj->diagnostics.push_back({t, n.l2, energy, n.h1, n.h2, n.linf});
}

void record_snapshot(HartreeTrajectory* traj, const ComplexField& u, double t, double phase) {
    if (traj == nullptr) return;
    traj->snapshot_times.push_back(t);
    traj->snapshots.push_back(u);
    traj->phase_integrals.push_back(phase);
}

double hartree_energy(const ComplexField& u, const ScaledPotential* wN, double a_local) {
    double e = grad_norm_sq(u);
    ComplexField rho = density(u);
    if (wN != nullptr)
        e += 0.5 * std::real(inner(rho, wN->convolve_with(rho)));
    else
        e += 0.5 * a_local * std::real(inner(rho, rho));
    return e;
}

// shared driver for the Hartree (nonlocal) and NLS (local) splittings
ComplexField split_step_run(const ComplexField& u0, double t0, double t_final, double dt,
                            const ScaledPotential* wN, double a_local, bool include_phase,
                            double* phase_accum, HartreeTrajectory* traj,
                            const EvolveOptions& opt, bool focusing_tag) {
    const StepPlan plan = plan_steps(t0, t_final, dt);
    SplitEvolver ev(u0.grid(), plan.dt);

    ComplexField u = u0;
    const double guard_level = opt.blowup_guard_factor * std::max(grad_norm_sq(u), 1e-12);
    double t = t0;
    double next_sample = t0;
    double next_snapshot = t0;
    double last_finite = t0;

    auto maybe_record = [&](bool force) {
        if (traj == nullptr) return;
        if (force || t >= next_sample - 1e-12) {
            record_sample(traj, u, t, hartree_energy(u, wN, a_local));
            while (next_sample <= t + 1e-12) next_sample += opt.sample_cadence;
        }
        if (opt.keep_snapshots && (force || t >= next_snapshot - 1e-12)) {
            record_snapshot(traj, u, t, phase_accum ? *phase_accum : 0.0);
            while (next_snapshot <= t + 1e-12) next_snapshot += opt.snapshot_cadence;
        }
    };
    maybe_record(true);

    for (int s = 0; s < plan.nsteps; ++s) {
        const double mu1 = potential_half_step(u, wN, a_local, plan.dt / 2.0, include_phase);
        u = apply(ev.kinetic(), u);
        const double mu2 = potential_half_step(u, wN, a_local, plan.dt / 2.0, include_phase);
        if (phase_accum != nullptr) *phase_accum += plan.dt / 2.0 * (mu1 + mu2);
        t = t0 + (s + 1) * plan.dt;

        if (!finite(u))
            throw DivergenceError("evolution produced non-finite values", last_finite, focusing_tag);
        last_finite = t;
        if (grad_norm_sq(u) > guard_level)
            throw DivergenceError("blow-up guard tripped: |grad u|^2 exceeded " +
                                      std::to_string(opt.blowup_guard_factor) + " x initial",
                                  t, focusing_tag);
        maybe_record(s + 1 == plan.nsteps);
    }
    return u;
}

}  // namespace

double grad_norm_sq(const ComplexField& f) {
    std::vector<cplx> fh(f.size());
    dft_forward(f.grid(), f.values().data(), fh.data());
    const auto& ksq = f.grid().ksq();
    double s = 0.0;
    for (std::size_t i = 0; i < fh.size(); ++i) s += ksq[i] * std::norm(fh[i]);
    return s * f.grid().cell_volume() / static_cast<double>(f.size());
}

double mu_phase(const ComplexField& u, const ScaledPotential& wN) {
    ComplexField rho = density(u);
    return 0.5 * std::real(inner(rho, wN.convolve_with(rho)));
}

ComplexField HartreeTrajectory::interpolate(double t) const {
    if (snapshots.empty()) throw std::runtime_error("trajectory has no snapshots");
    if (t <= snapshot_times.front() + 1e-14) return snapshots.front();
    if (t >= snapshot_times.back() - 1e-14) {
        if (t > snapshot_times.back() + 1e-9)
            throw std::runtime_error("trajectory does not cover requested time");
        return snapshots.back();
    }
    std::size_t hi = 1;
    while (snapshot_times[hi] < t) ++hi;
    const std::size_t lo = hi - 1;
    const double w = (t - snapshot_times[lo]) / (snapshot_times[hi] - snapshot_times[lo]);
    ComplexField out = snapshots[lo];
    out *= cplx(1.0 - w, 0.0);
    ComplexField b = snapshots[hi];
    b *= cplx(w, 0.0);
    out += b;
    return out;
}

void HartreeTrajectory::export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,mass,energy,h1,h2,linf\n";
    out.precision(17);
    for (const auto& d : diagnostics)
        out << d.t << "," << d.mass << "," << d.energy << "," << d.h1 << "," << d.h2 << ","
            << d.linf << "\n";
}

// Flat binary record, little-endian:
//   u32 dim | u32 points_per_axis | f64 box_length | u32 dtype (0 = complex128)
//   u32 count | count x { f64 time | dim-flattened complex128 values }
void HartreeTrajectory::export_snapshots(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    if (snapshots.empty()) throw std::runtime_error("no snapshots to export");
    const PeriodicGrid& g = snapshots.front().grid();
    const std::uint32_t dim = static_cast<std::uint32_t>(g.dimension());
    const std::uint32_t n = static_cast<std::uint32_t>(g.points_per_axis());
    const double L = g.box_length();
    const std::uint32_t dtype = 0;
    const std::uint32_t count = static_cast<std::uint32_t>(snapshots.size());
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&L), 8);
    out.write(reinterpret_cast<const char*>(&dtype), 4);
    out.write(reinterpret_cast<const char*>(&count), 4);
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        out.write(reinterpret_cast<const char*>(&snapshot_times[i]), 8);
        out.write(reinterpret_cast<const char*>(snapshots[i].values().data()),
                  static_cast<std::streamsize>(16 * snapshots[i].size()));
    }
}

HartreeState hartree_evolve(const HartreeState& state, double t_final, double dt,
                            HartreeTrajectory* traj, const EvolveOptions& opt) {
    if (!state.wN) throw std::invalid_argument("hartree_evolve: state has no potential");
    HartreeState out = state;
    out.u = split_step_run(state.u, state.t, t_final, dt, state.wN.get(), 0.0,
                           opt.include_phase, &out.phase_integral, traj, opt,
                           /*focusing_tag=*/state.wN->base().negative_part_integral() > 0.0);
    out.t = t_final;
    return out;
}

ComplexField nls_evolve(const ComplexField& phi0, double a, double t_final, double dt,
                        HartreeTrajectory* traj, const EvolveOptions& opt) {
    return split_step_run(phi0, 0.0, t_final, dt, nullptr, a, /*include_phase=*/false, nullptr,
                          traj, opt, /*focusing_tag=*/a < 0.0);
}

ConservedQuantities conserved_quantities(const HartreeState& state) {
    ConservedQuantities q;
    const NormSet n = norms(state.u);
    q.mass = n.l2;
    q.h1 = n.h1;
    q.h2 = n.h2;
    q.linf = n.linf;
    q.energy = hartree_energy(state.u, state.wN.get(), 0.0);
    return q;
}

std::vector<DistanceRow> hartree_nls_distance(const ComplexField& u0, const Potential& w,
                                              const std::vector<int>& N_list, double beta,
                                              double t_final, double dt) {
    std::vector<DistanceRow> rows;
    if (t_final == 0.0) {
        for (int N : N_list) rows.push_back({N, 0.0});
        return rows;
    }
    const double a = w.total_integral();
    ComplexField phi = nls_evolve(u0, a, t_final, dt);
    for (int N : N_list) {
        auto wN = std::make_shared<ScaledPotential>(w, N, beta, u0.grid());
        HartreeState s{u0, 0.0, wN, 0.0};
        HartreeState end = hartree_evolve(s, t_final, dt);
        const double uu = norm_l2(end.u), pp = norm_l2(phi);
        const double ov = std::abs(inner(phi, end.u));
        const double d2 = std::max(0.0, uu * uu + pp * pp - 2.0 * ov);
        rows.push_back({N, std::sqrt(d2)});
    }
    return rows;
}

}  // namespace bosedyn
