#include "bosedyn/townes.hpp"

#include <algorithm>
#include <cmath>

namespace bosedyn {

namespace {

// (1 - lap)^{-1} and the split heat factor e^{-tau (1 + |k|^2)/2} act
// diagonally in Fourier space.
ComplexField apply_symbol(const ComplexField& f, const std::vector<double>& sym) {
    std::vector<cplx> work(f.size());
    dft_forward(f.grid(), f.values().data(), work.data());
    for (std::size_t i = 0; i < work.size(); ++i) work[i] *= sym[i];
    ComplexField out(f.grid());
    dft_backward(f.grid(), work.data(), out.values().data());
    const double scale = 1.0 / static_cast<double>(f.size());
    for (auto& c : out.values()) c *= scale;
    return out;
}

double real_inner(const ComplexField& a, const ComplexField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real();
    return a.grid().cell_volume() * s;
}

ComplexField cube(const ComplexField& f) {
    ComplexField out = f;
    for (auto& c : out.values()) {
        const double v = c.real();
        c = cplx(v * v * v, 0.0);
    }
    return out;
}

// optimal amplitude: minimize || s^{1/2} g - s^{3/2} h ||^2 over s = lambda^2
double optimal_amplitude_sq(const ComplexField& g, const ComplexField& h) {
    const double gg = real_inner(g, g);
    const double gh = real_inner(g, h);
    const double hh = real_inner(h, h);
    const double disc = 16.0 * gh * gh - 12.0 * gg * hh;
    if (disc <= 0.0 || hh <= 0.0) return 1.0;
    return (4.0 * gh + std::sqrt(disc)) / (6.0 * hh);
}

}  // namespace

ComplexField townes_residual(const ComplexField& f) {
    std::vector<double> sym(f.grid().size());
    const auto& ksq = f.grid().ksq();
    for (std::size_t i = 0; i < sym.size(); ++i) sym[i] = ksq[i] + 1.0;
    ComplexField lin = apply_symbol(f, sym);
    return lin - cube(f);
}

namespace {

// zero-padding prolongation to a finer grid with the same box
ComplexField fourier_prolong(const ComplexField& f, const PeriodicGrid& fine) {
    const PeriodicGrid& coarse = f.grid();
    const int nc = coarse.points_per_axis();
    const int nf = fine.points_per_axis();
    std::vector<cplx> ch = spectral_coefficients(f);
    std::vector<cplx> fh(fine.size(), cplx(0.0, 0.0));
    auto map_idx = [nc, nf](int m) { return (m < nc / 2) ? m : m + (nf - nc); };
    if (coarse.dimension() == 1) {
        for (int m = 0; m < nc; ++m)
            fh[static_cast<std::size_t>(map_idx(m))] = ch[static_cast<std::size_t>(m)];
    } else {
        for (int a = 0; a < nc; ++a)
            for (int b = 0; b < nc; ++b)
                fh[static_cast<std::size_t>(map_idx(a)) * nf + map_idx(b)] =
                    ch[static_cast<std::size_t>(a) * nc + b];
    }
    return field_from_spectral(fine, fh);
}

}  // namespace

TownesSolution townes_ground_state(const PeriodicGrid& grid, const TownesOptions& opt) {
    if (grid.dimension() != 2)
        throw std::invalid_argument("townes_ground_state: requires a d=2 grid");

    ComplexField f(grid);
    bool warm = false;
    if (grid.points_per_axis() > 128) {
        // solve on the half grid first; a Newton polish then suffices here
        PeriodicGrid half(2, grid.points_per_axis() / 2, grid.box_length());
        TownesSolution sub = townes_ground_state(half, opt);
        f = fourier_prolong(sub.Q, grid);
        warm = true;
    } else {
        const double c = grid.box_length() / 2.0;
        f = ComplexField::from_function(grid, [c](double x, double y) {
            const double r2 = (x - c) * (x - c) + (y - c) * (y - c);
            return cplx(std::exp(-r2 / 2.0), 0.0);
        });
    }

    const auto& ksq = grid.ksq();
    std::vector<double> half_heat(grid.size()), bessel_inv(grid.size()), one_plus_ksq(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        bessel_inv[i] = 1.0 / (1.0 + ksq[i]);
        one_plus_ksq[i] = 1.0 + ksq[i];
    }

    std::vector<double> history;
    TownesSolution sol{ComplexField(grid)};

    // Stage 1: Strang-split flow of  d f/d tau = (lap - 1) f + f^3  with an
    // optimal amplitude rescale after each step. The rescale pins the single
    // expanding direction of the linearized flow. The split map stalls at a
    // tau-biased fixed point, so on stall the step is reduced until the
    // residual reaches the Newton handoff basin.
    double tau = opt.flow_step;
    auto rebuild_heat = [&]() {
        for (std::size_t i = 0; i < grid.size(); ++i)
            half_heat[i] = std::exp(-0.5 * tau * (1.0 + ksq[i]));
    };
    rebuild_heat();

    int it = 0;
    int since_progress = 0;
    double res = norm_l2(townes_residual(f));
    double best = res;
    history.push_back(res);
    const int flow_budget = warm ? 0 : opt.max_flow_iterations;
    for (; it < flow_budget && res > opt.flow_target_residual; ++it) {
        f = apply_symbol(f, half_heat);
        // pointwise flow d f/d tau = f^3 has the closed-form solution
        for (auto& cv : f.values()) {
            const double v = cv.real();
            const double den = 1.0 - 2.0 * tau * v * v;
            cv = cplx(v / std::sqrt(std::max(den, 0.05)), 0.0);
        }
        f = apply_symbol(f, half_heat);

        ComplexField g = apply_symbol(f, one_plus_ksq);
        ComplexField h = cube(f);
        const double s = optimal_amplitude_sq(g, h);
        f *= cplx(std::sqrt(s), 0.0);

        res = norm_l2(townes_residual(f));
        history.push_back(res);
        if (res < best * (1.0 - 1e-4)) {
            best = res;
            since_progress = 0;
        } else if (++since_progress >= 10) {
            if (tau < 2e-3) break;  // close enough for Newton
            tau /= 4.0;
            rebuild_heat();
            since_progress = 0;
        }
    }
    if (!warm && res > 0.2)
        throw ConvergenceError("townes_ground_state: flow stage did not reach the Newton basin",
                               history);
    sol.flow_iterations = it;

    // Stage 2: Newton polish. J = -lap + 1 - 3 Q^2 is real symmetric with one
    // negative direction, so the correction equation is solved matrix-free
    // with MINRES preconditioned by (1 - lap)^{-1}.
    auto apply_J = [&](const ComplexField& v, const ComplexField& q) {
        ComplexField out = apply_symbol(v, one_plus_ksq);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double qv = q[i].real();
            out[i] -= 3.0 * qv * qv * v[i];
        }
        return out;
    };

    // The discrete translation modes of J are near-null and odd about the box
    // center; the Townes branch is even in both axes. Reflection-averaging
    // keeps the iteration inside the even subspace where J is invertible.
    const int n = grid.points_per_axis();
    auto symmetrize = [&](ComplexField& v) {
        auto ref = [n](int i) { return (n - i) % n; };
        if (grid.dimension() == 1) return;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int ri = ref(i), rj = ref(j);
                const std::size_t a = grid.flat(i, j), b = grid.flat(ri, j),
                                  c2 = grid.flat(i, rj), d = grid.flat(ri, rj);
                if (a > b || a > c2 || a > d) continue;
                const cplx avg = 0.25 * (v[a] + v[b] + v[c2] + v[d]);
                v[a] = v[b] = v[c2] = v[d] = avg;
            }
    };

    auto minres_solve = [&](const ComplexField& rhs, const ComplexField& q, double rel_tol) {
        ComplexField x(grid);
        ComplexField v = rhs;
        ComplexField v_prev(grid);
        ComplexField z = apply_symbol(v, bessel_inv);
        double gamma = std::sqrt(std::max(real_inner(z, v), 0.0));
        double gamma_prev = 1.0;
        if (gamma == 0.0) return x;
        double eta = gamma;
        double s_prev = 0.0, s_cur = 0.0, c_prev = 1.0, c_cur = 1.0;
        ComplexField w(grid), w_prev(grid);
        const double tol = rel_tol * gamma;
        for (int j = 0; j < 512 && std::abs(eta) > tol; ++j) {
            ComplexField zj = z;
            zj *= cplx(1.0 / gamma, 0.0);
            ComplexField Az = apply_J(zj, q);
            const double delta = real_inner(Az, zj);
            ComplexField v_next = Az;
            ComplexField tmp = v;
            tmp *= cplx(delta / gamma, 0.0);
            v_next -= tmp;
            tmp = v_prev;
            tmp *= cplx(gamma / gamma_prev, 0.0);
            v_next -= tmp;
            ComplexField z_next = apply_symbol(v_next, bessel_inv);
            const double gamma_next = std::sqrt(std::max(real_inner(z_next, v_next), 0.0));
            const double a0 = c_cur * delta - c_prev * s_cur * gamma;
            const double a1 = std::sqrt(a0 * a0 + gamma_next * gamma_next);
            const double a2 = s_cur * delta + c_prev * c_cur * gamma;
            const double a3 = s_prev * gamma;
            const double c_next = a0 / a1;
            const double s_next = gamma_next / a1;
            ComplexField w_next = zj;
            tmp = w_prev;
            tmp *= cplx(a3, 0.0);
            w_next -= tmp;
            tmp = w;
            tmp *= cplx(a2, 0.0);
            w_next -= tmp;
            w_next *= cplx(1.0 / a1, 0.0);
            tmp = w_next;
            tmp *= cplx(c_next * eta, 0.0);
            x += tmp;
            eta = -s_next * eta;
            v_prev = v;
            v = v_next;
            z = z_next;
            gamma_prev = gamma;
            gamma = gamma_next;
            s_prev = s_cur;
            s_cur = s_next;
            c_prev = c_cur;
            c_cur = c_next;
            if (gamma == 0.0) break;
        }
        return x;
    };

    int newton = 0;
    for (; newton < opt.max_newton_iterations; ++newton) {
        ComplexField F = townes_residual(f);
        res = norm_l2(F);
        history.push_back(res);
        if (res < opt.newton_target_residual || !std::isfinite(res)) break;

        ComplexField rhs = F;
        rhs *= cplx(-1.0, 0.0);
        // inexact Newton: solve loosely while far out, tightly near the root
        const double rel_tol = std::clamp(0.01 * res, 1e-10, 1e-4);
        ComplexField dx = minres_solve(rhs, f, rel_tol);
        symmetrize(dx);

        double step = 1.0;
        bool accepted = false;
        for (int half = 0; half < 10; ++half) {
            ComplexField cand = f;
            ComplexField scaled = dx;
            scaled *= cplx(step, 0.0);
            cand += scaled;
            const double cand_res = norm_l2(townes_residual(cand));
            if (std::isfinite(cand_res) && cand_res < res) {
                f = cand;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // at the roundoff floor for this grid
    }

    ComplexField F = townes_residual(f);
    sol.residual = norm_l2(F);
    if (!std::isfinite(sol.residual) || sol.residual > 1e-8)
        throw ConvergenceError("townes_ground_state: Newton stage did not reach residual 1e-8",
                               history);
    sol.newton_iterations = newton;
    sol.Q = f;
    const double qn = norm_l2(f);
    sol.a_star = qn * qn;
    return sol;
}

}  // namespace bosedyn
