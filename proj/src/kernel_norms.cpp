#include "bosedyn/kernel_norms.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bosedyn {

namespace {

struct BandField {
    ComplexField field;            // band-limited, unit norm
    std::vector<cplx> hat;         // continuum coefficients on the grid lattice
    int half_band = 0;             // per-axis signed index bound
};

int signed_index(int m, int n) { return (m < n / 2) ? m : m - n; }

BandField quarter_band(const ComplexField& u) {
    const PeriodicGrid& g = u.grid();
    const int n = g.points_per_axis();
    const int hb = n / 4;
    std::vector<cplx> hat = spectral_coefficients(u);
    if (g.dimension() == 1) {
        for (int m = 0; m < n; ++m)
            if (std::abs(signed_index(m, n)) > hb) hat[static_cast<std::size_t>(m)] = 0.0;
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (std::abs(signed_index(a, n)) > hb || std::abs(signed_index(b, n)) > hb)
                    hat[static_cast<std::size_t>(a) * n + b] = 0.0;
    }
    BandField out{field_from_spectral(g, hat), {}, hb};
    out.field = normalized(out.field);
    out.hat = spectral_coefficients(out.field);
    return out;
}

// adaptive Simpson of f on [a,b] with fixed refinement (integrands here are
// smooth and rapidly decaying)
template <typename F>
double simpson(const F& f, double a, double b, int intervals) {
    const int m = intervals + (intervals % 2);
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

KernelNormReport extended_kernel_norms(const ComplexField& u, const Potential& w, int N,
                                       double beta) {
    const auto& an = w.analytic();
    if (!an)
        throw std::invalid_argument(
            "extended_kernel_norms: requires a registered analytic potential");
    const PeriodicGrid& g = u.grid();
    const int d = g.dimension();
    const int n = g.points_per_axis();
    const double vol = g.volume();
    const double dk = 2.0 * M_PI / g.box_length();
    const double s = std::pow(static_cast<double>(N), beta);

    const BandField ub = quarter_band(u);
    auto whatN = [&](double kx, double ky = 0.0) { return an->fourier(kx / s, ky / s); };
    auto w2hatN = [&](double kx, double ky = 0.0) {
        return std::pow(s, d) * an->fourier_of_square(kx / s, ky / s);
    };

    // density, mean-field, mu on the grid (all exactly band-limited)
    ComplexField rho = ub.field;
    for (auto& c : rho.values()) c = cplx(std::norm(c), 0.0);
    std::vector<cplx> rho_hat = spectral_coefficients(rho);
    std::vector<cplx> cv_hat(rho_hat.size());
    if (d == 1) {
        for (int m = 0; m < n; ++m)
            cv_hat[static_cast<std::size_t>(m)] =
                rho_hat[static_cast<std::size_t>(m)] * whatN(g.wavenumber(m));
    } else {
        std::size_t idx = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b, ++idx)
                cv_hat[idx] = rho_hat[idx] * whatN(g.wavenumber(a), g.wavenumber(b));
    }
    ComplexField cV = field_from_spectral(g, cv_hat);
    const double mu = 0.5 * std::real(inner(rho, cV));

    KernelNormReport rep;

    // unprojected plain norm: (1/vol) sum_k (w_N^2)-hat(k) |rho_hat(k)|^2
    {
        double acc = 0.0;
        if (d == 1) {
            for (int m = 0; m < n; ++m)
                acc += w2hatN(g.wavenumber(m)) * std::norm(rho_hat[static_cast<std::size_t>(m)]);
        } else {
            std::size_t idx = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b, ++idx)
                    acc += w2hatN(g.wavenumber(a), g.wavenumber(b)) * std::norm(rho_hat[idx]);
        }
        rep.hs2_raw = acc / vol;
    }

    // weighted unprojected norm: exact extended-lattice core + frozen tail
    const double kB = ub.half_band * dk;
    const double K0 = 4.0 * kB + 4.0 * dk;
    double core = 0.0, tail = 0.0;
    if (d == 1) {
        const int hb = ub.half_band;
        auto uh = [&](int m) {  // signed index access
            return ub.hat[static_cast<std::size_t>((m % n + n) % n)];
        };
        const int J0 = static_cast<int>(std::ceil(K0 / dk));
        std::vector<cplx> T(static_cast<std::size_t>(4 * hb) + 1);
        for (int j = -J0; j <= J0; ++j) {
            const double p = j * dk;
            std::fill(T.begin(), T.end(), cplx(0.0, 0.0));
            for (int m = -hb; m <= hb; ++m) {
                const cplx bm = whatN(p - m * dk) * uh(m);
                if (bm == cplx(0.0, 0.0)) continue;
                for (int m2 = -hb; m2 <= hb; ++m2)
                    T[static_cast<std::size_t>(m + m2 + 2 * hb)] += bm * uh(m2);
            }
            double sum_s = 0.0;
            for (const auto& t : T) sum_s += std::norm(t);
            core += sum_s / (1.0 + p * p);
        }
        // tail with the band-limited factors frozen: |rho-tilde(s)|^2 times
        // the lattice-density-weighted integral of (1+p^2)^{-1} what_N(p)^2
        double rho2 = 0.0;
        for (int ss = -2 * hb; ss <= 2 * hb; ++ss) {
            cplx r(0.0, 0.0);
            for (int m = -hb; m <= hb; ++m) r += uh(m) * uh(ss - m);
            rho2 += std::norm(r);
        }
        double xi_max = 1.0;
        while (std::abs(an->fourier(xi_max, 0.0)) >
               1e-12 * (std::abs(an->fourier(0.0, 0.0)) + 1e-300) && xi_max < 1e4)
            xi_max *= 2.0;
        // integrate in p with logarithmic nodes; the integrand varies on the
        // scale max(1, p) there, which uniform xi nodes cannot resolve
        const double pmax = s * xi_max;
        double ti = 0.0;
        if (pmax > K0)
            ti = simpson(
                [&](double t) {
                    const double p = K0 * std::exp(t);
                    const double f = an->fourier(p / s, 0.0);
                    return p * f * f / (1.0 + p * p);
                },
                0.0, std::log(pmax / K0), 4000);
        tail = rho2 * 2.0 * ti * (g.box_length() / (2.0 * M_PI));
    } else {
        auto uh = [&](int a, int b) {
            const int aa = (a % n + n) % n, bb = (b % n + n) % n;
            return ub.hat[static_cast<std::size_t>(aa) * n + bb];
        };
        const int hb = ub.half_band;
        const int J0 = static_cast<int>(std::ceil(K0 / dk));
        const int Jdense = static_cast<int>(std::ceil(8.0 / dk));
        const int stride = 3;
        // cached forward DFT of u-hat as a grid function
        std::vector<cplx> Ugrid(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) Ugrid[i] = ub.hat[i];
        std::vector<cplx> Uf(g.size());
        dft_forward(g, Ugrid.data(), Uf.data());
        std::vector<cplx> B(g.size()), Bf(g.size());
        auto p_contrib = [&](int j1, int j2) {
            const double px = j1 * dk, py = j2 * dk;
            for (int a = 0; a < n; ++a) {
                const int sa = signed_index(a, n);
                for (int b = 0; b < n; ++b) {
                    const int sb = signed_index(b, n);
                    const std::size_t idx = static_cast<std::size_t>(a) * n + b;
                    B[idx] = (std::abs(sa) <= hb && std::abs(sb) <= hb)
                                 ? whatN(px - sa * dk, py - sb * dk) * ub.hat[idx]
                                 : cplx(0.0, 0.0);
                }
            }
            dft_forward(g, B.data(), Bf.data());
            double sum_s = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) sum_s += std::norm(Bf[i] * Uf[i]);
            sum_s /= static_cast<double>(g.size());
            return sum_s / (1.0 + px * px + py * py);
        };
        for (int j1 = -J0; j1 <= J0; ++j1)
            for (int j2 = -J0; j2 <= J0; ++j2) {
                const bool dense = std::abs(j1) <= Jdense && std::abs(j2) <= Jdense;
                if (dense) {
                    core += p_contrib(j1, j2);
                } else if (((j1 % stride) + stride) % stride == 0 &&
                           ((j2 % stride) + stride) % stride == 0) {
                    core += p_contrib(j1, j2) * stride * stride;
                }
            }
        // sum_s |rho-tilde(s)|^2 with rho-tilde the unconjugated
        // self-convolution of u-hat, via the cached transform
        double rho2 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) rho2 += std::norm(Uf[i] * Uf[i]);
        rho2 /= static_cast<double>(g.size());
        double xi_max = 1.0;
        while (std::abs(an->fourier(xi_max, 0.0)) >
               1e-12 * (std::abs(an->fourier(0.0, 0.0)) + 1e-300) && xi_max < 1e4)
            xi_max *= 2.0;
        const double pmax = s * xi_max;
        double ti = 0.0;
        if (pmax > K0)
            ti = simpson(
                [&](double t) {
                    const double r = K0 * std::exp(t);
                    // angular average handles non-radial (separable) forms
                    double ang = 0.0;
                    const int nth = 32;
                    for (int it = 0; it < nth; ++it) {
                        const double th = (it + 0.5) * M_PI / (2.0 * nth);
                        const double f = an->fourier(r / s * std::cos(th), r / s * std::sin(th));
                        ang += f * f;
                    }
                    ang /= nth;  // quarter circle by symmetry
                    return 2.0 * M_PI * r * r * ang / (1.0 + r * r);
                },
                0.0, std::log(pmax / K0), 2000);
        tail = rho2 * ti * vol / std::pow(2.0 * M_PI, 2);
    }
    rep.sobolev_hs2_raw = (core + tail) / std::pow(vol, 4);
    rep.tail_fraction = tail / std::max(core + tail, 1e-300);

    // projection corrections: K2 = Ktil - S with the separable
    // S = (u cV) (x) u + u (x) (u cV) - 2 mu u (x) u
    {
        const ComplexField f1 = pointwise(ub.field, cV);
        const ComplexField& uu = ub.field;
        struct Piece {
            const ComplexField* a;
            const ComplexField* b;
            double sig;
        };
        const Piece pieces[3] = {{&f1, &uu, 1.0}, {&uu, &f1, 1.0}, {&uu, &uu, -2.0 * mu}};

        const FourierMultiplier inv1 = FourierMultiplier::bessel_power(g, -1.0);
        ComplexField ubar = conj(ub.field);

        auto pair_with_kernel = [&](const ComplexField& ax, const ComplexField& bx) {
            // <Ktil, a (x) b> = int conj(conj(u) a)(x)... = int (ubar a)(x) [w * (ubar b)](x)
            ComplexField fa = pointwise(ubar, ax);
            ComplexField fb = pointwise(ubar, bx);
            // w_N * fb via analytic spectral samples
            std::vector<cplx> fbh = spectral_coefficients(fb);
            if (d == 1) {
                for (int m = 0; m < n; ++m)
                    fbh[static_cast<std::size_t>(m)] *= whatN(g.wavenumber(m));
            } else {
                std::size_t idx = 0;
                for (int a2 = 0; a2 < n; ++a2)
                    for (int b2 = 0; b2 < n; ++b2, ++idx)
                        fbh[idx] *= whatN(g.wavenumber(a2), g.wavenumber(b2));
            }
            ComplexField conv = field_from_spectral(g, fbh);
            return inner(conj(fa), conv);
        };

        cplx ks(0.0, 0.0), kws(0.0, 0.0);
        for (const auto& p : pieces) {
            ks += p.sig * pair_with_kernel(*p.a, *p.b);
            kws += p.sig * pair_with_kernel(apply(inv1, *p.a), *p.b);
        }
        cplx ss(0.0, 0.0), wss(0.0, 0.0);
        for (const auto& p : pieces)
            for (const auto& q : pieces) {
                ss += p.sig * q.sig * inner(*p.a, *q.a) * inner(*p.b, *q.b);
                wss += p.sig * q.sig * inner(*p.a, apply(inv1, *q.a)) * inner(*p.b, *q.b);
            }
        rep.hs2 = rep.hs2_raw - 2.0 * std::real(ks) + std::real(ss);
        rep.sobolev_hs2 = rep.sobolev_hs2_raw - 2.0 * std::real(kws) + std::real(wss);
    }
    return rep;
}

}  // namespace bosedyn
