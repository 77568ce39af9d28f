#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bosedyn/potential.hpp"
#include "bosedyn/townes.hpp"
#include "tests/oracles/radial_shooting.hpp"

using namespace bosedyn;

TEST_CASE("potential scaling") {
    PeriodicGrid g(1, 2048, 16.0);
    Potential w(g, make_analytic_potential("gaussian", 1, 0.8, 0.5));

    SUBCASE("N = 1 leaves the profile untouched") {
        ScaledPotential wN(w, 1, 1.3, g);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs(wN.profile()[i] - w.profile()[i]));
        CHECK(err < 1e-12);
    }
    SUBCASE("vanishing exponent leaves the profile untouched") {
        ScaledPotential wN(w, 16, 1e-12, g);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs(wN.profile()[i] - w.profile()[i]));
        CHECK(err < 1e-8);
    }
    SUBCASE("mass preserved and sup scales at N = 16, beta = 1") {
        ScaledPotential wN(w, 16, 1.0, g);
        CHECK(!wN.resolution_warning());
        // quadrature of the pointwise profile on the fine grid
        double mass = 0.0, sup = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            mass += wN.profile()[i].real();
            sup = std::max(sup, std::abs(wN.profile()[i].real()));
        }
        mass *= g.cell_volume();
        CHECK(std::abs(mass - w.total_integral()) < 1e-8 * std::abs(w.total_integral()));
        CHECK(std::abs(sup - 16.0 * w.sup_norm()) < 1e-8 * 16.0 * w.sup_norm());
        // the spectral table preserves the integral identically
        CHECK(wN.spectral()[0].real() ==
              doctest::Approx(w.total_integral()).epsilon(1e-12));
    }
    SUBCASE("evenness preserved") {
        ScaledPotential wN(w, 8, 0.7, g);
        const int n = g.points_per_axis();
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            err = std::max(err, std::abs(wN.profile()[static_cast<std::size_t>(i)] -
                                         wN.profile()[static_cast<std::size_t>((n - i) % n)]));
        CHECK(err < 1e-12);
    }
    SUBCASE("mass invariance across scales via the spectral table") {
        for (int N : {2, 4, 32, 1024})
            for (double beta : {0.5, 1.0, 2.0}) {
                ScaledPotential wN(w, N, beta, g);
                CHECK(std::abs(wN.spectral()[0].real() - w.total_integral()) <
                      1e-8 * std::abs(w.total_integral()));
            }
    }
    SUBCASE("under-resolved grid raises the warning flag") {
        PeriodicGrid coarse(1, 32, 16.0);
        Potential wc(coarse, make_analytic_potential("gaussian", 1, 0.8, 0.5));
        CHECK(ScaledPotential(wc, 64, 1.0, coarse).resolution_warning());
        CHECK(!ScaledPotential(wc, 1, 1.0, coarse).resolution_warning());
    }
}

TEST_CASE("csv round trip") {
    PeriodicGrid g(1, 64, 8.0);
    Potential w(g, make_analytic_potential("sech2", 1, -0.4, 0.7));
    const std::string path = "potential_roundtrip.csv";
    w.export_csv(path);
    Potential back = Potential::import_csv(g, path);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(w.profile()[i] - back.profile()[i]));
    CHECK(err < 1e-12);
    CHECK(back.total_integral() == doctest::Approx(w.total_integral()).epsilon(1e-6));
    std::remove(path.c_str());
}

TEST_CASE("stability gate") {
    PeriodicGrid g(2, 64, 12.0);
    const double a_star = 11.70094682;

    SUBCASE("nonnegative potential is stable with full margin") {
        Potential w(g, make_analytic_potential("gaussian", 2, 0.5, 0.8));
        StabilityReport r = stability_check(w, a_star);
        CHECK(r.stable);
        CHECK(r.margin == doctest::Approx(a_star).epsilon(1e-12));
    }
    SUBCASE("half-critical attractive bump is stable") {
        auto bump = make_analytic_potential("compact_bump", 2, -1.0, 1.0);
        const double unit_mass = -bump->integral();
        auto scaled = make_analytic_potential("compact_bump", 2, -0.5 * a_star / unit_mass, 1.0);
        Potential w(g, scaled);
        StabilityReport r = stability_check(w, a_star);
        CHECK(r.stable);
        CHECK(r.margin == doctest::Approx(0.5 * a_star).epsilon(1e-6));
    }
    SUBCASE("supercritical attractive bump is unstable") {
        auto bump = make_analytic_potential("compact_bump", 2, -1.0, 1.0);
        const double unit_mass = -bump->integral();
        Potential w(g, make_analytic_potential("compact_bump", 2, -1.05 * a_star / unit_mass, 1.0));
        CHECK(!stability_check(w, a_star).stable);
    }
    SUBCASE("d=1 needs no condition") {
        PeriodicGrid g1(1, 64, 12.0);
        Potential w(g1, make_analytic_potential("gaussian", 1, -100.0, 0.8));
        CHECK(stability_check(w, a_star).stable);
    }
    SUBCASE("invalid constant") {
        Potential w(g, make_analytic_potential("gaussian", 2, 0.5, 0.8));
        CHECK_THROWS_AS(stability_check(w, -1.0), std::invalid_argument);
    }
}

TEST_CASE("townes ground state") {
    PeriodicGrid g(2, 128, 16.0);
    TownesSolution sol = townes_ground_state(g);

    SUBCASE("residual below gate") { CHECK(sol.residual < 1e-8); }

    SUBCASE("profile is positive and radial about the center") {
        const int n = g.points_per_axis();
        double min_v = 1e300, asym = 0.0;
        for (int i = 1; i < n; ++i)
            for (int j = 1; j < n; ++j) {
                min_v = std::min(min_v, sol.Q[g.flat(i, j)].real());
                asym = std::max(asym, std::abs(sol.Q[g.flat(i, j)].real() -
                                               sol.Q[g.flat(j, i)].real()));
                asym = std::max(asym, std::abs(sol.Q[g.flat(i, j)].real() -
                                               sol.Q[g.flat(n - i, j)].real()));
            }
        CHECK(min_v > -1e-10);
        CHECK(asym < 1e-6);
    }

    SUBCASE("critical mass against grid refinement") {
        PeriodicGrid g2(2, 256, 16.0);
        TownesSolution fine = townes_ground_state(g2);
        CHECK(std::abs(sol.a_star - fine.a_star) < 1e-4 * sol.a_star);
    }

    SUBCASE("critical mass against the radial shooting oracle") {
        const auto shot = bosedyn_oracle::townes_mass_by_shooting();
        CHECK(std::abs(sol.a_star - shot.mass) < 1e-4 * shot.mass);
        // shooting height for the separatrix, frozen from the oracle itself
        CHECK(shot.center_height == doctest::Approx(2.2062).epsilon(1e-4));
    }

    SUBCASE("fixed point: the next correction is below 1e-10") {
        // estimate the Newton step from the converged profile with CG on the
        // squared Jacobian (independent of the production linear solver)
        const auto& grid = sol.Q.grid();
        auto Jv = [&](const ComplexField& v) {
            ComplexField out = apply(FourierMultiplier::bessel_power(grid, 1.0), v);
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double q = sol.Q[i].real();
                out[i] -= 3.0 * q * q * v[i];
            }
            return out;
        };
        ComplexField F = townes_residual(sol.Q);
        ComplexField rhs = Jv(F);  // solve J^2 x = J F, step = -x
        rhs *= cplx(-1.0, 0.0);
        ComplexField x(grid), r = rhs, p = rhs;
        double rs = std::pow(norm_l2(r), 2);
        for (int it = 0; it < 200 && std::sqrt(rs) > 1e-14; ++it) {
            ComplexField Ap = Jv(Jv(p));
            double denom = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i)
                denom += std::real(std::conj(p[i]) * Ap[i]);
            denom *= grid.cell_volume();
            const double alpha = rs / denom;
            ComplexField t = p;
            t *= cplx(alpha, 0.0);
            x += t;
            t = Ap;
            t *= cplx(alpha, 0.0);
            r -= t;
            const double rs_new = std::pow(norm_l2(r), 2);
            ComplexField pn = r;
            ComplexField ps = p;
            ps *= cplx(rs_new / rs, 0.0);
            pn += ps;
            p = pn;
            rs = rs_new;
        }
        CHECK(norm_l2(x) < 1e-10);
    }

    SUBCASE("sharp constant: equality at the ground state") {
        GNReport r = gn_inequality_check(sol.Q, sol.a_star);
        CHECK(r.lhs / r.rhs == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(r.holds);
    }
}

TEST_CASE("gn inequality") {
    PeriodicGrid g(2, 64, 12.0);
    const double a_star = 11.70094682;

    SUBCASE("zero field") {
        GNReport r = gn_inequality_check(ComplexField(g), a_star);
        CHECK(r.lhs == 0.0);
        CHECK(r.rhs == 0.0);
        CHECK(r.holds);
    }
    SUBCASE("broad gaussian has strict slack") {
        const double c = 6.0;
        ComplexField f = ComplexField::from_function(g, [&](double x, double y) {
            return cplx(std::exp(-((x - c) * (x - c) + (y - c) * (y - c)) / 8.0), 0.0);
        });
        GNReport r = gn_inequality_check(f, a_star);
        CHECK(r.holds);
        CHECK(r.lhs > 1.5 * r.rhs);
    }
    SUBCASE("holds on random band-limited fields") {
        std::mt19937_64 rng(99);
        std::normal_distribution<double> nd;
        const int n = g.points_per_axis();
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<cplx> spec(g.size(), cplx(0.0, 0.0));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const int sa = (a < n / 2) ? a : a - n;
                    const int sb = (b < n / 2) ? b : b - n;
                    if (std::abs(sa) <= 8 && std::abs(sb) <= 8)
                        spec[static_cast<std::size_t>(a) * n + b] = cplx(nd(rng), nd(rng));
                }
            GNReport r = gn_inequality_check(field_from_spectral(g, spec), a_star);
            CHECK(r.holds);
        }
    }
}
