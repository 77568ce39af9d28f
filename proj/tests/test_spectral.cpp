#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bosedyn/field.hpp"

using namespace bosedyn;

namespace {

ComplexField random_field(const PeriodicGrid& g, unsigned seed, int max_mode = -1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const int n = g.points_per_axis();
    std::vector<cplx> spec(g.size(), cplx(0.0, 0.0));
    auto signed_idx = [n](int m) { return (m < n / 2) ? m : m - n; };
    const int cap = max_mode < 0 ? n / 2 : max_mode;
    if (g.dimension() == 1) {
        for (int m = 0; m < n; ++m)
            if (std::abs(signed_idx(m)) <= cap)
                spec[static_cast<std::size_t>(m)] = cplx(nd(rng), nd(rng));
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (std::abs(signed_idx(a)) <= cap && std::abs(signed_idx(b)) <= cap)
                    spec[static_cast<std::size_t>(a) * n + b] = cplx(nd(rng), nd(rng));
    }
    return field_from_spectral(g, spec);
}

}  // namespace

TEST_CASE("fourier pair basics") {
    PeriodicGrid g(1, 64, 10.0);

    SUBCASE("constant field concentrates in the zero mode") {
        ComplexField one = ComplexField::from_function(g, [](double, double) {
            return cplx(1.0, 0.0);
        });
        ComplexField spec = fourier_forward(one);
        double off = 0.0;
        for (std::size_t i = 1; i < spec.size(); ++i) off += std::abs(spec[i]);
        CHECK(std::abs(spec[0]) > 1.0);
        CHECK(off < 1e-12);
    }
    SUBCASE("plane wave occupies a single coefficient") {
        const double k0 = g.wavenumber(5);
        ComplexField pw = ComplexField::from_function(g, [&](double x, double) {
            return std::polar(1.0, k0 * x);
        });
        ComplexField spec = fourier_forward(pw);
        for (std::size_t i = 0; i < spec.size(); ++i)
            if (i != 5) CHECK(std::abs(spec[i]) < 1e-12);
        CHECK(std::abs(spec[5]) == doctest::Approx(8.0).epsilon(1e-12));  // sqrt(n)
    }
    SUBCASE("round trip on a random field") {
        ComplexField f = random_field(g, 42);
        ComplexField back = fourier_inverse(fourier_forward(f));
        CHECK(norm_l2(back - f) < 1e-12 * norm_l2(f));
    }
}

TEST_CASE("multiplier operators") {
    PeriodicGrid g(2, 16, 8.0);
    ComplexField f = random_field(g, 7);

    SUBCASE("identity symbol") {
        CHECK(norm_l2(apply(FourierMultiplier::identity(g), f) - f) < 1e-12 * norm_l2(f));
    }
    SUBCASE("minus laplacian on an eigenfunction") {
        const double kx = g.wavenumber(3), ky = g.wavenumber(14);
        ComplexField pw = ComplexField::from_function(g, [&](double x, double y) {
            return std::polar(1.0, kx * x + ky * y);
        });
        ComplexField lap = apply(FourierMultiplier::minus_laplacian(g), pw);
        const double k2 = kx * kx + ky * ky;
        double err = 0.0;
        for (std::size_t i = 0; i < pw.size(); ++i)
            err = std::max(err, std::abs(lap[i] - k2 * pw[i]));
        CHECK(err < 1e-10);
    }
    SUBCASE("half-power composition is the identity") {
        ComplexField r = apply(FourierMultiplier::bessel_power(g, 0.5),
                               apply(FourierMultiplier::bessel_power(g, -0.5), f));
        CHECK(norm_l2(r - f) < 1e-10 * norm_l2(f));
    }
    SUBCASE("product of multipliers equals composition") {
        auto m1 = FourierMultiplier::bessel_power(g, 0.7);
        auto m2 = FourierMultiplier::minus_laplacian(g);
        ComplexField a = apply(m1, apply(m2, f));
        ComplexField b = apply(m1 * m2, f);
        CHECK(norm_l2(a - b) < 1e-12 * std::max(1.0, norm_l2(a)));
    }
    SUBCASE("inverse bessel multiplier is an L2 contraction") {
        for (unsigned seed = 1; seed <= 20; ++seed) {
            ComplexField x = random_field(g, seed);
            CHECK(norm_l2(apply(FourierMultiplier::bessel_power(g, -0.5), x)) <=
                  norm_l2(x) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("convolution") {
    SUBCASE("discrete delta is the identity element") {
        PeriodicGrid g(1, 32, 6.0);
        ComplexField f = random_field(g, 3);
        ComplexField delta(g);
        delta[0] = cplx(1.0 / g.cell_volume(), 0.0);
        CHECK(norm_l2(convolve(f, delta) - f) < 1e-12 * norm_l2(f));
    }
    SUBCASE("constants integrate to c^2 vol") {
        PeriodicGrid g(2, 16, 4.0);
        const double c = 0.7;
        ComplexField f = ComplexField::from_function(g, [&](double, double) {
            return cplx(c, 0.0);
        });
        ComplexField r = convolve(f, f);
        for (std::size_t i = 0; i < r.size(); ++i)
            CHECK(r[i].real() == doctest::Approx(c * c * g.volume()).epsilon(1e-12));
    }
    SUBCASE("gaussian convolution adds variances") {
        PeriodicGrid g(1, 256, 40.0);
        const double s1 = 0.8, s2 = 0.5;
        ComplexField f = ComplexField::from_signed_function(g, [&](double x, double) {
            return cplx(std::exp(-x * x / (2 * s1 * s1)), 0.0);
        });
        ComplexField h = ComplexField::from_signed_function(g, [&](double x, double) {
            return cplx(std::exp(-x * x / (2 * s2 * s2)), 0.0);
        });
        ComplexField r = convolve(f, h);
        const double s12 = s1 * s1 + s2 * s2;
        const double amp = std::sqrt(2.0 * M_PI) * s1 * s2 / std::sqrt(s12);
        double err = 0.0;
        for (int i = 0; i < 256; ++i) {
            const double x = g.signed_coord(i);
            err = std::max(err, std::abs(r[static_cast<std::size_t>(i)].real() -
                                         amp * std::exp(-x * x / (2 * s12))));
        }
        CHECK(err < 1e-6);
    }
    SUBCASE("fft convolution equals direct periodic sum") {
        for (int dim : {1, 2}) {
            PeriodicGrid g(dim, dim == 1 ? 32 : 16, 5.0);
            ComplexField f = random_field(g, 11);
            ComplexField h = random_field(g, 12);
            ComplexField fast = convolve(f, h);
            ComplexField slow(g);
            const int n = g.points_per_axis();
            if (dim == 1) {
                for (int i = 0; i < n; ++i) {
                    cplx acc(0.0, 0.0);
                    for (int j = 0; j < n; ++j)
                        acc += f[static_cast<std::size_t>(j)] *
                               h[static_cast<std::size_t>((i - j + n) % n)];
                    slow[static_cast<std::size_t>(i)] = acc * g.cell_volume();
                }
            } else {
                for (int i1 = 0; i1 < n; ++i1)
                    for (int i2 = 0; i2 < n; ++i2) {
                        cplx acc(0.0, 0.0);
                        for (int j1 = 0; j1 < n; ++j1)
                            for (int j2 = 0; j2 < n; ++j2)
                                acc += f[g.flat(j1, j2)] *
                                       h[g.flat((i1 - j1 + n) % n, (i2 - j2 + n) % n)];
                        slow[g.flat(i1, i2)] = acc * g.cell_volume();
                    }
            }
            CHECK(norm_l2(fast - slow) < 1e-10 * std::max(1.0, norm_l2(fast)));
        }
    }
}

TEST_CASE("norms") {
    PeriodicGrid g(1, 128, 12.0);

    SUBCASE("zero field") {
        NormSet n = norms(ComplexField(g));
        CHECK(n.l2 == 0.0);
        CHECK(n.h1 == 0.0);
        CHECK(n.h2 == 0.0);
        CHECK(n.linf == 0.0);
        CHECK(n.l4 == 0.0);
    }
    SUBCASE("normalized plane wave") {
        const double k0 = g.wavenumber(9);
        ComplexField pw = ComplexField::from_function(g, [&](double x, double) {
            return std::polar(1.0 / std::sqrt(g.volume()), k0 * x);
        });
        NormSet n = norms(pw);
        CHECK(n.l2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(n.h1 == doctest::Approx(std::sqrt(1.0 + k0 * k0)).epsilon(1e-12));
    }
    SUBCASE("gradient norm against finite differences") {
        ComplexField f = random_field(g, 21, 16);  // smooth: low modes only
        NormSet n = norms(f);
        const double spectral_grad2 = n.h1 * n.h1 - n.l2 * n.l2;
        double fd = 0.0;
        const int npts = g.points_per_axis();
        for (int i = 0; i < npts; ++i) {
            const cplx d = (f[static_cast<std::size_t>((i + 1) % npts)] -
                            f[static_cast<std::size_t>((i - 1 + npts) % npts)]) /
                           (2.0 * g.spacing());
            fd += std::norm(d);
        }
        fd *= g.cell_volume();
        CHECK(std::abs(spectral_grad2 - fd) < 1e-4 * std::max(1.0, spectral_grad2));
    }
    SUBCASE("parseval for random fields") {
        for (unsigned seed = 100; seed < 130; ++seed) {
            ComplexField f = random_field(g, seed);
            const double a = norm_l2(f), b = norm_l2(fourier_forward(f));
            CHECK(std::abs(a - b) < 1e-12 * a);
        }
    }
}
