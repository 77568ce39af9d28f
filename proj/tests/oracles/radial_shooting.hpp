#ifndef BOSEDYN_TESTS_RADIAL_SHOOTING_HPP
#define BOSEDYN_TESTS_RADIAL_SHOOTING_HPP

// Independent oracle for the critical mass |Q|_{L2}^2: shoot on the radial
// ODE  Q'' + Q'/r = Q - Q^3  from r=0, bisect on the central height for the
// decaying separatrix, and close the mass integral with the K0-matched tail.
// Kept free of any library solver code on purpose.

#include <cmath>
#include <stdexcept>

namespace bosedyn_oracle {

struct RadialShot {
    double center_height = 0.0;
    double mass = 0.0;  // 2*pi * int_0^inf Q(r)^2 r dr
};

namespace detail {

// integrate to r_max with RK4; returns +1 if Q' turns positive while Q > 0
// (undershoot), -1 if Q crosses zero (overshoot), 0 if it survives
inline int classify(double b, double r_max, double dr) {
    const double r0 = 1e-6;
    double q = b + (b - b * b * b) * r0 * r0 / 4.0;
    double p = (b - b * b * b) * r0 / 2.0;  // Q'
    double r = r0;
    auto f = [](double r_, double q_, double p_, double& dq, double& dp) {
        dq = p_;
        dp = q_ - q_ * q_ * q_ - p_ / r_;
    };
    while (r < r_max) {
        double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
        f(r, q, p, k1q, k1p);
        f(r + dr / 2, q + dr / 2 * k1q, p + dr / 2 * k1p, k2q, k2p);
        f(r + dr / 2, q + dr / 2 * k2q, p + dr / 2 * k2p, k3q, k3p);
        f(r + dr, q + dr * k3q, p + dr * k3p, k4q, k4p);
        q += dr / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
        p += dr / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        r += dr;
        if (q < 0.0) return -1;
        if (p > 0.0 && q > 0.0 && r > 1.0) return +1;
    }
    return 0;
}

}  // namespace detail

inline RadialShot townes_mass_by_shooting(double r_match = 10.0, double dr = 2e-4) {
    // bracket the separatrix height
    double lo = 2.0, hi = 2.5;
    if (detail::classify(lo, r_match, dr) != +1 || detail::classify(hi, r_match, dr) != -1)
        throw std::runtime_error("radial shooting: initial bracket invalid");
    for (int i = 0; i < 80 && (hi - lo) > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (detail::classify(mid, r_match, dr) == +1 ? lo : hi) = mid;
    }
    const double b = 0.5 * (lo + hi);

    // accumulate the mass integral along the separatrix shot
    const double r0 = 1e-6;
    double q = b + (b - b * b * b) * r0 * r0 / 4.0;
    double p = (b - b * b * b) * r0 / 2.0;
    double r = r0;
    double mass = 0.0;
    auto f = [](double r_, double q_, double p_, double& dq, double& dp) {
        dq = p_;
        dp = q_ - q_ * q_ * q_ - p_ / r_;
    };
    while (r < r_match) {
        mass += q * q * r * dr;  // midpoint-ish; dr is small enough
        double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
        f(r, q, p, k1q, k1p);
        f(r + dr / 2, q + dr / 2 * k1q, p + dr / 2 * k1p, k2q, k2p);
        f(r + dr / 2, q + dr / 2 * k2q, p + dr / 2 * k2p, k3q, k3p);
        f(r + dr, q + dr * k3q, p + dr * k3p, k4q, k4p);
        q += dr / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
        p += dr / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        r += dr;
    }

    // asymptotic tail Q ~ c K0(r): match c at r_match, integrate c^2 K0^2 r
    const double c = q / std::cyl_bessel_k(0.0, r_match);
    double tail = 0.0;
    const double dt = 1e-3;
    for (double s = r_match; s < r_match + 30.0; s += dt) {
        const double k0 = std::cyl_bessel_k(0.0, s + dt / 2);
        tail += c * c * k0 * k0 * (s + dt / 2) * dt;
    }

    RadialShot out;
    out.center_height = b;
    out.mass = 2.0 * M_PI * (mass + tail);
    return out;
}

}  // namespace bosedyn_oracle

#endif
