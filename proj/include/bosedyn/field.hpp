#ifndef BOSEDYN_FIELD_HPP
#define BOSEDYN_FIELD_HPP

#include <complex>
#include <functional>
#include <vector>

#include "bosedyn/fft.hpp"
#include "bosedyn/grid.hpp"

namespace bosedyn {

// A complex scalar field sampled on a PeriodicGrid, with L^2 semantics
// carried by the measure h^d. Spectral coefficients follow the continuum
// convention
//     fhat(k) = h^d sum_x f(x) exp(-i k x),
//     f(x)    = (1/L^d) sum_k fhat(k) exp(+i k x),
// so that h^d sum |f|^2 = (1/L^d) sum |fhat|^2 and convolution is a plain
// pointwise product of coefficients.
class ComplexField {
public:
    explicit ComplexField(const PeriodicGrid& grid)
        : grid_(grid), v_(grid.size(), cplx(0.0, 0.0)) {}
    ComplexField(const PeriodicGrid& grid, std::vector<cplx> values);

    // sample f(x) (d=1) or f(x, y) (d=2) at grid coordinates
    static ComplexField from_function(const PeriodicGrid& grid,
                                      const std::function<cplx(double, double)>& f);
    // sample at signed (origin-wrapped) coordinates; for kernels like w(x)
    static ComplexField from_signed_function(const PeriodicGrid& grid,
                                             const std::function<cplx(double, double)>& f);

    const PeriodicGrid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    const std::vector<cplx>& values() const { return v_; }
    std::vector<cplx>& values() { return v_; }
    cplx operator[](std::size_t i) const { return v_[i]; }
    cplx& operator[](std::size_t i) { return v_[i]; }

    ComplexField& operator+=(const ComplexField& o);
    ComplexField& operator-=(const ComplexField& o);
    ComplexField& operator*=(cplx s);
    friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
    friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
    friend ComplexField operator*(cplx s, ComplexField a) { return a *= s; }

private:
    PeriodicGrid grid_;
    std::vector<cplx> v_;
};

struct NormSet {
    double l2 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double linf = 0.0;
    double l4 = 0.0;
};

// Operator given by a Fourier symbol m(k) on a grid's wavenumber lattice.
class FourierMultiplier {
public:
    FourierMultiplier(const PeriodicGrid& grid, std::vector<cplx> symbol);
    static FourierMultiplier identity(const PeriodicGrid& g);
    // symbol |k|^2, i.e. the operator -Laplacian
    static FourierMultiplier minus_laplacian(const PeriodicGrid& g);
    // symbol (1+|k|^2)^s, i.e. (1 - Laplacian)^s
    static FourierMultiplier bessel_power(const PeriodicGrid& g, double s);
    // e^{-i dt |k|^2}, the free-flight propagator over time dt
    static FourierMultiplier kinetic_phase(const PeriodicGrid& g, double dt);

    const PeriodicGrid& grid() const { return grid_; }
    const std::vector<cplx>& symbol() const { return symbol_; }
    FourierMultiplier operator*(const FourierMultiplier& o) const;

private:
    PeriodicGrid grid_;
    std::vector<cplx> symbol_;
};

// Continuum-convention spectral coefficients (and inverse).
std::vector<cplx> spectral_coefficients(const ComplexField& f);
ComplexField field_from_spectral(const PeriodicGrid& g, const std::vector<cplx>& coef);

// Unitary Fourier pair: returns a ComplexField of coefficients scaled so the
// plain h^d-measure L2 norm is preserved exactly (Parseval).
ComplexField fourier_forward(const ComplexField& f);
ComplexField fourier_inverse(const ComplexField& f);

ComplexField apply(const FourierMultiplier& m, const ComplexField& f);
// periodic convolution with measure weight h^d
ComplexField convolve(const ComplexField& f, const ComplexField& g);
NormSet norms(const ComplexField& f);

double norm_l2(const ComplexField& f);
// h^d sum conj(a) b
cplx inner(const ComplexField& a, const ComplexField& b);
ComplexField normalized(const ComplexField& f);
ComplexField conj(const ComplexField& f);
ComplexField pointwise(const ComplexField& a, const ComplexField& b);

}  // namespace bosedyn

#endif
