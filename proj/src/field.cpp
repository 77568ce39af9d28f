#include "bosedyn/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bosedyn {

namespace {
void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* who) {
    if (a != b) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}
}

ComplexField::ComplexField(const PeriodicGrid& grid, std::vector<cplx> values)
    : grid_(grid), v_(std::move(values)) {
    if (v_.size() != grid_.size())
        throw std::invalid_argument("ComplexField: value count does not match grid");
}

ComplexField ComplexField::from_function(const PeriodicGrid& grid,
                                         const std::function<cplx(double, double)>& f) {
    ComplexField out(grid);
    const int n = grid.points_per_axis();
    if (grid.dimension() == 1) {
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(grid.coord(i), 0.0);
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++idx) out[idx] = f(grid.coord(i), grid.coord(j));
    }
    return out;
}

ComplexField ComplexField::from_signed_function(const PeriodicGrid& grid,
                                                const std::function<cplx(double, double)>& f) {
    ComplexField out(grid);
    const int n = grid.points_per_axis();
    if (grid.dimension() == 1) {
        for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = f(grid.signed_coord(i), 0.0);
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++idx)
                out[idx] = f(grid.signed_coord(i), grid.signed_coord(j));
    }
    return out;
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
    require_same_grid(grid_, o.grid_, "ComplexField::operator+=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
    require_same_grid(grid_, o.grid_, "ComplexField::operator-=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

ComplexField& ComplexField::operator*=(cplx s) {
    for (auto& x : v_) x *= s;
    return *this;
}

FourierMultiplier::FourierMultiplier(const PeriodicGrid& grid, std::vector<cplx> symbol)
    : grid_(grid), symbol_(std::move(symbol)) {
    if (symbol_.size() != grid_.size())
        throw std::invalid_argument("FourierMultiplier: symbol size does not match grid");
}

FourierMultiplier FourierMultiplier::identity(const PeriodicGrid& g) {
    return FourierMultiplier(g, std::vector<cplx>(g.size(), cplx(1.0, 0.0)));
}

FourierMultiplier FourierMultiplier::minus_laplacian(const PeriodicGrid& g) {
    std::vector<cplx> s(g.size());
    const auto& ksq = g.ksq();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = ksq[i];
    return FourierMultiplier(g, std::move(s));
}

FourierMultiplier FourierMultiplier::bessel_power(const PeriodicGrid& g, double p) {
    std::vector<cplx> s(g.size());
    const auto& ksq = g.ksq();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::pow(1.0 + ksq[i], p);
    return FourierMultiplier(g, std::move(s));
}

FourierMultiplier FourierMultiplier::kinetic_phase(const PeriodicGrid& g, double dt) {
    std::vector<cplx> s(g.size());
    const auto& ksq = g.ksq();
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = std::polar(1.0, -dt * ksq[i]);
    return FourierMultiplier(g, std::move(s));
}

FourierMultiplier FourierMultiplier::operator*(const FourierMultiplier& o) const {
    require_same_grid(grid_, o.grid_, "FourierMultiplier::operator*");
    std::vector<cplx> s(symbol_.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = symbol_[i] * o.symbol_[i];
    return FourierMultiplier(grid_, std::move(s));
}

std::vector<cplx> spectral_coefficients(const ComplexField& f) {
    std::vector<cplx> out(f.size());
    dft_forward(f.grid(), f.values().data(), out.data());
    const double scale = f.grid().cell_volume();
    for (auto& c : out) c *= scale;
    return out;
}

ComplexField field_from_spectral(const PeriodicGrid& g, const std::vector<cplx>& coef) {
    if (coef.size() != g.size())
        throw std::invalid_argument("field_from_spectral: size mismatch");
    ComplexField out(g);
    dft_backward(g, coef.data(), out.values().data());
    const double scale = 1.0 / g.volume();
    for (auto& c : out.values()) c *= scale;
    return out;
}

ComplexField fourier_forward(const ComplexField& f) {
    ComplexField out(f.grid());
    dft_forward(f.grid(), f.values().data(), out.values().data());
    const double scale = 1.0 / std::sqrt(static_cast<double>(f.size()));
    for (auto& c : out.values()) c *= scale;
    return out;
}

ComplexField fourier_inverse(const ComplexField& f) {
    ComplexField out(f.grid());
    dft_backward(f.grid(), f.values().data(), out.values().data());
    const double scale = 1.0 / std::sqrt(static_cast<double>(f.size()));
    for (auto& c : out.values()) c *= scale;
    return out;
}

ComplexField apply(const FourierMultiplier& m, const ComplexField& f) {
    require_same_grid(m.grid(), f.grid(), "apply(multiplier)");
    std::vector<cplx> work(f.size());
    dft_forward(f.grid(), f.values().data(), work.data());
    const auto& s = m.symbol();
    for (std::size_t i = 0; i < work.size(); ++i) work[i] *= s[i];
    ComplexField out(f.grid());
    dft_backward(f.grid(), work.data(), out.values().data());
    const double scale = 1.0 / static_cast<double>(f.size());
    for (auto& c : out.values()) c *= scale;
    return out;
}

ComplexField convolve(const ComplexField& f, const ComplexField& g) {
    require_same_grid(f.grid(), g.grid(), "convolve");
    std::vector<cplx> fh(f.size()), gh(g.size());
    dft_forward(f.grid(), f.values().data(), fh.data());
    dft_forward(g.grid(), g.values().data(), gh.data());
    for (std::size_t i = 0; i < fh.size(); ++i) fh[i] *= gh[i];
    ComplexField out(f.grid());
    dft_backward(f.grid(), fh.data(), out.values().data());
    // one factor h^d from the convolution measure, 1/n^d from the round trip
    const double scale = f.grid().cell_volume() / static_cast<double>(f.size());
    for (auto& c : out.values()) c *= scale;
    return out;
}

NormSet norms(const ComplexField& f) {
    NormSet r;
    const double hd = f.grid().cell_volume();
    double sum2 = 0.0, sum4 = 0.0, linf = 0.0;
    for (const auto& c : f.values()) {
        const double a2 = std::norm(c);
        sum2 += a2;
        sum4 += a2 * a2;
        linf = std::max(linf, a2);
    }
    r.l2 = std::sqrt(hd * sum2);
    r.l4 = std::pow(hd * sum4, 0.25);
    r.linf = std::sqrt(linf);

    std::vector<cplx> fh(f.size());
    dft_forward(f.grid(), f.values().data(), fh.data());
    const auto& ksq = f.grid().ksq();
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < fh.size(); ++i) {
        const double a2 = std::norm(fh[i]);
        s1 += (1.0 + ksq[i]) * a2;
        s2 += (1.0 + ksq[i]) * (1.0 + ksq[i]) * a2;
    }
    // spectral Parseval weight: h^d sum |f|^2 = (1/n^d) sum |F|^2 with F the raw DFT
    const double w = hd / static_cast<double>(f.size());
    r.h1 = std::sqrt(w * s1);
    r.h2 = std::sqrt(w * s2);
    return r;
}

double norm_l2(const ComplexField& f) {
    double s = 0.0;
    for (const auto& c : f.values()) s += std::norm(c);
    return std::sqrt(f.grid().cell_volume() * s);
}

cplx inner(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid(), b.grid(), "inner");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return a.grid().cell_volume() * s;
}

ComplexField normalized(const ComplexField& f) {
    const double n = norm_l2(f);
    if (n == 0.0) throw std::invalid_argument("normalized: zero field");
    ComplexField out = f;
    out *= cplx(1.0 / n, 0.0);
    return out;
}

ComplexField conj(const ComplexField& f) {
    ComplexField out = f;
    for (auto& c : out.values()) c = std::conj(c);
    return out;
}

ComplexField pointwise(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid(), b.grid(), "pointwise");
    ComplexField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
    return out;
}

}  // namespace bosedyn
