#include "bosedyn/potential.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bosedyn {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double sinhc_ratio(double x) {
    // x / sinh(x), stable near 0
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return x / std::sinh(x);
}

class GaussianPotential final : public AnalyticPotential {
public:
    GaussianPotential(int d, double A, double sigma) : d_(d), A_(A), s_(sigma) {}
    double value(double x, double y) const override {
        const double r2 = x * x + y * y;
        return A_ * std::exp(-r2 / (2.0 * s_ * s_));
    }
    double fourier(double kx, double ky) const override {
        const double k2 = kx * kx + ky * ky;
        return A_ * std::pow(std::sqrt(kTwoPi) * s_, d_) * std::exp(-s_ * s_ * k2 / 2.0);
    }
    double fourier_of_square(double kx, double ky) const override {
        const double k2 = kx * kx + ky * ky;
        return A_ * A_ * std::pow(std::sqrt(M_PI) * s_, d_) * std::exp(-s_ * s_ * k2 / 4.0);
    }
    double integral() const override { return A_ * std::pow(std::sqrt(kTwoPi) * s_, d_); }
    double negative_part_integral() const override {
        return A_ < 0.0 ? -integral() : 0.0;
    }
    double sup_norm() const override { return std::abs(A_); }
    double width() const override { return s_; }
    int dimension() const override { return d_; }
    std::string describe() const override { return "gaussian"; }

private:
    int d_;
    double A_, s_;
};

class Sech2Potential final : public AnalyticPotential {
public:
    Sech2Potential(int d, double A, double sigma) : d_(d), A_(A), s_(sigma) {}
    double value(double x, double y) const override {
        double v = A_ / std::pow(std::cosh(x / s_), 2);
        if (d_ == 2) v /= std::pow(std::cosh(y / s_), 2);
        return v;
    }
    double fourier(double kx, double ky) const override {
        double v = A_ * ft1(kx);
        if (d_ == 2) v *= ft1(ky);
        return v;
    }
    double fourier_of_square(double kx, double ky) const override {
        double v = A_ * A_ * ft1sq(kx);
        if (d_ == 2) v *= ft1sq(ky);
        return v;
    }
    double integral() const override { return A_ * std::pow(2.0 * s_, d_); }
    double negative_part_integral() const override {
        return A_ < 0.0 ? -integral() : 0.0;
    }
    double sup_norm() const override { return std::abs(A_); }
    double width() const override { return s_; }
    int dimension() const override { return d_; }
    std::string describe() const override { return "sech2"; }

private:
    // int sech^2(x/s) e^{-ikx} dx = 2 s * (pi k s / 2) / sinh(pi k s / 2)
    double ft1(double k) const { return 2.0 * s_ * sinhc_ratio(M_PI * k * s_ / 2.0); }
    // int sech^4(x/s) e^{-ikx} dx = (s/6) ((ks)^2 + 4) * (pi k s/2)/sinh(pi k s/2) * ... )
    double ft1sq(double k) const {
        const double q = k * s_;
        return s_ * (q * q + 4.0) / 6.0 * 2.0 * sinhc_ratio(M_PI * q / 2.0);
    }
    int d_;
    double A_, s_;
};

double bump_shape(double u) {
    if (u >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

// composite Simpson over [0,1]
template <typename F>
double simpson01(const F& f, int intervals) {
    const int m = intervals + (intervals % 2);
    const double h = 1.0 / m;
    double s = f(0.0) + f(1.0);
    for (int i = 1; i < m; ++i) s += f(i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

class CompactBumpPotential final : public AnalyticPotential {
public:
    CompactBumpPotential(int d, double A, double sigma) : d_(d), A_(A), s_(sigma) {
        if (d_ == 1) {
            int_ = A_ * 2.0 * s_ * simpson01([](double u) { return bump_shape(u); }, 512);
        } else {
            int_ = A_ * kTwoPi * s_ * s_ *
                   simpson01([](double u) { return bump_shape(u) * u; }, 512);
        }
        // radial transform tables; the transform decays superalgebraically so
        // a finite cap with zero beyond is adequate
        build_table(tab_w_, [](double u) { return bump_shape(u); });
        build_table(tab_w2_, [](double u) {
            const double b = bump_shape(u);
            return b * b;
        });
    }
    double value(double x, double y) const override {
        const double r = std::sqrt(x * x + y * y);
        return A_ * bump_shape(r / s_);
    }
    double fourier(double kx, double ky) const override {
        return A_ * lookup(tab_w_, std::sqrt(kx * kx + ky * ky));
    }
    double fourier_of_square(double kx, double ky) const override {
        return A_ * A_ * lookup(tab_w2_, std::sqrt(kx * kx + ky * ky));
    }
    double integral() const override { return int_; }
    double negative_part_integral() const override { return A_ < 0.0 ? -int_ : 0.0; }
    double sup_norm() const override { return std::abs(A_); }
    double width() const override { return s_; }
    int dimension() const override { return d_; }
    std::string describe() const override { return "compact_bump"; }

private:
    static constexpr int kTab = 16384;
    static constexpr double kXiCap = 600.0;  // in units of 1/width

    template <typename Shape>
    void build_table(std::vector<double>& tab, const Shape& shape) const {
        tab.resize(kTab + 1);
        for (int i = 0; i <= kTab; ++i) {
            const double q = kXiCap * i / kTab;  // |k| * s_
            if (d_ == 1) {
                tab[static_cast<std::size_t>(i)] =
                    2.0 * s_ * simpson01([&](double u) { return shape(u) * std::cos(q * u); }, 512);
            } else {
                tab[static_cast<std::size_t>(i)] =
                    kTwoPi * s_ * s_ *
                    simpson01(
                        [&](double u) { return shape(u) * std::cyl_bessel_j(0.0, q * u) * u; },
                        512);
            }
        }
    }
    double lookup(const std::vector<double>& tab, double k) const {
        const double q = k * s_;
        if (q >= kXiCap) return 0.0;
        const double x = q / kXiCap * kTab;
        const int i = std::min(kTab - 1, static_cast<int>(x));
        const double f = x - i;
        return (1.0 - f) * tab[static_cast<std::size_t>(i)] +
               f * tab[static_cast<std::size_t>(i) + 1];
    }

    int d_;
    double A_, s_;
    double int_;
    std::vector<double> tab_w_, tab_w2_;
};

}  // namespace

std::shared_ptr<const AnalyticPotential> make_analytic_potential(
    const std::string& name, int dimension, double amplitude, double width) {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("make_analytic_potential: dimension must be 1 or 2");
    if (!(width > 0.0))
        throw std::invalid_argument("make_analytic_potential: width must be positive");
    if (name == "gaussian")
        return std::make_shared<GaussianPotential>(dimension, amplitude, width);
    if (name == "sech2")
        return std::make_shared<Sech2Potential>(dimension, amplitude, width);
    if (name == "compact_bump")
        return std::make_shared<CompactBumpPotential>(dimension, amplitude, width);
    throw std::invalid_argument("make_analytic_potential: unknown form '" + name +
                                "' (expected gaussian, sech2 or compact_bump)");
}

Potential::Potential(const PeriodicGrid& grid, std::shared_ptr<const AnalyticPotential> form)
    : grid_(grid),
      profile_(ComplexField::from_signed_function(
          grid, [&form](double x, double y) { return cplx(form->value(x, y), 0.0); })),
      analytic_(std::move(form)) {
    if (analytic_->dimension() != grid_.dimension())
        throw std::invalid_argument("Potential: analytic form dimension does not match grid");
    total_integral_ = analytic_->integral();
    negative_part_integral_ = analytic_->negative_part_integral();
    sup_norm_ = analytic_->sup_norm();
    width_ = analytic_->width();
    spectral_ = spectral_coefficients(profile_);
}

Potential::Potential(const PeriodicGrid& grid, const ComplexField& profile)
    : grid_(grid), profile_(profile) {
    if (profile.grid() != grid)
        throw std::invalid_argument("Potential: profile grid mismatch");
    const int n = grid.points_per_axis();
    double max_imag = 0.0, max_odd = 0.0;
    auto at = [&](int i, int j) {
        return profile[grid.dimension() == 1 ? static_cast<std::size_t>(i) : grid.flat(i, j)];
    };
    for (int i = 0; i < n; ++i) {
        const int mi = (n - i) % n;
        const int jmax = grid.dimension() == 2 ? n : 1;
        for (int j = 0; j < jmax; ++j) {
            const int mj = (n - j) % n;
            max_imag = std::max(max_imag, std::abs(at(i, j).imag()));
            max_odd = std::max(max_odd, std::abs(at(i, j) - at(mi, mj)));
        }
    }
    if (max_imag > 1e-12)
        throw std::invalid_argument("Potential: profile must be real");
    if (max_odd > 1e-12)
        throw std::invalid_argument("Potential: profile must be even, w(x) = w(-x)");
    finalize_moments();
    spectral_ = spectral_coefficients(profile_);
}

void Potential::finalize_moments() {
    const double hd = grid_.cell_volume();
    double tot = 0.0, neg = 0.0, sup = 0.0;
    for (const auto& c : profile_.values()) {
        const double v = c.real();
        tot += v;
        if (v < 0.0) neg -= v;
        sup = std::max(sup, std::abs(v));
    }
    total_integral_ = hd * tot;
    negative_part_integral_ = hd * neg;
    sup_norm_ = sup;
    // decay scale from the second moment of |w|
    double m0 = 0.0, m2 = 0.0;
    const int n = grid_.points_per_axis();
    for (int i = 0; i < n; ++i) {
        const double x = grid_.signed_coord(i);
        const int jmax = grid_.dimension() == 2 ? n : 1;
        for (int j = 0; j < jmax; ++j) {
            const double y = grid_.dimension() == 2 ? grid_.signed_coord(j) : 0.0;
            const double a = std::abs(
                profile_[grid_.dimension() == 1 ? static_cast<std::size_t>(i) : grid_.flat(i, j)]
                    .real());
            m0 += a;
            m2 += a * (x * x + y * y);
        }
    }
    width_ = m0 > 0.0 ? std::sqrt(m2 / m0) : grid_.spacing();
}

double Potential::value_at(double x, double y) const {
    if (analytic_) return analytic_->value(x, y);
    // trigonometric interpolation of the sampled profile
    const int n = grid_.points_per_axis();
    cplx acc(0.0, 0.0);
    if (grid_.dimension() == 1) {
        for (int m = 0; m < n; ++m)
            acc += spectral_[static_cast<std::size_t>(m)] *
                   std::polar(1.0, grid_.wavenumber(m) * x);
    } else {
        std::size_t idx = 0;
        for (int a = 0; a < n; ++a) {
            const double ka = grid_.wavenumber(a);
            for (int b = 0; b < n; ++b, ++idx)
                acc += spectral_[idx] * std::polar(1.0, ka * x + grid_.wavenumber(b) * y);
        }
    }
    return (acc / grid_.volume()).real();
}

double Potential::fourier_at(double kx, double ky) const {
    if (analytic_) return analytic_->fourier(kx, ky);
    const int n = grid_.points_per_axis();
    cplx acc(0.0, 0.0);
    if (grid_.dimension() == 1) {
        for (int i = 0; i < n; ++i)
            acc += profile_[static_cast<std::size_t>(i)] *
                   std::polar(1.0, -kx * grid_.signed_coord(i));
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++idx)
                acc += profile_[idx] *
                       std::polar(1.0, -kx * grid_.signed_coord(i) - ky * grid_.signed_coord(j));
    }
    return (grid_.cell_volume() * acc).real();
}

void Potential::export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("Potential::export_csv: cannot open " + path);
    const int n = grid_.points_per_axis();
    if (grid_.dimension() == 1) {
        out << "x,value\n";
        for (int i = 0; i < n; ++i) {
            out.precision(17);
            out << grid_.signed_coord(i) << "," << profile_[static_cast<std::size_t>(i)].real()
                << "\n";
        }
    } else {
        out << "x,y,value\n";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                out.precision(17);
                out << grid_.signed_coord(i) << "," << grid_.signed_coord(j) << ","
                    << profile_[grid_.flat(i, j)].real() << "\n";
            }
    }
}

Potential Potential::import_csv(const PeriodicGrid& grid, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Potential::import_csv: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> vals;
    vals.reserve(grid.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto pos = line.rfind(',');
        if (pos == std::string::npos)
            throw std::runtime_error("Potential::import_csv: malformed row '" + line + "'");
        vals.push_back(std::stod(line.substr(pos + 1)));
    }
    if (vals.size() != grid.size())
        throw std::runtime_error("Potential::import_csv: row count does not match grid");
    ComplexField f(grid);
    for (std::size_t i = 0; i < vals.size(); ++i) f[i] = cplx(vals[i], 0.0);
    return Potential(grid, f);
}

ScaledPotential::ScaledPotential(const Potential& base, int N, double beta,
                                 const PeriodicGrid& grid)
    : base_(base), N_(N), beta_(beta), grid_(grid), profile_(grid), grid_values_(grid) {
    if (N < 1) throw std::invalid_argument("ScaledPotential: N must be >= 1");
    if (!(beta > 0.0)) throw std::invalid_argument("ScaledPotential: beta must be positive");
    if (base.grid().dimension() != grid.dimension())
        throw std::invalid_argument("ScaledPotential: dimension mismatch");

    const double s = std::pow(static_cast<double>(N), beta);
    const double amp = std::pow(s, grid.dimension());
    resolution_warning_ = grid.spacing() > base.width() / (4.0 * s);

    profile_ = ComplexField::from_signed_function(grid, [&](double x, double y) {
        return cplx(amp * base_.value_at(s * x, s * y), 0.0);
    });

    spectral_.resize(grid.size());
    const int n = grid.points_per_axis();
    if (grid.dimension() == 1) {
        for (int m = 0; m < n; ++m)
            spectral_[static_cast<std::size_t>(m)] = base_.fourier_at(grid.wavenumber(m) / s);
    } else {
        std::size_t idx = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b, ++idx)
                spectral_[idx] =
                    base_.fourier_at(grid.wavenumber(a) / s, grid.wavenumber(b) / s);
    }
    grid_values_ = field_from_spectral(grid, spectral_);
}

ComplexField ScaledPotential::convolve_with(const ComplexField& f) const {
    if (f.grid() != grid_)
        throw std::invalid_argument("ScaledPotential::convolve_with: grid mismatch");
    std::vector<cplx> fh(f.size());
    dft_forward(grid_, f.values().data(), fh.data());
    for (std::size_t i = 0; i < fh.size(); ++i) fh[i] *= spectral_[i];
    ComplexField out(grid_);
    dft_backward(grid_, fh.data(), out.values().data());
    // h^d from the measure on f-hat, 1/L^d from the inverse series
    const double scale = 1.0 / static_cast<double>(f.size());
    for (auto& c : out.values()) c *= scale;
    return out;
}

double ScaledPotential::fourier_at(double kx, double ky) const {
    const double s = std::pow(static_cast<double>(N_), beta_);
    return base_.fourier_at(kx / s, ky / s);
}

ScaledPotential scale_potential(const Potential& base, int N, double beta,
                                const PeriodicGrid& grid) {
    return ScaledPotential(base, N, beta, grid);
}

StabilityReport stability_check(const Potential& base, double a_star) {
    if (!(a_star > 0.0))
        throw std::invalid_argument("stability_check: a_star must be positive");
    StabilityReport r;
    r.margin = a_star - base.negative_part_integral();
    r.stable = base.grid().dimension() == 1 || base.negative_part_integral() < a_star;
    return r;
}

GNReport gn_inequality_check(const ComplexField& f, double a_star) {
    GNReport r;
    const NormSet n = norms(f);
    const double grad2 = std::max(0.0, n.h1 * n.h1 - n.l2 * n.l2);
    r.lhs = grad2 * n.l2 * n.l2;
    r.rhs = 0.5 * a_star * std::pow(n.l4, 4);
    r.holds = r.lhs >= r.rhs * (1.0 - 1e-6);
    return r;
}

}  // namespace bosedyn
