#ifndef BOSEDYN_POTENTIAL_HPP
#define BOSEDYN_POTENTIAL_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bosedyn/field.hpp"

namespace bosedyn {

// Analytic interaction profile w with closed-form (or pre-tabulated) Fourier
// transform. Registered forms keep scaling exact at large scale factors,
// where pointwise grid samples of the squeezed profile alias badly.
class AnalyticPotential {
public:
    virtual ~AnalyticPotential() = default;
    virtual double value(double x, double y) const = 0;
    virtual double fourier(double kx, double ky) const = 0;  // int w e^{-ikx} dx
    virtual double integral() const = 0;
    virtual double negative_part_integral() const = 0;
    virtual double sup_norm() const = 0;
    virtual double width() const = 0;  // support/decay scale
    virtual int dimension() const = 0;
    virtual std::string describe() const = 0;
    // Fourier transform of w^2 (used by kernel-norm evaluations)
    virtual double fourier_of_square(double kx, double ky) const = 0;
};

// name: gaussian | sech2 | compact_bump; amplitude may be negative.
std::shared_ptr<const AnalyticPotential> make_analytic_potential(
    const std::string& name, int dimension, double amplitude, double width);

// Even real interaction potential w sampled at signed grid coordinates.
class Potential {
public:
    // sample a registered analytic form on the grid
    Potential(const PeriodicGrid& grid, std::shared_ptr<const AnalyticPotential> form);
    // adopt a raw profile (values at signed coordinates); enforces evenness/realness
    Potential(const PeriodicGrid& grid, const ComplexField& profile);

    const PeriodicGrid& grid() const { return grid_; }
    const ComplexField& profile() const { return profile_; }
    double total_integral() const { return total_integral_; }
    double negative_part_integral() const { return negative_part_integral_; }
    double sup_norm() const { return sup_norm_; }
    double width() const { return width_; }
    const std::shared_ptr<const AnalyticPotential>& analytic() const { return analytic_; }

    // evaluate w at an arbitrary point: analytic form if present, otherwise
    // band-limited (trigonometric) interpolation of the grid profile
    double value_at(double x, double y = 0.0) const;
    // evaluate the Fourier transform of w at an arbitrary wavenumber
    double fourier_at(double kx, double ky = 0.0) const;

    void export_csv(const std::string& path) const;
    static Potential import_csv(const PeriodicGrid& grid, const std::string& path);

private:
    void finalize_moments();
    PeriodicGrid grid_;
    ComplexField profile_;
    std::shared_ptr<const AnalyticPotential> analytic_;
    double total_integral_ = 0.0;
    double negative_part_integral_ = 0.0;
    double sup_norm_ = 0.0;
    double width_ = 1.0;
    std::vector<cplx> spectral_;  // coefficients of the grid profile
};

// w_N(x) = N^{d beta} w(N^beta x) on the grid. The canonical interaction data
// for every consumer is the spectral table what_N(k) = what(k N^-beta) on the
// grid wavenumbers (exact for registered analytic forms even when the squeezed
// profile is far below grid resolution) together with its band-limited grid
// representation. The pointwise profile is kept for inspection and for
// resolved-regime checks.
class ScaledPotential {
public:
    ScaledPotential(const Potential& base, int N, double beta, const PeriodicGrid& grid);

    const Potential& base() const { return base_; }
    int scale_N() const { return N_; }
    double beta() const { return beta_; }
    const PeriodicGrid& grid() const { return grid_; }
    bool resolution_warning() const { return resolution_warning_; }

    // pointwise samples N^{d beta} w(N^beta x)
    const ComplexField& profile() const { return profile_; }
    // spectral coefficients of w_N on the grid wavenumber lattice
    const std::vector<cplx>& spectral() const { return spectral_; }
    // band-limited grid representation (inverse transform of spectral())
    const ComplexField& grid_values() const { return grid_values_; }
    double total_integral() const { return base_.total_integral(); }

    // w_N * f via the spectral table
    ComplexField convolve_with(const ComplexField& f) const;

    // Fourier transform of w_N at an arbitrary wavenumber (analytic route)
    double fourier_at(double kx, double ky = 0.0) const;

private:
    Potential base_;
    int N_;
    double beta_;
    PeriodicGrid grid_;
    bool resolution_warning_ = false;
    ComplexField profile_;
    ComplexField grid_values_;
    std::vector<cplx> spectral_;
};

ScaledPotential scale_potential(const Potential& base, int N, double beta,
                                const PeriodicGrid& grid);

struct StabilityReport {
    bool stable = false;
    double margin = 0.0;
};

// focusing-stability gate in d=2: integral of |w_-| against the critical
// constant; d=1 needs no condition and always reports stable
StabilityReport stability_check(const Potential& base, double a_star);

struct GNReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// lhs = |grad f|^2 |f|^2, rhs = (a*/2) |f|_4^4
GNReport gn_inequality_check(const ComplexField& f, double a_star);

}  // namespace bosedyn

#endif
