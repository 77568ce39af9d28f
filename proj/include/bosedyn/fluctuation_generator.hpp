#ifndef BOSEDYN_FLUCTUATION_GENERATOR_HPP
#define BOSEDYN_FLUCTUATION_GENERATOR_HPP

#include <Eigen/Sparse>

#include "bosedyn/fock_ops.hpp"
#include "bosedyn/quadratic_kernels.hpp"

namespace bosedyn {

// Generator of the conjugated fluctuation dynamics on the truncated
// excitation space: the quadratic part dGamma(h) + (1/2)(K2 adag adag + h.c.)
// plus the five correction families scaled by number-operator factors. All
// cubic/quartic pieces are applied through condensate-projected ladder
// operators b_p = a(Q e_p), which keeps the wavenumber-channel structure
// and needs no explicit four-index tensor.
class FluctuationGenerator {
public:
    FluctuationGenerator(const GeneratorKernels& kernels, const ScaledPotential& wN,
                         const ModeBasis& modes, int N, bool include_error_terms);

    int particle_number() const { return N_; }
    bool has_error_terms() const { return with_E_; }

    // bitmask over the five correction families, for diagnostics
    unsigned term_mask = 0x1f;

    // out += G in  (basis sectors define the compression 1^{<=M} G 1^{<=M})
    void accumulate(const BosonBasis& basis, const Vec& in, Vec& out) const;
    ApplyFn apply_fn(const BosonBasis& basis) const;

    // explicit matrix for small spaces (tests, spectra)
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> materialize(const BosonBasis& basis,
                                                           std::size_t cap = 5000) const;

private:
    void sigma_apply(const BosonBasis& b, int m, const Vec& in, Vec& out, cplx pref) const;

    int L_ = 0;
    int N_ = 0;
    bool with_E_ = true;
    double vol_ = 0.0;
    Mat h_, K2_, A0_;
    Vec g1_, c_;
    std::vector<cplx> what_;       // channel coefficients, mode-indexed
    std::vector<int> neg_;         // mode index of -k_m
    std::vector<int> add_;         // [m][r] -> index of k_r + k_m
    std::vector<Vec> x_;           // x_m[p] = c_{p - m}
    std::vector<Vec> v_;           // v_m[s] = c_{s + m}
    std::vector<Vec> qx_;          // Q-projected x_m
    std::vector<cplx> scal_;       // sum_s conj(c_{s+m}) c_s
};

// time-dependent kernels -> midpoint-frozen Krylov steps
FockVector evolve_fluctuation(const FockVector& phi0, const KernelsAt& kernels,
                              const ScaledPotential& wN, const ModeBasis& modes, int N,
                              double t0, double t_final, double dt, bool include_error_terms,
                              double krylov_tol = 1e-11);

// spec-level bundle of explicit sparse matrices for small truncations
struct GeneratorBundle {
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> H_bog;
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> G_N;
    double t = 0.0;
};

GeneratorBundle build_fock_generator(const ComplexField& u, const ScaledPotential& wN, int N,
                                     const ModeBasis& modes, int M_trunc,
                                     std::size_t cap = 5000);

}  // namespace bosedyn

#endif
