#ifndef BOSEDYN_KERNEL_NORMS_HPP
#define BOSEDYN_KERNEL_NORMS_HPP

#include "bosedyn/potential.hpp"

namespace bosedyn {

struct KernelNormReport {
    double hs2 = 0.0;           // ||K2||_{L2}^2, condensate-projected kernel
    double sobolev_hs2 = 0.0;   // ||(1-lap_x)^{-1/2} K2||_{L2}^2
    double hs2_raw = 0.0;       // same numbers for the unprojected kernel
    double sobolev_hs2_raw = 0.0;
    double tail_fraction = 0.0; // share of the weighted norm from the far tail
};

// Norms of the pairing kernel u(x) w_N(x-y) u(y) with w_N treated as the
// continuum object (analytic transform w-hat(k N^-beta)), u band-limited to a
// quarter of the grid band. The kernel's spectrum extends to |k| ~ N^beta,
// far beyond the grid, so the first-leg sum runs over an extended wavenumber
// lattice: an exact core up to a cutoff plus a quadrature tail where the
// band-limited factors are frozen at leading order. Projection corrections
// are rank-one and evaluated exactly on the grid.
KernelNormReport extended_kernel_norms(const ComplexField& u, const Potential& w, int N,
                                       double beta);

}  // namespace bosedyn

#endif
