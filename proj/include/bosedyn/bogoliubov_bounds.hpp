#ifndef BOSEDYN_BOGOLIUBOV_BOUNDS_HPP
#define BOSEDYN_BOGOLIUBOV_BOUNDS_HPP

#include "bosedyn/fock_ops.hpp"

namespace bosedyn {

struct QuadraticBoundReport {
    double ground_energy = 0.0;
    double bound = 0.0;  // -(1/2) ||H^{-1/2} K||_HS^2
    bool holds = false;
};

// Ground energy of dGamma(H) + (1/2) sum (K adag adag + conj(K) a a) on the
// Fock space over the modes of H, truncated at total occupation M_trunc,
// against the Hilbert-Schmidt lower bound. Preconditions: H positive
// definite, K symmetric, K H^{-1} K^dag <= H (checked to 1e-10).
QuadraticBoundReport quadratic_lower_bound_check(const Mat& H, const Mat& K, int M_trunc,
                                                 std::size_t cap = 200000);

}  // namespace bosedyn

#endif
