#ifndef BOSEDYN_QUADRATIC_KERNELS_HPP
#define BOSEDYN_QUADRATIC_KERNELS_HPP

#include <Eigen/Dense>
#include <functional>

#include "bosedyn/mode_basis.hpp"
#include "bosedyn/potential.hpp"

namespace bosedyn {

struct OneBodyOperator {
    Eigen::MatrixXcd matrix;  // Hermitian in the mode basis
};

struct PairingKernel {
    Eigen::MatrixXcd matrix;  // symmetric; condensate row/column projected out
};

// One-body generator h = -lap + (w_N*|u|^2 - mu) + Q Ktil1 Q and pairing
// kernel K2 = (Q (x) Q) Ktil2 in a plane-wave mode basis, where
// Ktil1(x,y) = u(x) w_N(x-y) conj(u(y)), Ktil2(x,y) = u(x) w_N(x-y) u(y),
// Q = 1 - |u><u|.
struct GeneratorKernels {
    OneBodyOperator h;
    PairingKernel K2;
    Eigen::MatrixXcd K1til;    // unprojected Ktil1 in the mode basis
    Eigen::VectorXcd u_coeff;  // condensate coefficients in the basis
    double mu = 0.0;
    Eigen::VectorXcd mean_field_u;  // coefficients of (w_N*|u|^2) u
};

GeneratorKernels build_generator_kernels(const ComplexField& u, const ScaledPotential& wN,
                                         const ModeBasis& basis);

// kernels along a trajectory, keyed by time
using KernelsAt = std::function<GeneratorKernels(double)>;

// ||(1 - lap_x)^{-1/2} K||_HS with the multiplier diagonal on the first leg
double kernel_sobolev_norm(const PairingKernel& K2, const ModeBasis& basis);
double kernel_hs_norm(const PairingKernel& K2);

}  // namespace bosedyn

#endif
