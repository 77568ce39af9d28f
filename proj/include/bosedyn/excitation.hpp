#ifndef BOSEDYN_EXCITATION_HPP
#define BOSEDYN_EXCITATION_HPP

#include "bosedyn/fock_ops.hpp"

namespace bosedyn {

// Unitary identification of an N-particle state with its condensate
// excitation components: Psi = sum_n (adag(c))^{N-n}/sqrt((N-n)!) psi_n with
// every psi_n orthogonal to the condensate vector c in each leg. Both
// directions work in the fixed plane-wave occupation basis; the components
// are extracted by peeling condensate annihilations rather than by an
// explicit change of single-particle basis.

// fixed-N state -> components (psi_0,...,psi_N) in the <=N truncated basis
FockVector excitation_map(const FockVector& psi, const Eigen::VectorXcd& c);

// components -> fixed-N state; throws std::domain_error if the components
// are not orthogonal to c (tolerance support_tol on a(c) applied per sector)
FockVector excitation_unmap(const FockVector& phi, const Eigen::VectorXcd& c, int N,
                            double support_tol = 1e-8);

// squared norm of a(c) applied to the state, the support-violation measure
double condensate_support_defect(const FockVector& phi, const Eigen::VectorXcd& c);

}  // namespace bosedyn

#endif
