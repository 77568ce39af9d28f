#ifndef BOSEDYN_LATTICE_HAMILTONIAN_HPP
#define BOSEDYN_LATTICE_HAMILTONIAN_HPP

#include <Eigen/Sparse>

#include "bosedyn/fock_ops.hpp"
#include "bosedyn/mode_basis.hpp"
#include "bosedyn/potential.hpp"

namespace bosedyn {

using SparseH = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// N-boson Hamiltonian on the grid's full plane-wave mode set:
//   sum_p |k_p|^2 adag_p a_p
//   + (1/(2(N-1))) sum_k (what_N(k)/vol) sum_{rs} adag_{r+k} adag_{s-k} a_r a_s
// The explicit sparse form drops entries below 1e-14.
SparseH build_HN(const ModeBasis& modes, const ScaledPotential& wN, int N,
                 std::size_t cap = 200000);

// matrix-free application of the same operator (for large sectors)
ApplyFn make_hn_apply(const BosonBasis& basis, const ModeBasis& modes,
                      const ScaledPotential& wN, int N);

// short-time Krylov propagation psi -> exp(-i (t_final - t0) H) psi in steps
// of dt; Hermitian H. For non-unit input set allow_unnormalized.
FockVector exact_evolve(const FockVector& psi, const ApplyFn& H, double t0, double t_final,
                        double dt, bool allow_unnormalized = false, double krylov_tol = 1e-12);

}  // namespace bosedyn

#endif
