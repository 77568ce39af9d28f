#ifndef BOSEDYN_FOCK_OPS_HPP
#define BOSEDYN_FOCK_OPS_HPP

#include <Eigen/Dense>
#include <functional>

#include "bosedyn/fock_basis.hpp"

namespace bosedyn {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

struct FockVector {
    BosonBasis basis;
    Vec coeff;

    double norm() const { return coeff.norm(); }
    int sectors() const { return basis.max_total(); }
    // squared norm per sector 0..M (zeros below min_sector)
    std::vector<double> sector_norms2() const;
};

FockVector vacuum_state(const BosonBasis& basis);

// ladder-operator applications; every function accumulates pref * (op in)
// into out. Creations that would leave the stored sector range are dropped,
// which is exactly the compressed operator 1^{<=M} op 1^{<=M}.

// sum_{p,q} A(p,q) adag_p a_q
void acc_one_body(const BosonBasis& b, const Mat& A, const Vec& in, Vec& out, cplx pref);
// sum_r w_r adag_{tgt[r]} a_r  (single-target one-body; w may be null = 1)
void acc_mapped_move(const BosonBasis& b, const int* tgt, const Vec* w, const Vec& in, Vec& out,
                     cplx pref);
// adag(g) = sum_p g_p adag_p
void acc_create(const BosonBasis& b, const Vec& g, const Vec& in, Vec& out, cplx pref);
// a(g) = sum_p conj(g_p) a_p
void acc_annihilate(const BosonBasis& b, const Vec& g, const Vec& in, Vec& out, cplx pref);
// sum_{pq} M(p,q) adag_p adag_q
void acc_pair_create(const BosonBasis& b, const Mat& M, const Vec& in, Vec& out, cplx pref);
// adjoint of the above: sum_{pq} conj(M(p,q)) a_q a_p
void acc_pair_annihilate(const BosonBasis& b, const Mat& M, const Vec& in, Vec& out, cplx pref);
// f(total occupation) diagonal
void acc_sector_diag(const BosonBasis& b, const std::function<double(int)>& f, const Vec& in,
                     Vec& out, cplx pref);
// sum_p w_p n_p diagonal
void acc_mode_diag(const BosonBasis& b, const Eigen::VectorXd& w, const Vec& in, Vec& out,
                   cplx pref);

// expectations and one-body reductions
double number_expectation(const FockVector& v);
// <dGamma(diag weights)>
double dgamma_diag_expectation(const FockVector& v, const Eigen::VectorXd& w);
// gamma(p,q) = <adag_q a_p>, alpha(p,q) = <a_q a_p> (alpha needs a truncated basis)
Mat one_body_density(const FockVector& v);
Mat pairing_density(const FockVector& v);

// Krylov (Lanczos) propagation psi -> exp(-i dt H) psi for Hermitian applies
using ApplyFn = std::function<void(const Vec&, Vec&)>;
Vec krylov_exp_step(const ApplyFn& H, const Vec& psi, double dt, double tol = 1e-12,
                    int max_m = 48);

// smallest eigenvalue of a Hermitian apply by Lanczos with full
// reorthogonalization (dimension dim)
double lanczos_smallest_eigenvalue(const ApplyFn& H, std::size_t dim, int max_m = 160,
                                   double tol = 1e-10, unsigned seed = 12345);

}  // namespace bosedyn

#endif
