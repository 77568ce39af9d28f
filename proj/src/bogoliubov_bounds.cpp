#include "bosedyn/bogoliubov_bounds.hpp"

#include <Eigen/Eigenvalues>

namespace bosedyn {

QuadraticBoundReport quadratic_lower_bound_check(const Mat& H, const Mat& K, int M_trunc,
                                                 std::size_t cap) {
    const int L = static_cast<int>(H.rows());
    if (H.cols() != L || K.rows() != L || K.cols() != L)
        throw std::invalid_argument("quadratic_lower_bound_check: shape mismatch");
    if ((H - H.adjoint()).norm() > 1e-10)
        throw std::invalid_argument("quadratic_lower_bound_check: H must be Hermitian");
    if ((K - K.transpose()).norm() > 1e-10)
        throw std::invalid_argument("quadratic_lower_bound_check: K must be symmetric");

    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    if (es.eigenvalues()(0) <= 0.0)
        throw std::invalid_argument("quadratic_lower_bound_check: H must be positive definite");
    // admissibility: K acts out of the conjugate space, so the sandwiched
    // resolvent is the conjugate of H^{-1}
    const Mat Hinv = es.operatorInverseSqrt() * es.operatorInverseSqrt();
    Eigen::SelfAdjointEigenSolver<Mat> gap(H - K * Hinv.conjugate() * K.adjoint());
    if (gap.eigenvalues()(0) < -1e-10)
        throw std::invalid_argument(
            "quadratic_lower_bound_check: K H^{-1} K^dag <= H fails (precondition)");

    QuadraticBoundReport rep;
    rep.bound = -0.5 * (es.operatorInverseSqrt() * K).squaredNorm();

    const BosonBasis basis = BosonBasis::truncated(L, M_trunc, cap);
    auto Hm = std::make_shared<Mat>(H);
    auto Km = std::make_shared<Mat>(K);
    auto b = std::make_shared<BosonBasis>(basis);
    ApplyFn apply = [Hm, Km, b](const Vec& in, Vec& out) {
        acc_one_body(*b, *Hm, in, out, cplx(1.0, 0.0));
        acc_pair_create(*b, *Km, in, out, cplx(0.5, 0.0));
        acc_pair_annihilate(*b, *Km, in, out, cplx(0.5, 0.0));
    };
    rep.ground_energy = lanczos_smallest_eigenvalue(apply, basis.size(), 240, 1e-12);
    rep.holds = rep.ground_energy >= rep.bound - 1e-8;
    return rep;
}

}  // namespace bosedyn
