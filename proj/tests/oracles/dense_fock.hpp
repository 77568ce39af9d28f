#ifndef BOSEDYN_TESTS_DENSE_FOCK_HPP
#define BOSEDYN_TESTS_DENSE_FOCK_HPP

// Brute-force dense assembly of second-quantized operators on small
// truncated bases, straight from ladder matrices and grid quadratures.
// Deliberately independent of the channel-structured production code.

#include <Eigen/Dense>

#include "bosedyn/fock_ops.hpp"
#include "bosedyn/mode_basis.hpp"
#include "bosedyn/potential.hpp"
#include "bosedyn/quadratic_kernels.hpp"

namespace bosedyn_oracle {

using bosedyn::BosonBasis;
using bosedyn::cplx;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline std::vector<Mat> ladder_ops(const BosonBasis& b) {
    const int L = b.modes();
    const std::size_t dim = b.size();
    std::vector<Mat> a(static_cast<std::size_t>(L),
                       Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
    for (std::size_t j = 0; j < dim; ++j)
        for (int p = 0; p < L; ++p) {
            const int np = b.occ(j, p);
            if (np == 0) continue;
            const std::size_t i = b.lowered(j, p);
            if (i == BosonBasis::npos) continue;
            a[static_cast<std::size_t>(p)](static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(j)) =
                std::sqrt(static_cast<double>(np));
        }
    return a;
}

inline Mat sector_diag(const BosonBasis& b, const std::function<double(int)>& f) {
    const std::size_t dim = b.size();
    Mat d = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) d(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(i)) = f(b.sector_of(i));
    return d;
}

inline Mat dgamma_dense(const BosonBasis& b, const Mat& h, const std::vector<Mat>& a) {
    const int L = b.modes();
    Mat out = Mat::Zero(a[0].rows(), a[0].cols());
    for (int p = 0; p < L; ++p)
        for (int q = 0; q < L; ++q)
            if (h(p, q) != cplx(0.0, 0.0))
                out += h(p, q) * (a[static_cast<std::size_t>(p)].adjoint() *
                                  a[static_cast<std::size_t>(q)]);
    return out;
}

// two-body quadrature <f1 (x) f2, w(x-y) (g1 (x) g2)> on the grid
inline cplx two_body_element(const bosedyn::ComplexField& f1, const bosedyn::ComplexField& f2,
                             const bosedyn::ComplexField& g1, const bosedyn::ComplexField& g2,
                             const bosedyn::ScaledPotential& wN) {
    const auto& grid = f1.grid();
    const int n = grid.points_per_axis();
    const auto& wv = wN.grid_values();
    cplx acc(0.0, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int dij = (i - j + n) % n;
            acc += std::conj(f1[static_cast<std::size_t>(i)] * f2[static_cast<std::size_t>(j)]) *
                   wv[static_cast<std::size_t>(dij)].real() * g1[static_cast<std::size_t>(i)] *
                   g2[static_cast<std::size_t>(j)];
        }
    return acc * grid.cell_volume() * grid.cell_volume();
}

struct DenseGenerator {
    Mat H_bog;
    Mat R[5];
    Mat G;
};

// literal assembly of the fluctuation generator on a <=M truncated basis
// over the full d=1 mode set
inline DenseGenerator dense_generator(const bosedyn::ComplexField& u,
                                      const bosedyn::ScaledPotential& wN,
                                      const bosedyn::ModeBasis& modes, int N,
                                      const BosonBasis& basis) {
    using namespace bosedyn;
    const int L = modes.size();
    const auto a = ladder_ops(basis);
    const GeneratorKernels ker = build_generator_kernels(u, wN, modes);

    // projected mode fields Q e_p
    std::vector<ComplexField> qe;
    for (int p = 0; p < L; ++p) {
        ComplexField ep = modes.field_of_mode(p);
        const cplx ov = inner(u, ep);
        ComplexField uu = u;
        uu *= ov;
        ep -= uu;
        qe.push_back(ep);
    }

    DenseGenerator out;
    out.H_bog = dgamma_dense(basis, ker.h.matrix, a);
    {
        Mat pair = Mat::Zero(a[0].rows(), a[0].cols());
        for (int p = 0; p < L; ++p)
            for (int q = 0; q < L; ++q)
                pair += ker.K2.matrix(p, q) * (a[static_cast<std::size_t>(p)].adjoint() *
                                               a[static_cast<std::size_t>(q)].adjoint());
        out.H_bog += 0.5 * (pair + pair.adjoint());
    }

    const double Nm1 = N - 1.0;
    // R0
    {
        Mat A0 = ker.h.matrix;
        for (int p = 0; p < L; ++p) A0(p, p) -= modes.mode_ksq(p);
        const Vec c = ker.u_coeff;
        Mat Q = Mat::Identity(L, L) - c * c.adjoint();
        A0 = (Q * A0 * Q).eval();
        out.R[0] = dgamma_dense(basis, A0, a) *
                   sector_diag(basis, [&](int n) { return (1.0 - n) / Nm1; });
    }
    // R1
    {
        const Vec c = ker.u_coeff;
        Vec g = ker.mean_field_u - c * c.dot(ker.mean_field_u);
        Mat ag = Mat::Zero(a[0].rows(), a[0].cols());
        for (int p = 0; p < L; ++p) ag += std::conj(g[p]) * a[static_cast<std::size_t>(p)];
        out.R[1] = sector_diag(basis,
                               [&](int n) {
                                   return -2.0 * n *
                                          std::sqrt(std::max(0.0, static_cast<double>(N - n))) /
                                          Nm1;
                               }) *
                   ag;
    }
    // R2
    {
        Mat pair = Mat::Zero(a[0].rows(), a[0].cols());
        for (int p = 0; p < L; ++p)
            for (int q = 0; q < L; ++q)
                pair += ker.K2.matrix(p, q) * (a[static_cast<std::size_t>(p)].adjoint() *
                                               a[static_cast<std::size_t>(q)].adjoint());
        out.R[2] = pair * sector_diag(basis, [&](int n) {
                       const double x = (N - n) * (N - n - 1.0);
                       return std::sqrt(std::max(0.0, x)) / Nm1 - 1.0;
                   });
    }
    // R3: B(q; r,s) = <u (x) Qe_q, w (Qe_r (x) Qe_s)>
    {
        Mat cubic = Mat::Zero(a[0].rows(), a[0].cols());
        for (int q = 0; q < L; ++q)
            for (int r = 0; r < L; ++r)
                for (int s = 0; s < L; ++s) {
                    const cplx B = two_body_element(u, qe[static_cast<std::size_t>(q)],
                                                    qe[static_cast<std::size_t>(r)],
                                                    qe[static_cast<std::size_t>(s)], wN);
                    if (B == cplx(0.0, 0.0)) continue;
                    cubic += B * (a[static_cast<std::size_t>(q)].adjoint() *
                                  a[static_cast<std::size_t>(r)] * a[static_cast<std::size_t>(s)]);
                }
        // both interaction legs can contract the condensate: factor 2
        out.R[3] = sector_diag(basis,
                               [&](int n) {
                                   return 2.0 *
                                          std::sqrt(std::max(0.0, static_cast<double>(N - n))) /
                                          Nm1;
                               }) *
                   cubic;
    }
    // R4: Wtil(p,q;r,s) = <Qe_p (x) Qe_q, w (Qe_r (x) Qe_s)>
    {
        Mat quart = Mat::Zero(a[0].rows(), a[0].cols());
        for (int p = 0; p < L; ++p)
            for (int q = 0; q < L; ++q)
                for (int r = 0; r < L; ++r)
                    for (int s = 0; s < L; ++s) {
                        const cplx W = two_body_element(
                            qe[static_cast<std::size_t>(p)], qe[static_cast<std::size_t>(q)],
                            qe[static_cast<std::size_t>(r)], qe[static_cast<std::size_t>(s)], wN);
                        if (W == cplx(0.0, 0.0)) continue;
                        quart += W * (a[static_cast<std::size_t>(p)].adjoint() *
                                      a[static_cast<std::size_t>(q)].adjoint() *
                                      a[static_cast<std::size_t>(r)] *
                                      a[static_cast<std::size_t>(s)]);
                    }
        out.R[4] = quart / (2.0 * Nm1);
    }

    out.G = out.H_bog;
    for (int j = 0; j < 5; ++j) out.G += 0.5 * (out.R[j] + out.R[j].adjoint());
    return out;
}

}  // namespace bosedyn_oracle

#endif
