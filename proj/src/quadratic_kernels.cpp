#include "bosedyn/quadratic_kernels.hpp"

#include <stdexcept>

namespace bosedyn {

namespace {

// (a - b) mod grid lattice, on flattened indices
std::size_t flat_diff(const PeriodicGrid& g, std::size_t a, std::size_t b) {
    const std::size_t n = static_cast<std::size_t>(g.points_per_axis());
    if (g.dimension() == 1) return (a + n - b) % n;
    const std::size_t ax = a / n, ay = a % n, bx = b / n, by = b % n;
    return ((ax + n - bx) % n) * n + ((ay + n - by) % n);
}

std::size_t flat_sum(const PeriodicGrid& g, std::size_t a, std::size_t b) {
    const std::size_t n = static_cast<std::size_t>(g.points_per_axis());
    if (g.dimension() == 1) return (a + b) % n;
    const std::size_t ax = a / n, ay = a % n, bx = b / n, by = b % n;
    return ((ax + bx) % n) * n + ((ay + by) % n);
}

}  // namespace

GeneratorKernels build_generator_kernels(const ComplexField& u, const ScaledPotential& wN,
                                         const ModeBasis& basis) {
    if (u.grid() != basis.grid() || wN.grid() != basis.grid())
        throw std::invalid_argument("build_generator_kernels: grid mismatch");
    const PeriodicGrid& g = basis.grid();
    const int L = basis.size();
    const double vol = g.volume();

    GeneratorKernels out;
    out.u_coeff = basis.coefficients(u);
    if (std::abs(out.u_coeff.norm() - 1.0) > 1e-6)
        throw std::invalid_argument(
            "build_generator_kernels: condensate is not unit-normalized inside the mode basis");

    const std::vector<cplx> uhat = spectral_coefficients(u);
    const std::vector<cplx>& what = wN.spectral();

    // density and mean-field potential
    ComplexField rho = u;
    for (auto& c : rho.values()) c = cplx(std::norm(c), 0.0);
    ComplexField V = wN.convolve_with(rho);
    out.mu = 0.5 * std::real(inner(rho, V));
    const std::vector<cplx> Vhat = spectral_coefficients(V);

    // multiplication operator (w_N * |u|^2) in the basis
    Eigen::MatrixXcd MV(L, L);
    for (int p = 0; p < L; ++p)
        for (int q = 0; q < L; ++q)
            MV(p, q) = Vhat[flat_diff(g, basis.flat_index(p), basis.flat_index(q))] / vol;

    // Ktil1(p,q) = (1/vol^2) sum_k what(k) uhat(p-k) conj(uhat(q-k))
    // Ktil2(p,q) = (1/vol^2) sum_k what(k) uhat(p-k) uhat(q+k)
    Eigen::MatrixXcd K1(L, L), K2t(L, L);
    const std::size_t total = g.size();
    for (int p = 0; p < L; ++p) {
        const std::size_t fp = basis.flat_index(p);
        for (int q = 0; q < L; ++q) {
            const std::size_t fq = basis.flat_index(q);
            cplx s1(0.0, 0.0), s2(0.0, 0.0);
            for (std::size_t k = 0; k < total; ++k) {
                const cplx w = what[k];
                if (w == cplx(0.0, 0.0)) continue;
                const cplx up = uhat[flat_diff(g, fp, k)];
                s1 += w * up * std::conj(uhat[flat_diff(g, fq, k)]);
                s2 += w * up * uhat[flat_sum(g, fq, k)];
            }
            K1(p, q) = s1 / (vol * vol);
            K2t(p, q) = s2 / (vol * vol);
        }
    }
    out.K1til = K1;

    // condensate projection Q = 1 - c c^dag
    const Eigen::VectorXcd& c = out.u_coeff;
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Identity(L, L) - c * c.adjoint();

    out.h.matrix = Eigen::MatrixXcd::Zero(L, L);
    for (int p = 0; p < L; ++p) out.h.matrix(p, p) = basis.mode_ksq(p) - out.mu;
    out.h.matrix += MV;
    out.h.matrix += Q * K1 * Q;

    out.K2.matrix = Q * K2t * Q.transpose();

    out.mean_field_u = basis.coefficients(pointwise(V, u));
    return out;
}

double kernel_hs_norm(const PairingKernel& K2) { return K2.matrix.norm(); }

double kernel_sobolev_norm(const PairingKernel& K2, const ModeBasis& basis) {
    if (K2.matrix.rows() != basis.size())
        throw std::invalid_argument("kernel_sobolev_norm: size mismatch");
    double s = 0.0;
    for (int p = 0; p < basis.size(); ++p) {
        const double w = 1.0 / (1.0 + basis.mode_ksq(p));
        s += w * K2.matrix.row(p).squaredNorm();
    }
    return std::sqrt(s);
}

}  // namespace bosedyn
