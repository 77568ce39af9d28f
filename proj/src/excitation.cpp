#include "bosedyn/excitation.hpp"

#include <cmath>

namespace bosedyn {

namespace {

// sqrt((N-m)! / (N-n)!) / (n-m)!  without overflow, for 0 <= m < n <= N
double kappa(int N, int n, int m) {
    double v = 1.0;
    for (int j = N - n + 1; j <= N - m; ++j) v *= j;
    v = std::sqrt(v);
    for (int j = 2; j <= n - m; ++j) v /= j;
    return v;
}

void copy_sector(const BosonBasis& from, const Vec& src, int n, const BosonBasis& to, Vec& dst) {
    const std::size_t d = from.sector_dim(n);
    const std::size_t o1 = from.sector_begin(n), o2 = to.sector_begin(n);
    for (std::size_t i = 0; i < d; ++i)
        dst[static_cast<Eigen::Index>(o2 + i)] = src[static_cast<Eigen::Index>(o1 + i)];
}

}  // namespace

double condensate_support_defect(const FockVector& phi, const Eigen::VectorXcd& c) {
    Vec t = Vec::Zero(phi.coeff.size());
    acc_annihilate(phi.basis, c, phi.coeff, t, cplx(1.0, 0.0));
    return t.squaredNorm();
}

FockVector excitation_map(const FockVector& psi, const Eigen::VectorXcd& c) {
    if (!psi.basis.fixed_number())
        throw std::invalid_argument("excitation_map: input must live in a fixed-N sector");
    const int N = psi.basis.max_total();
    const int L = psi.basis.modes();
    if (std::abs(c.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("excitation_map: condensate vector must be normalized");

    const BosonBasis tb = BosonBasis::truncated(L, N, psi.basis.size() * (N + 2));
    const Eigen::Index dim = static_cast<Eigen::Index>(tb.size());

    // Z_n = a(c)^{N-n} Psi / sqrt((N-n)!)  held per sector
    Vec work = Vec::Zero(dim);
    copy_sector(psi.basis, psi.coeff, N, tb, work);
    std::vector<Vec> Z(static_cast<std::size_t>(N) + 1);
    Z[static_cast<std::size_t>(N)] = work;
    double fct = 1.0;
    for (int j = 1; j <= N; ++j) {
        Vec next = Vec::Zero(dim);
        acc_annihilate(tb, c, work, next, cplx(1.0, 0.0));
        work = next;
        fct *= j;
        Z[static_cast<std::size_t>(N - j)] = work / std::sqrt(fct);
    }

    // peel: psi_n = Z_n - sum_{m<n} kappa(N,n,m) (adag(c))^{n-m} psi_m
    FockVector out{tb, Vec::Zero(dim)};
    std::vector<Vec> W;  // W[m] = (adag(c))^{n-m} psi_m at the current n
    for (int n = 0; n <= N; ++n) {
        for (auto& w : W) {
            Vec next = Vec::Zero(dim);
            acc_create(tb, c, w, next, cplx(1.0, 0.0));
            w = next;
        }
        Vec comp = Z[static_cast<std::size_t>(n)];
        for (int m = 0; m < n; ++m) comp -= kappa(N, n, m) * W[static_cast<std::size_t>(m)];
        // keep only the sector-n slice (roundoff elsewhere)
        Vec psi_n = Vec::Zero(dim);
        const std::size_t o = tb.sector_begin(n), d = tb.sector_dim(n);
        for (std::size_t i = 0; i < d; ++i)
            psi_n[static_cast<Eigen::Index>(o + i)] = comp[static_cast<Eigen::Index>(o + i)];
        out.coeff += psi_n;
        W.push_back(std::move(psi_n));
    }
    return out;
}

FockVector excitation_unmap(const FockVector& phi, const Eigen::VectorXcd& c, int N,
                            double support_tol) {
    if (phi.basis.fixed_number())
        throw std::invalid_argument("excitation_unmap: components must live in a truncated basis");
    if (phi.basis.max_total() > N)
        throw std::invalid_argument("excitation_unmap: components exceed N sectors");
    if (std::abs(c.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("excitation_unmap: condensate vector must be normalized");
    const double defect = condensate_support_defect(phi, c);
    if (defect > support_tol * std::max(1.0, phi.coeff.squaredNorm()))
        throw std::domain_error(
            "excitation_unmap: components are not supported orthogonally to the condensate");

    const int L = phi.basis.modes();
    const int M = phi.basis.max_total();
    const BosonBasis tb = (M == N) ? phi.basis : BosonBasis::truncated(L, N);
    const Eigen::Index dim = static_cast<Eigen::Index>(tb.size());
    const BosonBasis fixed = BosonBasis::fixed(L, N);

    FockVector out{fixed, Vec::Zero(static_cast<Eigen::Index>(fixed.size()))};
    for (int n = 0; n <= M; ++n) {
        Vec term = Vec::Zero(dim);
        copy_sector(phi.basis, phi.coeff, n, tb, term);
        if (term.isZero(0.0)) continue;
        double fct = 1.0;
        for (int j = 1; j <= N - n; ++j) {
            Vec next = Vec::Zero(dim);
            acc_create(tb, c, term, next, cplx(1.0, 0.0));
            term = next;
            fct *= j;
        }
        const double scale = 1.0 / std::sqrt(fct);
        const std::size_t o = tb.sector_begin(N), d = tb.sector_dim(N);
        for (std::size_t i = 0; i < d; ++i)
            out.coeff[static_cast<Eigen::Index>(i)] +=
                scale * term[static_cast<Eigen::Index>(o + i)];
    }
    return out;
}

}  // namespace bosedyn
