#include "bosedyn/fluctuation_generator.hpp"

#include <cmath>

namespace bosedyn {

FluctuationGenerator::FluctuationGenerator(const GeneratorKernels& kernels,
                                           const ScaledPotential& wN, const ModeBasis& modes,
                                           int N, bool include_error_terms)
    : L_(modes.size()), N_(N), with_E_(include_error_terms), vol_(modes.grid().volume()) {
    if (with_E_ && !modes.full())
        throw std::invalid_argument(
            "FluctuationGenerator: correction terms need the full grid mode set");
    if (N < 2) throw std::invalid_argument("FluctuationGenerator: N must be >= 2");
    h_ = kernels.h.matrix;
    K2_ = kernels.K2.matrix;
    c_ = kernels.u_coeff;

    // R0 one-body block: Q (h - kinetic) Q = Q (V - mu + Q Ktil1 Q) Q
    Mat hmk = h_;
    for (int p = 0; p < L_; ++p) hmk(p, p) -= modes.mode_ksq(p);
    Mat Q = Mat::Identity(L_, L_) - c_ * c_.adjoint();
    A0_ = Q * hmk * Q;

    // R1 vector: Q (w_N*|u|^2) u
    g1_ = kernels.mean_field_u - c_ * (c_.dot(kernels.mean_field_u));

    if (!with_E_) return;  // channel tables feed only the correction terms
    what_.resize(static_cast<std::size_t>(L_));
    neg_.resize(static_cast<std::size_t>(L_));
    add_.resize(static_cast<std::size_t>(L_) * L_);
    x_.resize(static_cast<std::size_t>(L_));
    v_.resize(static_cast<std::size_t>(L_));
    qx_.resize(static_cast<std::size_t>(L_));
    scal_.resize(static_cast<std::size_t>(L_));
    for (int m = 0; m < L_; ++m) {
        what_[static_cast<std::size_t>(m)] = wN.spectral()[modes.flat_index(m)];
        neg_[static_cast<std::size_t>(m)] = modes.mode_negate(m);
        for (int r = 0; r < L_; ++r)
            add_[static_cast<std::size_t>(m) * L_ + r] = modes.mode_shift(r, m);
    }
    for (int m = 0; m < L_; ++m) {
        Vec x(L_), v(L_);
        const int mneg = neg_[static_cast<std::size_t>(m)];
        for (int p = 0; p < L_; ++p) {
            x[p] = c_[add_[static_cast<std::size_t>(mneg) * L_ + p]];  // c_{p-m}
            v[p] = c_[add_[static_cast<std::size_t>(m) * L_ + p]];     // c_{p+m}
        }
        x_[static_cast<std::size_t>(m)] = x;
        v_[static_cast<std::size_t>(m)] = v;
        qx_[static_cast<std::size_t>(m)] = x - c_ * (c_.dot(x));
        cplx s(0.0, 0.0);
        for (int p = 0; p < L_; ++p) s += std::conj(v[p]) * c_[p];
        scal_[static_cast<std::size_t>(m)] = s;
    }
}

// sigma_b(m) = sum_s bdag_{s+m} b_s
//            = rho(m) - adag(c) a(v_m) - adag(x_m) a(c) + scal_m adag(c) a(c)
void FluctuationGenerator::sigma_apply(const BosonBasis& b, int m, const Vec& in, Vec& out,
                                       cplx pref) const {
    acc_mapped_move(b, &add_[static_cast<std::size_t>(m) * L_], nullptr, in, out, pref);
    Vec t = Vec::Zero(in.size());
    acc_annihilate(b, v_[static_cast<std::size_t>(m)], in, t, cplx(1.0, 0.0));
    acc_create(b, c_, t, out, -pref);
    t.setZero();
    acc_annihilate(b, c_, in, t, cplx(1.0, 0.0));
    acc_create(b, x_[static_cast<std::size_t>(m)], t, out, -pref);
    acc_create(b, c_, t, out, pref * scal_[static_cast<std::size_t>(m)]);
}

void FluctuationGenerator::accumulate(const BosonBasis& basis, const Vec& in, Vec& out) const {
    const double Nm1 = static_cast<double>(N_ - 1);

    // quadratic part
    acc_one_body(basis, h_, in, out, cplx(1.0, 0.0));
    acc_pair_create(basis, K2_, in, out, cplx(0.5, 0.0));
    acc_pair_annihilate(basis, K2_, in, out, cplx(0.5, 0.0));
    if (!with_E_) return;

    Vec t = Vec::Zero(in.size());
    Vec t2 = Vec::Zero(in.size());

    // R0 = dGamma(A0) (1 - Nop)/(N-1), Hermitian
    if (term_mask & 1u) {
        t.setZero();
        acc_one_body(basis, A0_, in, t, cplx(1.0, 0.0));
        acc_sector_diag(basis, [Nm1](int n) { return (1.0 - n) / Nm1; }, t, out, cplx(1.0, 0.0));
    }

    // (1/2)(R1 + R1^dag), R1 = f1(Nop) a(g1), f1(n) = -2 n sqrt(N-n)/(N-1)
    auto f1 = [this, Nm1](int n) {
        return -2.0 * n * std::sqrt(std::max(0.0, static_cast<double>(N_ - n))) / Nm1;
    };
    if (term_mask & 2u) {
        t.setZero();
        acc_annihilate(basis, g1_, in, t, cplx(1.0, 0.0));
        acc_sector_diag(basis, f1, t, out, cplx(0.5, 0.0));
        t.setZero();
        acc_sector_diag(basis, f1, in, t, cplx(1.0, 0.0));
        acc_create(basis, g1_, t, out, cplx(0.5, 0.0));
    }

    // (1/2)(R2 + R2^dag), R2 = PairCreate(K2) g2(Nop),
    // g2(n) = sqrt((N-n)(N-n-1))/(N-1) - 1
    auto g2 = [this, Nm1](int n) {
        const double a = static_cast<double>(N_ - n), b2 = static_cast<double>(N_ - n - 1);
        return std::sqrt(std::max(0.0, a * b2)) / Nm1 - 1.0;
    };
    if (term_mask & 4u) {
        t.setZero();
        acc_sector_diag(basis, g2, in, t, cplx(1.0, 0.0));
        acc_pair_create(basis, K2_, t, out, cplx(0.5, 0.0));
        t.setZero();
        acc_pair_annihilate(basis, K2_, in, t, cplx(1.0, 0.0));
        acc_sector_diag(basis, g2, t, out, cplx(0.5, 0.0));
    }

    // (1/2)(R3 + R3^dag), R3 = 2 f3(Nop) Gamma3 with
    // Gamma3 = sum_m (what(-m)/vol) sigma_b(m) b(x_m): the cubic family
    // enters twice since either interaction leg can contract the condensate
    auto f3 = [this, Nm1](int n) {
        return 2.0 * std::sqrt(std::max(0.0, static_cast<double>(N_ - n))) / Nm1;
    };
    const double isv = 1.0 / vol_;
    if (term_mask & 8u) {
        t2.setZero();
        for (int m = 0; m < L_; ++m) {
            const cplx w = what_[static_cast<std::size_t>(neg_[static_cast<std::size_t>(m)])];
            if (w == cplx(0.0, 0.0)) continue;
            t.setZero();
            acc_annihilate(basis, qx_[static_cast<std::size_t>(m)], in, t, cplx(1.0, 0.0));
            sigma_apply(basis, m, t, t2, w * isv);
        }
        acc_sector_diag(basis, f3, t2, out, cplx(0.5, 0.0));
        // adjoint: Gamma3^dag f3(Nop) with Gamma3^dag = sum_m w (bdag(x_m) sigma_b(-m))
        t2.setZero();
        acc_sector_diag(basis, f3, in, t2, cplx(1.0, 0.0));
        for (int m = 0; m < L_; ++m) {
            const cplx w =
                std::conj(what_[static_cast<std::size_t>(neg_[static_cast<std::size_t>(m)])]);
            if (w == cplx(0.0, 0.0)) continue;
            t.setZero();
            sigma_apply(basis, neg_[static_cast<std::size_t>(m)], t2, t, cplx(1.0, 0.0));
            acc_create(basis, qx_[static_cast<std::size_t>(m)], t, out, cplx(0.5, 0.0) * w * isv);
        }
    }

    // R4 = (1/(2(N-1))) sum_m (what_m/vol) [sigma_b(m) sigma_b(-m) - N_Q
    //                                        + bdag(x_m) b(x_m)], Hermitian
    if (term_mask & 16u) {
        const double r4pref = 1.0 / (2.0 * Nm1 * vol_);
        double wsum = 0.0;
        Vec acc4 = Vec::Zero(in.size());
        for (int m = 0; m < L_; ++m) {
            const cplx w = what_[static_cast<std::size_t>(m)];
            wsum += w.real();
            if (w == cplx(0.0, 0.0)) continue;
            t.setZero();
            sigma_apply(basis, neg_[static_cast<std::size_t>(m)], in, t, cplx(1.0, 0.0));
            sigma_apply(basis, m, t, acc4, w);
            t.setZero();
            acc_annihilate(basis, qx_[static_cast<std::size_t>(m)], in, t, cplx(1.0, 0.0));
            acc_create(basis, qx_[static_cast<std::size_t>(m)], t, acc4, w);
        }
        // N_Q = Nop - adag(c) a(c)
        acc_sector_diag(basis, [](int n) { return static_cast<double>(n); }, in, acc4,
                        cplx(-wsum, 0.0));
        t.setZero();
        acc_annihilate(basis, c_, in, t, cplx(1.0, 0.0));
        acc_create(basis, c_, t, acc4, cplx(wsum, 0.0));
        out += r4pref * acc4;
    }
}

ApplyFn FluctuationGenerator::apply_fn(const BosonBasis& basis) const {
    const FluctuationGenerator* self = this;
    BosonBasis b = basis;
    return [self, b](const Vec& in, Vec& out) { self->accumulate(b, in, out); };
}

Eigen::SparseMatrix<cplx, Eigen::RowMajor> FluctuationGenerator::materialize(
    const BosonBasis& basis, std::size_t cap) const {
    const std::size_t dim = basis.size();
    if (dim > cap)
        throw ResourceError("FluctuationGenerator::materialize: dimension exceeds cap",
                            "use apply_fn for large spaces");
    std::vector<Eigen::Triplet<cplx>> trip;
    Vec e = Vec::Zero(static_cast<Eigen::Index>(dim));
    Vec col = Vec::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
        e.setZero();
        e[static_cast<Eigen::Index>(j)] = cplx(1.0, 0.0);
        col.setZero();
        accumulate(basis, e, col);
        for (std::size_t i = 0; i < dim; ++i)
            if (std::abs(col[static_cast<Eigen::Index>(i)]) >= 1e-14)
                trip.emplace_back(static_cast<int>(i), static_cast<int>(j),
                                  col[static_cast<Eigen::Index>(i)]);
    }
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> M(static_cast<int>(dim), static_cast<int>(dim));
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

FockVector evolve_fluctuation(const FockVector& phi0, const KernelsAt& kernels,
                              const ScaledPotential& wN, const ModeBasis& modes, int N,
                              double t0, double t_final, double dt, bool include_error_terms,
                              double krylov_tol) {
    if (!(dt > 0.0) || !(t_final > t0))
        throw std::invalid_argument("evolve_fluctuation: bad time interval");
    if (phi0.basis.max_total() > N)
        throw std::invalid_argument("evolve_fluctuation: truncation exceeds N");
    const int nsteps = std::max(1, static_cast<int>(std::lround((t_final - t0) / dt)));
    const double h = (t_final - t0) / nsteps;
    FockVector out = phi0;
    for (int s = 0; s < nsteps; ++s) {
        const double tm = t0 + (s + 0.5) * h;
        const FluctuationGenerator gen(kernels(tm), wN, modes, N, include_error_terms);
        out.coeff = krylov_exp_step(gen.apply_fn(out.basis), out.coeff, h, krylov_tol);
    }
    return out;
}

GeneratorBundle build_fock_generator(const ComplexField& u, const ScaledPotential& wN, int N,
                                     const ModeBasis& modes, int M_trunc, std::size_t cap) {
    if (M_trunc > N)
        throw std::invalid_argument("build_fock_generator: M_trunc must be <= N");
    const BosonBasis basis = BosonBasis::truncated(modes.size(), M_trunc, cap);
    const GeneratorKernels ker = build_generator_kernels(u, wN, modes);
    GeneratorBundle out;
    out.H_bog = FluctuationGenerator(ker, wN, modes, N, false).materialize(basis, cap);
    out.G_N = FluctuationGenerator(ker, wN, modes, N, true).materialize(basis, cap);
    return out;
}

}  // namespace bosedyn
