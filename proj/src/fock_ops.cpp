#include "bosedyn/fock_ops.hpp"

#include <cmath>
#include <random>

namespace bosedyn {

namespace {

inline int occ_of(std::uint64_t s, int m) { return static_cast<int>((s >> (8 * m)) & 0xffu); }

}  // namespace

std::vector<double> FockVector::sector_norms2() const {
    std::vector<double> out(static_cast<std::size_t>(basis.max_total()) + 1, 0.0);
    for (int n = basis.min_sector(); n <= basis.max_total(); ++n) {
        const std::size_t b0 = basis.sector_begin(n), d = basis.sector_dim(n);
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += std::norm(coeff[static_cast<Eigen::Index>(b0 + i)]);
        out[static_cast<std::size_t>(n)] = s;
    }
    return out;
}

FockVector vacuum_state(const BosonBasis& basis) {
    if (basis.fixed_number() && basis.max_total() != 0)
        throw std::invalid_argument("vacuum_state: fixed basis has no vacuum sector");
    FockVector v{basis, Vec::Zero(static_cast<Eigen::Index>(basis.size()))};
    v.coeff[0] = cplx(1.0, 0.0);
    return v;
}

void acc_one_body(const BosonBasis& b, const Mat& A, const Vec& in, Vec& out, cplx pref) {
    const int L = b.modes();
    const std::size_t dim = b.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = in[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = b.packed(i);
        for (int q = 0; q < L; ++q) {
            const int nq = occ_of(s, q);
            if (nq == 0) continue;
            for (int p = 0; p < L; ++p) {
                const cplx a = A(p, q);
                if (a == cplx(0.0, 0.0)) continue;
                const std::size_t j = b.hopped(i, p, q);
                if (j == BosonBasis::npos) continue;
                const int np = occ_of(s, p) - (p == q ? 1 : 0);
                const double amp = std::sqrt(static_cast<double>(nq) * (np + 1));
                out[static_cast<Eigen::Index>(j)] += pref * a * amp * ci;
            }
        }
    }
}

void acc_mapped_move(const BosonBasis& b, const int* tgt, const Vec* w, const Vec& in, Vec& out,
                     cplx pref) {
    const int L = b.modes();
    const std::size_t dim = b.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = in[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = b.packed(i);
        for (int r = 0; r < L; ++r) {
            const int nr = occ_of(s, r);
            if (nr == 0) continue;
            const int p = tgt[r];
            const std::size_t j = b.hopped(i, p, r);
            if (j == BosonBasis::npos) continue;
            const int np = occ_of(s, p) - (p == r ? 1 : 0);
            const double amp = std::sqrt(static_cast<double>(nr) * (np + 1));
            const cplx coeffw = w ? (*w)[r] : cplx(1.0, 0.0);
            out[static_cast<Eigen::Index>(j)] += pref * coeffw * amp * ci;
        }
    }
}

void acc_create(const BosonBasis& b, const Vec& g, const Vec& in, Vec& out, cplx pref) {
    const int L = b.modes();
    const std::size_t dim = b.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = in[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = b.packed(i);
        for (int p = 0; p < L; ++p) {
            if (g[p] == cplx(0.0, 0.0)) continue;
            const std::size_t j = b.raised(i, p);
            if (j == BosonBasis::npos) continue;
            const double amp = std::sqrt(static_cast<double>(occ_of(s, p) + 1));
            out[static_cast<Eigen::Index>(j)] += pref * g[p] * amp * ci;
        }
    }
}

void acc_annihilate(const BosonBasis& b, const Vec& g, const Vec& in, Vec& out, cplx pref) {
    const int L = b.modes();
    const std::size_t dim = b.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = in[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = b.packed(i);
        for (int p = 0; p < L; ++p) {
            const int np = occ_of(s, p);
            if (np == 0 || g[p] == cplx(0.0, 0.0)) continue;
            const std::size_t j = b.lowered(i, p);
            if (j == BosonBasis::npos) continue;
            out[static_cast<Eigen::Index>(j)] +=
                pref * std::conj(g[p]) * std::sqrt(static_cast<double>(np)) * ci;
        }
    }
}

void acc_pair_create(const BosonBasis& b, const Mat& M, const Vec& in, Vec& out, cplx pref) {
    const int L = b.modes();
    const std::size_t dim = b.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = in[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = b.packed(i);
        for (int q = 0; q < L; ++q) {
            const std::size_t mid = b.raised(i, q);
            if (mid == BosonBasis::npos) continue;
            const double aq = std::sqrt(static_cast<double>(occ_of(s, q) + 1));
            const std::uint64_t smid = b.packed(mid);
            for (int p = 0; p < L; ++p) {
                const cplx m = M(p, q);
                if (m == cplx(0.0, 0.0)) continue;
                const std::size_t j = b.raised(mid, p);
                if (j == BosonBasis::npos) continue;
                const double ap = std::sqrt(static_cast<double>(occ_of(smid, p) + 1));
                out[static_cast<Eigen::Index>(j)] += pref * m * aq * ap * ci;
            }
        }
    }
}

void acc_pair_annihilate(const BosonBasis& b, const Mat& M, const Vec& in, Vec& out, cplx pref) {
    const int L = b.modes();
    const std::size_t dim = b.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = in[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = b.packed(i);
        for (int p = 0; p < L; ++p) {
            const int np = occ_of(s, p);
            if (np == 0) continue;
            const std::size_t mid = b.lowered(i, p);
            if (mid == BosonBasis::npos) continue;
            const std::uint64_t smid = b.packed(mid);
            for (int q = 0; q < L; ++q) {
                const cplx m = std::conj(M(p, q));
                if (m == cplx(0.0, 0.0)) continue;
                const int nq = occ_of(smid, q);
                if (nq == 0) continue;
                const std::size_t j = b.lowered(mid, q);
                if (j == BosonBasis::npos) continue;
                out[static_cast<Eigen::Index>(j)] +=
                    pref * m * std::sqrt(static_cast<double>(np) * nq) * ci;
            }
        }
    }
}

void acc_sector_diag(const BosonBasis& b, const std::function<double(int)>& f, const Vec& in,
                     Vec& out, cplx pref) {
    for (int n = b.min_sector(); n <= b.max_total(); ++n) {
        const cplx w = pref * f(n);
        const std::size_t b0 = b.sector_begin(n), d = b.sector_dim(n);
        for (std::size_t i = 0; i < d; ++i)
            out[static_cast<Eigen::Index>(b0 + i)] += w * in[static_cast<Eigen::Index>(b0 + i)];
    }
}

void acc_mode_diag(const BosonBasis& b, const Eigen::VectorXd& w, const Vec& in, Vec& out,
                   cplx pref) {
    const int L = b.modes();
    const std::size_t dim = b.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = in[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = b.packed(i);
        double acc = 0.0;
        for (int p = 0; p < L; ++p) acc += w[p] * occ_of(s, p);
        out[static_cast<Eigen::Index>(i)] += pref * acc * ci;
    }
}

double number_expectation(const FockVector& v) {
    double out = 0.0;
    for (int n = v.basis.min_sector(); n <= v.basis.max_total(); ++n) {
        const std::size_t b0 = v.basis.sector_begin(n), d = v.basis.sector_dim(n);
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            s += std::norm(v.coeff[static_cast<Eigen::Index>(b0 + i)]);
        out += n * s;
    }
    return out;
}

double dgamma_diag_expectation(const FockVector& v, const Eigen::VectorXd& w) {
    Vec tmp = Vec::Zero(v.coeff.size());
    acc_mode_diag(v.basis, w, v.coeff, tmp, cplx(1.0, 0.0));
    return std::real(v.coeff.dot(tmp));
}

Mat one_body_density(const FockVector& v) {
    const int L = v.basis.modes();
    Mat g = Mat::Zero(L, L);
    const std::size_t dim = v.basis.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = v.coeff[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = v.basis.packed(i);
        for (int q = 0; q < L; ++q) {
            const int nq = occ_of(s, q);
            if (nq == 0) continue;
            for (int p = 0; p < L; ++p) {
                const std::size_t j = v.basis.hopped(i, p, q);
                if (j == BosonBasis::npos) continue;
                const int np = occ_of(s, p) - (p == q ? 1 : 0);
                const double amp = std::sqrt(static_cast<double>(nq) * (np + 1));
                g(p, q) += std::conj(v.coeff[static_cast<Eigen::Index>(j)]) * amp * ci;
            }
        }
    }
    // accumulated g(p,q) = <adag_p a_q>; gamma(p,q) = <adag_q a_p> = g(q,p)
    return g.transpose().eval();
}

Mat pairing_density(const FockVector& v) {
    const int L = v.basis.modes();
    Mat a = Mat::Zero(L, L);
    const std::size_t dim = v.basis.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = v.coeff[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = v.basis.packed(i);
        for (int p = 0; p < L; ++p) {
            const int np = occ_of(s, p);
            if (np == 0) continue;
            const std::size_t mid = v.basis.lowered(i, p);
            if (mid == BosonBasis::npos) continue;
            const std::uint64_t smid = v.basis.packed(mid);
            for (int q = 0; q < L; ++q) {
                const int nq = occ_of(smid, q);
                if (nq == 0) continue;
                const std::size_t j = v.basis.lowered(mid, q);
                if (j == BosonBasis::npos) continue;
                const double amp = std::sqrt(static_cast<double>(np) * nq);
                // alpha(p,q) = <a_q a_p>
                a(p, q) += std::conj(v.coeff[static_cast<Eigen::Index>(j)]) * amp * ci;
            }
        }
    }
    return a;
}

Vec krylov_exp_step(const ApplyFn& H, const Vec& psi, double dt, double tol, int max_m) {
    const double beta0 = psi.norm();
    if (beta0 == 0.0) return psi;
    std::vector<Vec> V;
    V.push_back(psi / beta0);
    std::vector<double> alpha, beta;
    Vec w(psi.size());

    Vec result;
    double prev_err = -1.0;
    (void)prev_err;
    Vec y_prev;
    for (int j = 0; j < max_m; ++j) {
        w.setZero();
        H(V[static_cast<std::size_t>(j)], w);
        if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * V[static_cast<std::size_t>(j - 1)];
        const double a = std::real(V[static_cast<std::size_t>(j)].dot(w));
        alpha.push_back(a);
        w -= a * V[static_cast<std::size_t>(j)];
        // full reorthogonalization
        for (const auto& v : V) w -= v.dot(w) * v;
        const double b = w.norm();

        // small-problem exponential with the current Krylov space
        const int m = j + 1;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) {
                T(i, i + 1) = beta[static_cast<std::size_t>(i)];
                T(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        Vec y = Vec::Zero(m);
        for (int r = 0; r < m; ++r) {
            cplx acc(0.0, 0.0);
            for (int c = 0; c < m; ++c)
                acc += es.eigenvectors()(r, c) *
                       std::polar(1.0, -dt * es.eigenvalues()(c)) * es.eigenvectors()(0, c);
            y[r] = acc;
        }

        bool converged = false;
        if (b < 1e-12 * beta0) converged = true;  // invariant subspace
        if (y_prev.size() > 0) {
            double diff = 0.0;
            for (int r = 0; r < y_prev.size(); ++r) diff += std::norm(y[r] - y_prev[r]);
            diff += std::norm(y[m - 1]);
            if (std::sqrt(diff) < tol) converged = true;
        }
        if (converged || j + 1 == max_m) {
            result = Vec::Zero(psi.size());
            for (int r = 0; r < m; ++r) result += y[r] * V[static_cast<std::size_t>(r)];
            result *= beta0;
            return result;
        }
        y_prev = y;
        beta.push_back(b);
        V.push_back(w / b);
    }
    return result;
}

double lanczos_smallest_eigenvalue(const ApplyFn& H, std::size_t dim, int max_m, double tol,
                                   unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Vec v0(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v0.size(); ++i) v0[i] = cplx(nd(rng), nd(rng));
    v0.normalize();

    std::vector<Vec> V{v0};
    std::vector<double> alpha, beta;
    double prev = 1e300;
    Vec w(v0.size());
    for (int j = 0; j < max_m && j < static_cast<int>(dim); ++j) {
        w.setZero();
        H(V[static_cast<std::size_t>(j)], w);
        if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * V[static_cast<std::size_t>(j - 1)];
        const double a = std::real(V[static_cast<std::size_t>(j)].dot(w));
        alpha.push_back(a);
        w -= a * V[static_cast<std::size_t>(j)];
        for (const auto& v : V) w -= v.dot(w) * v;
        const double b = w.norm();

        const int m = j + 1;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) {
                T(i, i + 1) = beta[static_cast<std::size_t>(i)];
                T(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const double cur = es.eigenvalues()(0);
        if (b < 1e-13 || (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur)) && j > 8))
            return cur;
        prev = cur;
        beta.push_back(b);
        V.push_back(w / b);
    }
    return prev;
}

}  // namespace bosedyn
