#include "bosedyn/lattice_hamiltonian.hpp"

#include <cmath>
#include <vector>

namespace bosedyn {

namespace {

inline int occ_of(std::uint64_t s, int m) { return static_cast<int>((s >> (8 * m)) & 0xffu); }

// wavenumber-shift bookkeeping on the full mode set
struct ChannelTable {
    int L = 0;
    std::vector<int> add;   // [m][r] -> index of k_r + k_m
    std::vector<int> neg;   // m -> index of -k_m
    std::vector<cplx> what; // what_N(k_m)
};

ChannelTable make_channels(const ModeBasis& modes, const ScaledPotential& wN) {
    if (!modes.full())
        throw std::invalid_argument("lattice Hamiltonian needs the full grid mode set");
    ChannelTable t;
    t.L = modes.size();
    t.add.resize(static_cast<std::size_t>(t.L) * t.L);
    t.neg.resize(static_cast<std::size_t>(t.L));
    t.what.resize(static_cast<std::size_t>(t.L));
    for (int m = 0; m < t.L; ++m) {
        t.what[static_cast<std::size_t>(m)] = wN.spectral()[modes.flat_index(m)];
        t.neg[static_cast<std::size_t>(m)] = modes.mode_negate(m);
        for (int r = 0; r < t.L; ++r)
            t.add[static_cast<std::size_t>(m) * t.L + r] = modes.mode_shift(r, m);
    }
    return t;
}

// out += pref * rho(m) in, rho(m) = sum_r adag_{r+m} a_r
void acc_rho(const BosonBasis& b, const ChannelTable& ch, int m, const Vec& in, Vec& out,
             cplx pref) {
    const int L = ch.L;
    const std::size_t dim = b.size();
    const int* add = &ch.add[static_cast<std::size_t>(m) * L];
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx ci = in[static_cast<Eigen::Index>(i)];
        if (ci == cplx(0.0, 0.0)) continue;
        const std::uint64_t s = b.packed(i);
        for (int r = 0; r < L; ++r) {
            const int nr = occ_of(s, r);
            if (nr == 0) continue;
            const int p = add[r];
            const std::size_t j = b.hopped(i, p, r);
            if (j == BosonBasis::npos) continue;
            const int np = occ_of(s, p) - (p == r ? 1 : 0);
            out[static_cast<Eigen::Index>(j)] +=
                pref * std::sqrt(static_cast<double>(nr) * (np + 1)) * ci;
        }
    }
}

}  // namespace

SparseH build_HN(const ModeBasis& modes, const ScaledPotential& wN, int N, std::size_t cap) {
    if (N < 1) throw std::invalid_argument("build_HN: N must be >= 1");
    const BosonBasis basis = BosonBasis::fixed(modes.size(), N, cap);
    const ChannelTable ch = make_channels(modes, wN);
    const int L = ch.L;
    const double vol = modes.grid().volume();
    const double int_pref = (N > 1) ? 1.0 / (2.0 * (N - 1) * vol) : 0.0;

    std::vector<Eigen::Triplet<cplx>> trip;
    const std::size_t dim = basis.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const std::uint64_t s = basis.packed(i);
        double kin = 0.0;
        for (int p = 0; p < L; ++p) kin += occ_of(s, p) * modes.mode_ksq(p);
        if (kin != 0.0)
            trip.emplace_back(static_cast<int>(i), static_cast<int>(i), cplx(kin, 0.0));
        if (N == 1 || int_pref == 0.0) continue;

        // sum_{r,s} sum_m what_m adag_{r+m} adag_{s-m} a_r a_s  (a_s applied first)
        for (int ss = 0; ss < L; ++ss) {
            const int ns = occ_of(s, ss);
            if (ns == 0) continue;
            const std::uint64_t s1 = s - (1ull << (8 * ss));
            for (int r = 0; r < L; ++r) {
                const int nr = occ_of(s1, r);
                if (nr == 0) continue;
                const double amp_ann = std::sqrt(static_cast<double>(ns) * nr);
                const std::uint64_t s2 = s1 - (1ull << (8 * r));
                for (int m = 0; m < L; ++m) {
                    const cplx w = ch.what[static_cast<std::size_t>(m)];
                    if (w == cplx(0.0, 0.0)) continue;
                    const int p = ch.add[static_cast<std::size_t>(m) * L + r];
                    const int q =
                        ch.add[static_cast<std::size_t>(ch.neg[static_cast<std::size_t>(m)]) * L +
                               ss];
                    const int nq = occ_of(s2, q);
                    const std::uint64_t s3 = s2 + (1ull << (8 * q));
                    const int np = occ_of(s3, p);
                    const std::uint64_t s4 = s3 + (1ull << (8 * p));
                    const double amp_cre = std::sqrt(static_cast<double>(nq + 1) * (np + 1));
                    const std::size_t j = basis.index_of(s4, N);
                    const cplx val = int_pref * w * amp_ann * amp_cre;
                    if (std::abs(val) < 1e-14) continue;
                    trip.emplace_back(static_cast<int>(j), static_cast<int>(i), val);
                }
            }
        }
    }
    SparseH H(static_cast<int>(dim), static_cast<int>(dim));
    H.setFromTriplets(trip.begin(), trip.end());
    H.prune([](int, int, const cplx& v) { return std::abs(v) >= 1e-14; });
    return H;
}

ApplyFn make_hn_apply(const BosonBasis& basis, const ModeBasis& modes,
                      const ScaledPotential& wN, int N) {
    auto ch = std::make_shared<ChannelTable>(make_channels(modes, wN));
    auto b = std::make_shared<BosonBasis>(basis);
    const int L = ch->L;
    const double vol = modes.grid().volume();
    const double int_pref = (N > 1) ? 1.0 / (2.0 * (N - 1) * vol) : 0.0;
    Eigen::VectorXd ksq = modes.ksq_vector();

    return [ch, b, L, int_pref, ksq](const Vec& in, Vec& out) {
        const std::size_t dim = b->size();
        double wsum = 0.0;
        for (int m = 0; m < L; ++m) wsum += ch->what[static_cast<std::size_t>(m)].real();
        for (std::size_t i = 0; i < dim; ++i) {
            const cplx ci = in[static_cast<Eigen::Index>(i)];
            if (ci == cplx(0.0, 0.0)) continue;
            const std::uint64_t s = b->packed(i);
            double kin = 0.0;
            int ntot = 0;
            for (int p = 0; p < L; ++p) {
                const int np = occ_of(s, p);
                kin += np * ksq[p];
                ntot += np;
            }
            // kinetic and the -N contraction of the channel split
            out[static_cast<Eigen::Index>(i)] += (kin - int_pref * wsum * ntot) * ci;
        }
        if (int_pref == 0.0) return;
        Vec t1(in.size());
        for (int m = 0; m < L; ++m) {
            const cplx w = ch->what[static_cast<std::size_t>(m)];
            if (w == cplx(0.0, 0.0)) continue;
            t1.setZero();
            acc_rho(*b, *ch, ch->neg[static_cast<std::size_t>(m)], in, t1, cplx(1.0, 0.0));
            acc_rho(*b, *ch, m, t1, out, int_pref * w);
        }
    };
}

FockVector exact_evolve(const FockVector& psi, const ApplyFn& H, double t0, double t_final,
                        double dt, bool allow_unnormalized, double krylov_tol) {
    if (!allow_unnormalized && std::abs(psi.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("exact_evolve: state is not normalized (flag to override)");
    if (!(dt > 0.0) || !(t_final > t0))
        throw std::invalid_argument("exact_evolve: bad time interval");
    const int nsteps = std::max(1, static_cast<int>(std::lround((t_final - t0) / dt)));
    const double h = (t_final - t0) / nsteps;
    FockVector out = psi;
    for (int s = 0; s < nsteps; ++s) out.coeff = krylov_exp_step(H, out.coeff, h, krylov_tol);
    return out;
}

}  // namespace bosedyn
