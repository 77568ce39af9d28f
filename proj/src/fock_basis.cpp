#include "bosedyn/fock_basis.hpp"

#include <string>

namespace bosedyn {

namespace {

// binomial table; indices stay small (n + l <= ~40 in practice)
double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    static thread_local std::vector<std::vector<double>> table;
    if (static_cast<int>(table.size()) <= n) {
        const int old = static_cast<int>(table.size());
        table.resize(static_cast<std::size_t>(n) + 1);
        for (int i = old; i <= n; ++i) {
            table[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1.0);
            for (int j = 1; j < i; ++j)
                table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
                    table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
        }
    }
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

// rank of a tuple inside its sector: modes scanned left to right, states
// ordered by descending occupation of the earliest mode
std::size_t rank_in_sector(std::uint64_t packed, int L, int total) {
    std::size_t rank = 0;
    int rem = total;
    for (int j = 0; j < L - 1 && rem > 0; ++j) {
        const int nj = static_cast<int>((packed >> (8 * j)) & 0xffu);
        // tuples with occupation v > nj at mode j come first
        if (nj < rem) {
            const int w = rem - nj - 1;
            rank += static_cast<std::size_t>(binom(w + L - 1 - j, L - 1 - j));
        }
        rem -= nj;
    }
    return rank;
}

}  // namespace

std::size_t BosonBasis::sector_dimension(int modes, int total) {
    if (total < 0) return 0;
    return static_cast<std::size_t>(binom(total + modes - 1, modes - 1));
}

BosonBasis BosonBasis::build(int modes, int lo_total, int hi_total, std::size_t cap) {
    if (modes < 1 || modes > max_modes)
        throw ResourceError("BosonBasis: modes must be between 1 and 8",
                            "reduce the grid to at most 8 points per axis");
    auto d = std::make_shared<Data>();
    d->L = modes;
    d->M = hi_total;
    d->fixed = (lo_total == hi_total);
    d->sector_offset.assign(static_cast<std::size_t>(hi_total) + 2, 0);
    d->sector_dims.assign(static_cast<std::size_t>(hi_total) + 1, 0);

    std::size_t dim = 0;
    for (int n = lo_total; n <= hi_total; ++n) {
        d->sector_offset[static_cast<std::size_t>(n)] = dim;
        d->sector_dims[static_cast<std::size_t>(n)] = sector_dimension(modes, n);
        dim += d->sector_dims[static_cast<std::size_t>(n)];
    }
    d->sector_offset[static_cast<std::size_t>(hi_total) + 1] = dim;
    if (dim > cap)
        throw ResourceError(
            "BosonBasis: dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap),
            "reduce modes or particle number");
    d->total_dim = dim;
    d->states.reserve(dim);

    // enumerate each sector in rank order (descending leading occupation)
    for (int n = lo_total; n <= hi_total; ++n) {
        std::array<int, max_modes> occ{};
        auto rec = [&](auto&& self, int j, int r) -> void {
            if (j == modes - 1) {
                occ[static_cast<std::size_t>(j)] = r;
                std::uint64_t packed = 0;
                for (int m = 0; m < modes; ++m)
                    packed |= static_cast<std::uint64_t>(occ[static_cast<std::size_t>(m)])
                              << (8 * m);
                d->states.push_back(packed);
                return;
            }
            for (int v = r; v >= 0; --v) {
                occ[static_cast<std::size_t>(j)] = v;
                self(self, j + 1, r - v);
            }
        };
        rec(rec, 0, n);
    }

    // move tables
    d->raise_tab.assign(dim * static_cast<std::size_t>(modes), 0xffffffffu);
    d->lower_tab.assign(dim * static_cast<std::size_t>(modes), 0xffffffffu);
    BosonBasis tmp;
    tmp.p_ = d;
    for (std::size_t i = 0; i < dim; ++i) {
        const int n = tmp.sector_of(i);
        for (int m = 0; m < modes; ++m) {
            const std::size_t r = tmp.raised_slow(i, m);
            if (r != npos) d->raise_tab[i * static_cast<std::size_t>(modes) + m] =
                static_cast<std::uint32_t>(r);
            const std::size_t l = tmp.lowered_slow(i, m);
            if (l != npos) d->lower_tab[i * static_cast<std::size_t>(modes) + m] =
                static_cast<std::uint32_t>(l);
        }
        (void)n;
    }

    BosonBasis out;
    out.p_ = std::move(d);
    return out;
}

BosonBasis BosonBasis::fixed(int modes, int total, std::size_t cap) {
    return build(modes, total, total, cap);
}

BosonBasis BosonBasis::truncated(int modes, int max_total, std::size_t cap) {
    return build(modes, 0, max_total, cap);
}

int BosonBasis::sector_of(std::size_t idx) const {
    const std::uint64_t s = p_->states[idx];
    int n = 0;
    for (int m = 0; m < p_->L; ++m) n += static_cast<int>((s >> (8 * m)) & 0xffu);
    return n;
}

std::size_t BosonBasis::index_of(std::uint64_t packed, int total) const {
    if (total < (p_->fixed ? p_->M : 0) || total > p_->M) return npos;
    return p_->sector_offset[static_cast<std::size_t>(total)] +
           rank_in_sector(packed, p_->L, total);
}

std::size_t BosonBasis::raised_slow(std::size_t idx, int mode) const {
    const int n = sector_of(idx);
    if (p_->fixed || n + 1 > p_->M) return npos;
    const std::uint64_t t = p_->states[idx] + (1ull << (8 * mode));
    return index_of(t, n + 1);
}

std::size_t BosonBasis::lowered_slow(std::size_t idx, int mode) const {
    if (occ(idx, mode) == 0) return npos;
    const int n = sector_of(idx);
    if (p_->fixed || n - 1 < 0) return npos;
    const std::uint64_t t = p_->states[idx] - (1ull << (8 * mode));
    return index_of(t, n - 1);
}

std::size_t BosonBasis::hopped(std::size_t idx, int p, int q) const {
    if (occ(idx, q) == 0) return npos;
    const std::uint64_t t = p_->states[idx] - (1ull << (8 * q)) + (1ull << (8 * p));
    if (((t >> (8 * p)) & 0xffu) > 0xfeu) return npos;
    return index_of(t, sector_of(idx));
}

}  // namespace bosedyn
