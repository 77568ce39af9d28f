#ifndef BOSEDYN_FOCK_BASIS_HPP
#define BOSEDYN_FOCK_BASIS_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "bosedyn/errors.hpp"

namespace bosedyn {

// Occupation-number basis over L <= 8 modes: either the fixed-total sector
// (n_1,...,n_L) with sum = N, or the union of sectors 0..M. States are packed
// 8 bits per mode into a u64; sectors are enumerated in increasing total,
// inside a sector in descending-leading-occupation order with O(L)
// combinatorial ranking (no hashing).
class BosonBasis {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    static constexpr int max_modes = 8;

    static BosonBasis fixed(int modes, int total, std::size_t cap = 200000);
    static BosonBasis truncated(int modes, int max_total, std::size_t cap = 200000);

    int modes() const { return p_->L; }
    int max_total() const { return p_->M; }
    bool fixed_number() const { return p_->fixed; }
    std::size_t size() const { return p_->total_dim; }

    int sector_of(std::size_t idx) const;
    std::size_t sector_begin(int n) const { return p_->sector_offset[static_cast<std::size_t>(n)]; }
    std::size_t sector_dim(int n) const { return p_->sector_dims[static_cast<std::size_t>(n)]; }
    int min_sector() const { return p_->fixed ? p_->M : 0; }

    std::uint64_t packed(std::size_t idx) const { return p_->states[idx]; }
    int occ(std::size_t idx, int mode) const {
        return static_cast<int>((p_->states[idx] >> (8 * mode)) & 0xffu);
    }

    // global index of a packed tuple with known total occupation
    std::size_t index_of(std::uint64_t packed, int total) const;

    // single-mode moves; npos when the target leaves the stored space
    std::size_t raised(std::size_t idx, int mode) const {
        return p_->raise_tab.empty() ? raised_slow(idx, mode)
                                     : unpack32(p_->raise_tab[idx * p_->L + mode]);
    }
    std::size_t lowered(std::size_t idx, int mode) const {
        return p_->lower_tab.empty() ? lowered_slow(idx, mode)
                                     : unpack32(p_->lower_tab[idx * p_->L + mode]);
    }
    // a^dag_p a_q within a sector (valid for fixed bases too)
    std::size_t hopped(std::size_t idx, int p, int q) const;

    // number of basis states of (modes, total)
    static std::size_t sector_dimension(int modes, int total);

private:
    struct Data {
        int L;
        int M;
        bool fixed;
        std::size_t total_dim;
        std::vector<std::uint64_t> states;
        std::vector<std::size_t> sector_offset;  // indexed by sector
        std::vector<std::size_t> sector_dims;
        std::vector<std::uint32_t> raise_tab;  // dim x L, 0xffffffff = out
        std::vector<std::uint32_t> lower_tab;
    };
    std::shared_ptr<const Data> p_;

    static std::size_t unpack32(std::uint32_t v) {
        return v == 0xffffffffu ? npos : static_cast<std::size_t>(v);
    }
    std::size_t raised_slow(std::size_t idx, int mode) const;
    std::size_t lowered_slow(std::size_t idx, int mode) const;
    static BosonBasis build(int modes, int lo_total, int hi_total, std::size_t cap);
};

}  // namespace bosedyn

#endif
