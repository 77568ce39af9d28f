#include "bosedyn/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace bosedyn {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, PlanPair>& plan_cache() {
    static std::map<std::pair<int, int>, PlanPair> cache;
    return cache;
}

// Plans are created once on fftw_malloc'd scratch and reused with the
// new-array execute interface. Caller buffers come from std::vector, which
// is not guaranteed 16-byte aligned, so plans are created with FFTW_UNALIGNED.
const PlanPair& plans_for(const PeriodicGrid& g) {
    std::lock_guard<std::mutex> lk(g_plan_mutex);
    auto key = std::make_pair(g.dimension(), g.points_per_axis());
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const int n = g.points_per_axis();
    const std::size_t total = g.size();
    fftw_complex* a = fftw_alloc_complex(total);
    fftw_complex* b = fftw_alloc_complex(total);
    PlanPair pp;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (g.dimension() == 1) {
        pp.fwd = fftw_plan_dft_1d(n, a, b, FFTW_FORWARD, flags);
        pp.bwd = fftw_plan_dft_1d(n, a, b, FFTW_BACKWARD, flags);
    } else {
        pp.fwd = fftw_plan_dft_2d(n, n, a, b, FFTW_FORWARD, flags);
        pp.bwd = fftw_plan_dft_2d(n, n, a, b, FFTW_BACKWARD, flags);
    }
    fftw_free(a);
    fftw_free(b);
    return cache.emplace(key, pp).first->second;
}

}  // namespace

void dft_forward(const PeriodicGrid& g, const cplx* in, cplx* out) {
    const PlanPair& pp = plans_for(g);
    fftw_execute_dft(pp.fwd,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void dft_backward(const PeriodicGrid& g, const cplx* in, cplx* out) {
    const PlanPair& pp = plans_for(g);
    fftw_execute_dft(pp.bwd,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void dft_forward(const PeriodicGrid& g, std::vector<cplx>& data) {
    std::vector<cplx> out(data.size());
    dft_forward(g, data.data(), out.data());
    data.swap(out);
}

void dft_backward(const PeriodicGrid& g, std::vector<cplx>& data) {
    std::vector<cplx> out(data.size());
    dft_backward(g, data.data(), out.data());
    data.swap(out);
}

}  // namespace bosedyn
