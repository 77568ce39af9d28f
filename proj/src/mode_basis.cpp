#include "bosedyn/mode_basis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bosedyn {

ModeBasis::ModeBasis(const PeriodicGrid& grid, int count) : grid_(grid) {
    const std::size_t total = grid.size();
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    const auto& ksq = grid.ksq();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ksq[a] != ksq[b]) return ksq[a] < ksq[b];
        return a < b;
    });
    const std::size_t keep =
        count < 0 ? total : std::min<std::size_t>(static_cast<std::size_t>(count), total);
    if (keep == 0) throw std::invalid_argument("ModeBasis: empty basis");
    mode_flat_.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    ksq_.resize(keep);
    flat_to_mode_.assign(total, -1);
    for (std::size_t m = 0; m < keep; ++m) {
        ksq_[m] = ksq[mode_flat_[m]];
        flat_to_mode_[mode_flat_[m]] = static_cast<int>(m);
    }
}

Eigen::VectorXd ModeBasis::ksq_vector() const {
    Eigen::VectorXd v(size());
    for (int m = 0; m < size(); ++m) v[m] = ksq_[static_cast<std::size_t>(m)];
    return v;
}

ComplexField ModeBasis::field_of_mode(int mode) const {
    ComplexField f(grid_);
    std::vector<cplx> spec(grid_.size(), cplx(0.0, 0.0));
    // e_p has continuum coefficient vol/sqrt(vol) = sqrt(vol) at k_p
    spec[mode_flat_[static_cast<std::size_t>(mode)]] = std::sqrt(grid_.volume());
    return field_from_spectral(grid_, spec);
}

Eigen::VectorXcd ModeBasis::coefficients(const ComplexField& f) const {
    if (f.grid() != grid_) throw std::invalid_argument("ModeBasis::coefficients: grid mismatch");
    std::vector<cplx> spec = spectral_coefficients(f);
    Eigen::VectorXcd c(size());
    const double s = 1.0 / std::sqrt(grid_.volume());
    for (int m = 0; m < size(); ++m) c[m] = s * spec[mode_flat_[static_cast<std::size_t>(m)]];
    return c;
}

ComplexField ModeBasis::synthesize(const Eigen::VectorXcd& c) const {
    if (c.size() != size()) throw std::invalid_argument("ModeBasis::synthesize: size mismatch");
    std::vector<cplx> spec(grid_.size(), cplx(0.0, 0.0));
    const double s = std::sqrt(grid_.volume());
    for (int m = 0; m < size(); ++m) spec[mode_flat_[static_cast<std::size_t>(m)]] = s * c[m];
    return field_from_spectral(grid_, spec);
}

int ModeBasis::mode_of_flat(std::size_t flat) const {
    return flat_to_mode_[flat];
}

int ModeBasis::mode_shift(int mode, int shift_mode) const {
    const int n = grid_.points_per_axis();
    const std::size_t a = mode_flat_[static_cast<std::size_t>(mode)];
    const std::size_t b = mode_flat_[static_cast<std::size_t>(shift_mode)];
    std::size_t target;
    if (grid_.dimension() == 1) {
        target = (a + b) % static_cast<std::size_t>(n);
    } else {
        const std::size_t n2 = static_cast<std::size_t>(n);
        const std::size_t ax = a / n2, ay = a % n2, bx = b / n2, by = b % n2;
        target = ((ax + bx) % n2) * n2 + ((ay + by) % n2);
    }
    return flat_to_mode_[target];
}

int ModeBasis::mode_negate(int mode) const {
    const int n = grid_.points_per_axis();
    const std::size_t a = mode_flat_[static_cast<std::size_t>(mode)];
    std::size_t target;
    if (grid_.dimension() == 1) {
        target = (static_cast<std::size_t>(n) - a) % static_cast<std::size_t>(n);
    } else {
        const std::size_t n2 = static_cast<std::size_t>(n);
        const std::size_t ax = a / n2, ay = a % n2;
        target = ((n2 - ax) % n2) * n2 + ((n2 - ay) % n2);
    }
    return flat_to_mode_[target];
}

}  // namespace bosedyn
