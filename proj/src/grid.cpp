#include "bosedyn/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace bosedyn {

namespace {
bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}

PeriodicGrid::PeriodicGrid(int dimension, int points_per_axis, double box_length) {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("PeriodicGrid: dimension must be 1 or 2");
    if (!is_pow2(points_per_axis))
        throw std::invalid_argument("PeriodicGrid: points_per_axis must be a power of two");
    if (!(box_length > 0.0))
        throw std::invalid_argument("PeriodicGrid: box_length must be positive");

    auto d = std::make_shared<Data>();
    d->dim = dimension;
    d->n = points_per_axis;
    d->length = box_length;
    d->h = box_length / points_per_axis;
    d->total = 1;
    for (int a = 0; a < dimension; ++a) d->total *= static_cast<std::size_t>(points_per_axis);
    d->cell_vol = std::pow(d->h, dimension);
    d->vol = std::pow(box_length, dimension);

    const double dk = 2.0 * M_PI / box_length;
    d->k1d.resize(static_cast<std::size_t>(points_per_axis));
    for (int m = 0; m < points_per_axis; ++m) {
        const int s = (m < points_per_axis / 2) ? m : m - points_per_axis;
        d->k1d[static_cast<std::size_t>(m)] = dk * s;
    }
    d->kmax = dk * (points_per_axis / 2);

    d->ksq.resize(d->total);
    if (dimension == 1) {
        for (int m = 0; m < points_per_axis; ++m) {
            const double k = d->k1d[static_cast<std::size_t>(m)];
            d->ksq[static_cast<std::size_t>(m)] = k * k;
        }
    } else {
        std::size_t idx = 0;
        for (int a = 0; a < points_per_axis; ++a) {
            const double ka = d->k1d[static_cast<std::size_t>(a)];
            for (int b = 0; b < points_per_axis; ++b, ++idx) {
                const double kb = d->k1d[static_cast<std::size_t>(b)];
                d->ksq[idx] = ka * ka + kb * kb;
            }
        }
    }
    p_ = std::move(d);
}

}  // namespace bosedyn
