#ifndef BOSEDYN_GRID_HPP
#define BOSEDYN_GRID_HPP

#include <cstddef>
#include <memory>
#include <vector>

namespace bosedyn {

// Uniform periodic box [0, L)^d, d = 1 or 2, with a power-of-two number of
// points per axis. Coordinates are x_j = j*h; wavenumbers follow FFT storage
// order: k_m = 2*pi*m/L for m < n/2 and 2*pi*(m-n)/L for m >= n/2.
//
// Immutable after construction; cheap to copy (shared payload).
class PeriodicGrid {
public:
    PeriodicGrid(int dimension, int points_per_axis, double box_length);

    int dimension() const { return p_->dim; }
    int points_per_axis() const { return p_->n; }
    double box_length() const { return p_->length; }
    double spacing() const { return p_->h; }
    std::size_t size() const { return p_->total; }
    double cell_volume() const { return p_->cell_vol; }  // h^d
    double volume() const { return p_->vol; }            // L^d

    // coordinate of index j along one axis
    double coord(int j) const { return j * p_->h; }
    // signed coordinate wrapped to [-L/2, L/2) (distance from the origin)
    double signed_coord(int j) const {
        return (j < p_->n / 2) ? j * p_->h : (j - p_->n) * p_->h;
    }
    double wavenumber(int m) const { return p_->k1d[static_cast<std::size_t>(m)]; }
    const std::vector<double>& wavenumbers_axis() const { return p_->k1d; }
    // |k|^2 per flattened grid index
    const std::vector<double>& ksq() const { return p_->ksq; }
    double max_wavenumber() const { return p_->kmax; }

    std::size_t flat(int i, int j = 0) const {
        return static_cast<std::size_t>(i) * (p_->dim == 2 ? p_->n : 1) + j;
    }

    bool operator==(const PeriodicGrid& o) const {
        return p_->dim == o.p_->dim && p_->n == o.p_->n && p_->length == o.p_->length;
    }
    bool operator!=(const PeriodicGrid& o) const { return !(*this == o); }

private:
    struct Data {
        int dim;
        int n;
        double length;
        double h;
        std::size_t total;
        double cell_vol;
        double vol;
        double kmax;
        std::vector<double> k1d;
        std::vector<double> ksq;
    };
    std::shared_ptr<const Data> p_;
};

}  // namespace bosedyn

#endif
