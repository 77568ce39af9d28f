#ifndef BOSEDYN_MODE_BASIS_HPP
#define BOSEDYN_MODE_BASIS_HPP

#include <Eigen/Dense>

#include "bosedyn/field.hpp"

namespace bosedyn {

// Orthonormal plane-wave modes e_p(x) = exp(i k_p x)/sqrt(vol) on a grid,
// sorted by |k|^2 (ties by flat index). size() may be a subset of the grid
// modes; the full set keeps the wavenumber group structure (shifts mod n).
class ModeBasis {
public:
    ModeBasis(const PeriodicGrid& grid, int count = -1);

    const PeriodicGrid& grid() const { return grid_; }
    int size() const { return static_cast<int>(mode_flat_.size()); }
    bool full() const { return mode_flat_.size() == grid_.size(); }
    std::size_t flat_index(int mode) const { return mode_flat_[static_cast<std::size_t>(mode)]; }
    double mode_ksq(int mode) const { return ksq_[static_cast<std::size_t>(mode)]; }
    Eigen::VectorXd ksq_vector() const;

    ComplexField field_of_mode(int mode) const;
    // c_p = <e_p, f>
    Eigen::VectorXcd coefficients(const ComplexField& f) const;
    ComplexField synthesize(const Eigen::VectorXcd& c) const;

    // for the full basis: mode index of the wavenumber sum/difference
    int mode_shift(int mode, int shift_mode) const;   // k_mode + k_shift
    int mode_negate(int mode) const;                  // -k_mode
    // grid flat index decomposed into per-axis integer indices and back
    int mode_of_flat(std::size_t flat) const;

private:
    PeriodicGrid grid_;
    std::vector<std::size_t> mode_flat_;
    std::vector<double> ksq_;
    std::vector<int> flat_to_mode_;
};

}  // namespace bosedyn

#endif
