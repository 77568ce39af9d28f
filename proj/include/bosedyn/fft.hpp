#ifndef BOSEDYN_FFT_HPP
#define BOSEDYN_FFT_HPP

#include <complex>
#include <vector>

#include "bosedyn/grid.hpp"

namespace bosedyn {

using cplx = std::complex<double>;

// Unnormalized DFTs on a grid's flattened storage. Plans are cached per
// (dimension, n) behind a mutex; execution is safe from multiple threads.
//
// dft_forward:  out[m] = sum_j in[j] exp(-i k_m x_j)
// dft_backward: out[j] = sum_m in[m] exp(+i k_m x_j)
void dft_forward(const PeriodicGrid& g, const cplx* in, cplx* out);
void dft_backward(const PeriodicGrid& g, const cplx* in, cplx* out);

void dft_forward(const PeriodicGrid& g, std::vector<cplx>& data);
void dft_backward(const PeriodicGrid& g, std::vector<cplx>& data);

}  // namespace bosedyn

#endif
