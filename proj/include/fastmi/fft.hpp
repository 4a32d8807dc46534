#pragma once

#include <cstddef>

namespace fastmi::fft {

// In-place unnormalized 2-D DFTs of an m-by-m row-major complex grid held as
// split real/imaginary planes.  forward_2d applies exponent -2*pi*i*j*k/m per
// axis, backward_2d applies +.  Plans are cached per grid size; execution is
// safe from multiple threads.
void forward_2d(std::size_t m, double *re, double *im);
void backward_2d(std::size_t m, double *re, double *im);

}  // namespace fastmi::fft
