#include "fastmi/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace fastmi::kernels::scalar {

void outer_product_accumulate(double *acc_re, double *acc_im,
                              const double *ax_re, const double *ax_im,
                              const double *ay_re, const double *ay_im,
                              std::size_t m) {
  for (std::size_t i = 0; i < m; ++i) {
    const double xr = ax_re[i];
    const double xi = ax_im[i];
    double *row_re = acc_re + i * m;
    double *row_im = acc_im + i * m;
    for (std::size_t j = 0; j < m; ++j) {
      row_re[j] += xr * ay_re[j] - xi * ay_im[j];
      row_im[j] += xr * ay_im[j] + xi * ay_re[j];
    }
  }
}

void modulus_squared(const double *re, const double *im, double *out,
                     std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = re[i] * re[i] + im[i] * im[i];
  }
}

void transform_kernel_weights(const double *modsq, const unsigned char *mask,
                              double n, double *kappa, std::size_t count) {
  const double c_thresh = 4.0 * (n - 1.0) / (n * n);
  const double c_half = n / (2.0 * (n - 1.0));
  for (std::size_t i = 0; i < count; ++i) {
    if (!mask[i]) {
      kappa[i] = 0.0;
      continue;
    }
    double radicand = 1.0 - c_thresh / modsq[i];
    radicand = std::clamp(radicand, 0.0, 1.0);
    kappa[i] = std::min(1.0, c_half * (1.0 + std::sqrt(radicand)));
  }
}

void scale_complex(double *re, double *im, const double *s,
                   std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    re[i] *= s[i];
    im[i] *= s[i];
  }
}

}  // namespace fastmi::kernels::scalar
