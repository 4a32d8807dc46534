// AVX2 variants.  This translation unit is compiled with -mavx2 and must
// only be entered after runtime CPU detection.
//
// No fused multiply-adds here: every lane performs the same individually
// rounded mul/add sequence as the scalar reference, which is what makes the
// two backends bit-identical (the build disables FP contraction for this
// file so the tail loops cannot be re-fused either).

#include "fastmi/kernels.hpp"

#ifdef FASTMI_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace fastmi::kernels::avx2 {

void outer_product_accumulate(double *acc_re, double *acc_im,
                              const double *ax_re, const double *ax_im,
                              const double *ay_re, const double *ay_im,
                              std::size_t m) {
  const std::size_t tail = m & ~std::size_t{3};
  for (std::size_t i = 0; i < m; ++i) {
    const __m256d xr = _mm256_set1_pd(ax_re[i]);
    const __m256d xi = _mm256_set1_pd(ax_im[i]);
    double *row_re = acc_re + i * m;
    double *row_im = acc_im + i * m;
    std::size_t j = 0;
    for (; j < tail; j += 4) {
      const __m256d yr = _mm256_loadu_pd(ay_re + j);
      const __m256d yi = _mm256_loadu_pd(ay_im + j);
      const __m256d re_old = _mm256_loadu_pd(row_re + j);
      const __m256d im_old = _mm256_loadu_pd(row_im + j);
      const __m256d re = _mm256_add_pd(
          re_old, _mm256_sub_pd(_mm256_mul_pd(xr, yr), _mm256_mul_pd(xi, yi)));
      const __m256d im = _mm256_add_pd(
          im_old, _mm256_add_pd(_mm256_mul_pd(xr, yi), _mm256_mul_pd(xi, yr)));
      _mm256_storeu_pd(row_re + j, re);
      _mm256_storeu_pd(row_im + j, im);
    }
    const double sxr = ax_re[i];
    const double sxi = ax_im[i];
    for (; j < m; ++j) {
      row_re[j] += sxr * ay_re[j] - sxi * ay_im[j];
      row_im[j] += sxr * ay_im[j] + sxi * ay_re[j];
    }
  }
}

void modulus_squared(const double *re, const double *im, double *out,
                     std::size_t count) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    _mm256_storeu_pd(out + i,
                     _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m)));
  }
  for (; i < count; ++i) {
    out[i] = re[i] * re[i] + im[i] * im[i];
  }
}

void transform_kernel_weights(const double *modsq, const unsigned char *mask,
                              double n, double *kappa, std::size_t count) {
  const double c_thresh = 4.0 * (n - 1.0) / (n * n);
  const double c_half = n / (2.0 * (n - 1.0));
  const __m256d vthresh = _mm256_set1_pd(c_thresh);
  const __m256d vhalf = _mm256_set1_pd(c_half);
  const __m256d vone = _mm256_set1_pd(1.0);
  const __m256d vzero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d q = _mm256_loadu_pd(modsq + i);
    __m256d radicand = _mm256_sub_pd(vone, _mm256_div_pd(vthresh, q));
    radicand = _mm256_min_pd(vone, _mm256_max_pd(vzero, radicand));
    __m256d k =
        _mm256_mul_pd(vhalf, _mm256_add_pd(vone, _mm256_sqrt_pd(radicand)));
    k = _mm256_min_pd(vone, k);
    std::uint32_t mbytes;
    std::memcpy(&mbytes, mask + i, 4);
    const __m256i wide =
        _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(mbytes)));
    const __m256d keep = _mm256_castsi256_pd(
        _mm256_cmpgt_epi64(wide, _mm256_setzero_si256()));
    _mm256_storeu_pd(kappa + i, _mm256_and_pd(k, keep));
  }
  for (; i < count; ++i) {
    if (!mask[i]) {
      kappa[i] = 0.0;
      continue;
    }
    double radicand = std::clamp(1.0 - c_thresh / modsq[i], 0.0, 1.0);
    kappa[i] = std::min(1.0, c_half * (1.0 + std::sqrt(radicand)));
  }
}

void scale_complex(double *re, double *im, const double *s,
                   std::size_t count) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d v = _mm256_loadu_pd(s + i);
    _mm256_storeu_pd(re + i, _mm256_mul_pd(_mm256_loadu_pd(re + i), v));
    _mm256_storeu_pd(im + i, _mm256_mul_pd(_mm256_loadu_pd(im + i), v));
  }
  for (; i < count; ++i) {
    re[i] *= s[i];
    im[i] *= s[i];
  }
}

}  // namespace fastmi::kernels::avx2

#endif  // FASTMI_HAVE_AVX2
