#ifndef FASTMI_KERNELS_HPP
#define FASTMI_KERNELS_HPP

#include <cstddef>
#include <string>

// Data-parallel inner loops of the estimator, in split (re/im) layout.
//
// Every kernel exists as a scalar reference implementation and, on x86-64
// hardware with AVX2, as a vectorized variant.  The public entry points
// dispatch once at startup; the environment variable FASTMI_KERNEL
// ("scalar" or "avx2") overrides the choice, which the equivalence tests
// use to drive both paths on the same inputs.
//
// Both variants of a kernel perform the same individually rounded
// operations in the same order (no fused multiply-adds), so their outputs
// are bit-identical; switching backends never changes a result.

namespace fastmi::kernels {

enum class Backend { scalar, avx2 };

// Backend chosen for this process (CPU detection + FASTMI_KERNEL override).
Backend active_backend();
const char *backend_name(Backend b);
std::string backend_description();  // for run metadata / bench reports

// True when the AVX2 variants are compiled in and the CPU supports them.
bool avx2_available();

// acc[i*m + j] += ax[i] * ay[j] for complex values split into planes.
void outer_product_accumulate(double *acc_re, double *acc_im,
                              const double *ax_re, const double *ax_im,
                              const double *ay_re, const double *ay_im,
                              std::size_t m);

// out[i] = re[i]^2 + im[i]^2
void modulus_squared(const double *re, const double *im, double *out,
                     std::size_t count);

// Pointwise optimal transform-kernel weights from |C|^2 over the retained
// set: where mask[i] != 0,
//   kappa[i] = min(1, n/(2(n-1)) * (1 + sqrt(clamp(1 - 4(n-1)/(n^2 q), 0, 1))))
// with q = modsq[i]; elsewhere kappa[i] = 0.  The radicand clamp absorbs
// binning round-off that pushes |C| marginally above 1.
void transform_kernel_weights(const double *modsq, const unsigned char *mask,
                              double n, double *kappa, std::size_t count);

// re[i] *= s[i]; im[i] *= s[i]
void scale_complex(double *re, double *im, const double *s, std::size_t count);

namespace scalar {
void outer_product_accumulate(double *acc_re, double *acc_im,
                              const double *ax_re, const double *ax_im,
                              const double *ay_re, const double *ay_im,
                              std::size_t m);
void modulus_squared(const double *re, const double *im, double *out,
                     std::size_t count);
void transform_kernel_weights(const double *modsq, const unsigned char *mask,
                              double n, double *kappa, std::size_t count);
void scale_complex(double *re, double *im, const double *s, std::size_t count);
}  // namespace scalar

#ifdef FASTMI_HAVE_AVX2
namespace avx2 {
void outer_product_accumulate(double *acc_re, double *acc_im,
                              const double *ax_re, const double *ax_im,
                              const double *ay_re, const double *ay_im,
                              std::size_t m);
void modulus_squared(const double *re, const double *im, double *out,
                     std::size_t count);
void transform_kernel_weights(const double *modsq, const unsigned char *mask,
                              double n, double *kappa, std::size_t count);
void scale_complex(double *re, double *im, const double *s, std::size_t count);
}  // namespace avx2
#endif

}  // namespace fastmi::kernels

#endif  // FASTMI_KERNELS_HPP
