#include "fastmi/kernels.hpp"

#include <cstdlib>
#include <string>

#include "fastmi/errors.hpp"

namespace fastmi::kernels {

bool avx2_available() {
#if defined(FASTMI_HAVE_AVX2) && (defined(__x86_64__) || defined(_M_X64))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Backend detect() {
  if (const char *env = std::getenv("FASTMI_KERNEL")) {
    const std::string want(env);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2") {
      if (!avx2_available()) {
        throw ConfigError("FASTMI_KERNEL=avx2 requested but AVX2 is unavailable");
      }
      return Backend::avx2;
    }
    throw ConfigError("FASTMI_KERNEL must be 'scalar' or 'avx2', got '" + want + "'");
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend chosen = detect();
  return chosen;
}

const char *backend_name(Backend b) {
  switch (b) {
    case Backend::avx2:
      return "avx2";
    case Backend::scalar:
    default:
      return "scalar";
  }
}

std::string backend_description() {
  std::string s = "kernel backend: ";
  s += backend_name(active_backend());
  return s;
}

void outer_product_accumulate(double *acc_re, double *acc_im,
                              const double *ax_re, const double *ax_im,
                              const double *ay_re, const double *ay_im,
                              std::size_t m) {
#ifdef FASTMI_HAVE_AVX2
  if (active_backend() == Backend::avx2) {
    avx2::outer_product_accumulate(acc_re, acc_im, ax_re, ax_im, ay_re, ay_im, m);
    return;
  }
#endif
  scalar::outer_product_accumulate(acc_re, acc_im, ax_re, ax_im, ay_re, ay_im, m);
}

void modulus_squared(const double *re, const double *im, double *out,
                     std::size_t count) {
#ifdef FASTMI_HAVE_AVX2
  if (active_backend() == Backend::avx2) {
    avx2::modulus_squared(re, im, out, count);
    return;
  }
#endif
  scalar::modulus_squared(re, im, out, count);
}

void transform_kernel_weights(const double *modsq, const unsigned char *mask,
                              double n, double *kappa, std::size_t count) {
#ifdef FASTMI_HAVE_AVX2
  if (active_backend() == Backend::avx2) {
    avx2::transform_kernel_weights(modsq, mask, n, kappa, count);
    return;
  }
#endif
  scalar::transform_kernel_weights(modsq, mask, n, kappa, count);
}

void scale_complex(double *re, double *im, const double *s,
                   std::size_t count) {
#ifdef FASTMI_HAVE_AVX2
  if (active_backend() == Backend::avx2) {
    avx2::scale_complex(re, im, s, count);
    return;
  }
#endif
  scalar::scale_complex(re, im, s, count);
}

}  // namespace fastmi::kernels
