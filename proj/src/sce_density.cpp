#include "fastmi/sce_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fastmi/errors.hpp"
#include "fastmi/fft.hpp"
#include "fastmi/kernels.hpp"
#include "fastmi/math.hpp"

namespace fastmi {

namespace {

bool power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

void require_grid(const GridSpec &grid) {
  if (!power_of_two(grid.m) || grid.m < 32) {
    throw ConfigError("grid size " + std::to_string(grid.m) +
                      " is not a power of two >= 32");
  }
  if (!(grid.x_lo < grid.x_hi)) {
    throw ConfigError("grid extent is empty");
  }
}

// Phase table exp(i * sign * k * a) over the centered index range
// k = -m/2 .. m/2-1.  Negative-k entries are reflections of positive-k ones,
// so conjugate pairs match bit for bit.
void reflected_phase(double a, double sign, std::size_t m, double *re, double *im) {
  const std::size_t half = m / 2;
  re[half] = 1.0;
  im[half] = 0.0;
  for (std::size_t k = 1; k <= half; ++k) {
    const double angle = static_cast<double>(k) * a;
    const double c = std::cos(angle);
    const double s = sign * std::sin(angle);
    if (k < half) {
      re[half + k] = c;
      im[half + k] = s;
    }
    re[half - k] = c;
    im[half - k] = -s;
  }
}

// Centered index -> FFT storage index (swap halves; involutive for even m).
inline std::size_t wrap_index(std::size_t idx, std::size_t m) {
  return (idx + m / 2) % m;
}

EcfGrid ecf_direct(const ProbitSample &probit, const GridSpec &grid) {
  const std::size_t m = grid.m;
  const double dt = grid.dt();
  EcfGrid ecf;
  ecf.values.m = m;
  ecf.values.re.assign(m * m, 0.0);
  ecf.values.im.assign(m * m, 0.0);
  ecf.n = probit.n();
  ecf.grid = grid;

  std::vector<double> ax_re(m), ax_im(m), ay_re(m), ay_im(m);
  for (std::size_t j = 0; j < probit.n(); ++j) {
    reflected_phase(dt * probit.zx[j], 1.0, m, ax_re.data(), ax_im.data());
    reflected_phase(dt * probit.zy[j], 1.0, m, ay_re.data(), ay_im.data());
    kernels::outer_product_accumulate(ecf.values.re.data(), ecf.values.im.data(),
                                      ax_re.data(), ax_im.data(), ay_re.data(),
                                      ay_im.data(), m);
  }
  const double inv_n = 1.0 / static_cast<double>(probit.n());
  for (std::size_t i = 0; i < m * m; ++i) {
    ecf.values.re[i] *= inv_n;
    ecf.values.im[i] *= inv_n;
  }
  return ecf;
}

EcfGrid ecf_binned(const ProbitSample &probit, const GridSpec &grid) {
  const std::size_t m = grid.m;
  const double dx = grid.dx();
  const double inv_dx = 1.0 / dx;

  std::vector<double> buf_re(m * m, 0.0), buf_im(m * m, 0.0);
  for (std::size_t j = 0; j < probit.n(); ++j) {
    const double px = (probit.zx[j] - grid.x_lo) * inv_dx;
    const double py = (probit.zy[j] - grid.x_lo) * inv_dx;
    std::size_t ix = static_cast<std::size_t>(px);
    std::size_t iy = static_cast<std::size_t>(py);
    double fx = px - static_cast<double>(ix);
    double fy = py - static_cast<double>(iy);
    // A point at the far edge deposits fully onto the last node; the wrapped
    // node it would share with belongs to the next period.
    if (ix >= m) {
      ix = m - 1;
      fx = 1.0;
    }
    if (iy >= m) {
      iy = m - 1;
      fy = 1.0;
    }
    const std::size_t ix1 = std::min(ix + 1, m - 1);
    const std::size_t iy1 = std::min(iy + 1, m - 1);
    buf_re[ix * m + iy] += (1.0 - fx) * (1.0 - fy);
    buf_re[ix * m + iy1] += (1.0 - fx) * fy;
    buf_re[ix1 * m + iy] += fx * (1.0 - fy);
    buf_re[ix1 * m + iy1] += fx * fy;
  }

  fft::backward_2d(m, buf_re.data(), buf_im.data());

  // Per-axis factor: translate node 0 to x_lo, undo the 1/n-weighted count,
  // and deconvolve the linear-binning window sinc^2(k*pi/m).
  const std::size_t half = m / 2;
  std::vector<double> fac_re(m), fac_im(m);
  reflected_phase(grid.dt() * grid.x_lo, 1.0, m, fac_re.data(), fac_im.data());
  const double inv_n = 1.0 / static_cast<double>(probit.n());
  std::vector<double> fac_scale(m);
  for (std::size_t idx = 0; idx < m; ++idx) {
    const double k = static_cast<double>(idx) - static_cast<double>(half);
    double s2 = 1.0;
    if (k != 0.0) {
      const double u = k * std::numbers::pi / static_cast<double>(m);
      const double s = std::sin(u) / u;
      s2 = s * s;
    }
    fac_scale[idx] = 1.0 / s2;
    fac_re[idx] *= fac_scale[idx];
    fac_im[idx] *= fac_scale[idx];
  }

  EcfGrid ecf;
  ecf.values.m = m;
  ecf.values.re.resize(m * m);
  ecf.values.im.resize(m * m);
  ecf.n = probit.n();
  ecf.grid = grid;
  for (std::size_t ix = 0; ix < m; ++ix) {
    const double wxr = fac_re[ix] * inv_n;
    const double wxi = fac_im[ix] * inv_n;
    const std::size_t row_src = wrap_index(ix, m) * m;
    const std::size_t row_dst = ix * m;
    for (std::size_t iy = 0; iy < m; ++iy) {
      const double vr = buf_re[row_src + wrap_index(iy, m)];
      const double vi = buf_im[row_src + wrap_index(iy, m)];
      const double wr = wxr * fac_re[iy] - wxi * fac_im[iy];
      const double wi = wxr * fac_im[iy] + wxi * fac_re[iy];
      ecf.values.re[row_dst + iy] = wr * vr - wi * vi;
      ecf.values.im[row_dst + iy] = wr * vi + wi * vr;
    }
  }
  return ecf;
}

}  // namespace

double GridSpec::two_pi_over_span() const {
  return 2.0 * std::numbers::pi / (x_hi - x_lo);
}

GridSpec build_grid(const ProbitSample &probit, std::size_t m, double pad) {
  if (!power_of_two(m) || m < 32) {
    throw ConfigError("grid size " + std::to_string(m) +
                      " is not a power of two >= 32");
  }
  if (!(pad >= 0.0)) {
    throw ConfigError("grid pad must be nonnegative");
  }
  double peak = 0.0;
  for (std::size_t i = 0; i < probit.n(); ++i) {
    peak = std::max(peak, std::abs(probit.zx[i]));
    peak = std::max(peak, std::abs(probit.zy[i]));
  }
  const double extent = peak + pad;
  if (!(extent > 0.0)) {
    throw ConfigError("grid extent is zero; supply a positive pad");
  }
  GridSpec grid;
  grid.m = m;
  grid.x_lo = -extent;
  grid.x_hi = extent;
  return grid;
}

EcfGrid compute_ecf(const ProbitSample &probit, const GridSpec &grid, EcfMode mode) {
  require_grid(grid);
  if (probit.n() == 0) {
    throw InsufficientData("empty sample");
  }
  for (std::size_t i = 0; i < probit.n(); ++i) {
    if (probit.zx[i] < grid.x_lo || probit.zx[i] > grid.x_hi ||
        probit.zy[i] < grid.x_lo || probit.zy[i] > grid.x_hi) {
      throw GridOverflow("probit point " + std::to_string(i) +
                         " lies outside the grid window");
    }
  }
  return mode == EcfMode::direct ? ecf_direct(probit, grid)
                                 : ecf_binned(probit, grid);
}

FilterMask acceptable_frequency_mask(const EcfGrid &ecf) {
  const std::size_t m = ecf.values.m;
  const double n = static_cast<double>(ecf.n);
  FilterMask mask;
  mask.m = m;
  mask.threshold = 4.0 * (n - 1.0) / (n * n);
  mask.keep.assign(m * m, 0);

  std::vector<double> modsq(m * m);
  kernels::modulus_squared(ecf.values.re.data(), ecf.values.im.data(),
                           modsq.data(), m * m);

  const std::size_t half = m / 2;
  std::vector<std::size_t> stack;
  stack.reserve(m);
  const std::size_t origin = half * m + half;
  mask.keep[origin] = 1;
  stack.push_back(origin);
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    const std::size_t ix = p / m;
    const std::size_t iy = p % m;
    // Centered index 0 carries the unpaired -m/2 frequency: keeping it
    // without its (absent) +m/2 conjugate would make the inverse transform
    // complex, so the fill never enters that row or column.
    const std::size_t neighbors[4] = {
        ix > 1 ? p - m : p, ix + 1 < m ? p + m : p,
        iy > 1 ? p - 1 : p, iy + 1 < m ? p + 1 : p};
    for (std::size_t q : neighbors) {
      if (q != p && !mask.keep[q] && modsq[q] >= mask.threshold) {
        mask.keep[q] = 1;
        stack.push_back(q);
      }
    }
  }
  mask.kept = static_cast<std::size_t>(
      std::count(mask.keep.begin(), mask.keep.end(), std::uint8_t{1}));
  return mask;
}

TransformKernel optimal_transform_kernel(const EcfGrid &ecf, const FilterMask &mask) {
  const std::size_t m = ecf.values.m;
  if (mask.m != m) {
    throw InvalidInput("mask and characteristic-function grids differ in size");
  }
  std::vector<double> modsq(m * m);
  kernels::modulus_squared(ecf.values.re.data(), ecf.values.im.data(),
                           modsq.data(), m * m);
  TransformKernel kernel;
  kernel.m = m;
  kernel.weight.resize(m * m);
  kernels::transform_kernel_weights(modsq.data(), mask.keep.data(),
                                    static_cast<double>(ecf.n),
                                    kernel.weight.data(), m * m);
  // |C(0)| = 1 only up to round-off; the zero frequency must pass unchanged.
  kernel.weight[(m / 2) * m + (m / 2)] = 1.0;
  return kernel;
}

ComplexGrid sce_transform(const EcfGrid &ecf, const TransformKernel &kernel) {
  if (kernel.m != ecf.values.m) {
    throw InvalidInput("kernel and characteristic-function grids differ in size");
  }
  ComplexGrid phi = ecf.values;
  kernels::scale_complex(phi.re.data(), phi.im.data(), kernel.weight.data(),
                         phi.size());
  return phi;
}

ComplexGrid fixed_point_phi(const EcfGrid &ecf, double tol, std::size_t max_iter) {
  if (!(tol > 0.0)) {
    throw ConfigError("fixed-point tolerance must be positive");
  }
  const std::size_t m = ecf.values.m;
  const FilterMask mask = acceptable_frequency_mask(ecf);

  ComplexGrid phi;
  phi.m = m;
  phi.re.assign(m * m, 0.0);
  phi.im.assign(m * m, 0.0);

  std::vector<std::size_t> active;
  active.reserve(mask.kept);
  std::vector<double> c(mask.kept), x(mask.kept);
  for (std::size_t p = 0; p < m * m; ++p) {
    if (mask.keep[p]) {
      const std::size_t i = active.size();
      active.push_back(p);
      c[i] = std::hypot(ecf.values.re[p], ecf.values.im[p]);
      x[i] = c[i];
    }
  }

  // Modulus recurrence x <- n x^2 |C| / (1 + (n-1) x^2).  Its fixed points
  // solve (n-1)x^2 - n|C|x + 1 = 0; the mask keeps |C|^2 >= 4(n-1)/n^2, which
  // is exactly where the roots are real, and the start x = |C| lies in the
  // attraction basin of the larger (stable) root.
  const double n = static_cast<double>(ecf.n);
  std::vector<std::size_t> moving(active.size());
  for (std::size_t i = 0; i < moving.size(); ++i) moving[i] = i;
  for (std::size_t iter = 0; iter < max_iter && !moving.empty(); ++iter) {
    std::size_t kept_moving = 0;
    for (std::size_t s = 0; s < moving.size(); ++s) {
      const std::size_t i = moving[s];
      const double xi = x[i];
      const double next = n * xi * xi * c[i] / (1.0 + (n - 1.0) * xi * xi);
      x[i] = next;
      if (std::abs(next - xi) >= tol) {
        moving[kept_moving++] = i;
      }
    }
    moving.resize(kept_moving);
  }
  if (!moving.empty()) {
    throw NonConvergence("fixed-point smoothing stalled", moving.size());
  }

  for (std::size_t i = 0; i < active.size(); ++i) {
    const std::size_t p = active[i];
    const double ratio = x[i] / c[i];
    phi.re[p] = ratio * ecf.values.re[p];
    phi.im[p] = ratio * ecf.values.im[p];
  }
  return phi;
}

DensityGrid invert_to_density(const ComplexGrid &phi_hat, const GridSpec &grid,
                              double floor_rel) {
  require_grid(grid);
  const std::size_t m = grid.m;
  if (phi_hat.m != m) {
    throw InvalidInput("transform and grid differ in size");
  }
  if (!(floor_rel > 0.0) || floor_rel >= 1.0) {
    throw ConfigError("density floor must lie in (0, 1)");
  }

  // f(x_j) = (dt/2pi)^2 sum_k phi(t_k) exp(-i t_k . x_j); splitting
  // t_k . x_j = k dt x_lo + 2 pi k j / m turns the sum into a plain DFT of
  // the twiddled, recentered transform.
  std::vector<double> tw_re(m), tw_im(m);
  reflected_phase(grid.dt() * grid.x_lo, -1.0, m, tw_re.data(), tw_im.data());
  std::vector<double> buf_re(m * m), buf_im(m * m);
  for (std::size_t ix = 0; ix < m; ++ix) {
    const std::size_t row_src = ix * m;
    const std::size_t row_dst = wrap_index(ix, m) * m;
    for (std::size_t iy = 0; iy < m; ++iy) {
      const double wr = tw_re[ix] * tw_re[iy] - tw_im[ix] * tw_im[iy];
      const double wi = tw_re[ix] * tw_im[iy] + tw_im[ix] * tw_re[iy];
      const double vr = phi_hat.re[row_src + iy];
      const double vi = phi_hat.im[row_src + iy];
      buf_re[row_dst + wrap_index(iy, m)] = wr * vr - wi * vi;
      buf_im[row_dst + wrap_index(iy, m)] = wr * vi + wi * vr;
    }
  }
  fft::forward_2d(m, buf_re.data(), buf_im.data());

  double sup_re = 0.0, sup_im = 0.0;
  for (std::size_t p = 0; p < m * m; ++p) {
    sup_re = std::max(sup_re, std::abs(buf_re[p]));
    sup_im = std::max(sup_im, std::abs(buf_im[p]));
  }
  if (!(sup_re > 0.0) || sup_im > 1e-8 * sup_re) {
    throw AsymmetrySignal("inverse transform left an imaginary residue");
  }

  const double dt = grid.dt();
  const double scale = (dt / math::two_pi) * (dt / math::two_pi);
  DensityGrid density;
  density.grid = grid;
  density.value.resize(m * m);
  double peak = 0.0;
  for (std::size_t p = 0; p < m * m; ++p) {
    density.value[p] = scale * buf_re[p];
    peak = std::max(peak, density.value[p]);
  }
  if (!(peak > 0.0)) {
    throw NumericalError("inverse transform produced no positive mass", peak);
  }
  const double dx = grid.dx();
  math::KahanSum raw;
  for (std::size_t p = 0; p < m * m; ++p) {
    raw.add(density.value[p]);
  }
  density.raw_mass = raw.value() * dx * dx;
  const double clip = floor_rel * peak;
  math::KahanSum mass;
  for (std::size_t p = 0; p < m * m; ++p) {
    density.value[p] = std::max(density.value[p], clip);
    mass.add(density.value[p]);
  }
  const double total = mass.value() * dx * dx;
  const double renorm = 1.0 / total;
  for (std::size_t p = 0; p < m * m; ++p) {
    density.value[p] *= renorm;
  }
  density.floor = clip * renorm;
  return density;
}

DensityGrid estimate_density(const ProbitSample &probit, const GridSpec &grid,
                             const SceConfig &config) {
  const EcfGrid ecf = compute_ecf(probit, grid, config.ecf);
  const FilterMask mask = acceptable_frequency_mask(ecf);
  const TransformKernel kernel = optimal_transform_kernel(ecf, mask);
  const ComplexGrid phi = sce_transform(ecf, kernel);
  return invert_to_density(phi, grid, config.floor_rel);
}

}  // namespace fastmi
