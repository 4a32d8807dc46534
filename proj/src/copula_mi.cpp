#include "fastmi/copula_mi.hpp"

#include <algorithm>
#include <cmath>

#include "fastmi/errors.hpp"
#include "fastmi/math.hpp"

namespace fastmi {

namespace {

// Where log chat is cut off; keeps the plug-in average finite even if an
// evaluation lands deep inside the clipped tail plateau.
constexpr double kCopulaFloor = 1e-10;

double bilinear(const DensityGrid &density, double zx, double zy) {
  const GridSpec &grid = density.grid;
  const std::size_t m = grid.m;
  const double inv_dx = 1.0 / grid.dx();
  const double limit = static_cast<double>(m - 1);
  const double px = std::clamp((zx - grid.x_lo) * inv_dx, 0.0, limit);
  const double py = std::clamp((zy - grid.x_lo) * inv_dx, 0.0, limit);
  const std::size_t ix = std::min(static_cast<std::size_t>(px), m - 2);
  const std::size_t iy = std::min(static_cast<std::size_t>(py), m - 2);
  const double fx = px - static_cast<double>(ix);
  const double fy = py - static_cast<double>(iy);
  const double *v = density.value.data();
  const double v00 = v[ix * m + iy];
  const double v01 = v[ix * m + iy + 1];
  const double v10 = v[(ix + 1) * m + iy];
  const double v11 = v[(ix + 1) * m + iy + 1];
  return (1.0 - fx) * ((1.0 - fy) * v00 + fy * v01) +
         fx * ((1.0 - fy) * v10 + fy * v11);
}

// log of the normal density; never underflows, unlike the density itself.
inline double log_normal_pdf(double z) {
  return -0.5 * z * z - 0.918938533204672742;  // log sqrt(2 pi)
}

}  // namespace

double copula_density_at(const DensityGrid &density, double u, double v) {
  if (!(u > 0.0 && u < 1.0) || !(v > 0.0 && v < 1.0)) {
    throw DomainError("copula query outside the open unit square");
  }
  const double zx = math::normal_quantile(u);
  const double zy = math::normal_quantile(v);
  const double f = std::max(bilinear(density, zx, zy), density.floor);
  return std::exp(std::log(f) - log_normal_pdf(zx) - log_normal_pdf(zy));
}

MiEstimate estimate_mi_probit(const ProbitSample &probit, const GridSpec &grid,
                              const MiConfig &config) {
  SceConfig sce;
  sce.grid_size = grid.m;
  sce.pad = config.pad;
  sce.ecf = config.ecf;
  sce.floor_rel = config.floor_rel;
  const DensityGrid density = estimate_density(probit, grid, sce);

  const double plateau = density.floor * (1.0 + 1e-9);
  const double log_floor = std::log(kCopulaFloor);
  math::KahanSum sum;
  std::size_t floor_hits = 0;
  for (std::size_t i = 0; i < probit.n(); ++i) {
    const double f = bilinear(density, probit.zx[i], probit.zy[i]);
    double log_c = std::log(std::max(f, density.floor)) -
                   log_normal_pdf(probit.zx[i]) - log_normal_pdf(probit.zy[i]);
    if (f <= plateau || log_c < log_floor) {
      ++floor_hits;
      log_c = std::max(log_c, log_floor);
    }
    sum.add(log_c);
  }

  MiEstimate estimate;
  estimate.value = sum.value() / static_cast<double>(probit.n());
  estimate.n = probit.n();
  estimate.grid_spec = grid;
  estimate.floor_hits = floor_hits;
  if (!std::isfinite(estimate.value)) {
    throw NonFinite("mutual-information average is not finite");
  }
  return estimate;
}

MiEstimate estimate_mi(const BivariateSample &sample, const MiConfig &config) {
  const PseudoObservations pseudo = empirical_cdf_transform(sample, config.ties);
  const ProbitSample probit = probit_transform(pseudo);
  const GridSpec grid = build_grid(probit, config.grid_size, config.pad);
  return estimate_mi_probit(probit, grid, config);
}

}  // namespace fastmi
