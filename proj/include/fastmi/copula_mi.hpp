#pragma once

#include <cstddef>

#include "fastmi/pseudo_obs.hpp"
#include "fastmi/sce_density.hpp"

namespace fastmi {

struct MiConfig {
  std::size_t grid_size = 256;
  double pad = 1.0;
  EcfMode ecf = EcfMode::binned;
  double floor_rel = 1e-3;  // see SceConfig::floor_rel
  TiePolicy ties = {};
};

struct MiEstimate {
  double value = 0.0;  // nats
  std::size_t n = 0;
  GridSpec grid_spec;
  std::size_t floor_hits = 0;  // evaluations that landed on the clip plateau
};

// chat(u,v) = fhat(q(u), q(v)) / (phi(q(u)) * phi(q(v))) with q the standard
// normal quantile, phi its density, and fhat read from the grid by bilinear
// interpolation (queries clamped into the node hull).  Strictly positive.
// u or v outside (0,1) raises DomainError.
double copula_density_at(const DensityGrid &density, double u, double v);

// Plug-in estimate: ranks, probit, density fit, mean log copula density at
// the pseudo-observations.  Depends on the data only through ranks.
MiEstimate estimate_mi(const BivariateSample &sample, const MiConfig &config = {});

// Same from an already probit-transformed sample on a caller-fixed grid; the
// permutation test re-pairs margins without rebuilding either.
MiEstimate estimate_mi_probit(const ProbitSample &probit, const GridSpec &grid,
                              const MiConfig &config);

}  // namespace fastmi
