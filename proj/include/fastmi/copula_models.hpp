#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "fastmi/pseudo_obs.hpp"

namespace fastmi {

enum class CopulaFamily { independence, gaussian, clayton, gumbel };

const char *family_name(CopulaFamily family);
CopulaFamily family_from_name(const std::string &name);  // ConfigError if unknown

// Benchmark copula parameterized by Kendall's tau in [0, 0.95].
struct CopulaSpec {
  CopulaFamily family = CopulaFamily::independence;
  double tau = 0.0;
};

// gaussian: rho = sin(pi tau / 2); clayton: theta = 2 tau / (1 - tau);
// gumbel: theta = 1 / (1 - tau); independence: 0 (tau must be 0).
// Tau outside [0, 0.95] raises DomainError.
double tau_to_param(CopulaFamily family, double tau);

// n copula-distributed pairs with standard normal margins.  Gaussian pairs
// come from correlated normals; Clayton and Gumbel use the frailty
// construction U = psi(E/W) with a Gamma(1/theta) or positive stable(1/theta)
// frailty W.  Bit-reproducible for a given (spec, n, seed).
BivariateSample sample_copula(const CopulaSpec &spec, std::size_t n,
                              std::uint64_t seed);

// log c(u, v) for u, v strictly inside (0,1); the analytic counterpart of
// the estimated copula density, used by the quadrature and test oracles.
double log_copula_density(const CopulaSpec &spec, double u, double v);

struct QuadConfig {
  double abs_tol = 1e-4;
  std::size_t max_intervals = 5000;  // per 1-D pass
  double z_trunc = 8.0;              // probit-space truncation radius
};

// Ground-truth mutual information: analytic for gaussian, adaptive quadrature
// of c log c (in probit coordinates, which absorbs the corner singularities)
// for clayton/gumbel.  Raises NumericalError with the achieved error estimate
// if the tolerance cannot be met.
double true_mi(const CopulaSpec &spec, const QuadConfig &quad = {});

// Positive stable(alpha) variate with Laplace transform exp(-t^alpha),
// alpha in (0,1); the Gumbel frailty.  Exposed for its distribution test.
namespace rng { class Xoshiro256pp; }
double positive_stable_draw(rng::Xoshiro256pp &gen, double alpha);

// Gamma(shape, 1) variate; the Clayton frailty.  Exposed for its test.
double gamma_draw(rng::Xoshiro256pp &gen, double shape);

}  // namespace fastmi
