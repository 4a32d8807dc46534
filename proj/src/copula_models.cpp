#include "fastmi/copula_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fastmi/errors.hpp"
#include "fastmi/math.hpp"
#include "fastmi/quadrature.hpp"
#include "fastmi/rng.hpp"

namespace fastmi {

namespace {

// Parameters this close to their independence limit are treated as exact
// independence; the frailty constructions degenerate there.
constexpr double kClaytonThetaEps = 1e-8;
constexpr double kGumbelThetaEps = 1e-12;

// Frailty-built (u,v) can round onto the boundary at extreme dependence;
// pull them back inside so the probit map stays finite.
inline double clamp_unit(double u) {
  constexpr double lo = 1e-16;
  constexpr double hi = 0.9999999999999999;  // largest double below 1
  return std::clamp(u, lo, hi);
}

double require_tau(CopulaFamily family, double tau) {
  if (!(tau >= 0.0 && tau <= 0.95)) {
    throw DomainError("kendall tau " + std::to_string(tau) +
                      " outside the supported range [0, 0.95]");
  }
  if (family == CopulaFamily::independence && tau != 0.0) {
    throw DomainError("independence admits only tau = 0");
  }
  return tau;
}

// Log density kernels parametrized by log u, log v.  Taking logs as inputs
// keeps full relative precision near the singular corners, where u or v
// itself rounds onto the unit-square boundary.
double log_clayton_from_logs(double theta, double lu, double lv) {
  if (theta < kClaytonThetaEps) {
    return 0.0;
  }
  const double a = -theta * lu;
  const double b = -theta * lv;
  const double peak = std::max(a, b);
  // log(u^-theta + v^-theta - 1), stable for tiny u or v.
  const double lsum =
      peak +
      std::log(std::exp(a - peak) + std::exp(b - peak) - std::exp(-peak));
  return std::log1p(theta) - (1.0 + theta) * (lu + lv) -
         (2.0 + 1.0 / theta) * lsum;
}

double log_gumbel_from_logs(double theta, double nlu, double nlv) {
  // nlu = -log u > 0, nlv = -log v > 0 on the open square.
  if (theta - 1.0 < kGumbelThetaEps) {
    return 0.0;
  }
  const double llu = std::log(nlu);
  const double llv = std::log(nlv);
  const double a = theta * llu;
  const double b = theta * llv;
  const double peak = std::max(a, b);
  const double ls = peak + std::log(std::exp(a - peak) + std::exp(b - peak));
  const double t = std::exp(ls / theta);  // ((-log u)^theta + (-log v)^theta)^(1/theta)
  return -t + (nlu + nlv) + (theta - 1.0) * (llu + llv) +
         (2.0 / theta - 2.0) * ls + std::log1p((theta - 1.0) / t);
}

// log Phi(z) without the cancellation that plagues 1 - Phi(z) for z > 0.
double log_normal_cdf(double z) {
  if (z <= 0.0) {
    return std::log(math::normal_cdf(z));
  }
  return std::log1p(-math::normal_cdf(-z));
}

}  // namespace

const char *family_name(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::independence: return "independence";
    case CopulaFamily::gaussian: return "gaussian";
    case CopulaFamily::clayton: return "clayton";
    case CopulaFamily::gumbel: return "gumbel";
  }
  return "unknown";
}

CopulaFamily family_from_name(const std::string &name) {
  if (name == "independence") return CopulaFamily::independence;
  if (name == "gaussian") return CopulaFamily::gaussian;
  if (name == "clayton") return CopulaFamily::clayton;
  if (name == "gumbel") return CopulaFamily::gumbel;
  throw ConfigError("unknown copula family '" + name + "'");
}

double tau_to_param(CopulaFamily family, double tau) {
  require_tau(family, tau);
  switch (family) {
    case CopulaFamily::independence:
      return 0.0;
    case CopulaFamily::gaussian:
      return std::sin(std::numbers::pi * tau / 2.0);
    case CopulaFamily::clayton:
      return 2.0 * tau / (1.0 - tau);
    case CopulaFamily::gumbel:
      return 1.0 / (1.0 - tau);
  }
  throw DomainError("unknown copula family");
}

double gamma_draw(rng::Xoshiro256pp &gen, double shape) {
  if (!(shape > 0.0)) {
    throw DomainError("gamma shape must be positive");
  }
  if (shape < 1.0) {
    // Boost a Gamma(shape+1) draw down by a uniform power.
    const double g = gamma_draw(gen, shape + 1.0);
    return g * std::exp(std::log(gen.uniform()) / shape);
  }
  // Marsaglia-Tsang squeeze method.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = gen.normal();
    const double t = 1.0 + c * z;
    if (t <= 0.0) {
      continue;
    }
    const double v = t * t * t;
    const double u = gen.uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) {
      return d * v;
    }
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

double positive_stable_draw(rng::Xoshiro256pp &gen, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("stable index must lie in (0,1)");
  }
  // Kanter's representation: S = (a(U)/E)^((1-alpha)/alpha) with
  // a(u) = sin(alpha u)^(alpha/(1-alpha)) sin((1-alpha)u) / sin(u)^(1/(1-alpha))
  // over U ~ Uniform(0,pi), E ~ Exp(1); Laplace transform exp(-t^alpha).
  const double u = std::numbers::pi * gen.uniform();
  const double e = gen.exponential();
  const double log_a = (alpha / (1.0 - alpha)) * std::log(std::sin(alpha * u)) +
                       std::log(std::sin((1.0 - alpha) * u)) -
                       (1.0 / (1.0 - alpha)) * std::log(std::sin(u));
  return std::exp((1.0 - alpha) / alpha * (log_a - std::log(e)));
}

BivariateSample sample_copula(const CopulaSpec &spec, std::size_t n,
                              std::uint64_t seed) {
  if (n == 0) {
    throw InvalidInput("cannot draw an empty sample");
  }
  const double param = tau_to_param(spec.family, spec.tau);
  rng::Xoshiro256pp gen(seed);
  BivariateSample sample;
  sample.x.resize(n);
  sample.y.resize(n);

  const bool degenerate =
      spec.family == CopulaFamily::independence ||
      (spec.family == CopulaFamily::gaussian && param == 0.0) ||
      (spec.family == CopulaFamily::clayton && param < kClaytonThetaEps) ||
      (spec.family == CopulaFamily::gumbel && param - 1.0 < kGumbelThetaEps);
  if (degenerate) {
    for (std::size_t i = 0; i < n; ++i) {
      sample.x[i] = gen.normal();
      sample.y[i] = gen.normal();
    }
    return sample;
  }

  switch (spec.family) {
    case CopulaFamily::gaussian: {
      const double rho = param;
      const double ortho = std::sqrt(1.0 - rho * rho);
      for (std::size_t i = 0; i < n; ++i) {
        const double z1 = gen.normal();
        const double z2 = gen.normal();
        sample.x[i] = z1;
        sample.y[i] = rho * z1 + ortho * z2;
      }
      break;
    }
    case CopulaFamily::clayton: {
      const double theta = param;
      const double shape = 1.0 / theta;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = gamma_draw(gen, shape);
        const double u = std::exp(-shape * std::log1p(gen.exponential() / w));
        const double v = std::exp(-shape * std::log1p(gen.exponential() / w));
        sample.x[i] = math::normal_quantile(clamp_unit(u));
        sample.y[i] = math::normal_quantile(clamp_unit(v));
      }
      break;
    }
    case CopulaFamily::gumbel: {
      const double theta = param;
      const double alpha = 1.0 / theta;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = positive_stable_draw(gen, alpha);
        const double u = std::exp(-std::pow(gen.exponential() / w, alpha));
        const double v = std::exp(-std::pow(gen.exponential() / w, alpha));
        sample.x[i] = math::normal_quantile(clamp_unit(u));
        sample.y[i] = math::normal_quantile(clamp_unit(v));
      }
      break;
    }
    case CopulaFamily::independence:
      break;  // handled above
  }
  return sample;
}

double log_copula_density(const CopulaSpec &spec, double u, double v) {
  if (!(u > 0.0 && u < 1.0) || !(v > 0.0 && v < 1.0)) {
    throw DomainError("copula density query outside the open unit square");
  }
  const double param = tau_to_param(spec.family, spec.tau);
  switch (spec.family) {
    case CopulaFamily::independence:
      return 0.0;
    case CopulaFamily::gaussian: {
      const double rho = param;
      if (rho == 0.0) {
        return 0.0;
      }
      const double z1 = math::normal_quantile(u);
      const double z2 = math::normal_quantile(v);
      const double s = 1.0 - rho * rho;
      return -0.5 * std::log(s) +
             rho * (2.0 * z1 * z2 - rho * (z1 * z1 + z2 * z2)) / (2.0 * s);
    }
    case CopulaFamily::clayton:
      return log_clayton_from_logs(param, std::log(u), std::log(v));
    case CopulaFamily::gumbel:
      return log_gumbel_from_logs(param, -std::log(u), -std::log(v));
  }
  throw DomainError("unknown copula family");
}

double true_mi(const CopulaSpec &spec, const QuadConfig &quad) {
  const double param = tau_to_param(spec.family, spec.tau);
  if (spec.family == CopulaFamily::independence || spec.tau == 0.0) {
    return 0.0;
  }
  if (spec.family == CopulaFamily::gaussian) {
    return -0.5 * std::log1p(-param * param);
  }
  if (!(quad.z_trunc > 0.0)) {
    throw ConfigError("quadrature truncation radius must be positive");
  }

  // Probit change of variables: integrate c log c against the probit-pair
  // density over [-z, z]^2.  The corner singularities of c on the unit
  // square become integrable ridges against the normal weights, and the
  // truncated tail mass is bounded by the standard normal tail.  The
  // integrand is parametrized by z, with log u = log Phi(z) computed from
  // the survival function for z > 0: evaluating c through u itself loses
  // relative precision once 1 - u approaches machine epsilon, which turns
  // the tail-dependence ridge into a staircase the quadrature cannot settle.
  const double z = quad.z_trunc;
  quadrature::Options inner_opt;
  inner_opt.abs_tol = quad.abs_tol / (160.0 * z);
  inner_opt.max_intervals = quad.max_intervals;
  quadrature::Options outer_opt;
  outer_opt.abs_tol = 0.5 * quad.abs_tol;
  outer_opt.max_intervals = quad.max_intervals;

  const bool clayton = spec.family == CopulaFamily::clayton;
  double worst_inner_error = 0.0;
  auto outer_f = [&](double z1) {
    const double lu = log_normal_cdf(z1);
    auto inner_f = [&](double z2) {
      const double lv = log_normal_cdf(z2);
      const double lc = clayton ? log_clayton_from_logs(param, lu, lv)
                                : log_gumbel_from_logs(param, -lu, -lv);
      return lc * std::exp(lc) * math::normal_pdf(z2);
    };
    const quadrature::Result inner = quadrature::integrate(inner_f, -z, z, inner_opt);
    worst_inner_error = std::max(worst_inner_error, inner.error);
    return math::normal_pdf(z1) * inner.value;
  };
  const quadrature::Result outer = quadrature::integrate(outer_f, -z, z, outer_opt);
  const double achieved = outer.error + 2.0 * z * worst_inner_error;
  if (!(achieved <= quad.abs_tol)) {
    throw NumericalError("mutual-information quadrature missed its tolerance",
                         achieved);
  }
  return outer.value;
}

}  // namespace fastmi
