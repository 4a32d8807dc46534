#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fastmi/copula_models.hpp"
#include "fastmi/errors.hpp"
#include "fastmi/math.hpp"
#include "fastmi/rng.hpp"
#include "test_stats.hpp"

using namespace fastmi;

TEST_CASE("family names round-trip") {
  const CopulaFamily all[] = {CopulaFamily::independence, CopulaFamily::gaussian,
                              CopulaFamily::clayton, CopulaFamily::gumbel};
  for (auto f : all) {
    CHECK(family_from_name(family_name(f)) == f);
  }
  CHECK(family_from_name("gaussian") == CopulaFamily::gaussian);
  CHECK_THROWS_AS(family_from_name("cauchy"), ConfigError);
  CHECK_THROWS_AS(family_from_name(""), ConfigError);
}

TEST_CASE("tau maps to the family parameter") {
  CHECK(tau_to_param(CopulaFamily::gaussian, 0.5) ==
        doctest::Approx(std::sin(std::numbers::pi / 4.0)).epsilon(1e-15));
  CHECK(tau_to_param(CopulaFamily::gaussian, 0.0) == 0.0);
  CHECK(tau_to_param(CopulaFamily::clayton, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(tau_to_param(CopulaFamily::clayton, 0.2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tau_to_param(CopulaFamily::gumbel, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(tau_to_param(CopulaFamily::gumbel, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tau_to_param(CopulaFamily::independence, 0.0) == 0.0);

  CHECK_THROWS_AS(tau_to_param(CopulaFamily::gaussian, 0.96), DomainError);
  CHECK_THROWS_AS(tau_to_param(CopulaFamily::clayton, -0.1), DomainError);
  CHECK_THROWS_AS(tau_to_param(CopulaFamily::independence, 0.3), DomainError);
}

TEST_CASE("samples realize the requested rank correlation") {
  // Kendall's tau computed by an inversion-counting oracle.
  const std::size_t n = 100000;
  struct Case {
    CopulaFamily family;
    double tau;
  };
  const Case cases[] = {
      {CopulaFamily::gaussian, 0.1}, {CopulaFamily::gaussian, 0.5},
      {CopulaFamily::gaussian, 0.8}, {CopulaFamily::clayton, 0.1},
      {CopulaFamily::clayton, 0.5},  {CopulaFamily::clayton, 0.8},
      {CopulaFamily::gumbel, 0.1},   {CopulaFamily::gumbel, 0.5},
      {CopulaFamily::gumbel, 0.8},
  };
  std::uint64_t seed = 100;
  for (const auto &c : cases) {
    CAPTURE(family_name(c.family));
    CAPTURE(c.tau);
    const auto s = sample_copula(CopulaSpec{c.family, c.tau}, n, seed++);
    CHECK(teststats::kendall_tau(s.x, s.y) == doctest::Approx(c.tau).epsilon(0.01));
  }
  const auto ind = sample_copula(CopulaSpec{}, 10000, 200);
  CHECK(std::abs(teststats::kendall_tau(ind.x, ind.y)) < 0.02);
}

TEST_CASE("sampled margins are standard normal") {
  const auto s = sample_copula(CopulaSpec{CopulaFamily::gumbel, 0.3}, 20000, 17);
  auto x = s.x;
  auto y = s.y;
  const double crit = teststats::ks_critical_value(x.size(), 0.01);
  CHECK(teststats::ks_statistic(x, [](double t) { return math::normal_cdf(t); }) < crit);
  CHECK(teststats::ks_statistic(y, [](double t) { return math::normal_cdf(t); }) < crit);

  const auto c = sample_copula(CopulaSpec{CopulaFamily::clayton, 0.6}, 20000, 18);
  auto cx = c.x;
  CHECK(teststats::ks_statistic(cx, [](double t) { return math::normal_cdf(t); }) < crit);
}

TEST_CASE("sampling is bit-reproducible and validates input") {
  const CopulaSpec spec{CopulaFamily::clayton, 0.4};
  const auto a = sample_copula(spec, 64, 9);
  const auto b = sample_copula(spec, 64, 9);
  CHECK(std::equal(a.x.begin(), a.x.end(), b.x.begin()));
  CHECK(std::equal(a.y.begin(), a.y.end(), b.y.begin()));
  const auto c = sample_copula(spec, 64, 10);
  CHECK(!std::equal(a.x.begin(), a.x.end(), c.x.begin()));
  CHECK_THROWS_AS(sample_copula(spec, 0, 9), InvalidInput);
}

TEST_CASE("frailty variates match their Laplace transforms") {
  // E[exp(-t W)] identifies the distribution: (1+t)^-shape for Gamma(shape,1),
  // exp(-t^alpha) for the positive stable law.
  rng::Xoshiro256pp gen(31, 0);
  const std::size_t n = 200000;
  SUBCASE("gamma") {
    for (double shape : {0.5, 2.0}) {
      CAPTURE(shape);
      for (double t : {0.5, 2.0}) {
        CAPTURE(t);
        double acc = 0.0;
        rng::Xoshiro256pp g2(31, 1);
        for (std::size_t i = 0; i < n; ++i) acc += std::exp(-t * gamma_draw(g2, shape));
        CHECK(acc / static_cast<double>(n) ==
              doctest::Approx(std::pow(1.0 + t, -shape)).epsilon(0.01));
      }
    }
    CHECK_THROWS_AS(gamma_draw(gen, 0.0), DomainError);
    CHECK_THROWS_AS(gamma_draw(gen, -1.0), DomainError);
  }
  SUBCASE("positive stable") {
    for (double alpha : {0.5, 0.8}) {
      CAPTURE(alpha);
      for (double t : {0.5, 1.0}) {
        CAPTURE(t);
        double acc = 0.0;
        rng::Xoshiro256pp g2(37, 2);
        for (std::size_t i = 0; i < n; ++i)
          acc += std::exp(-t * positive_stable_draw(g2, alpha));
        CHECK(acc / static_cast<double>(n) ==
              doctest::Approx(std::exp(-std::pow(t, alpha))).epsilon(0.01));
      }
    }
    CHECK_THROWS_AS(positive_stable_draw(gen, 0.0), DomainError);
    CHECK_THROWS_AS(positive_stable_draw(gen, 1.0), DomainError);
  }
}

TEST_CASE("log copula density closed forms") {
  SUBCASE("gaussian at the median") {
    // log c(1/2,1/2) = -log sqrt(1-rho^2).
    const CopulaSpec spec{CopulaFamily::gaussian, 0.5};
    const double rho = tau_to_param(CopulaFamily::gaussian, 0.5);
    CHECK(log_copula_density(spec, 0.5, 0.5) ==
          doctest::Approx(-0.5 * std::log(1.0 - rho * rho)).epsilon(1e-12));
  }
  SUBCASE("independence and the gumbel theta=1 boundary") {
    const CopulaSpec ind{CopulaFamily::independence, 0.0};
    CHECK(log_copula_density(ind, 0.3, 0.8) == 0.0);
    const CopulaSpec g1{CopulaFamily::gumbel, 0.0};  // theta = 1
    CHECK(log_copula_density(g1, 0.3, 0.8) == doctest::Approx(0.0).epsilon(1e-12));
    const CopulaSpec c0{CopulaFamily::clayton, 0.0};  // theta = 0
    CHECK(log_copula_density(c0, 0.3, 0.8) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("clayton matches the direct formula at interior points") {
    const CopulaSpec spec{CopulaFamily::clayton, 0.5};  // theta = 2
    const double theta = 2.0;
    for (double u : {0.2, 0.6}) {
      for (double v : {0.3, 0.9}) {
        const double direct =
            std::log(1.0 + theta) - (1.0 + theta) * std::log(u * v) -
            (2.0 + 1.0 / theta) *
                std::log(std::pow(u, -theta) + std::pow(v, -theta) - 1.0);
        CHECK(log_copula_density(spec, u, v) == doctest::Approx(direct).epsilon(1e-10));
      }
    }
  }
  SUBCASE("gumbel matches the direct formula at interior points") {
    const CopulaSpec spec{CopulaFamily::gumbel, 0.5};  // theta = 2
    const double th = 2.0;
    for (double u : {0.2, 0.6}) {
      for (double v : {0.3, 0.9}) {
        const double a = std::pow(-std::log(u), th), b = std::pow(-std::log(v), th);
        const double t = std::pow(a + b, 1.0 / th);
        const double copula = std::exp(-t);
        const double density =
            copula * (std::pow(-std::log(u), th - 1.0) / u) *
            (std::pow(-std::log(v), th - 1.0) / v) * std::pow(a + b, 2.0 / th - 2.0) *
            (t + th - 1.0) / std::pow(a + b, 1.0 / th);
        CHECK(log_copula_density(spec, u, v) ==
              doctest::Approx(std::log(density)).epsilon(1e-10));
      }
    }
  }
  SUBCASE("exchangeability") {
    for (auto family : {CopulaFamily::gaussian, CopulaFamily::clayton,
                        CopulaFamily::gumbel}) {
      const CopulaSpec spec{family, 0.4};
      CHECK(log_copula_density(spec, 0.15, 0.85) ==
            doctest::Approx(log_copula_density(spec, 0.85, 0.15)).epsilon(1e-12));
    }
  }
  SUBCASE("domain checks") {
    const CopulaSpec spec{CopulaFamily::clayton, 0.5};
    CHECK_THROWS_AS(log_copula_density(spec, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(log_copula_density(spec, 0.5, 1.0), DomainError);
  }
}

TEST_CASE("ground-truth mutual information") {
  SUBCASE("gaussian closed form") {
    CHECK(true_mi(CopulaSpec{CopulaFamily::gaussian, 0.0}) == 0.0);
    CHECK(true_mi(CopulaSpec{CopulaFamily::independence, 0.0}) == 0.0);
    const double rho = tau_to_param(CopulaFamily::gaussian, 0.5);
    CHECK(true_mi(CopulaSpec{CopulaFamily::gaussian, 0.5}) ==
          doctest::Approx(-0.5 * std::log(1.0 - rho * rho)).epsilon(1e-12));
    CHECK(true_mi(CopulaSpec{CopulaFamily::gaussian, 0.5}) ==
          doctest::Approx(0.34657359).epsilon(1e-6));
  }
  SUBCASE("archimedean values agree with a Monte Carlo cross-check") {
    // MI = E[log c(U,V)] under the copula itself; the sampler and the
    // density are independent code paths from the quadrature.
    for (auto family : {CopulaFamily::clayton, CopulaFamily::gumbel}) {
      CAPTURE(family_name(family));
      const CopulaSpec spec{family, 0.5};
      const double quad = true_mi(spec);
      const std::size_t n = 1000000;
      const auto s = sample_copula(spec, n, 23);
      math::KahanSum acc;
      for (std::size_t i = 0; i < n; ++i) {
        acc.add(log_copula_density(spec, math::normal_cdf(s.x[i]),
                                   math::normal_cdf(s.y[i])));
      }
      const double mc = acc.value() / static_cast<double>(n);
      CHECK(quad == doctest::Approx(mc).epsilon(5e-3));
    }
  }
  SUBCASE("strictly increasing in dependence") {
    for (auto family : {CopulaFamily::gaussian, CopulaFamily::clayton,
                        CopulaFamily::gumbel}) {
      CAPTURE(family_name(family));
      double prev = 0.0;
      for (double tau : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double mi = true_mi(CopulaSpec{family, tau});
        CHECK(mi > prev);
        prev = mi;
      }
    }
  }
  SUBCASE("impossible tolerance budgets fail loudly") {
    QuadConfig quad;
    quad.abs_tol = 1e-13;
    quad.max_intervals = 12;
    try {
      true_mi(CopulaSpec{CopulaFamily::gumbel, 0.5}, quad);
      FAIL("expected NumericalError");
    } catch (const NumericalError &e) {
      CHECK(e.achieved_error > quad.abs_tol);
    }
    QuadConfig bad;
    bad.z_trunc = 0.0;
    CHECK_THROWS_AS(true_mi(CopulaSpec{CopulaFamily::clayton, 0.5}, bad), ConfigError);
  }
}
