#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fastmi/math.hpp"
#include "fastmi/quadrature.hpp"

using fastmi::quadrature::integrate;
using fastmi::quadrature::Options;
using fastmi::quadrature::Result;

TEST_CASE("polynomial and trigonometric integrals") {
  const Result sq = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(sq.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(sq.error <= 1e-8);
  CHECK(sq.evaluations >= 15);

  const Result sine = integrate([](double x) { return std::sin(x); }, 0.0,
                                std::numbers::pi);
  CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-13));

  const Result gauss = integrate(
      [](double x) { return fastmi::math::normal_pdf(x); }, -8.0, 8.0);
  CHECK(gauss.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrable endpoint singularity converges by subdivision") {
  Options opt;
  opt.abs_tol = 1e-10;
  opt.max_intervals = 5000;
  const Result r = integrate([](double x) { return 1.0 / std::sqrt(x); },
                             1e-300, 1.0, opt);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.evaluations > 15 * 10);  // forced many bisections
}

TEST_CASE("reversed orientation flips the sign") {
  const Result fwd = integrate([](double x) { return x; }, 0.0, 2.0);
  const Result rev = integrate([](double x) { return x; }, 2.0, 0.0);
  CHECK(fwd.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rev.value == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("exhausted interval budget reports the unmet error") {
  Options opt;
  opt.abs_tol = 1e-15;
  opt.max_intervals = 3;
  const Result r = integrate(
      [](double x) { return std::sin(50.0 * x) * std::sin(50.0 * x) / (x + 0.01); },
      0.0, 1.0, opt);
  CHECK(r.error > opt.abs_tol);  // caller sees the shortfall
  CHECK(r.evaluations <= 15 * (2 * 3 + 1));
}

TEST_CASE("evaluation counter matches the subdivision pattern") {
  // A single Gauss-Kronrod pass costs 15 points; each bisection adds 30.
  const Result one = integrate([](double x) { return x; }, 0.0, 1.0);
  CHECK(one.evaluations == 15);
  Options opt;
  opt.abs_tol = 1e-13;
  const Result tough =
      integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0, opt);
  CHECK(tough.evaluations > 15);
  CHECK((tough.evaluations - 15) % 30 == 0);
}
