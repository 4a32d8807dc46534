#pragma once

#include <cstddef>
#include <functional>

namespace fastmi::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
};

struct Options {
  double abs_tol = 1e-8;
  std::size_t max_intervals = 2000;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b]: repeatedly bisects the interval
// with the largest error estimate.  Returns once the summed error estimate
// drops below abs_tol or the interval budget is exhausted (the caller decides
// whether the achieved error is acceptable).
Result integrate(const std::function<double(double)> &f, double a, double b,
                 const Options &options = {});

}  // namespace fastmi::quadrature
