#ifndef FASTMI_MATH_HPP
#define FASTMI_MATH_HPP

#include <cmath>
#include <cstddef>

namespace fastmi::math {

inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double inv_sqrt_2pi = 0.39894228040143267793994605993438;

// Standard normal density.
inline double normal_pdf(double x) {
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// Standard normal CDF via the complementary error function; accurate in
// both tails.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440084436210485);
}

// Standard normal quantile (Wichura's AS 241 rational approximations,
// relative error below 1e-15 over (0,1)).
double normal_quantile(double p);

// Neumaier-compensated accumulator.  Order-deterministic and immune to
// cancellation of large intermediate partial sums.
class KahanSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Compensated sum of a contiguous range.
double compensated_sum(const double *data, std::size_t count);

}  // namespace fastmi::math

#endif  // FASTMI_MATH_HPP
