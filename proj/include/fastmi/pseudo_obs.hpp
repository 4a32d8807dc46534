#ifndef FASTMI_PSEUDO_OBS_HPP
#define FASTMI_PSEUDO_OBS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

// Rank-based pseudo-observations and their probit images.  Everything
// downstream of this module sees only ranks, which is what makes the
// estimator invariant under strictly increasing marginal transforms.

namespace fastmi {

// Smallest sample accepted for estimation.  Below this the ECF filter
// threshold 4(n-1)/n^2 approaches 1 and the frequency filter degenerates.
inline constexpr std::size_t kMinSampleSize = 8;

// Raw paired observations, stored column-wise.
struct BivariateSample {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t n() const { return x.size(); }
};

// Rank-rescaled points in the open unit square: u_i = rank(x_i)/(n+1).
// The n+1 divisor keeps every coordinate strictly inside (0,1) so the
// probit transform stays finite.
struct PseudoObservations {
  std::vector<double> u;
  std::vector<double> v;
  std::size_t n() const { return u.size(); }
};

// Standard-normal-quantile images of the pseudo-observations.
struct ProbitSample {
  std::vector<double> zx;
  std::vector<double> zy;
  std::size_t n() const { return zx.size(); }
};

// Tie handling for the rank transform.  Midranks are the deterministic
// default; jitter breaks ties by a seeded random ordering within each run
// of equal values.
struct TiePolicy {
  enum class Mode { midrank, jitter };
  Mode mode = Mode::midrank;
  std::uint64_t seed = 0;
};

// throws: InsufficientData when n < kMinSampleSize, InvalidInput on
// non-finite coordinates.
PseudoObservations empirical_cdf_transform(const BivariateSample &sample,
                                           const TiePolicy &ties = {});

// throws: DomainError when a coordinate is not strictly inside (0,1).
ProbitSample probit_transform(const PseudoObservations &pseudo);

}  // namespace fastmi

#endif  // FASTMI_PSEUDO_OBS_HPP
