#include "fastmi/pseudo_obs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fastmi/errors.hpp"
#include "fastmi/math.hpp"
#include "fastmi/rng.hpp"

namespace fastmi {

namespace {

// Ranks of one margin, scaled by 1/(n+1).  Equal values share their
// midrank unless the jitter policy assigns the run's ranks at random.
std::vector<double> scaled_ranks(const std::vector<double> &values,
                                 const TiePolicy &ties,
                                 std::uint64_t margin_tag) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> out(n);
  const double scale = 1.0 / (static_cast<double>(n) + 1.0);
  rng::Xoshiro256pp gen(ties.seed, margin_tag);
  std::size_t run_start = 0;
  while (run_start < n) {
    std::size_t run_end = run_start + 1;
    while (run_end < n && values[order[run_end]] == values[order[run_start]]) {
      ++run_end;
    }
    if (run_end - run_start == 1 || ties.mode == TiePolicy::Mode::midrank) {
      // 1-based midrank of positions [run_start, run_end).
      const double midrank =
          0.5 * (static_cast<double>(run_start) + static_cast<double>(run_end - 1)) + 1.0;
      for (std::size_t k = run_start; k < run_end; ++k) {
        out[order[k]] = midrank * scale;
      }
    } else {
      std::vector<std::size_t> slots(run_end - run_start);
      std::iota(slots.begin(), slots.end(), run_start + 1);
      for (std::size_t k = slots.size(); k > 1; --k) {
        const std::size_t j = static_cast<std::size_t>(gen.uniform() * static_cast<double>(k));
        std::swap(slots[k - 1], slots[std::min(j, k - 1)]);
      }
      for (std::size_t k = run_start; k < run_end; ++k) {
        out[order[k]] = static_cast<double>(slots[k - run_start]) * scale;
      }
    }
    run_start = run_end;
  }
  return out;
}

}  // namespace

PseudoObservations empirical_cdf_transform(const BivariateSample &sample,
                                           const TiePolicy &ties) {
  if (sample.x.size() != sample.y.size()) {
    throw InvalidInput("sample columns have mismatched lengths");
  }
  if (sample.n() < kMinSampleSize) {
    throw InsufficientData("sample size " + std::to_string(sample.n()) +
                           " is below the minimum of " +
                           std::to_string(kMinSampleSize));
  }
  for (std::size_t i = 0; i < sample.n(); ++i) {
    if (!std::isfinite(sample.x[i]) || !std::isfinite(sample.y[i])) {
      throw InvalidInput("non-finite coordinate at row " + std::to_string(i));
    }
  }
  PseudoObservations pseudo;
  pseudo.u = scaled_ranks(sample.x, ties, 0x78);
  pseudo.v = scaled_ranks(sample.y, ties, 0x79);
  return pseudo;
}

ProbitSample probit_transform(const PseudoObservations &pseudo) {
  ProbitSample probit;
  probit.zx.resize(pseudo.n());
  probit.zy.resize(pseudo.n());
  for (std::size_t i = 0; i < pseudo.n(); ++i) {
    const double u = pseudo.u[i];
    const double v = pseudo.v[i];
    if (!(u > 0.0 && u < 1.0) || !(v > 0.0 && v < 1.0)) {
      throw DomainError("pseudo-observation outside (0,1) at row " +
                        std::to_string(i));
    }
    probit.zx[i] = math::normal_quantile(u);
    probit.zy[i] = math::normal_quantile(v);
  }
  return probit;
}

}  // namespace fastmi
