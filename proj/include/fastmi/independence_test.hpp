#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fastmi/copula_mi.hpp"
#include "fastmi/pseudo_obs.hpp"

namespace fastmi {

struct TestResult {
  double statistic = 0.0;     // observed mutual information
  std::size_t r = 0;          // permutation count
  double p_value = 1.0;       // add-one convention, in [1/(r+1), 1]
  double alpha = 0.05;
  bool reject = false;        // statistic > (1-alpha) quantile of the null
  std::vector<double> null_draws;  // permuted statistics, generation order
};

// Permutation test of independence with the mutual-information estimate as
// the statistic.  The y margin is re-paired by r seeded uniform random
// permutations; margins (and hence the evaluation grid) are fixed, so ranks
// are computed once.  Each permutation uses its own derived random stream,
// making the result identical for any execution order or thread count.
// Requires r >= 99 and alpha in (0,1), else ConfigError.
TestResult permutation_test(const BivariateSample &sample, std::size_t r,
                            double alpha, std::uint64_t seed,
                            const MiConfig &config = {},
                            std::size_t threads = 1);

}  // namespace fastmi
