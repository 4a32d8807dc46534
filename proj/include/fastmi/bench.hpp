#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fastmi/copula_mi.hpp"
#include "fastmi/copula_models.hpp"

namespace fastmi::bench {

// One replicate of a study cell.  elapsed_ms is the only field allowed to
// differ between reruns of the same (config, seed).
struct CellRecord {
  std::string family;
  double tau = 0.0;
  std::size_t n = 0;
  std::size_t rep = 0;
  double estimate = 0.0;
  double true_value = 0.0;
  bool has_test = false;
  bool reject = false;
  double p_value = 0.0;
  double elapsed_ms = 0.0;
};

struct Aggregate {
  std::string family;
  double tau = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  double true_value = 0.0;
  double mean_estimate = 0.0;
  double sd_estimate = 0.0;
  double mse = 0.0;
  bool has_power = false;
  double power = 0.0;
  double mean_ms = 0.0;
  double sd_ms = 0.0;
};

struct StudyReport {
  std::string command;
  std::uint64_t seed = 0;
  MiConfig mi;
  std::size_t permutations = 0;  // zero when the study runs no tests
  double alpha = 0.0;            // zero when unused
  std::string machine;           // populated by the timing study
  std::vector<CellRecord> records;
  std::vector<Aggregate> aggregates;
};

struct StudyGrid {
  std::vector<CopulaFamily> families;
  std::vector<double> taus;
  std::vector<std::size_t> ns;
  std::size_t reps = 200;
};

// Full factorial replication study of the estimator against the true-MI
// oracle.  Replicate slots and seeds are preassigned, so reports are
// identical for any thread count.
StudyReport simulate_mse(const StudyGrid &grid, std::uint64_t seed,
                         const MiConfig &mi, std::size_t threads);

// Same layout with an inner permutation test per replicate; aggregates
// report rejection fractions (power, or size on tau = 0 rows).
StudyReport simulate_power(const StudyGrid &grid, std::size_t permutations,
                           double alpha, std::uint64_t seed, const MiConfig &mi,
                           std::size_t threads);

// Wall-clock profile of the estimator alone (sampling and I/O excluded),
// single-threaded; requires reps >= 5.
StudyReport bench_time(const std::vector<std::size_t> &ns, std::size_t reps,
                       std::uint64_t seed, const MiConfig &mi);

std::string to_csv(const StudyReport &report);
std::string to_json(const StudyReport &report);  // schema_version tagged

double pearson_correlation(const std::vector<double> &x,
                           const std::vector<double> &y);

}  // namespace fastmi::bench
