#include "fastmi/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fastmi/csv.hpp"
#include "fastmi/errors.hpp"
#include "fastmi/independence_test.hpp"
#include "fastmi/kernels.hpp"
#include "fastmi/parallel.hpp"
#include "fastmi/rng.hpp"

namespace fastmi::bench {

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char *kLibraryVersion = "0.1.0";
constexpr const char *kEstimatorName = "fastmi";

struct Cell {
  CopulaSpec spec;
  std::size_t n = 0;
};

double elapsed_ms_since(std::chrono::steady_clock::time_point t0) {
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void require_grid(const StudyGrid &grid) {
  if (grid.families.empty()) throw ConfigError("study needs at least one copula family");
  if (grid.taus.empty()) throw ConfigError("study needs at least one tau value");
  if (grid.ns.empty()) throw ConfigError("study needs at least one sample size");
  if (grid.reps == 0) throw ConfigError("study needs at least one replication");
}

std::vector<Cell> expand_cells(const StudyGrid &grid) {
  std::vector<Cell> cells;
  cells.reserve(grid.families.size() * grid.taus.size() * grid.ns.size());
  for (CopulaFamily family : grid.families)
    for (double tau : grid.taus)
      for (std::size_t n : grid.ns) cells.push_back({{family, tau}, n});
  return cells;
}

// Ground truth per (family, tau); quadrature runs once per distinct pair.
std::map<std::pair<int, double>, double> truth_table(const std::vector<Cell> &cells) {
  std::map<std::pair<int, double>, double> truth;
  for (const Cell &cell : cells) {
    const auto key = std::make_pair(static_cast<int>(cell.spec.family), cell.spec.tau);
    if (!truth.count(key)) truth[key] = true_mi(cell.spec);
  }
  return truth;
}

double mean_of(const std::vector<double> &v) {
  math::KahanSum sum;
  for (double x : v) sum.add(x);
  return v.empty() ? 0.0 : sum.value() / static_cast<double>(v.size());
}

double sd_of(const std::vector<double> &v, double mean) {
  if (v.size() < 2) return 0.0;
  math::KahanSum sum;
  for (double x : v) sum.add((x - mean) * (x - mean));
  return std::sqrt(sum.value() / static_cast<double>(v.size() - 1));
}

// Collapses replicate records into one aggregate row per cell.  Assumes
// records are stored cell-major with a fixed replicate count.
std::vector<Aggregate> aggregate_cells(const std::vector<CellRecord> &records,
                                       std::size_t reps, bool has_power) {
  std::vector<Aggregate> out;
  for (std::size_t base = 0; base < records.size(); base += reps) {
    const CellRecord &first = records[base];
    std::vector<double> estimates, times;
    estimates.reserve(reps);
    times.reserve(reps);
    math::KahanSum sq_err;
    std::size_t rejections = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const CellRecord &rec = records[base + r];
      estimates.push_back(rec.estimate);
      times.push_back(rec.elapsed_ms);
      const double err = rec.estimate - rec.true_value;
      sq_err.add(err * err);
      if (rec.reject) ++rejections;
    }
    Aggregate agg;
    agg.family = first.family;
    agg.tau = first.tau;
    agg.n = first.n;
    agg.reps = reps;
    agg.true_value = first.true_value;
    agg.mean_estimate = mean_of(estimates);
    agg.sd_estimate = sd_of(estimates, agg.mean_estimate);
    agg.mse = sq_err.value() / static_cast<double>(reps);
    agg.has_power = has_power;
    agg.power = has_power ? static_cast<double>(rejections) / static_cast<double>(reps) : 0.0;
    agg.mean_ms = mean_of(times);
    agg.sd_ms = sd_of(times, agg.mean_ms);
    out.push_back(agg);
  }
  return out;
}

}  // namespace

StudyReport simulate_mse(const StudyGrid &grid, std::uint64_t seed,
                         const MiConfig &mi, std::size_t threads) {
  require_grid(grid);
  const std::vector<Cell> cells = expand_cells(grid);
  const auto truth = truth_table(cells);

  StudyReport report;
  report.command = "simulate-mse";
  report.seed = seed;
  report.mi = mi;
  report.machine = kernels::backend_description();
  report.records.resize(cells.size() * grid.reps);

  parallel_for(report.records.size(), threads, [&](std::size_t gi) {
    const Cell &cell = cells[gi / grid.reps];
    const std::size_t rep = gi % grid.reps;
    const std::uint64_t rep_seed = rng::derive_seed(seed, gi);
    const BivariateSample sample = sample_copula(cell.spec, cell.n, rep_seed);
    const auto t0 = std::chrono::steady_clock::now();
    const MiEstimate est = estimate_mi(sample, mi);
    CellRecord &rec = report.records[gi];
    rec.elapsed_ms = elapsed_ms_since(t0);
    rec.family = family_name(cell.spec.family);
    rec.tau = cell.spec.tau;
    rec.n = cell.n;
    rec.rep = rep;
    rec.estimate = est.value;
    rec.true_value = truth.at({static_cast<int>(cell.spec.family), cell.spec.tau});
  });

  report.aggregates = aggregate_cells(report.records, grid.reps, false);
  return report;
}

StudyReport simulate_power(const StudyGrid &grid, std::size_t permutations,
                           double alpha, std::uint64_t seed, const MiConfig &mi,
                           std::size_t threads) {
  require_grid(grid);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const std::vector<Cell> cells = expand_cells(grid);
  const auto truth = truth_table(cells);

  StudyReport report;
  report.command = "simulate-power";
  report.seed = seed;
  report.mi = mi;
  report.permutations = permutations;
  report.alpha = alpha;
  report.machine = kernels::backend_description();
  report.records.resize(cells.size() * grid.reps);

  parallel_for(report.records.size(), threads, [&](std::size_t gi) {
    const Cell &cell = cells[gi / grid.reps];
    const std::size_t rep = gi % grid.reps;
    // One derived seed per replicate: sampling consumes stream 0, the
    // permutation test consumes streams 1..R of the same seed.
    const std::uint64_t rep_seed = rng::derive_seed(seed, gi);
    const BivariateSample sample = sample_copula(cell.spec, cell.n, rep_seed);
    const auto t0 = std::chrono::steady_clock::now();
    const TestResult test = permutation_test(sample, permutations, alpha, rep_seed, mi, 1);
    CellRecord &rec = report.records[gi];
    rec.elapsed_ms = elapsed_ms_since(t0);
    rec.family = family_name(cell.spec.family);
    rec.tau = cell.spec.tau;
    rec.n = cell.n;
    rec.rep = rep;
    rec.estimate = test.statistic;
    rec.true_value = truth.at({static_cast<int>(cell.spec.family), cell.spec.tau});
    rec.has_test = true;
    rec.reject = test.reject;
    rec.p_value = test.p_value;
  });

  report.aggregates = aggregate_cells(report.records, grid.reps, true);
  return report;
}

StudyReport bench_time(const std::vector<std::size_t> &ns, std::size_t reps,
                       std::uint64_t seed, const MiConfig &mi) {
  if (ns.empty()) throw ConfigError("timing study needs at least one sample size");
  if (reps < 5) throw ConfigError("timing study needs at least 5 repetitions per sample size");

  const CopulaSpec spec{CopulaFamily::gaussian, 0.5};
  const double truth = true_mi(spec);

  StudyReport report;
  report.command = "bench-time";
  report.seed = seed;
  report.mi = mi;
  report.machine = kernels::backend_description();
  report.records.reserve(ns.size() * reps);

  for (std::size_t g = 0; g < ns.size(); ++g) {
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const std::uint64_t rep_seed = rng::derive_seed(seed, g * reps + rep);
      const BivariateSample sample = sample_copula(spec, ns[g], rep_seed);
      const auto t0 = std::chrono::steady_clock::now();
      const MiEstimate est = estimate_mi(sample, mi);
      const double ms = elapsed_ms_since(t0);
      CellRecord rec;
      rec.family = family_name(spec.family);
      rec.tau = spec.tau;
      rec.n = ns[g];
      rec.rep = rep;
      rec.estimate = est.value;
      rec.true_value = truth;
      rec.elapsed_ms = ms;
      report.records.push_back(rec);
    }
  }

  report.aggregates = aggregate_cells(report.records, reps, false);
  return report;
}

namespace {

const char *ecf_mode_name(EcfMode mode) {
  return mode == EcfMode::direct ? "direct" : "binned";
}

void push_common(std::vector<std::string> &row, const StudyReport &report,
                 const std::string &family, double tau, std::size_t n) {
  row.push_back(report.command);
  row.push_back(std::to_string(report.seed));
  row.push_back(family);
  row.push_back(csv::format_double(tau));
  row.push_back(std::to_string(n));
}

}  // namespace

std::string to_csv(const StudyReport &report) {
  std::string out =
      "kind,estimator,command,seed,family,tau,n,rep,reps,estimate,true_value,"
      "p_value,reject,elapsed_ms,mse,power,mean_estimate,sd_estimate,mean_ms,sd_ms\n";
  auto emit = [&out](const std::vector<std::string> &row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += csv::quote_if_needed(row[i]);
    }
    out.push_back('\n');
  };
  for (const CellRecord &rec : report.records) {
    std::vector<std::string> row{"record", kEstimatorName};
    push_common(row, report, rec.family, rec.tau, rec.n);
    row.push_back(std::to_string(rec.rep));
    row.push_back("");
    row.push_back(csv::format_double(rec.estimate));
    row.push_back(csv::format_double(rec.true_value));
    row.push_back(rec.has_test ? csv::format_double(rec.p_value) : "");
    row.push_back(rec.has_test ? (rec.reject ? "1" : "0") : "");
    row.push_back(csv::format_double(rec.elapsed_ms));
    row.insert(row.end(), 6, "");
    emit(row);
  }
  for (const Aggregate &agg : report.aggregates) {
    std::vector<std::string> row{"aggregate", kEstimatorName};
    push_common(row, report, agg.family, agg.tau, agg.n);
    row.push_back("");
    row.push_back(std::to_string(agg.reps));
    row.push_back("");
    row.push_back(csv::format_double(agg.true_value));
    row.push_back("");
    row.push_back("");
    row.push_back("");
    row.push_back(csv::format_double(agg.mse));
    row.push_back(agg.has_power ? csv::format_double(agg.power) : "");
    row.push_back(csv::format_double(agg.mean_estimate));
    row.push_back(csv::format_double(agg.sd_estimate));
    row.push_back(csv::format_double(agg.mean_ms));
    row.push_back(csv::format_double(agg.sd_ms));
    emit(row);
  }
  return out;
}

std::string to_json(const StudyReport &report) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = report.command;
  doc["estimator"] = kEstimatorName;
  doc["version"] = kLibraryVersion;
  doc["machine"] = report.machine;
  doc["seed"] = report.seed;
  nlohmann::ordered_json config;
  config["grid_size"] = report.mi.grid_size;
  config["pad"] = report.mi.pad;
  config["ecf"] = ecf_mode_name(report.mi.ecf);
  config["floor"] = report.mi.floor_rel;
  if (report.permutations > 0) {
    config["permutations"] = report.permutations;
    config["alpha"] = report.alpha;
  }
  doc["config"] = config;

  doc["records"] = nlohmann::ordered_json::array();
  for (const CellRecord &rec : report.records) {
    nlohmann::ordered_json row;
    row["family"] = rec.family;
    row["tau"] = rec.tau;
    row["n"] = rec.n;
    row["rep"] = rec.rep;
    row["estimate"] = rec.estimate;
    row["true_value"] = rec.true_value;
    if (rec.has_test) {
      row["p_value"] = rec.p_value;
      row["reject"] = rec.reject;
    }
    row["elapsed_ms"] = rec.elapsed_ms;
    doc["records"].push_back(std::move(row));
  }

  doc["aggregates"] = nlohmann::ordered_json::array();
  for (const Aggregate &agg : report.aggregates) {
    nlohmann::ordered_json row;
    row["family"] = agg.family;
    row["tau"] = agg.tau;
    row["n"] = agg.n;
    row["reps"] = agg.reps;
    row["true_value"] = agg.true_value;
    row["mean_estimate"] = agg.mean_estimate;
    row["sd_estimate"] = agg.sd_estimate;
    row["mse"] = agg.mse;
    if (agg.has_power) row["power"] = agg.power;
    row["mean_ms"] = agg.mean_ms;
    row["sd_ms"] = agg.sd_ms;
    doc["aggregates"].push_back(std::move(row));
  }

  // Headline scaling figure for timing runs: cost growth from n=1000 to
  // n=5000, when both sizes were measured.
  if (report.command == "bench-time") {
    const Aggregate *lo = nullptr, *hi = nullptr;
    for (const Aggregate &agg : report.aggregates) {
      if (agg.n == 1000) lo = &agg;
      if (agg.n == 5000) hi = &agg;
    }
    if (lo && hi && lo->mean_ms > 0.0) {
      nlohmann::ordered_json scaling;
      scaling["n_lo"] = lo->n;
      scaling["n_hi"] = hi->n;
      scaling["ratio"] = hi->mean_ms / lo->mean_ms;
      doc["scaling"] = scaling;
    }
  }
  return doc.dump(2) + "\n";
}

double pearson_correlation(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size()) throw InvalidInput("correlation inputs differ in length");
  if (x.size() < 2) throw InsufficientData("correlation needs at least 2 points");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  math::KahanSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy.add((x[i] - mx) * (y[i] - my));
    sxx.add((x[i] - mx) * (x[i] - mx));
    syy.add((y[i] - my) * (y[i] - my));
  }
  const double denom = std::sqrt(sxx.value()) * std::sqrt(syy.value());
  if (denom == 0.0) throw NumericalError("zero variance in correlation input", 0.0);
  return sxy.value() / denom;
}

}  // namespace fastmi::bench
