#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rc/app/config.hpp"

namespace rc::app {

struct BenchRecord {
  Index size = 0;  // 0 marks the persistence baseline row
  std::uint64_t seed = 0;
  double train_time_s = 0.0;
  double predict_time_s = 0.0;
  double total_time_s = 0.0;  // train_time_s + predict_time_s
  double mse = 0.0;
  double nrmse = 0.0;
  bool failed = false;
  std::string error;
  std::string config_digest;
  int solver_factorizations = 0;
};

struct BenchReport {
  std::vector<BenchRecord> records;  // ordered by size, then seed
  BenchRecord baseline;              // persistence predictor v(t+1) = u(t)
};

// Reservoir sizes swept when none are given.
inline const std::vector<Index> kDefaultBenchSizes{100, 300, 500, 1000};

struct ErrorMetrics {
  double mse = 0.0;
  double nrmse = 0.0;
};

// NRMSE = RMSE / population standard deviation of `targets` (all entries).
ErrorMetrics error_metrics(const Matrix& predictions, const Matrix& targets);

/// Next-step benchmark: for every (size, seed) build the configured model,
/// train on train_len steps and predict predict_len steps in predictive
/// mode. Only the train call (state collection plus readout solve) and the
/// predict call are timed, with a monotonic clock. A run that throws is
/// recorded as failed and the sweep continues.
BenchReport run_bench(const RunConfig& config, const std::vector<Index>& sizes,
                      const std::vector<std::uint64_t>& seeds);

// Columns: size,seed,train_time_s,predict_time_s,total_time_s,mse,nrmse.
// The baseline row comes first with size 0 and zero times.
void write_bench_csv(std::ostream& os, const BenchReport& report);
void write_bench_summary(std::ostream& os, const BenchReport& report, const RunConfig& config);

}  // namespace rc::app
