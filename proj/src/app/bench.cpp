#include "rc/app/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "rc/predict.hpp"
#include "rc/train.hpp"

namespace rc::app {

ErrorMetrics error_metrics(const Matrix& predictions, const Matrix& targets) {
  if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols())
    throw DimensionError("error_metrics: shape mismatch");
  const double n = double(targets.size());
  ErrorMetrics m;
  m.mse = (predictions - targets).squaredNorm() / n;
  const double mean = targets.mean();
  const double var = (targets.array() - mean).square().sum() / n;
  m.nrmse = std::sqrt(m.mse) / std::sqrt(var);
  return m;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace

BenchReport run_bench(const RunConfig& config, const std::vector<Index>& sizes,
                      const std::vector<std::uint64_t>& seeds) {
  const Index train_len = config.train.train_len, predict_len = config.predict.predict_len;
  const SeriesData series = generate_series(config.data, train_len + predict_len + 1);
  NextStepSplit split = next_step_pairs(series, train_len, predict_len);

  std::optional<Standardization> standardization;
  if (config.data.standardize) {
    standardization = Standardization::fit(split.train_inputs);
    split.train_inputs = standardization->apply(split.train_inputs);
    split.train_targets = standardization->apply(split.train_targets);
    split.test_inputs = standardization->apply(split.test_inputs);
  }
  const Matrix& raw_test_targets = split.test_targets;

  BenchReport report;
  {
    const Matrix persistence = series.values.middleCols(train_len, predict_len);
    const ErrorMetrics e = error_metrics(persistence, raw_test_targets);
    report.baseline.mse = e.mse;
    report.baseline.nrmse = e.nrmse;
    report.baseline.config_digest = config.digest();
  }

  const Index washout = config.model.washout;
  for (Index size : sizes) {
    for (std::uint64_t seed : seeds) {
      RunConfig run_config = config;
      run_config.model.reservoir_size = size;
      run_config.model.seed = seed;
      BenchRecord rec;
      rec.size = size;
      rec.seed = seed;
      rec.config_digest = run_config.digest();
      try {
        run_config.validate();
        const EsnModel model = build_model(run_config.model, series.dim());

        const auto t0 = Clock::now();
        const StateMatrix states = collect_states(model, split.train_inputs, washout);
        const ReadoutLayer readout = train_readout(states, split.train_targets.rightCols(train_len - washout),
                                                   config.train.lambda, config.train.method);
        const auto t1 = Clock::now();
        const PredictionRun run = predict_predictive(model, readout, states.final_state, split.test_inputs);
        const auto t2 = Clock::now();

        rec.train_time_s = seconds(t0, t1);
        rec.predict_time_s = seconds(t1, t2);
        rec.solver_factorizations = readout.factorizations;
        const Matrix predictions = standardization ? standardization->invert(run.outputs) : run.outputs;
        const ErrorMetrics e = error_metrics(predictions, raw_test_targets);
        rec.mse = e.mse;
        rec.nrmse = e.nrmse;
        if (!std::isfinite(rec.mse)) throw NumericOverflowError("non-finite prediction error", 0);
      } catch (const Error& e) {
        rec.failed = true;
        rec.error = e.what();
        rec.mse = rec.nrmse = std::numeric_limits<double>::quiet_NaN();
      }
      rec.total_time_s = rec.train_time_s + rec.predict_time_s;
      report.records.push_back(std::move(rec));
    }
  }
  return report;
}

namespace {

void write_row(std::ostream& os, const BenchRecord& r) {
  os << r.size << ',' << r.seed << ',' << format_double(r.train_time_s) << ',' << format_double(r.predict_time_s)
     << ',' << format_double(r.total_time_s) << ',' << (r.failed ? "nan" : format_double(r.mse)) << ','
     << (r.failed ? "nan" : format_double(r.nrmse)) << '\n';
}

}  // namespace

void write_bench_csv(std::ostream& os, const BenchReport& report) {
  os << "size,seed,train_time_s,predict_time_s,total_time_s,mse,nrmse\n";
  write_row(os, report.baseline);
  for (const auto& r : report.records) write_row(os, r);
}

void write_bench_summary(std::ostream& os, const BenchReport& report, const RunConfig& config) {
  const auto& mg = config.data.mackey_glass;
  char line[256];
  os << "next-step benchmark: " << (config.data.system == SystemKind::lorenz ? "lorenz" : "mackey-glass");
  if (config.data.system == SystemKind::mackey_glass)
    os << " tau=" << format_double(mg.tau) << " dt=" << format_double(mg.dt) << " discard=" << mg.discard
       << " (dt/discard/normalization are harness defaults)";
  os << "\n  lambda=" << format_double(config.train.lambda) << " radius=" << format_double(config.model.reservoir.radius)
     << " train_len=" << config.train.train_len << " predict_len=" << config.predict.predict_len
     << " washout=" << config.model.washout << "\n  reservoir sizes are a harness choice\n";
  std::snprintf(line, sizeof line, "  %-8s %-6s %10s %10s %10s %12s %10s\n", "size", "seed", "train_s", "predict_s",
                "total_s", "mse", "nrmse");
  os << line;
  std::snprintf(line, sizeof line, "  %-8s %-6s %10s %10s %10s %12.4e %10.4e\n", "persist", "-", "-", "-", "-",
                report.baseline.mse, report.baseline.nrmse);
  os << line;
  for (const auto& r : report.records) {
    if (r.failed) {
      std::snprintf(line, sizeof line, "  %-8lld %-6llu FAILED: ", static_cast<long long>(r.size),
                    static_cast<unsigned long long>(r.seed));
      os << line << r.error << '\n';
      continue;
    }
    std::snprintf(line, sizeof line, "  %-8lld %-6llu %10.4f %10.4f %10.4f %12.4e %10.4e\n",
                  static_cast<long long>(r.size), static_cast<unsigned long long>(r.seed), r.train_time_s,
                  r.predict_time_s, r.total_time_s, r.mse, r.nrmse);
    os << line;
  }
}

}  // namespace rc::app
