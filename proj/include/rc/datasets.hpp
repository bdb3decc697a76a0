#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rc/linalg.hpp"

namespace rc {

/// Multivariate series, one variable per row and one timestep per column.
struct SeriesData {
  Matrix values;  // D × T
  double dt = 1.0;
  std::string name;
  std::vector<std::string> variables;  // D names, used as the CSV header

  Index dim() const { return values.rows(); }
  Index length() const { return values.cols(); }
  void validate() const;
};

struct MackeyGlassParams {
  Index length = 10000;
  double tau = 17.0;
  double dt = 0.1;
  double beta = 0.2;
  double gamma = 0.1;
  double n = 10.0;
  double x0 = 1.2;
  Index discard = 1000;
  // When set, history samples are x0 + uniform(-history_jitter, history_jitter).
  std::optional<std::uint64_t> history_seed;
  double history_jitter = 0.1;
};

/// dx/dt = β·x(t-τ)/(1 + x(t-τ)^n) - γ·x(t), fixed-step RK4, one sample per
/// step, history depth round(τ/dt). Half-step delayed values are linear
/// interpolations of the buffer. Sample 0 is x0 at t = 0; the first
/// `discard` samples are dropped.
SeriesData mackey_glass(const MackeyGlassParams& params = {});

struct LorenzParams {
  Index length = 10000;
  double dt = 0.02;
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  std::array<double, 3> u0{1.0, 0.0, 0.0};
  Index discard = 500;
};

SeriesData lorenz(const LorenzParams& params = {});

struct NextStepSplit {
  Matrix train_inputs;   // columns 0 .. train_len-1
  Matrix train_targets;  // columns 1 .. train_len
  Matrix test_inputs;    // columns train_len .. train_len+predict_len-1
  Matrix test_targets;   // columns train_len+1 .. train_len+predict_len
};

NextStepSplit next_step_pairs(const SeriesData& series, Index train_len, Index predict_len);

/// Per-variable affine map to zero mean and unit variance.
struct Standardization {
  Vector mean;
  Vector stddev;

  static Standardization fit(const Matrix& values);
  Matrix apply(const Matrix& values) const;
  Matrix invert(const Matrix& values) const;
};

// Header row of variable names, then one row per timestep. Values are written
// in shortest round-trip decimal form.
void write_csv(std::ostream& os, const std::vector<std::string>& header, const Matrix& values);
inline void write_csv(std::ostream& os, const SeriesData& series) {
  write_csv(os, series.variables, series.values);
}
SeriesData read_csv(std::istream& is, const std::string& name = "csv", double dt = 1.0);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace rc
