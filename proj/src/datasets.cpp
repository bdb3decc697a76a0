#include "rc/datasets.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "rc/rng.hpp"

namespace rc {

void SeriesData::validate() const {
  if (values.cols() < 1 || values.rows() < 1) throw ArgumentError("series '" + name + "' is empty");
  if (!values.allFinite()) throw ArgumentError("series '" + name + "' contains non-finite values");
  if (!(dt > 0.0)) throw ArgumentError("series '" + name + "' needs dt > 0");
  if (!variables.empty() && Index(variables.size()) != values.rows())
    throw ArgumentError("series '" + name + "' has mismatched variable names");
}

namespace {

void require_positive(const char* who, const char* key, double v) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ArgumentError(std::string(who) + ": " + key + " must be a finite value > 0");
}

}  // namespace

SeriesData mackey_glass(const MackeyGlassParams& p) {
  require_positive("mackey_glass", "tau", p.tau);
  require_positive("mackey_glass", "dt", p.dt);
  require_positive("mackey_glass", "beta", p.beta);
  require_positive("mackey_glass", "gamma", p.gamma);
  require_positive("mackey_glass", "n", p.n);
  require_positive("mackey_glass", "x0", p.x0);
  if (p.length < 1) throw ArgumentError("mackey_glass: length must be >= 1");
  if (p.discard < 0) throw ArgumentError("mackey_glass: discard must be >= 0");

  const auto depth = static_cast<Index>(std::llround(p.tau / p.dt));
  if (depth < 1) throw ArgumentError("mackey_glass: tau/dt must round to at least 1");
  const Index total = p.discard + p.length;

  // buffer[depth + k] holds x at step k; indices below depth are history.
  std::vector<double> buffer(std::size_t(depth + total), p.x0);
  if (p.history_seed) {
    Rng rng(*p.history_seed);
    for (Index i = 0; i < depth; ++i)
      buffer[std::size_t(i)] = p.x0 + rng.uniform(-p.history_jitter, p.history_jitter);
  }

  auto rhs = [&](double x, double delayed) {
    return p.beta * delayed / (1.0 + std::pow(delayed, p.n)) - p.gamma * x;
  };
  const double h = p.dt;
  for (Index k = 0; k + 1 < total; ++k) {
    const double x = buffer[std::size_t(depth + k)];
    const double d0 = buffer[std::size_t(k)];
    const double d1 = buffer[std::size_t(k + 1)];
    const double dh = 0.5 * (d0 + d1);
    const double k1 = rhs(x, d0);
    const double k2 = rhs(x + 0.5 * h * k1, dh);
    const double k3 = rhs(x + 0.5 * h * k2, dh);
    const double k4 = rhs(x + h * k3, d1);
    buffer[std::size_t(depth + k + 1)] = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  SeriesData out;
  out.name = "mackey_glass";
  out.dt = p.dt;
  out.variables = {"x"};
  out.values.resize(1, p.length);
  for (Index t = 0; t < p.length; ++t) out.values(0, t) = buffer[std::size_t(depth + p.discard + t)];
  return out;
}

SeriesData lorenz(const LorenzParams& p) {
  require_positive("lorenz", "dt", p.dt);
  if (p.length < 1) throw ArgumentError("lorenz: length must be >= 1");
  if (p.discard < 0) throw ArgumentError("lorenz: discard must be >= 0");
  for (double v : {p.sigma, p.rho, p.beta, p.u0[0], p.u0[1], p.u0[2]})
    if (!std::isfinite(v)) throw ArgumentError("lorenz: parameters must be finite");

  using State = Eigen::Vector3d;
  auto f = [&](const State& s) {
    return State(p.sigma * (s(1) - s(0)), s(0) * (p.rho - s(2)) - s(1), s(0) * s(1) - p.beta * s(2));
  };
  SeriesData out;
  out.name = "lorenz";
  out.dt = p.dt;
  out.variables = {"x", "y", "z"};
  out.values.resize(3, p.length);
  State s(p.u0[0], p.u0[1], p.u0[2]);
  const double h = p.dt;
  for (Index k = 0; k < p.discard + p.length; ++k) {
    if (k >= p.discard) out.values.col(k - p.discard) = s;
    const State k1 = f(s);
    const State k2 = f(s + 0.5 * h * k1);
    const State k3 = f(s + 0.5 * h * k2);
    const State k4 = f(s + h * k3);
    s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return out;
}

NextStepSplit next_step_pairs(const SeriesData& series, Index train_len, Index predict_len) {
  if (train_len < 1 || predict_len < 0) throw ArgumentError("next_step_pairs: train_len must be >= 1");
  if (train_len + predict_len + 1 > series.length())
    throw ArgumentError("next_step_pairs: series of length " + std::to_string(series.length()) +
                        " is too short for train_len + predict_len + 1 = " +
                        std::to_string(train_len + predict_len + 1));
  const Matrix& v = series.values;
  NextStepSplit out;
  out.train_inputs = v.middleCols(0, train_len);
  out.train_targets = v.middleCols(1, train_len);
  out.test_inputs = v.middleCols(train_len, predict_len);
  out.test_targets = v.middleCols(train_len + 1, predict_len);
  return out;
}

Standardization Standardization::fit(const Matrix& values) {
  if (values.cols() < 1) throw ArgumentError("Standardization: empty data");
  Standardization s;
  s.mean = values.rowwise().mean();
  s.stddev = ((values.colwise() - s.mean).array().square().rowwise().sum() / double(values.cols())).sqrt();
  for (Index i = 0; i < s.stddev.size(); ++i)
    if (!(s.stddev(i) > 0.0)) s.stddev(i) = 1.0;
  return s;
}

Matrix Standardization::apply(const Matrix& values) const {
  return ((values.colwise() - mean).array().colwise() / stddev.array()).matrix();
}

Matrix Standardization::invert(const Matrix& values) const {
  return ((values.array().colwise() * stddev.array()).colwise() + mean.array()).matrix();
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header, const Matrix& values) {
  if (Index(header.size()) != values.rows())
    throw ArgumentError("write_csv: header has " + std::to_string(header.size()) + " names for " +
                        std::to_string(values.rows()) + " variables");
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (Index t = 0; t < values.cols(); ++t) {
    for (Index i = 0; i < values.rows(); ++i) os << (i ? "," : "") << format_double(values(i, t));
    os << '\n';
  }
}

SeriesData read_csv(std::istream& is, const std::string& name, double dt) {
  SeriesData out;
  out.name = name;
  out.dt = dt;
  std::string line;
  if (!std::getline(is, line)) throw FormatError("csv", "missing header row");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.variables.push_back(cell);
  }
  if (out.variables.empty()) throw FormatError("csv", "empty header row");
  const std::size_t d = out.variables.size();
  std::vector<double> flat;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t count = 0, pos = 0;
    while (pos <= line.size()) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      double v = 0.0;
      const auto res = std::from_chars(line.data() + pos, line.data() + end, v);
      if (res.ec != std::errc() || res.ptr != line.data() + end)
        throw FormatError("csv", "bad number on data row " + std::to_string(rows + 1));
      flat.push_back(v);
      ++count;
      pos = end + 1;
    }
    if (count != d)
      throw FormatError("csv", "data row " + std::to_string(rows + 1) + " has " + std::to_string(count) +
                                   " fields, header has " + std::to_string(d));
    ++rows;
  }
  if (rows == 0) throw FormatError("csv", "no data rows");
  out.values.resize(Index(d), Index(rows));
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t i = 0; i < d; ++i) out.values(Index(i), Index(t)) = flat[t * d + i];
  return out;
}

}  // namespace rc
