#include "rc/predict.hpp"

namespace rc {

namespace {

void check_readout(const EsnModel& model, const ReadoutLayer& readout) {
  if (readout.feature_dim() != model.output_dimension())
    throw DimensionError("readout expects " + std::to_string(readout.feature_dim()) +
                         " features but the model produces " + std::to_string(model.output_dimension()));
}

void guard(const Vector& x, Index k) {
  if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > kOverflowGuard)
    throw NumericOverflowError("prediction diverged at step " + std::to_string(k) +
                                   " (state norm above " + std::to_string(kOverflowGuard) + ")",
                               std::size_t(k));
}

Vector advance_checked(const EsnModel& model, const Vector& x, const Vector& u, Index k) {
  Vector next;
  try {
    next = step(model, x, u);
  } catch (const NumericOverflowError&) {
    throw NumericOverflowError("prediction diverged at step " + std::to_string(k) + " (non-finite state)",
                               std::size_t(k));
  }
  guard(next, k);
  return next;
}

template <typename Feed>
PredictionRun closed_loop(const EsnModel& model, const ReadoutLayer& readout, const Vector& x_start,
                          const Vector& u_start, Index steps, Feed&& feed) {
  check_readout(model, readout);
  if (x_start.size() != model.state_dim()) throw DimensionError("start state has wrong length");
  if (u_start.size() != model.input_dim()) throw DimensionError("start input has wrong length");

  PredictionRun run;
  run.mode = PredictionMode::generative;
  run.outputs.resize(readout.target_dim(), steps);
  Vector x = x_start, u = u_start;
  for (Index k = 0; k < steps; ++k) {
    const Vector v = readout.w_out * features(model, x, u);
    run.outputs.col(k) = v;
    u = feed(k, v);
    x = advance_checked(model, x, u, k);
  }
  run.final_state = std::move(x);
  return run;
}

}  // namespace

PredictionRun predict_generative(const EsnModel& model, const ReadoutLayer& readout, const Vector& x_start,
                                 const Vector& u_start, Index steps) {
  if (steps < 1) throw ArgumentError("predict_generative: steps must be >= 1");
  if (readout.target_dim() != model.input_dim())
    throw ClosedLoopDimensionError("generative prediction needs readout outputs (" +
                                   std::to_string(readout.target_dim()) + ") to match model inputs (" +
                                   std::to_string(model.input_dim()) + ")");
  return closed_loop(model, readout, x_start, u_start, steps, [](Index, const Vector& v) { return v; });
}

PredictionRun predict_teacher_forced(const EsnModel& model, const ReadoutLayer& readout,
                                     const Vector& x_start, const Vector& u_start, const Matrix& forced) {
  if (forced.cols() < 1) throw ArgumentError("predict_teacher_forced: no forced inputs");
  if (forced.rows() != model.input_dim()) throw DimensionError("forced inputs have wrong row count");
  return closed_loop(model, readout, x_start, u_start, forced.cols(),
                     [&](Index k, const Vector&) -> Vector { return forced.col(k); });
}

PredictionRun predict_predictive(const EsnModel& model, const ReadoutLayer& readout, const Vector& x_start,
                                 const Matrix& inputs) {
  check_readout(model, readout);
  if (inputs.rows() != model.input_dim())
    throw ArgumentError("predict_predictive: inputs have " + std::to_string(inputs.rows()) +
                        " rows, model expects " + std::to_string(model.input_dim()));
  if (x_start.size() != model.state_dim()) throw DimensionError("start state has wrong length");

  PredictionRun run;
  run.mode = PredictionMode::predictive;
  run.outputs.resize(readout.target_dim(), inputs.cols());
  Vector x = x_start;
  for (Index k = 0; k < inputs.cols(); ++k) {
    const Vector u = inputs.col(k);
    x = advance_checked(model, x, u, k);
    run.outputs.col(k) = readout.w_out * features(model, x, u);
  }
  run.final_state = std::move(x);
  return run;
}

}  // namespace rc
