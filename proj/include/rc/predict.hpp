#pragma once

#include "rc/esn.hpp"
#include "rc/train.hpp"

namespace rc {

enum class PredictionMode { generative, predictive };

struct PredictionRun {
  PredictionMode mode = PredictionMode::predictive;
  Matrix outputs;  // m × steps
  Vector final_state;
};

// Any reservoir state with ‖x‖∞ above this aborts a prediction run.
inline constexpr double kOverflowGuard = 1e6;

/// Closed-loop prediction. `x_start` is the state that has already absorbed
/// `u_start` (e.g. the final training state and the last training input).
/// Each step emits v = W_out·z(x, u), then advances x with v and feeds v
/// back as the next u. The returned final state has absorbed every output.
PredictionRun predict_generative(const EsnModel& model, const ReadoutLayer& readout, const Vector& x_start,
                                 const Vector& u_start, Index steps);

/// Open-loop prediction: for each column u(t) of `inputs`, advance the state
/// with u(t) and emit W_out·z(x(t), u(t)).
PredictionRun predict_predictive(const EsnModel& model, const ReadoutLayer& readout, const Vector& x_start,
                                 const Matrix& inputs);

/// The generative loop with the fed-back value replaced by column k of
/// `forced` after output k. Output count equals forced.cols().
PredictionRun predict_teacher_forced(const EsnModel& model, const ReadoutLayer& readout,
                                     const Vector& x_start, const Vector& u_start, const Matrix& forced);

}  // namespace rc
