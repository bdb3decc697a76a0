#pragma once

#include "rc/esn.hpp"
#include "rc/linalg.hpp"

namespace rc {

/// Trained linear readout ψ: v = W_out · z.
struct ReadoutLayer {
  Matrix w_out;  // m × d_z
  double lambda = 0.0;
  RidgeMethod method_used = RidgeMethod::normal_equations;
  int factorizations = 0;

  Index feature_dim() const { return w_out.cols(); }
  Index target_dim() const { return w_out.rows(); }

  Vector operator()(const Vector& z) const;
};

// Single ridge solve of features (d_z × T) against targets (m × T).
ReadoutLayer train_readout(const Matrix& features, const Matrix& targets, double lambda,
                           RidgeMethod method = RidgeMethod::normal_equations);

inline ReadoutLayer train_readout(const StateMatrix& states, const Matrix& targets, double lambda,
                                  RidgeMethod method = RidgeMethod::normal_equations) {
  return train_readout(states.features, targets, lambda, method);
}

}  // namespace rc
