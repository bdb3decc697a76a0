#include "rc/train.hpp"

namespace rc {

Vector ReadoutLayer::operator()(const Vector& z) const {
  if (z.size() != w_out.cols())
    throw DimensionError("readout expects " + std::to_string(w_out.cols()) + " features, got " +
                         std::to_string(z.size()));
  return w_out * z;
}

ReadoutLayer train_readout(const Matrix& features, const Matrix& targets, double lambda, RidgeMethod method) {
  if (features.cols() != targets.cols())
    throw ArgumentError("train_readout: " + std::to_string(features.cols()) + " feature columns vs " +
                        std::to_string(targets.cols()) + " target columns");
  if (!(lambda >= 0.0)) throw ArgumentError("train_readout: lambda must be >= 0");
  try {
    auto solution = ridge_solve(features, targets, lambda, method);
    ReadoutLayer out;
    out.w_out = std::move(solution.weights);
    out.lambda = lambda;
    out.method_used = solution.method_used;
    out.factorizations = solution.factorizations;
    if (!out.w_out.allFinite()) throw NumericOverflowError("train_readout: non-finite readout weights", 0);
    return out;
  } catch (const SingularSystemError& e) {
    throw SingularSystemError(std::string(e.what()) +
                              " (hint: set a positive ridge parameter or reduce the feature count)");
  }
}

}  // namespace rc
