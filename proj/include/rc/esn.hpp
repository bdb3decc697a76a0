#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rc/layers.hpp"
#include "rc/linalg.hpp"
#include "rc/states.hpp"

namespace rc {

enum class Activation { tanh, identity };
enum class Variant { standard, deep, hybrid };

std::string_view to_string(Activation activation);
std::string_view to_string(Variant variant);
Activation parse_activation(std::string_view name);
Variant parse_variant(std::string_view name);

/// Approximate knowledge-based predictor for the hybrid variant: maps u(t)
/// to a guess of the next step with a fixed output dimension.
struct KnowledgeModel {
  std::string name;
  Index output_dim = 0;
  std::function<Vector(const Vector&)> predict;
};

struct ReservoirLayer {
  Matrix input;        // χ, N × (layer input dimension)
  Reservoir reservoir;  // R, N × N
};

struct EsnParams {
  double leak_rate = 1.0;
  Activation activation = Activation::tanh;
  StateModifier modifier;
};

/// Assembled echo state network. Immutable once built.
///
/// The state update of every layer is the leaky integrator
///   x' = (1 - α)·x + α·f(R·x + χ·v)
/// where v is the external input for the first layer and the freshly
/// updated state of the previous layer for deeper ones. Hybrid models drive
/// the reservoir with [u; K(u)] and expose [x; K(u)] as the raw state.
class EsnModel {
 public:
  static EsnModel standard(Matrix input, Reservoir reservoir, EsnParams params = {});
  static EsnModel deep(std::vector<ReservoirLayer> layers, EsnParams params = {});
  static EsnModel hybrid(Matrix input, Reservoir reservoir, KnowledgeModel knowledge,
                         EsnParams params = {});

  Variant variant() const { return variant_; }
  const std::vector<ReservoirLayer>& layers() const { return layers_; }
  double leak_rate() const { return params_.leak_rate; }
  Activation activation() const { return params_.activation; }
  const StateModifier& modifier() const { return params_.modifier; }
  const EsnParams& params() const { return params_; }
  const std::optional<KnowledgeModel>& knowledge() const { return knowledge_; }

  // External input dimension D.
  Index input_dim() const;
  // Concatenated reservoir state length over all layers.
  Index state_dim() const;
  // Raw state length: state_dim plus the knowledge output for hybrids.
  Index raw_state_dim() const;
  // Feature length d_z seen by the readout.
  Index output_dimension() const;

  // Same reservoirs and inputs with a different modifier.
  EsnModel with_modifier(const StateModifier& modifier) const;

 private:
  EsnModel() = default;
  void validate() const;

  Variant variant_ = Variant::standard;
  std::vector<ReservoirLayer> layers_;
  EsnParams params_;
  std::optional<KnowledgeModel> knowledge_;
};

inline Index output_dimension(const EsnModel& model) { return model.output_dimension(); }
inline Index output_dimension(const EsnModel& model, const StateModifier& modifier) {
  return modifier.feature_length(model.raw_state_dim(), model.input_dim());
}

/// One state update. Throws NumericOverflowError (step 0) on a non-finite state.
Vector step(const EsnModel& model, const Vector& x, const Vector& u);

// [x; K(u)] for hybrids, x otherwise.
Vector raw_state(const EsnModel& model, const Vector& x, const Vector& u);

// apply_modifier(model.modifier(), raw_state(x, u), u)
Vector features(const EsnModel& model, const Vector& x, const Vector& u);

struct StateMatrix {
  Matrix features;    // d_z × (T - washout)
  Matrix raw_states;  // raw_state_dim × (T - washout)
  Index washout = 0;
  Vector final_state;  // reservoir state after the last input
};

/// Drives the model with `inputs` (D × T) from x0 (zero when absent) and
/// keeps the states after the first `washout` steps.
StateMatrix collect_states(const EsnModel& model, const Matrix& inputs, Index washout = 0,
                           const std::optional<Vector>& x0 = std::nullopt);

}  // namespace rc
