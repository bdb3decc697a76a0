#include "rc/esn.hpp"

#include <cmath>

namespace rc {

std::string_view to_string(Activation activation) {
  return activation == Activation::tanh ? "tanh" : "identity";
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::standard: return "standard";
    case Variant::deep: return "deep";
    case Variant::hybrid: return "hybrid";
  }
  return "?";
}

Activation parse_activation(std::string_view name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw ArgumentError("unknown activation '" + std::string(name) + "'");
}

Variant parse_variant(std::string_view name) {
  if (name == "standard") return Variant::standard;
  if (name == "deep") return Variant::deep;
  if (name == "hybrid") return Variant::hybrid;
  throw ArgumentError("unknown model variant '" + std::string(name) + "'");
}

EsnModel EsnModel::standard(Matrix input, Reservoir reservoir, EsnParams params) {
  EsnModel m;
  m.variant_ = Variant::standard;
  m.layers_.push_back({std::move(input), std::move(reservoir)});
  m.params_ = std::move(params);
  m.validate();
  return m;
}

EsnModel EsnModel::deep(std::vector<ReservoirLayer> layers, EsnParams params) {
  EsnModel m;
  m.variant_ = Variant::deep;
  m.layers_ = std::move(layers);
  m.params_ = std::move(params);
  m.validate();
  return m;
}

EsnModel EsnModel::hybrid(Matrix input, Reservoir reservoir, KnowledgeModel knowledge, EsnParams params) {
  EsnModel m;
  m.variant_ = Variant::hybrid;
  m.layers_.push_back({std::move(input), std::move(reservoir)});
  m.params_ = std::move(params);
  m.knowledge_ = std::move(knowledge);
  m.validate();
  return m;
}

EsnModel EsnModel::with_modifier(const StateModifier& modifier) const {
  EsnModel m = *this;
  m.params_.modifier = modifier;
  m.validate();
  return m;
}

void EsnModel::validate() const {
  if (layers_.empty()) throw ArgumentError("EsnModel: at least one reservoir layer is required");
  if (!(params_.leak_rate > 0.0 && params_.leak_rate <= 1.0))
    throw ArgumentError("EsnModel: leak_rate must lie in (0, 1]");
  params_.modifier.validate();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    const std::string where = "EsnModel layer " + std::to_string(l + 1) + ": ";
    if (layer.reservoir.rows() != layer.reservoir.cols() || layer.reservoir.rows() < 1)
      throw DimensionError(where + "reservoir must be square and non-empty");
    if (layer.input.rows() != layer.reservoir.rows())
      throw DimensionError(where + "input matrix has " + std::to_string(layer.input.rows()) +
                           " rows, reservoir size is " + std::to_string(layer.reservoir.rows()));
    if (layer.input.cols() < 1) throw DimensionError(where + "input matrix has no columns");
    if (l > 0 && layer.input.cols() != layers_[l - 1].reservoir.rows())
      throw DimensionError(where + "input dimension must equal the previous layer's reservoir size");
    if (!layer.input.allFinite() || !layer.reservoir.finite())
      throw ArgumentError(where + "weights must be finite");
  }
  if (variant_ == Variant::hybrid) {
    if (!knowledge_ || !knowledge_->predict || knowledge_->output_dim < 1)
      throw ArgumentError("EsnModel: hybrid variant requires a knowledge model with output_dim >= 1");
    if (layers_.front().input.cols() <= knowledge_->output_dim)
      throw DimensionError("EsnModel: hybrid input matrix must have D + m_K columns with D >= 1");
  }
  if (variant_ != Variant::deep && layers_.size() != 1)
    throw ArgumentError("EsnModel: only the deep variant stacks several layers");
}

Index EsnModel::input_dim() const {
  const Index cols = layers_.front().input.cols();
  return knowledge_ ? cols - knowledge_->output_dim : cols;
}

Index EsnModel::state_dim() const {
  Index n = 0;
  for (const auto& layer : layers_) n += layer.reservoir.rows();
  return n;
}

Index EsnModel::raw_state_dim() const {
  return state_dim() + (knowledge_ ? knowledge_->output_dim : 0);
}

Index EsnModel::output_dimension() const {
  return params_.modifier.feature_length(raw_state_dim(), input_dim());
}

namespace {

Vector knowledge_output(const KnowledgeModel& k, const Vector& u) {
  Vector y = k.predict(u);
  if (y.size() != k.output_dim)
    throw DimensionError("knowledge model '" + k.name + "' returned " + std::to_string(y.size()) +
                         " values, expected " + std::to_string(k.output_dim));
  return y;
}

// Advances x in place; `drive` is the first layer's input vector.
void advance(const EsnModel& model, Vector& x, const Vector& drive, std::size_t t) {
  const double alpha = model.leak_rate();
  Index offset = 0;
  Vector pre;
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    const auto& layer = model.layers()[l];
    const Index n = layer.reservoir.rows();
    auto state = x.segment(offset, n);
    pre.resize(n);
    layer.reservoir.apply(state, pre);
    if (l == 0)
      pre.noalias() += layer.input * drive;
    else
      pre.noalias() += layer.input * x.segment(offset - layer.input.cols(), layer.input.cols());
    if (model.activation() == Activation::tanh) pre = pre.array().tanh();
    state = (1.0 - alpha) * state + alpha * pre;
    offset += n;
  }
  if (!x.allFinite())
    throw NumericOverflowError("state became non-finite at step " + std::to_string(t), t);
}

void check_input(const EsnModel& model, const Vector& x, const Vector& u) {
  if (x.size() != model.state_dim())
    throw DimensionError("state has length " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(model.state_dim()));
  if (u.size() != model.input_dim())
    throw DimensionError("input has length " + std::to_string(u.size()) + ", model expects " +
                         std::to_string(model.input_dim()));
}

Vector drive_for(const EsnModel& model, const Vector& u, const Vector* k) {
  if (!model.knowledge()) return u;
  Vector drive(u.size() + k->size());
  drive << u, *k;
  return drive;
}

}  // namespace

Vector step(const EsnModel& model, const Vector& x, const Vector& u) {
  check_input(model, x, u);
  Vector next = x;
  if (model.knowledge()) {
    const Vector k = knowledge_output(*model.knowledge(), u);
    advance(model, next, drive_for(model, u, &k), 0);
  } else {
    advance(model, next, u, 0);
  }
  return next;
}

Vector raw_state(const EsnModel& model, const Vector& x, const Vector& u) {
  if (!model.knowledge()) return x;
  Vector out(model.raw_state_dim());
  out << x, knowledge_output(*model.knowledge(), u);
  return out;
}

Vector features(const EsnModel& model, const Vector& x, const Vector& u) {
  check_input(model, x, u);
  return apply_modifier(model.modifier(), raw_state(model, x, u), u);
}

StateMatrix collect_states(const EsnModel& model, const Matrix& inputs, Index washout,
                           const std::optional<Vector>& x0) {
  const Index t_total = inputs.cols();
  if (washout < 0) throw ArgumentError("collect_states: washout must be >= 0");
  if (washout >= t_total)
    throw ArgumentError("collect_states: washout (" + std::to_string(washout) +
                        ") must be smaller than the input length (" + std::to_string(t_total) + ")");
  if (inputs.rows() != model.input_dim())
    throw DimensionError("collect_states: inputs have " + std::to_string(inputs.rows()) +
                         " rows, model expects " + std::to_string(model.input_dim()));

  Vector x = x0 ? *x0 : Vector::Zero(model.state_dim());
  if (x.size() != model.state_dim())
    throw DimensionError("collect_states: initial state has wrong length");

  StateMatrix out;
  out.washout = washout;
  out.features.resize(model.output_dimension(), t_total - washout);
  out.raw_states.resize(model.raw_state_dim(), t_total - washout);
  for (Index t = 0; t < t_total; ++t) {
    const Vector u = inputs.col(t);
    Vector raw;
    if (model.knowledge()) {
      const Vector k = knowledge_output(*model.knowledge(), u);
      advance(model, x, drive_for(model, u, &k), std::size_t(t));
      if (t < washout) continue;
      raw.resize(model.raw_state_dim());
      raw << x, k;
    } else {
      advance(model, x, u, std::size_t(t));
      if (t < washout) continue;
      raw = x;
    }
    out.features.col(t - washout) = apply_modifier(model.modifier(), raw, u);
    out.raw_states.col(t - washout) = raw;
  }
  out.final_state = std::move(x);
  return out;
}

}  // namespace rc
