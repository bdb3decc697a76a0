#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "rc/datasets.hpp"
#include "rc/esn.hpp"
#include "rc/layers.hpp"
#include "rc/linalg.hpp"
#include "rc/predict.hpp"
#include "rc/states.hpp"

namespace rc::app {

// Invalid configuration: unknown key, bad value, or inconsistent settings.
// The message always names the offending `section.key`.
class ConfigError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

enum class KnowledgeKind { none, identity, lorenz_rk4 };

/// Built-in knowledge models the CLI can name and serialize.
///   identity    K(u) = u
///   lorenz_rk4  one RK4 step of the Lorenz system with the given parameters
struct KnowledgeSpec {
  KnowledgeKind kind = KnowledgeKind::none;
  double dt = 0.02;
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
};

KnowledgeModel make_knowledge(const KnowledgeSpec& spec, Index input_dim);
std::string_view to_string(KnowledgeKind kind);
KnowledgeKind parse_knowledge_kind(std::string_view name);

enum class SystemKind { mackey_glass, lorenz };

struct ModelSection {
  Variant variant = Variant::standard;
  ReservoirSpec reservoir;
  InputSpec input;
  Index reservoir_size = 300;
  double leak_rate = 1.0;
  Activation activation = Activation::tanh;
  StateModifier modifier;
  std::uint64_t seed = 42;
  Index layers = 1;
  Index washout = 0;
  KnowledgeSpec knowledge;
};

struct TrainSection {
  double lambda = 1e-8;
  Index train_len = 4999;
  RidgeMethod method = RidgeMethod::normal_equations;
};

struct PredictSection {
  PredictionMode mode = PredictionMode::predictive;
  Index predict_len = 4999;
};

struct DataSection {
  SystemKind system = SystemKind::mackey_glass;
  MackeyGlassParams mackey_glass;
  LorenzParams lorenz;
  bool standardize = false;
};

/// Effective run configuration. Text form is `key = value` lines under
/// `[model]`, `[train]`, `[predict]` and `[data]` headers; `#` starts a
/// comment. Keys not listed in canonical() are rejected.
struct RunConfig {
  ModelSection model;
  TrainSection train;
  PredictSection predict;
  DataSection data;

  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);

  // Sets one `section.key` from its text form without re-validating.
  void set(std::string_view key, std::string_view value);

  // Every effective key as sorted `section.key = value` lines.
  std::string canonical() const;
  // FNV-1a 64 of canonical(), 16 lowercase hex digits.
  std::string digest() const;

  void validate() const;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Series described by the data section; `length` overrides the configured
// sample count when positive.
SeriesData generate_series(const DataSection& data, Index length = 0);

// Builds χ/R for every layer from `model.seed`. For the hybrid variant the
// first input matrix spans [u; K(u)].
EsnModel build_model(const ModelSection& model, Index input_dim);

}  // namespace rc::app
