#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rc/app/config.hpp"
#include "rc/datasets.hpp"
#include "rc/esn.hpp"
#include "rc/train.hpp"

namespace rc::app {

/// Everything `predict` needs after `train`: the model, its readout, the
/// state reached at the end of training and the input that produced it.
struct TrainedModel {
  EsnModel model;
  ReadoutLayer readout;
  KnowledgeSpec knowledge;
  Vector final_state;
  Vector last_input;
  std::vector<std::string> variables;
  std::string config_digest;
  std::optional<Standardization> standardization;
};

/// Versioned text container:
///
///   RCMODEL 1
///   [meta]            key = value lines
///   [modifier]        base / nonlinear / padding
///   [input_matrix L]  one block per layer
///   [reservoir L]
///   [readout]
///   [final_state]
///   [last_input]
///   [standardization] optional, D × 2 (mean, stddev)
///   end
///
/// Matrix blocks start with `dense R C` followed by R rows of C values, or
/// `sparse R C NNZ` followed by `row col value` triplets in row-major order.
/// Values use 17 significant digits, so a load/save cycle is byte-stable.
void save_model(std::ostream& os, const TrainedModel& trained);
TrainedModel load_model(std::istream& is);

void save_model_file(const std::string& path, const TrainedModel& trained);
TrainedModel load_model_file(const std::string& path);

}  // namespace rc::app
