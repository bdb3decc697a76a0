#include "rc/app/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rc/app/bench.hpp"
#include "rc/app/config.hpp"
#include "rc/app/model_io.hpp"

namespace rc::app {

namespace {

struct Overrides {
  std::vector<std::string> assignments;  // `section.key=value`
  std::optional<std::uint64_t> seed;

  void apply(RunConfig& config) const {
    for (const auto& a : assignments) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + a + "'");
      config.set(a.substr(0, eq), a.substr(eq + 1));
    }
    if (seed) config.model.seed = *seed;
    config.validate();
  }
};

RunConfig load_config(const std::string& path, const Overrides& overrides) {
  RunConfig config = path.empty() ? RunConfig{} : RunConfig::load(path);
  overrides.apply(config);
  return config;
}

// Runs `write` against the file at `path`, or against `out` when the path is
// empty or "-".
void with_output(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  write(file);
  file.flush();
  if (!file) throw Error("failed writing '" + path + "'");
}

SeriesData read_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open data file '" + path + "'");
  return read_csv(in, path);
}

struct GenerateArgs {
  std::string system = "mackey-glass";
  std::string config;
  std::string out;
  std::optional<Index> length, discard;
  std::optional<double> tau, dt, beta, gamma, n, x0, sigma, rho;
  std::optional<std::uint64_t> history_seed;
};

void cmd_generate(const GenerateArgs& a, const Overrides& overrides, std::ostream& out) {
  RunConfig config = a.config.empty() ? RunConfig{} : RunConfig::load(a.config);
  config.set("data.system", a.system);
  auto set_num = [&](const char* key, const auto& v) {
    if (v) config.set(key, format_double(static_cast<double>(*v)));
  };
  if (a.length) config.set("data.length", std::to_string(*a.length));
  if (a.discard) config.set("data.discard", std::to_string(*a.discard));
  if (a.history_seed) config.set("data.history_seed", std::to_string(*a.history_seed));
  set_num("data.tau", a.tau);
  set_num("data.dt", a.dt);
  set_num("data.beta", a.beta);
  set_num("data.gamma", a.gamma);
  set_num("data.n", a.n);
  set_num("data.x0", a.x0);
  set_num("data.sigma", a.sigma);
  set_num("data.rho", a.rho);
  overrides.apply(config);
  const SeriesData series = generate_series(config.data);
  with_output(a.out, out, [&](std::ostream& os) { write_csv(os, series); });
}

struct BenchArgs {
  std::string config, out;
  std::vector<Index> sizes = kDefaultBenchSizes;
  Index repeats = 1;
};

void cmd_bench(const BenchArgs& a, const Overrides& overrides, std::ostream& out, std::ostream& err) {
  const RunConfig config = load_config(a.config, overrides);
  if (a.repeats < 1) throw ConfigError("--repeats must be >= 1");
  for (Index s : a.sizes)
    if (s < 1) throw ConfigError("--sizes entries must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (Index r = 0; r < a.repeats; ++r) seeds.push_back(config.model.seed + std::uint64_t(r));
  const BenchReport report = run_bench(config, a.sizes, seeds);
  with_output(a.out, out, [&](std::ostream& os) { write_bench_csv(os, report); });
  write_bench_summary(a.out.empty() || a.out == "-" ? err : out, report, config);
}

struct TrainArgs {
  std::string data, config, out;
};

void cmd_train(const TrainArgs& a, const Overrides& overrides, std::ostream& out) {
  const RunConfig config = load_config(a.config, overrides);
  const Index train_len = config.train.train_len, washout = config.model.washout;
  const SeriesData series = a.data.empty() ? generate_series(config.data, train_len + 1) : read_series(a.data);
  if (series.length() < train_len + 1)
    throw ConfigError("train.train_len (" + std::to_string(train_len) + ") needs " + std::to_string(train_len + 1) +
                      " samples, the data has " + std::to_string(series.length()));

  Matrix inputs = series.values.leftCols(train_len);
  Matrix targets = series.values.middleCols(1, train_len);
  std::optional<Standardization> standardization;
  if (config.data.standardize) {
    standardization = Standardization::fit(inputs);
    inputs = standardization->apply(inputs);
    targets = standardization->apply(targets);
  }

  EsnModel model = build_model(config.model, series.dim());
  const StateMatrix states = collect_states(model, inputs, washout);
  ReadoutLayer readout =
      train_readout(states, targets.rightCols(train_len - washout), config.train.lambda, config.train.method);

  const TrainedModel trained{std::move(model),
                             std::move(readout),
                             config.model.knowledge,
                             states.final_state,
                             inputs.col(train_len - 1),
                             series.variables,
                             config.digest(),
                             standardization};
  if (a.out.empty()) throw ConfigError("--out is required");
  with_output(a.out, out, [&](std::ostream& os) { save_model(os, trained); });
}

struct PredictArgs {
  std::string model, mode = "predictive", data, out, start;
  Index steps = 0;
};

void cmd_predict(const PredictArgs& a, std::ostream& out) {
  const TrainedModel trained = load_model_file(a.model);
  const EsnModel& model = trained.model;
  const auto& standardization = trained.standardization;
  const bool generative = a.mode == "generative";
  if (!generative && a.mode != "predictive") throw ConfigError("--mode must be predictive or generative");
  const std::string start = a.start.empty() ? (generative ? "final" : "initial") : a.start;
  if (start != "initial" && start != "final") throw ConfigError("--start must be initial or final");

  std::optional<Matrix> inputs;
  if (!a.data.empty()) {
    const SeriesData series = read_series(a.data);
    if (series.dim() != model.input_dim())
      throw DimensionError("data has " + std::to_string(series.dim()) + " variables, the model expects " +
                           std::to_string(model.input_dim()));
    inputs = standardization ? standardization->apply(series.values) : series.values;
  }

  Vector x = start == "final" ? trained.final_state : Vector(Vector::Zero(trained.final_state.size()));
  PredictionRun run;
  if (generative) {
    if (a.steps < 1) throw ConfigError("--steps must be >= 1 in generative mode");
    Vector u = trained.last_input;
    if (inputs) {
      const StateMatrix warm = collect_states(model, *inputs, 0, x);
      x = warm.final_state;
      u = inputs->col(inputs->cols() - 1);
    } else if (start == "initial") {
      throw ConfigError("generative mode from the initial state needs --data to warm up the reservoir");
    }
    run = predict_generative(model, trained.readout, x, u, a.steps);
  } else {
    if (!inputs) throw ConfigError("--data is required in predictive mode");
    run = predict_predictive(model, trained.readout, x, *inputs);
  }
  const Matrix outputs = standardization ? standardization->invert(run.outputs) : run.outputs;
  std::vector<std::string> header = trained.variables;
  if (Index(header.size()) != outputs.rows()) {
    header.clear();
    for (Index i = 0; i < outputs.rows(); ++i) header.push_back("y" + std::to_string(i));
  }
  with_output(a.out, out, [&](std::ostream& os) { write_csv(os, header, outputs); });
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reservoir computing toolkit: echo state network data generation, training, prediction and benchmarking",
               "rc"};
  app.require_subcommand(1);
  Overrides overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--set", overrides.assignments, "Override a config key, e.g. --set model.leak_rate=0.3");
  };

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a Mackey-Glass or Lorenz series as CSV");
  generate->add_option("--system", gen.system, "mackey-glass or lorenz")->capture_default_str();
  generate->add_option("--config", gen.config, "Config file whose [data] section is used as the base");
  generate->add_option("--length", gen.length, "Number of samples written");
  generate->add_option("--discard", gen.discard, "Leading samples dropped after integration starts");
  generate->add_option("--tau", gen.tau, "Mackey-Glass delay");
  generate->add_option("--dt", gen.dt, "Integration step and sampling interval");
  generate->add_option("--beta", gen.beta, "Mackey-Glass beta or Lorenz beta");
  generate->add_option("--gamma", gen.gamma, "Mackey-Glass gamma");
  generate->add_option("--n", gen.n, "Mackey-Glass exponent");
  generate->add_option("--x0", gen.x0, "Mackey-Glass constant history value");
  generate->add_option("--history-seed", gen.history_seed, "Seed for a jittered Mackey-Glass history");
  generate->add_option("--sigma", gen.sigma, "Lorenz sigma");
  generate->add_option("--rho", gen.rho, "Lorenz rho");
  generate->add_option("--out", gen.out, "Output CSV path (default stdout)");
  add_common(generate);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Next-step prediction benchmark over reservoir sizes");
  bench_cmd->add_option("--config", bench.config, "Config file (defaults apply when omitted)");
  bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated reservoir sizes")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--seed", overrides.seed, "Seed of the first run");
  bench_cmd->add_option("--repeats", bench.repeats, "Runs per size with consecutive seeds")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Output CSV path (default stdout)");
  add_common(bench_cmd);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit a readout and save the model");
  train_cmd->add_option("--data", train.data, "Training series CSV (generated from [data] when omitted)");
  train_cmd->add_option("--config", train.config, "Config file (defaults apply when omitted)");
  train_cmd->add_option("--seed", overrides.seed, "Override model.seed");
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  add_common(train_cmd);

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Run a saved model");
  predict_cmd->add_option("--model", predict.model, "Model file written by train")->required();
  predict_cmd->add_option("--mode", predict.mode, "predictive or generative")
      ->check(CLI::IsMember({"predictive", "generative"}))
      ->capture_default_str();
  predict_cmd->add_option("--steps", predict.steps, "Closed-loop steps (generative)");
  predict_cmd->add_option("--data", predict.data,
                          "Input series CSV (predictive), or warm-up series (generative)");
  predict_cmd->add_option("--start", predict.start,
                          "Reservoir state before the first input: initial (zero) or final (end of training). "
                          "Default: initial for predictive, final for generative")
      ->check(CLI::IsMember({"initial", "final"}));
  predict_cmd->add_option("--out", predict.out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*generate)
      cmd_generate(gen, overrides, out);
    else if (*bench_cmd)
      cmd_bench(bench, overrides, out, err);
    else if (*train_cmd)
      cmd_train(train, overrides, out);
    else if (*predict_cmd)
      cmd_predict(predict, out);
  } catch (const ConfigError& e) {
    err << "rc: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "rc: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_ok;
}

}  // namespace rc::app
