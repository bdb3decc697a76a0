#include "rc/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace rc::app {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(std::string(key) + ": expected a finite number, got '" + std::string(v) + "'");
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

// Re-throws vocabulary errors from the library with the key attached.
template <typename F>
auto with_key(std::string_view key, F&& parse) {
  try {
    return parse();
  } catch (const ConfigError&) {
    throw;
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

std::string str(double v) { return format_double(v); }
std::string str(Index v) { return std::to_string(v); }
std::string str(bool v) { return v ? "true" : "false"; }

std::string_view to_string(SystemKind s) { return s == SystemKind::mackey_glass ? "mackey_glass" : "lorenz"; }

SystemKind parse_system(std::string_view name) {
  if (name == "mackey_glass" || name == "mackey-glass") return SystemKind::mackey_glass;
  if (name == "lorenz") return SystemKind::lorenz;
  throw ArgumentError("unknown system '" + std::string(name) + "'");
}

std::string_view to_string(RidgeMethod m) { return m == RidgeMethod::qr ? "qr" : "normal_equations"; }

struct Field {
  std::string_view key;
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define RC_NUMBER(KEY, MEMBER)                                                                          \
  Field {                                                                                               \
    KEY, [](RunConfig& c, std::string_view k, std::string_view v) { c.MEMBER = to_double(k, v); },    \
        [](const RunConfig& c) { return str(c.MEMBER); }                                                \
  }
#define RC_INDEX(KEY, MEMBER)                                                                           \
  Field {                                                                                               \
    KEY, [](RunConfig& c, std::string_view k, std::string_view v) { c.MEMBER = to_int<Index>(k, v); }, \
        [](const RunConfig& c) { return str(c.MEMBER); }                                                \
  }
#define RC_ENUM(KEY, MEMBER, PARSE)                                                                     \
  Field {                                                                                               \
    KEY,                                                                                                \
        [](RunConfig& c, std::string_view k, std::string_view v) {                                      \
          c.MEMBER = with_key(k, [&] { return PARSE(v); });                                             \
        },                                                                                              \
        [](const RunConfig& c) { return std::string(to_string(c.MEMBER)); }                            \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      RC_ENUM("model.variant", model.variant, parse_variant),
      RC_ENUM("model.reservoir", model.reservoir.kind, parse_reservoir_kind),
      RC_INDEX("model.reservoir_size", model.reservoir_size),
      RC_NUMBER("model.spectral_radius", model.reservoir.radius),
      RC_NUMBER("model.density", model.reservoir.density),
      RC_NUMBER("model.reservoir_weight", model.reservoir.weight),
      RC_NUMBER("model.reservoir_feedback", model.reservoir.feedback),
      RC_NUMBER("model.svd_max_value", model.reservoir.max_value),
      RC_NUMBER("model.svd_sparsity", model.reservoir.sparsity),
      RC_ENUM("model.input_layer", model.input.kind, parse_input_kind),
      RC_NUMBER("model.input_scaling", model.input.scaling),
      Field{"model.input_signs",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              if (v != "random" && v != "sequence")
                throw ConfigError(std::string(k) + ": expected random or sequence, got '" + std::string(v) + "'");
              c.model.input.random_signs = v == "random";
            },
            [](const RunConfig& c) { return std::string(c.model.input.random_signs ? "random" : "sequence"); }},
      Field{"model.input_sign_sequence",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              c.model.input.sign_sequence.clear();
              for (char ch : v) {
                if (ch != '0' && ch != '1') throw ConfigError(std::string(k) + ": only 0 and 1 are allowed");
                c.model.input.sign_sequence.push_back(ch - '0');
              }
            },
            [](const RunConfig& c) {
              std::string s;
              for (int b : c.model.input.sign_sequence) s.push_back(char('0' + b));
              return s;
            }},
      RC_NUMBER("model.leak_rate", model.leak_rate),
      RC_ENUM("model.activation", model.activation, parse_activation),
      RC_ENUM("model.modifier", model.modifier.base, parse_modifier_base),
      RC_ENUM("model.nonlinear", model.modifier.nonlinear, parse_nonlinear),
      RC_NUMBER("model.padding", model.modifier.padding),
      Field{"model.seed",
            [](RunConfig& c, std::string_view k, std::string_view v) { c.model.seed = to_int<std::uint64_t>(k, v); },
            [](const RunConfig& c) { return std::to_string(c.model.seed); }},
      RC_INDEX("model.layers", model.layers),
      RC_INDEX("model.washout", model.washout),
      RC_ENUM("model.knowledge", model.knowledge.kind, parse_knowledge_kind),
      RC_NUMBER("model.knowledge_dt", model.knowledge.dt),
      RC_NUMBER("model.knowledge_sigma", model.knowledge.sigma),
      RC_NUMBER("model.knowledge_rho", model.knowledge.rho),
      RC_NUMBER("model.knowledge_beta", model.knowledge.beta),

      RC_NUMBER("train.lambda", train.lambda),
      RC_INDEX("train.train_len", train.train_len),
      Field{"train.method",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              if (v == "normal_equations")
                c.train.method = RidgeMethod::normal_equations;
              else if (v == "qr")
                c.train.method = RidgeMethod::qr;
              else
                throw ConfigError(std::string(k) + ": expected normal_equations or qr, got '" + std::string(v) + "'");
            },
            [](const RunConfig& c) { return std::string(to_string(c.train.method)); }},

      Field{"predict.mode",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              if (v == "predictive")
                c.predict.mode = PredictionMode::predictive;
              else if (v == "generative")
                c.predict.mode = PredictionMode::generative;
              else
                throw ConfigError(std::string(k) + ": expected predictive or generative, got '" + std::string(v) + "'");
            },
            [](const RunConfig& c) {
              return std::string(c.predict.mode == PredictionMode::generative ? "generative" : "predictive");
            }},
      RC_INDEX("predict.predict_len", predict.predict_len),

      RC_ENUM("data.system", data.system, parse_system),
      Field{"data.standardize",
            [](RunConfig& c, std::string_view k, std::string_view v) { c.data.standardize = to_bool(k, v); },
            [](const RunConfig& c) { return str(c.data.standardize); }},
      // Keys shared by both systems are stored in both and reported for the active one.
      Field{"data.length",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              c.data.mackey_glass.length = c.data.lorenz.length = to_int<Index>(k, v);
            },
            [](const RunConfig& c) { return str(c.data.mackey_glass.length); }},
      Field{"data.dt",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              c.data.mackey_glass.dt = c.data.lorenz.dt = to_double(k, v);
            },
            [](const RunConfig& c) {
              return str(c.data.system == SystemKind::lorenz ? c.data.lorenz.dt : c.data.mackey_glass.dt);
            }},
      Field{"data.discard",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              c.data.mackey_glass.discard = c.data.lorenz.discard = to_int<Index>(k, v);
            },
            [](const RunConfig& c) {
              return str(c.data.system == SystemKind::lorenz ? c.data.lorenz.discard : c.data.mackey_glass.discard);
            }},
      Field{"data.beta",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              c.data.mackey_glass.beta = c.data.lorenz.beta = to_double(k, v);
            },
            [](const RunConfig& c) {
              return str(c.data.system == SystemKind::lorenz ? c.data.lorenz.beta : c.data.mackey_glass.beta);
            }},
      RC_NUMBER("data.tau", data.mackey_glass.tau),
      RC_NUMBER("data.gamma", data.mackey_glass.gamma),
      RC_NUMBER("data.n", data.mackey_glass.n),
      RC_NUMBER("data.x0", data.mackey_glass.x0),
      Field{"data.history_seed",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              if (v == "none")
                c.data.mackey_glass.history_seed.reset();
              else
                c.data.mackey_glass.history_seed = to_int<std::uint64_t>(k, v);
            },
            [](const RunConfig& c) {
              const auto& s = c.data.mackey_glass.history_seed;
              return s ? std::to_string(*s) : std::string("none");
            }},
      RC_NUMBER("data.sigma", data.lorenz.sigma),
      RC_NUMBER("data.rho", data.lorenz.rho),
      Field{"data.u0",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              std::array<double, 3> u{};
              std::size_t i = 0, pos = 0;
              while (pos <= v.size()) {
                const std::size_t end = std::min(v.find(',', pos), v.size());
                if (i == 3) throw ConfigError(std::string(k) + ": expected three comma-separated numbers");
                u[i++] = to_double(k, trim(v.substr(pos, end - pos)));
                pos = end + 1;
              }
              if (i != 3) throw ConfigError(std::string(k) + ": expected three comma-separated numbers");
              c.data.lorenz.u0 = u;
            },
            [](const RunConfig& c) {
              const auto& u = c.data.lorenz.u0;
              return str(u[0]) + "," + str(u[1]) + "," + str(u[2]);
            }},
  };
  return table;
}

#undef RC_NUMBER
#undef RC_INDEX
#undef RC_ENUM

}  // namespace

std::string_view to_string(KnowledgeKind kind) {
  switch (kind) {
    case KnowledgeKind::none: return "none";
    case KnowledgeKind::identity: return "identity";
    case KnowledgeKind::lorenz_rk4: return "lorenz_rk4";
  }
  return "?";
}

KnowledgeKind parse_knowledge_kind(std::string_view name) {
  if (name == "none") return KnowledgeKind::none;
  if (name == "identity") return KnowledgeKind::identity;
  if (name == "lorenz_rk4") return KnowledgeKind::lorenz_rk4;
  throw ArgumentError("unknown knowledge model '" + std::string(name) + "'");
}

KnowledgeModel make_knowledge(const KnowledgeSpec& spec, Index input_dim) {
  switch (spec.kind) {
    case KnowledgeKind::none: throw ArgumentError("hybrid variant needs a knowledge model");
    case KnowledgeKind::identity:
      return {"identity", input_dim, [](const Vector& u) { return u; }};
    case KnowledgeKind::lorenz_rk4: {
      if (input_dim != 3) throw ArgumentError("lorenz_rk4 knowledge model needs 3 inputs");
      const KnowledgeSpec p = spec;
      auto f = [p](const Vector& s) {
        Vector d(3);
        d << p.sigma * (s(1) - s(0)), s(0) * (p.rho - s(2)) - s(1), s(0) * s(1) - p.beta * s(2);
        return d;
      };
      return {"lorenz_rk4", 3, [p, f](const Vector& u) {
                const Vector k1 = f(u);
                const Vector k2 = f(u + 0.5 * p.dt * k1);
                const Vector k3 = f(u + 0.5 * p.dt * k2);
                const Vector k4 = f(u + p.dt * k3);
                return Vector(u + p.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
              }};
    }
  }
  throw ArgumentError("unknown knowledge model");
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig config;
  std::map<std::string, const Field*> by_key;
  for (const auto& f : fields()) by_key.emplace(std::string(f.key), &f);

  std::string section;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "model" && section != "train" && section != "predict" && section != "data")
        throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of any [section]");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw ConfigError(where + "unknown key '" + key + "'");
    it->second->set(config, key, trim(line.substr(eq + 1)));
  }
  config.validate();
  return config;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  for (const auto& f : fields())
    if (f.key == key) return f.set(*this, key, trim(value));
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::canonical() const {
  std::vector<std::string> lines;
  for (const auto& f : fields()) lines.push_back(std::string(f.key) + " = " + f.get(*this));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::digest() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  const auto& m = model;
  if (m.reservoir_size < 1) fail("model.reservoir_size must be >= 1");
  if (m.reservoir.kind != ReservoirKind::rand_sparse && m.reservoir_size < 2)
    fail("model.reservoir_size must be >= 2 for " + std::string(to_string(m.reservoir.kind)));
  if (!(m.reservoir.density > 0.0 && m.reservoir.density <= 1.0)) fail("model.density must lie in (0, 1]");
  if (!(m.reservoir.radius > 0.0)) fail("model.spectral_radius must be > 0");
  if (!(m.reservoir.max_value > 0.0)) fail("model.svd_max_value must be > 0");
  if (!(m.reservoir.sparsity > 0.0 && m.reservoir.sparsity < 1.0)) fail("model.svd_sparsity must lie in (0, 1)");
  if (!(m.input.scaling > 0.0)) fail("model.input_scaling must be > 0");
  if (!(m.leak_rate > 0.0 && m.leak_rate <= 1.0)) fail("model.leak_rate must lie in (0, 1]");
  if (m.layers < 1) fail("model.layers must be >= 1");
  if (m.variant != Variant::deep && m.layers != 1) fail("model.layers > 1 requires model.variant = deep");
  if (m.variant == Variant::hybrid && m.knowledge.kind == KnowledgeKind::none)
    fail("model.knowledge must be set for model.variant = hybrid");
  if (m.washout < 0) fail("model.washout must be >= 0");
  if (!(train.lambda >= 0.0)) fail("train.lambda must be >= 0");
  if (train.train_len < 1) fail("train.train_len must be >= 1");
  if (m.washout >= train.train_len)
    fail("model.washout (" + std::to_string(m.washout) + ") must be smaller than train.train_len (" +
         std::to_string(train.train_len) + ")");
  if (predict.predict_len < 1) fail("predict.predict_len must be >= 1");
  if (data.mackey_glass.length < 1) fail("data.length must be >= 1");
  if (data.mackey_glass.discard < 0) fail("data.discard must be >= 0");
  for (double v : {data.mackey_glass.dt, data.mackey_glass.tau, data.mackey_glass.gamma, data.mackey_glass.n,
                   data.mackey_glass.x0})
    if (!(v > 0.0)) fail("data: dt, tau, gamma, n and x0 must be > 0");
}

SeriesData generate_series(const DataSection& data, Index length) {
  if (data.system == SystemKind::lorenz) {
    LorenzParams p = data.lorenz;
    if (length > 0) p.length = length;
    return lorenz(p);
  }
  MackeyGlassParams p = data.mackey_glass;
  if (length > 0) p.length = length;
  return mackey_glass(p);
}

EsnModel build_model(const ModelSection& m, Index input_dim) {
  if (input_dim < 1) throw ArgumentError("build_model: input dimension must be >= 1");
  Rng rng(m.seed);
  EsnParams params{m.leak_rate, m.activation, m.modifier};
  const Index n = m.reservoir_size;
  switch (m.variant) {
    case Variant::standard: {
      Matrix input = build_input(m.input, n, input_dim, rng);
      Reservoir reservoir = build_reservoir(m.reservoir, n, rng);
      return EsnModel::standard(std::move(input), std::move(reservoir), params);
    }
    case Variant::deep: {
      std::vector<ReservoirLayer> layers;
      for (Index l = 0; l < m.layers; ++l) {
        Matrix input = build_input(m.input, n, l == 0 ? input_dim : n, rng);
        Reservoir reservoir = build_reservoir(m.reservoir, n, rng);
        layers.push_back({std::move(input), std::move(reservoir)});
      }
      return EsnModel::deep(std::move(layers), params);
    }
    case Variant::hybrid: {
      KnowledgeModel knowledge = make_knowledge(m.knowledge, input_dim);
      Matrix input = build_input(m.input, n, input_dim + knowledge.output_dim, rng);
      Reservoir reservoir = build_reservoir(m.reservoir, n, rng);
      return EsnModel::hybrid(std::move(input), std::move(reservoir), std::move(knowledge), params);
    }
  }
  throw ArgumentError("build_model: unknown variant");
}

}  // namespace rc::app
