#include "rc/app/model_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace rc::app {

namespace {

constexpr const char* kMagic = "RCMODEL 1";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dense(std::ostream& os, const Matrix& m) {
  os << "dense " << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << fmt17(m(i, j));
    os << '\n';
  }
}

void write_sparse(std::ostream& os, const SparseMatrix& m) {
  os << "sparse " << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << fmt17(it.value()) << '\n';
}

void write_weights(std::ostream& os, const Reservoir& w) {
  if (w.is_sparse())
    write_sparse(os, w.sparse());
  else
    write_dense(os, w.dense());
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}

  void section(const std::string& name) { section_ = name; }
  const std::string& section() const { return section_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(section_, what + " (line " + std::to_string(line_no_) + ")");
  }

  std::string line() {
    std::string l;
    if (!std::getline(is_, l)) fail("unexpected end of file");
    ++line_no_;
    if (!l.empty() && l.back() == '\r') l.pop_back();
    return l;
  }

  void expect(const std::string& header) {
    section(header);
    if (line() != "[" + header + "]") fail("expected block [" + header + "]");
  }

  double number(std::string_view tok) const {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
      fail("bad number '" + std::string(tok) + "'");
    return v;
  }

  Index integer(std::string_view tok) const {
    Index v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 0)
      fail("bad integer '" + std::string(tok) + "'");
    return v;
  }

  std::vector<std::string_view> split(std::string_view l) const {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < l.size()) {
      const std::size_t end = std::min(l.find(' ', pos), l.size());
      if (end > pos) out.push_back(l.substr(pos, end - pos));
      pos = end + 1;
    }
    return out;
  }

  // Returns a dense or sparse matrix according to the block's first line.
  Reservoir weights() {
    const std::string head = line();
    const auto tok = split(head);
    if (tok.size() == 3 && tok[0] == "dense") {
      const Index r = integer(tok[1]), c = integer(tok[2]);
      Matrix m(r, c);
      for (Index i = 0; i < r; ++i) {
        const std::string row = line();
        const auto vals = split(row);
        if (Index(vals.size()) != c) fail("row " + std::to_string(i) + " has " + std::to_string(vals.size()) +
                                          " values, expected " + std::to_string(c));
        for (Index j = 0; j < c; ++j) m(i, j) = number(vals[std::size_t(j)]);
      }
      return Reservoir(std::move(m));
    }
    if (tok.size() == 4 && tok[0] == "sparse") {
      const Index r = integer(tok[1]), c = integer(tok[2]), nnz = integer(tok[3]);
      std::vector<Eigen::Triplet<double>> entries;
      entries.reserve(std::size_t(nnz));
      for (Index k = 0; k < nnz; ++k) {
        const std::string l = line();
        const auto t = split(l);
        if (t.size() != 3) fail("sparse entry needs 'row col value'");
        const Index i = integer(t[0]), j = integer(t[1]);
        if (i >= r || j >= c) fail("sparse entry index out of range");
        entries.emplace_back(i, j, number(t[2]));
      }
      SparseMatrix m(r, c);
      m.setFromTriplets(entries.begin(), entries.end());
      if (m.nonZeros() != nnz) fail("duplicate sparse entries");
      return Reservoir(std::move(m));
    }
    fail("expected 'dense R C' or 'sparse R C NNZ'");
  }

  Matrix dense() {
    Reservoir w = weights();
    if (w.is_sparse()) fail("expected a dense block");
    return w.dense();
  }

  std::map<std::string, std::string> key_values(std::size_t count) {
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < count; ++i) {
      const std::string l = line();
      const auto eq = l.find(" = ");
      if (eq == std::string::npos) fail("expected 'key = value'");
      out[l.substr(0, eq)] = l.substr(eq + 3);
    }
    return out;
  }

 private:
  std::istream& is_;
  std::string section_ = "header";
  std::size_t line_no_ = 0;
};

const char* const kMetaKeys[] = {"variant",      "layers",          "leak_rate",       "activation",
                                 "knowledge",    "knowledge_dt",    "knowledge_sigma", "knowledge_rho",
                                 "knowledge_beta", "lambda",        "variables",       "config_digest",
                                 "standardized"};

}  // namespace

void save_model(std::ostream& os, const TrainedModel& t) {
  const EsnModel& m = t.model;
  os << kMagic << '\n';
  os << "[meta]\n";
  os << "variant = " << to_string(m.variant()) << '\n';
  os << "layers = " << m.layers().size() << '\n';
  os << "leak_rate = " << fmt17(m.leak_rate()) << '\n';
  os << "activation = " << to_string(m.activation()) << '\n';
  os << "knowledge = " << to_string(t.knowledge.kind) << '\n';
  os << "knowledge_dt = " << fmt17(t.knowledge.dt) << '\n';
  os << "knowledge_sigma = " << fmt17(t.knowledge.sigma) << '\n';
  os << "knowledge_rho = " << fmt17(t.knowledge.rho) << '\n';
  os << "knowledge_beta = " << fmt17(t.knowledge.beta) << '\n';
  os << "lambda = " << fmt17(t.readout.lambda) << '\n';
  os << "variables = " << join(t.variables) << '\n';
  os << "config_digest = " << t.config_digest << '\n';
  os << "standardized = " << (t.standardization ? "true" : "false") << '\n';
  os << "[modifier]\n";
  os << "base = " << to_string(m.modifier().base) << '\n';
  os << "nonlinear = " << to_string(m.modifier().nonlinear) << '\n';
  os << "padding = " << fmt17(m.modifier().padding) << '\n';
  for (std::size_t l = 0; l < m.layers().size(); ++l) {
    os << "[input_matrix " << l + 1 << "]\n";
    write_dense(os, m.layers()[l].input);
    os << "[reservoir " << l + 1 << "]\n";
    write_weights(os, m.layers()[l].reservoir);
  }
  os << "[readout]\n";
  write_dense(os, t.readout.w_out);
  os << "[final_state]\n";
  write_dense(os, t.final_state);
  os << "[last_input]\n";
  write_dense(os, t.last_input);
  if (t.standardization) {
    os << "[standardization]\n";
    Matrix s(t.standardization->mean.size(), 2);
    s << t.standardization->mean, t.standardization->stddev;
    write_dense(os, s);
  }
  os << "end\n";
}

TrainedModel load_model(std::istream& is) {
  Reader in(is);
  if (in.line() != kMagic) in.fail("missing 'RCMODEL 1' magic line");

  in.expect("meta");
  auto meta = in.key_values(std::size(kMetaKeys));
  for (const char* key : kMetaKeys)
    if (!meta.count(key)) in.fail("missing key '" + std::string(key) + "'");

  std::optional<EsnModel> model;
  ReadoutLayer readout;
  KnowledgeSpec knowledge;
  Vector final_state, last_input;
  std::vector<std::string> variables;
  std::string config_digest;
  std::optional<Standardization> standardization;
  Variant variant{};
  EsnParams params;
  try {
    variant = parse_variant(meta["variant"]);
    params.activation = parse_activation(meta["activation"]);
    knowledge.kind = parse_knowledge_kind(meta["knowledge"]);
  } catch (const ArgumentError& e) {
    in.fail(e.what());
  }
  params.leak_rate = in.number(meta["leak_rate"]);
  knowledge.dt = in.number(meta["knowledge_dt"]);
  knowledge.sigma = in.number(meta["knowledge_sigma"]);
  knowledge.rho = in.number(meta["knowledge_rho"]);
  knowledge.beta = in.number(meta["knowledge_beta"]);
  const Index layer_count = in.integer(meta["layers"]);
  const double lambda = in.number(meta["lambda"]);
  {
    std::stringstream ss(meta["variables"]);
    std::string name;
    while (std::getline(ss, name, ',')) variables.push_back(name);
  }
  if (variables.empty()) in.fail("no variable names");
  config_digest = meta["config_digest"];
  const bool standardized = meta["standardized"] == "true";

  in.expect("modifier");
  auto mod = in.key_values(3);
  try {
    params.modifier.base = parse_modifier_base(mod["base"]);
    params.modifier.nonlinear = parse_nonlinear(mod["nonlinear"]);
  } catch (const ArgumentError& e) {
    in.fail(e.what());
  }
  params.modifier.padding = in.number(mod["padding"]);

  if (layer_count < 1) in.fail("layers must be >= 1");
  std::vector<ReservoirLayer> layers;
  for (Index l = 1; l <= layer_count; ++l) {
    in.expect("input_matrix " + std::to_string(l));
    Matrix input = in.dense();
    in.expect("reservoir " + std::to_string(l));
    Reservoir reservoir = in.weights();
    layers.push_back({std::move(input), std::move(reservoir)});
  }

  in.section("model");
  try {
    const Index d = Index(variables.size());
    switch (variant) {
      case Variant::standard:
        if (layers.size() != 1) in.fail("standard variant stores exactly one layer");
        model = EsnModel::standard(layers[0].input, layers[0].reservoir, params);
        break;
      case Variant::deep:
        model = EsnModel::deep(std::move(layers), params);
        break;
      case Variant::hybrid:
        if (layers.size() != 1) in.fail("hybrid variant stores exactly one layer");
        model = EsnModel::hybrid(layers[0].input, layers[0].reservoir, make_knowledge(knowledge, d), params);
        break;
    }
    if (model->input_dim() != d) in.fail("input matrix does not match the variable count");
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    in.fail(e.what());
  }

  in.expect("readout");
  readout.w_out = in.dense();
  readout.lambda = lambda;
  if (readout.feature_dim() != model->output_dimension()) in.fail("readout width does not match the model");

  in.expect("final_state");
  Matrix fs = in.dense();
  if (fs.cols() != 1 || fs.rows() != model->state_dim()) in.fail("final state has the wrong shape");
  final_state = fs.col(0);

  in.expect("last_input");
  Matrix li = in.dense();
  if (li.cols() != 1 || li.rows() != model->input_dim()) in.fail("last input has the wrong shape");
  last_input = li.col(0);

  if (standardized) {
    in.expect("standardization");
    Matrix s = in.dense();
    if (s.cols() != 2 || s.rows() != model->input_dim()) in.fail("standardization has the wrong shape");
    standardization = Standardization{s.col(0), s.col(1)};
  }
  in.section("end");
  if (in.line() != "end") in.fail("missing 'end' line");
  return TrainedModel{std::move(*model), std::move(readout), knowledge, std::move(final_state),
                      std::move(last_input), std::move(variables), std::move(config_digest),
                      std::move(standardization)};
}

void save_model_file(const std::string& path, const TrainedModel& trained) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file '" + path + "'");
  save_model(out, trained);
  if (!out) throw Error("failed writing model file '" + path + "'");
}

TrainedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  return load_model(in);
}

}  // namespace rc::app
