#include "rc/layers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace rc {

namespace {

void require_dims(const char* who, Index res_size, Index in_size) {
  if (res_size < 1 || in_size < 1)
    throw ArgumentError(std::string(who) + ": dimensions must be positive");
}

void require_positive(const char* who, const char* what, double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw ArgumentError(std::string(who) + ": " + what + " must be a finite value > 0");
}

void require_square_size(const char* who, Index size) {
  if (size < 2) throw ArgumentError(std::string(who) + ": size must be >= 2");
}

double nonzero_uniform(double scaling, Rng& rng) {
  double v = 0.0;
  while (v == 0.0) v = rng.uniform(-scaling, scaling);
  return v;
}

}  // namespace

Matrix dense_uniform_input(Index res_size, Index in_size, double scaling, Rng& rng) {
  require_dims("dense_uniform_input", res_size, in_size);
  require_positive("dense_uniform_input", "scaling", scaling);
  Matrix out(res_size, in_size);
  for (Index i = 0; i < res_size; ++i)
    for (Index j = 0; j < in_size; ++j) out(i, j) = rng.uniform(-scaling, scaling);
  return out;
}

Matrix weighted_input(Index res_size, Index in_size, double scaling, Rng& rng) {
  require_dims("weighted_input", res_size, in_size);
  require_positive("weighted_input", "scaling", scaling);
  if (res_size < in_size) throw ArgumentError("weighted_input: res_size must be >= in_size");
  const Index group = res_size / in_size;
  Matrix out = Matrix::Zero(res_size, in_size);
  for (Index i = 0; i < res_size; ++i) out(i, std::min(i / group, in_size - 1)) = nonzero_uniform(scaling, rng);
  return out;
}

Matrix minimal_input(Index res_size, Index in_size, double weight, Rng& rng) {
  require_dims("minimal_input", res_size, in_size);
  require_positive("minimal_input", "weight", weight);
  Matrix out(res_size, in_size);
  for (Index i = 0; i < res_size; ++i)
    for (Index j = 0; j < in_size; ++j) out(i, j) = rng.bernoulli(0.5) ? weight : -weight;
  return out;
}

Matrix minimal_input(Index res_size, Index in_size, double weight, std::span<const int> bits) {
  require_dims("minimal_input", res_size, in_size);
  require_positive("minimal_input", "weight", weight);
  if (static_cast<Index>(bits.size()) < res_size * in_size)
    throw ArgumentError("minimal_input: sign sequence has " + std::to_string(bits.size()) +
                        " entries, need " + std::to_string(res_size * in_size));
  Matrix out(res_size, in_size);
  std::size_t k = 0;
  for (Index i = 0; i < res_size; ++i)
    for (Index j = 0; j < in_size; ++j) out(i, j) = bits[k++] != 0 ? weight : -weight;
  return out;
}

Reservoir rand_sparse_reservoir(Index size, double density, double radius, Rng& rng) {
  if (size < 1) throw ArgumentError("rand_sparse_reservoir: size must be >= 1");
  require_positive("rand_sparse_reservoir", "radius", radius);
  constexpr int kRetries = 3;
  for (int attempt = 0;; ++attempt) {
    Rng fresh = rng.substream(static_cast<std::uint64_t>(attempt));
    Rng& source = attempt == 0 ? rng : fresh;
    SparseMatrix sampled = sparse_uniform<double>(size, size, density, -1.0, 1.0, source);
    try {
      if (density == 1.0) return Reservoir(rescale_spectral_radius(Matrix(sampled), radius));
      return Reservoir(rescale_spectral_radius(sampled, radius));
    } catch (const CannotRescaleError&) {
      if (attempt == kRetries) throw;
    }
  }
}

Reservoir simple_cycle_reservoir(Index size, double weight) {
  require_square_size("simple_cycle_reservoir", size);
  std::vector<Eigen::Triplet<double>> entries;
  if (weight != 0.0) {
    for (Index i = 0; i + 1 < size; ++i) entries.emplace_back(i + 1, i, weight);
    entries.emplace_back(0, size - 1, weight);
  }
  SparseMatrix out(size, size);
  out.setFromTriplets(entries.begin(), entries.end());
  return Reservoir(std::move(out));
}

Reservoir delay_line_reservoir(Index size, double weight) {
  return delay_line_backward_reservoir(size, weight, 0.0);
}

Reservoir delay_line_backward_reservoir(Index size, double weight, double feedback) {
  require_square_size("delay_line_reservoir", size);
  std::vector<Eigen::Triplet<double>> entries;
  for (Index i = 0; i + 1 < size; ++i) {
    if (weight != 0.0) entries.emplace_back(i + 1, i, weight);
    if (feedback != 0.0) entries.emplace_back(i, i + 1, feedback);
  }
  SparseMatrix out(size, size);
  out.setFromTriplets(entries.begin(), entries.end());
  return Reservoir(std::move(out));
}

PseudoSvdReservoir pseudo_svd_construct(Index size, double max_value, double sparsity, Rng& rng) {
  require_square_size("pseudo_svd_reservoir", size);
  require_positive("pseudo_svd_reservoir", "max_value", max_value);
  if (!(sparsity > 0.0 && sparsity < 1.0))
    throw ArgumentError("pseudo_svd_reservoir: sparsity must lie in (0, 1)");

  PseudoSvdReservoir out;
  out.singular_values.resize(size);
  for (Index i = 0; i < size; ++i) out.singular_values(i) = max_value * (1.0 - rng.uniform());
  out.matrix = out.singular_values.asDiagonal();

  const double cells = double(size) * double(size);
  auto zero_fraction = [&] { return double((out.matrix.array() == 0.0).count()) / cells; };
  const Index budget = size * size;
  while (zero_fraction() > sparsity && out.rotations < budget) {
    const Index i = Index(rng.below(std::uint64_t(size)));
    Index j = Index(rng.below(std::uint64_t(size - 1)));
    if (j >= i) ++j;
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const double c = std::cos(theta), s = std::sin(theta);
    const Vector row_i = out.matrix.row(i), row_j = out.matrix.row(j);
    out.matrix.row(i) = c * row_i - s * row_j;
    out.matrix.row(j) = s * row_i + c * row_j;
    ++out.rotations;
  }
  return out;
}

Matrix build_input(const InputSpec& spec, Index res_size, Index in_size, Rng& rng) {
  switch (spec.kind) {
    case InputKind::dense_uniform: return dense_uniform_input(res_size, in_size, spec.scaling, rng);
    case InputKind::weighted: return weighted_input(res_size, in_size, spec.scaling, rng);
    case InputKind::minimal:
      if (spec.random_signs) return minimal_input(res_size, in_size, spec.scaling, rng);
      return minimal_input(res_size, in_size, spec.scaling, spec.sign_sequence);
  }
  throw ArgumentError("build_input: unknown input kind");
}

Reservoir build_reservoir(const ReservoirSpec& spec, Index size, Rng& rng) {
  switch (spec.kind) {
    case ReservoirKind::rand_sparse: return rand_sparse_reservoir(size, spec.density, spec.radius, rng);
    case ReservoirKind::simple_cycle: return simple_cycle_reservoir(size, spec.weight);
    case ReservoirKind::delay_line: return delay_line_reservoir(size, spec.weight);
    case ReservoirKind::delay_line_backward:
      return delay_line_backward_reservoir(size, spec.weight, spec.feedback);
    case ReservoirKind::pseudo_svd: return pseudo_svd_reservoir(size, spec.max_value, spec.sparsity, rng);
  }
  throw ArgumentError("build_reservoir: unknown reservoir kind");
}

namespace {

constexpr std::array<std::pair<InputKind, std::string_view>, 3> kInputNames{{
    {InputKind::dense_uniform, "dense_uniform"},
    {InputKind::weighted, "weighted"},
    {InputKind::minimal, "minimal"},
}};

constexpr std::array<std::pair<ReservoirKind, std::string_view>, 5> kReservoirNames{{
    {ReservoirKind::rand_sparse, "rand_sparse"},
    {ReservoirKind::simple_cycle, "simple_cycle"},
    {ReservoirKind::delay_line, "delay_line"},
    {ReservoirKind::delay_line_backward, "delay_line_backward"},
    {ReservoirKind::pseudo_svd, "pseudo_svd"},
}};

}  // namespace

std::string_view to_string(InputKind kind) {
  for (const auto& [k, name] : kInputNames)
    if (k == kind) return name;
  return "?";
}

std::string_view to_string(ReservoirKind kind) {
  for (const auto& [k, name] : kReservoirNames)
    if (k == kind) return name;
  return "?";
}

InputKind parse_input_kind(std::string_view name) {
  for (const auto& [k, n] : kInputNames)
    if (n == name) return k;
  throw ArgumentError("unknown input layer kind '" + std::string(name) + "'");
}

ReservoirKind parse_reservoir_kind(std::string_view name) {
  for (const auto& [k, n] : kReservoirNames)
    if (n == name) return k;
  throw ArgumentError("unknown reservoir kind '" + std::string(name) + "'");
}

}  // namespace rc
