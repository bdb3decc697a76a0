#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rc/linalg.hpp"
#include "rc/rng.hpp"

// Constructors for input matrices (χ, res_size × in_size) and reservoir
// matrices (R, size × size). Every constructor is a pure function of its
// arguments and the generator state it is handed.
namespace rc {

using Reservoir = Weights<double>;

// Entries uniform on [-scaling, scaling).
Matrix dense_uniform_input(Index res_size, Index in_size, double scaling, Rng& rng);

// Rows split into in_size contiguous groups of floor(res_size / in_size); the
// remainder joins the last group. One nonzero per row, in its group's column.
Matrix weighted_input(Index res_size, Index in_size, double scaling, Rng& rng);

// Entries ±weight with Bernoulli(1/2) signs.
Matrix minimal_input(Index res_size, Index in_size, double weight, Rng& rng);
// Signs read row-major from `bits`: 0 -> -weight, nonzero -> +weight.
Matrix minimal_input(Index res_size, Index in_size, double weight, std::span<const int> bits);

// sparse_uniform on [-1, 1) rescaled to spectral radius `radius`. Dense storage
// when density == 1. A sample with zero spectral radius is redrawn from a fresh
// substream, at most three times.
Reservoir rand_sparse_reservoir(Index size, double density, double radius, Rng& rng);

// (i+1, i) = weight and (0, size-1) = weight.
Reservoir simple_cycle_reservoir(Index size, double weight);
// (i+1, i) = weight; nilpotent.
Reservoir delay_line_reservoir(Index size, double weight);
// (i+1, i) = weight, (i, i+1) = feedback.
Reservoir delay_line_backward_reservoir(Index size, double weight, double feedback);

struct PseudoSvdReservoir {
  Matrix matrix;
  Vector singular_values;  // the sampled diagonal, in index order
  Index rotations = 0;
};

// Diagonal S with entries uniform on (0, max_value], then random left Givens
// rotations on distinct index pairs until the zero-entry fraction is at most
// `sparsity` or size² rotations have been applied.
PseudoSvdReservoir pseudo_svd_construct(Index size, double max_value, double sparsity, Rng& rng);
inline Reservoir pseudo_svd_reservoir(Index size, double max_value, double sparsity, Rng& rng) {
  return Reservoir(pseudo_svd_construct(size, max_value, sparsity, rng).matrix);
}

enum class InputKind { dense_uniform, weighted, minimal };
enum class ReservoirKind { rand_sparse, simple_cycle, delay_line, delay_line_backward, pseudo_svd };

struct InputSpec {
  InputKind kind = InputKind::dense_uniform;
  double scaling = 1.0;             // scaling, or the weight of a minimal layer
  bool random_signs = true;         // minimal only
  std::vector<int> sign_sequence;   // minimal only, used when !random_signs
};

struct ReservoirSpec {
  ReservoirKind kind = ReservoirKind::rand_sparse;
  double density = 1.0;        // rand_sparse
  double radius = 1.25;        // rand_sparse
  double weight = 0.9;         // simple_cycle, delay_line, delay_line_backward
  double feedback = 0.1;       // delay_line_backward
  double max_value = 1.0;      // pseudo_svd
  double sparsity = 0.9;       // pseudo_svd
};

Matrix build_input(const InputSpec& spec, Index res_size, Index in_size, Rng& rng);
Reservoir build_reservoir(const ReservoirSpec& spec, Index size, Rng& rng);

std::string_view to_string(InputKind kind);
std::string_view to_string(ReservoirKind kind);
InputKind parse_input_kind(std::string_view name);
ReservoirKind parse_reservoir_kind(std::string_view name);

}  // namespace rc
