#include <cmath>

#include "doctest.h"
#include "rc/esn.hpp"

using rc::Activation;
using rc::EsnModel;
using rc::EsnParams;
using rc::Index;
using rc::Matrix;
using rc::Reservoir;
using rc::Rng;
using rc::Vector;

namespace {

Matrix mat(Index r, Index c, std::initializer_list<double> v) {
  Matrix m(r, c);
  Index k = 0;
  for (double x : v) m(k / c, k % c) = x, ++k;
  return m;
}

EsnModel random_model(Index n, Index d, std::uint64_t seed, EsnParams params = {}) {
  Rng rng(seed);
  Matrix input = rc::dense_uniform_input(n, d, 1.0, rng);
  return EsnModel::standard(std::move(input), rc::rand_sparse_reservoir(n, 1.0, 0.9, rng), params);
}

}  // namespace

TEST_CASE("scalar step by hand") {
  const EsnModel m = EsnModel::standard(mat(1, 1, {1.0}), Reservoir(mat(1, 1, {0.5})), EsnParams{0.7});
  const Vector x = rc::step(m, Vector::Constant(1, 0.2), Vector::Constant(1, 0.1));
  CHECK(x(0) == doctest::Approx(0.3 * 0.2 + 0.7 * std::tanh(0.2)).epsilon(1e-15));
}

TEST_CASE("zero reservoir, identity input, zero input gives zero state") {
  const EsnModel m = EsnModel::standard(Matrix::Identity(3, 3), Reservoir(Matrix::Zero(3, 3)));
  CHECK(rc::step(m, Vector::Constant(3, 0.4), Vector::Zero(3)).isZero(0.0));
}

TEST_CASE("leak rate domain") {
  CHECK_THROWS_AS(EsnModel::standard(Matrix::Identity(2, 2), Reservoir(Matrix::Zero(2, 2)), EsnParams{0.0}),
                  rc::ArgumentError);
  CHECK_THROWS_AS(EsnModel::standard(Matrix::Identity(2, 2), Reservoir(Matrix::Zero(2, 2)), EsnParams{1.5}),
                  rc::ArgumentError);
  // As α shrinks the update approaches x' = x.
  const EsnModel m = EsnModel::standard(Matrix::Identity(2, 2), Reservoir(Matrix::Identity(2, 2)), EsnParams{1e-12});
  const Vector x = Vector::Constant(2, 0.3);
  CHECK((rc::step(m, x, Vector::Constant(2, 5.0)) - x).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("identity activation is linear") {
  const EsnModel m = EsnModel::standard(mat(2, 1, {1, -1}), Reservoir(mat(2, 2, {0.5, 0, 0, 0.25})),
                                        EsnParams{1.0, Activation::identity});
  const Vector x = rc::step(m, Vector::Constant(2, 2.0), Vector::Constant(1, 3.0));
  CHECK(x(0) == 4.0);
  CHECK(x(1) == -2.5);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(EsnModel::standard(Matrix::Identity(3, 1), Reservoir(Matrix::Zero(2, 2))), rc::DimensionError);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(EsnModel::standard(Matrix::Identity(2, 1), Reservoir(bad)), rc::ArgumentError);
  CHECK_THROWS_AS(EsnModel::deep({{Matrix::Identity(2, 1), Reservoir(Matrix::Zero(2, 2))},
                                  {Matrix::Identity(3, 3), Reservoir(Matrix::Zero(3, 3))}}),
                  rc::DimensionError);
  const EsnModel m = random_model(4, 2, 1);
  CHECK_THROWS_AS(rc::step(m, Vector::Zero(3), Vector::Zero(2)), rc::DimensionError);
  CHECK_THROWS_AS(rc::step(m, Vector::Zero(4), Vector::Zero(1)), rc::DimensionError);
}

TEST_CASE("non-finite state raises numeric overflow") {
  const EsnModel m = EsnModel::standard(mat(1, 1, {1.0}), Reservoir(mat(1, 1, {2.0})),
                                        EsnParams{1.0, Activation::identity});
  Matrix inputs = Matrix::Zero(1, 3);
  inputs(0, 1) = std::numeric_limits<double>::infinity();
  try {
    rc::collect_states(m, inputs);
    FAIL("expected NumericOverflowError");
  } catch (const rc::NumericOverflowError& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("collect_states by hand rollout") {
  const Matrix chi = mat(2, 1, {0.1, -0.2});
  const Matrix r = mat(2, 2, {0.05, 0.02, -0.03, 0.04});
  const EsnModel m = EsnModel::standard(chi, Reservoir(r), EsnParams{0.6});
  const Matrix inputs = mat(1, 5, {1.0, -0.5, 0.25, 2.0, -1.0});

  double x0 = 0.0, x1 = 0.0;
  Matrix expected(2, 3);
  for (Index t = 0; t < 5; ++t) {
    const double u = inputs(0, t);
    const double a0 = std::tanh(0.05 * x0 + 0.02 * x1 + 0.1 * u);
    const double a1 = std::tanh(-0.03 * x0 + 0.04 * x1 - 0.2 * u);
    x0 = 0.4 * x0 + 0.6 * a0;
    x1 = 0.4 * x1 + 0.6 * a1;
    if (t >= 2) expected.col(t - 2) << x0, x1;
  }
  const rc::StateMatrix s = rc::collect_states(m, inputs, 2);
  CHECK(s.washout == 2);
  CHECK(s.features.cols() == 3);
  CHECK(s.raw_states == s.features);
  for (Index j = 0; j < 3; ++j)
    for (Index i = 0; i < 2; ++i) CHECK(s.features(i, j) == doctest::Approx(expected(i, j)).epsilon(1e-14));
  CHECK(s.final_state == Vector(s.raw_states.col(2)));
}

TEST_CASE("washout boundaries and suffix property") {
  const EsnModel m = random_model(10, 2, 3);
  Rng rng(4);
  const Matrix inputs = rc::dense_uniform_input(2, 30, 1.0, rng);
  CHECK(rc::collect_states(m, inputs, 29).features.cols() == 1);
  CHECK_THROWS_AS(rc::collect_states(m, inputs, 30), rc::ArgumentError);

  const Matrix all = rc::collect_states(m, inputs, 0).features;
  for (Index k : {1, 5, 17}) CHECK(rc::collect_states(m, inputs, k).features == all.rightCols(30 - k));

  Vector x0 = Vector::Constant(10, 0.2);
  const rc::StateMatrix from = rc::collect_states(m, inputs, 0, x0);
  CHECK(from.features.col(0) == rc::step(m, x0, inputs.col(0)));
}

TEST_CASE("deep variant with one layer equals the standard variant") {
  Rng a(5), b(5);
  Matrix in_a = rc::dense_uniform_input(20, 3, 1.0, a);
  const EsnModel standard = EsnModel::standard(in_a, rc::rand_sparse_reservoir(20, 1.0, 1.25, a));
  Matrix in_b = rc::dense_uniform_input(20, 3, 1.0, b);
  const EsnModel deep = EsnModel::deep({{in_b, rc::rand_sparse_reservoir(20, 1.0, 1.25, b)}});
  Rng rng(6);
  const Matrix inputs = rc::dense_uniform_input(3, 40, 1.0, rng);
  CHECK(rc::collect_states(standard, inputs).features == rc::collect_states(deep, inputs).features);
}

TEST_CASE("deep variant chains layers") {
  Rng rng(8);
  std::vector<rc::ReservoirLayer> layers;
  layers.push_back({rc::dense_uniform_input(6, 2, 1.0, rng), rc::rand_sparse_reservoir(6, 1.0, 0.9, rng)});
  layers.push_back({rc::dense_uniform_input(4, 6, 1.0, rng), rc::rand_sparse_reservoir(4, 1.0, 0.9, rng)});
  const EsnModel deep = EsnModel::deep(layers);
  CHECK(deep.state_dim() == 10);
  const EsnModel first = EsnModel::standard(layers[0].input, layers[0].reservoir);
  const EsnModel second = EsnModel::standard(layers[1].input, layers[1].reservoir);

  const Matrix inputs = rc::dense_uniform_input(2, 8, 1.0, rng);
  const rc::StateMatrix s = rc::collect_states(deep, inputs);
  Vector x1 = Vector::Zero(6), x2 = Vector::Zero(4);
  for (Index t = 0; t < 8; ++t) {
    x1 = rc::step(first, x1, inputs.col(t));
    x2 = rc::step(second, x2, x1);
    CHECK(s.features.col(t).head(6) == x1);
    CHECK(s.features.col(t).tail(4) == x2);
  }
}

TEST_CASE("hybrid variant appends the knowledge output") {
  const rc::KnowledgeModel k{"double", 1, [](const Vector& u) { return Vector(2.0 * u.head(1)); }};
  Rng rng(9);
  const EsnModel hybrid =
      EsnModel::hybrid(rc::dense_uniform_input(5, 3, 1.0, rng), rc::rand_sparse_reservoir(5, 1.0, 0.9, rng), k);
  CHECK(hybrid.input_dim() == 2);
  CHECK(hybrid.raw_state_dim() == 6);
  const Matrix inputs = rc::dense_uniform_input(2, 12, 1.0, rng);
  const rc::StateMatrix s = rc::collect_states(hybrid, inputs, 2);
  for (Index j = 0; j < s.raw_states.cols(); ++j) CHECK(s.raw_states(5, j) == 2.0 * inputs(0, j + 2));

  // The reservoir sees [u; K(u)].
  const Vector u = inputs.col(0);
  Vector drive(3);
  drive << u, 2.0 * u(0);
  const Vector expected = (hybrid.layers()[0].input * drive).array().tanh().matrix();
  CHECK((rc::step(hybrid, Vector::Zero(5), u) - expected).cwiseAbs().maxCoeff() < 1e-15);

  const rc::KnowledgeModel wrong{"wrong", 2, [](const Vector& u) { return u; }};
  const EsnModel lying = EsnModel::hybrid(Matrix::Ones(5, 3), Reservoir(Matrix::Zero(5, 5)), wrong);
  CHECK_THROWS_AS(rc::step(lying, Vector::Zero(5), Vector::Zero(1)), rc::DimensionError);
  CHECK_THROWS_AS(EsnModel::hybrid(Matrix::Ones(5, 2), Reservoir(Matrix::Zero(5, 5)), wrong), rc::DimensionError);
}

TEST_CASE("output_dimension") {
  const EsnModel m = random_model(100, 3, 1);
  CHECK(rc::output_dimension(m) == 100);
  CHECK(rc::output_dimension(m, rc::StateModifier{rc::ModifierBase::extended}) == 103);
  CHECK(rc::output_dimension(m, rc::StateModifier{rc::ModifierBase::padded}) == 101);
  CHECK(m.with_modifier(rc::StateModifier{rc::ModifierBase::padded_extended}).output_dimension() == 104);
}

TEST_CASE("contraction of paired trajectories") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 5 + Index(rng.below(20));
    const double alpha = trial % 2 == 0 ? 0.3 : 1.0;
    Matrix r = rc::dense_uniform_input(n, n, 1.0, rng);
    r *= 0.9 / Eigen::JacobiSVD<Matrix>(r).singularValues()(0);
    const EsnModel m = EsnModel::standard(rc::dense_uniform_input(n, 1, 1.0, rng), Reservoir(r), EsnParams{alpha});
    Vector a = rc::dense_uniform_input(n, 1, 1.0, rng), b = rc::dense_uniform_input(n, 1, 1.0, rng);
    const double d0 = (a - b).norm(), rate = (1.0 - alpha) + alpha * 0.9;
    for (int t = 1; t <= 100; ++t) {
      const Vector u = Vector::Constant(1, rng.uniform(-1.0, 1.0));
      a = rc::step(m, a, u);
      b = rc::step(m, b, u);
      CHECK((a - b).norm() <= std::pow(rate, t) * d0 * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("names") {
  CHECK(rc::parse_activation("tanh") == Activation::tanh);
  CHECK(rc::parse_variant(rc::to_string(rc::Variant::hybrid)) == rc::Variant::hybrid);
  CHECK_THROWS_AS(rc::parse_activation("relu"), rc::ArgumentError);
}
