#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rc/errors.hpp"
#include "rc/rng.hpp"

namespace rc {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using SparseMatrixX = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using SparseMatrix = SparseMatrixX<double>;

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

template <typename Scalar>
bool all_finite(const SparseMatrixX<Scalar>& m) {
  for (Index k = 0; k < m.outerSize(); ++k)
    for (typename SparseMatrixX<Scalar>::InnerIterator it(m, k); it; ++it)
      if (!std::isfinite(it.value())) return false;
  return true;
}

namespace detail {

// Largest eigenvalue modulus of a real quasi-triangular Schur factor.
template <typename Scalar>
Scalar quasi_triangular_radius(const MatrixX<Scalar>& t) {
  using std::abs;
  using std::sqrt;
  const Index n = t.rows();
  Scalar rho(0);
  Index i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != Scalar(0)) {
      const Scalar a = t(i, i), b = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
      const Scalar half_diff = (a - d) / 2;
      const Scalar disc = half_diff * half_diff + b * c;
      const Scalar mean = (a + d) / 2;
      if (disc < Scalar(0)) {
        rho = std::max(rho, sqrt(std::max(Scalar(0), a * d - b * c)));
      } else {
        const Scalar root = sqrt(disc);
        rho = std::max({rho, abs(mean + root), abs(mean - root)});
      }
      i += 2;
    } else {
      rho = std::max(rho, abs(t(i, i)));
      ++i;
    }
  }
  return rho;
}

}  // namespace detail

/// Largest absolute eigenvalue of a square matrix.
///
/// Eigenvalues are read off a Francis double-shift real Schur factorization,
/// which copes with the complex-conjugate dominant pairs that random
/// nonsymmetric reservoirs usually have. The result depends only on `a`.
/// `max_iterations` bounds the total number of QR sweeps (0 selects 10·n);
/// exceeding it raises ConvergenceError carrying the partial estimate.
template <typename Derived>
typename Derived::RealScalar spectral_radius(const Eigen::MatrixBase<Derived>& a,
                                             Index max_iterations = 0) {
  using Scalar = typename Derived::RealScalar;
  if (a.rows() != a.cols())
    throw DimensionError("spectral_radius: matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  if (max_iterations < 0) throw ArgumentError("spectral_radius: max_iterations must be >= 0");
  const Index n = a.rows();
  if (n == 0) return Scalar(0);
  if (n == 1) return std::abs(a(0, 0));

  Eigen::RealSchur<MatrixX<Scalar>> schur(n);
  schur.setMaxIterations(max_iterations > 0 ? max_iterations : 10 * n);
  schur.compute(a.eval(), /*computeU=*/false);
  const Scalar rho = detail::quasi_triangular_radius<Scalar>(schur.matrixT());
  if (schur.info() != Eigen::Success)
    throw ConvergenceError("spectral_radius: Schur iteration did not converge", double(rho));
  return rho;
}

template <typename Scalar>
Scalar spectral_radius(const SparseMatrixX<Scalar>& a, Index max_iterations = 0) {
  return spectral_radius(MatrixX<Scalar>(a), max_iterations);
}

/// Returns `a * (target / spectral_radius(a))`.
template <typename Derived>
MatrixX<typename Derived::Scalar> rescale_spectral_radius(const Eigen::MatrixBase<Derived>& a,
                                                          typename Derived::RealScalar target) {
  if (!(target > 0)) throw ArgumentError("rescale_spectral_radius: target must be > 0");
  const auto rho = spectral_radius(a);
  if (!(rho > 0))
    throw CannotRescaleError("rescale_spectral_radius: spectral radius is zero (nilpotent or zero matrix)");
  return a * (target / rho);
}

template <typename Scalar>
SparseMatrixX<Scalar> rescale_spectral_radius(const SparseMatrixX<Scalar>& a, Scalar target) {
  if (!(target > 0)) throw ArgumentError("rescale_spectral_radius: target must be > 0");
  const Scalar rho = spectral_radius(a);
  if (!(rho > 0))
    throw CannotRescaleError("rescale_spectral_radius: spectral radius is zero (nilpotent or zero matrix)");
  return a * (target / rho);
}

/// Dense or sparse weight matrix behind a single product interface.
template <typename Scalar>
class Weights {
 public:
  using Dense = MatrixX<Scalar>;
  using Sparse = SparseMatrixX<Scalar>;

  Weights() = default;
  Weights(Dense m) : m_(std::move(m)) {}
  Weights(Sparse m) : m_(std::move(m)) { std::get<Sparse>(m_).makeCompressed(); }

  Index rows() const {
    return std::visit([](const auto& m) { return Index(m.rows()); }, m_);
  }
  Index cols() const {
    return std::visit([](const auto& m) { return Index(m.cols()); }, m_);
  }
  bool is_sparse() const { return std::holds_alternative<Sparse>(m_); }

  const Dense& dense() const { return std::get<Dense>(m_); }
  const Sparse& sparse() const { return std::get<Sparse>(m_); }

  Dense to_dense() const {
    if (is_sparse()) return Dense(sparse());
    return dense();
  }

  Index nonzeros() const {
    if (is_sparse()) return sparse().nonZeros();
    return (dense().array() != Scalar(0)).count();
  }

  // out = W * x
  template <typename In, typename Out>
  void apply(const Eigen::MatrixBase<In>& x, Eigen::MatrixBase<Out>& out) const {
    if (is_sparse())
      out.noalias() = sparse() * x;
    else
      out.noalias() = dense() * x;
  }

  Weights scaled(Scalar factor) const {
    if (is_sparse()) return Weights(Sparse(sparse() * factor));
    return Weights(Dense(dense() * factor));
  }

  bool finite() const {
    return std::visit([](const auto& m) { return all_finite(m); }, m_);
  }

  friend bool operator==(const Weights& lhs, const Weights& rhs) {
    if (lhs.is_sparse() != rhs.is_sparse() || lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
      return false;
    if (lhs.is_sparse()) return lhs.to_dense() == rhs.to_dense() && lhs.nonzeros() == rhs.nonzeros();
    return lhs.dense() == rhs.dense();
  }

 private:
  std::variant<Dense, Sparse> m_;
};

template <typename Scalar>
Scalar spectral_radius(const Weights<Scalar>& w, Index max_iterations = 0) {
  if (w.is_sparse()) return spectral_radius(w.sparse(), max_iterations);
  return spectral_radius(w.dense(), max_iterations);
}

template <typename Scalar>
Weights<Scalar> rescale_spectral_radius(const Weights<Scalar>& w, Scalar target) {
  if (w.is_sparse()) return Weights<Scalar>(rescale_spectral_radius(w.sparse(), target));
  return Weights<Scalar>(rescale_spectral_radius(w.dense(), target));
}

enum class RidgeMethod {
  normal_equations,  // Cholesky of Z Zᵀ + λI, orthogonal fallback if it breaks down
  qr,                // orthogonal factorization of the (augmented) design matrix
};

template <typename Scalar>
struct RidgeSolution {
  MatrixX<Scalar> weights;
  RidgeMethod method_used = RidgeMethod::normal_equations;
  int factorizations = 0;
};

namespace detail {

template <typename Scalar, typename DZ, typename DY>
RidgeSolution<Scalar> ridge_qr(const Eigen::MatrixBase<DZ>& z, const Eigen::MatrixBase<DY>& y,
                               Scalar lambda, int prior_factorizations) {
  const Index d = z.rows(), t = z.cols();
  RidgeSolution<Scalar> out;
  out.method_used = RidgeMethod::qr;
  out.factorizations = prior_factorizations + 1;
  if (lambda == Scalar(0)) {
    Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(z.transpose());
    if (qr.rank() < d)
      throw SingularSystemError("solve_regularized_ls: feature Gram matrix is rank deficient (rank " +
                                std::to_string(qr.rank()) + " < " + std::to_string(d) +
                                ") with lambda = 0; retry with lambda > 0");
    out.weights = qr.solve(y.transpose()).transpose();
    return out;
  }
  MatrixX<Scalar> design(t + d, d);
  design.topRows(t) = z.transpose();
  design.bottomRows(d) = MatrixX<Scalar>::Identity(d, d) * std::sqrt(lambda);
  MatrixX<Scalar> rhs = MatrixX<Scalar>::Zero(t + d, y.rows());
  rhs.topRows(t) = y.transpose();
  out.weights = Eigen::HouseholderQR<MatrixX<Scalar>>(design).solve(rhs).transpose();
  return out;
}

}  // namespace detail

/// Minimizes ‖W·Z − Y‖²_F + λ‖W‖²_F for W (m×d), with Z (d×T) and Y (m×T).
///
/// The default route factors Z Zᵀ + λI (or ZᵀZ + λI when λ > 0 and d > T)
/// once with Cholesky. A Cholesky
/// breakdown, or a pivot ratio below d·ε, falls back to an orthogonal
/// factorization, which also detects the λ = 0 rank-deficient case.
template <typename DZ, typename DY>
RidgeSolution<typename DZ::Scalar> ridge_solve(const Eigen::MatrixBase<DZ>& z,
                                               const Eigen::MatrixBase<DY>& y,
                                               typename DZ::Scalar lambda,
                                               RidgeMethod method = RidgeMethod::normal_equations) {
  using Scalar = typename DZ::Scalar;
  if (z.cols() != y.cols())
    throw DimensionError("solve_regularized_ls: features have " + std::to_string(z.cols()) +
                         " columns but targets have " + std::to_string(y.cols()));
  if (z.cols() < 1 || z.rows() < 1 || y.rows() < 1)
    throw DimensionError("solve_regularized_ls: empty feature or target matrix");
  if (!(lambda >= Scalar(0)) || !std::isfinite(lambda))
    throw ArgumentError("solve_regularized_ls: lambda must be a finite value >= 0");

  if (method == RidgeMethod::qr) return detail::ridge_qr<Scalar>(z, y, lambda, 0);

  // With λ > 0 and more features than samples, the T×T form
  // W = Y (ZᵀZ + λI)⁻¹ Zᵀ is the same minimizer with a far better
  // conditioned system.
  const Index d = z.rows(), t = z.cols();
  const bool dual = lambda > Scalar(0) && d > t;
  const Index k = dual ? t : d;
  MatrixX<Scalar> gram = MatrixX<Scalar>::Zero(k, k);
  if (dual)
    gram.template selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
  else
    gram.template selfadjointView<Eigen::Lower>().rankUpdate(z);
  gram.diagonal().array() += lambda;

  Eigen::LLT<MatrixX<Scalar>, Eigen::Lower> llt(gram);
  if (llt.info() == Eigen::Success) {
    const auto pivots = llt.matrixLLT().diagonal().array().square();
    const Scalar ratio = pivots.minCoeff() / pivots.maxCoeff();
    if (ratio > Scalar(k) * std::numeric_limits<Scalar>::epsilon()) {
      RidgeSolution<Scalar> out;
      if (dual) {
        MatrixX<Scalar> alpha = llt.solve(y.transpose());  // T×m
        out.weights = (z * alpha).transpose();
      } else {
        MatrixX<Scalar> rhs = z * y.transpose();  // d×m
        out.weights = llt.solve(rhs).transpose();
      }
      out.method_used = RidgeMethod::normal_equations;
      out.factorizations = 1;
      return out;
    }
  }
  return detail::ridge_qr<Scalar>(z, y, lambda, 1);
}

template <typename DZ, typename DY>
MatrixX<typename DZ::Scalar> solve_regularized_ls(const Eigen::MatrixBase<DZ>& z,
                                                  const Eigen::MatrixBase<DY>& y,
                                                  typename DZ::Scalar lambda,
                                                  RidgeMethod method = RidgeMethod::normal_equations) {
  return ridge_solve(z, y, lambda, method).weights;
}

/// Random sparse matrix: each position is independently nonzero with
/// probability `density`, nonzero values uniform on [lo, hi). Positions are
/// visited row-major, two draws each.
template <typename Scalar = double>
SparseMatrixX<Scalar> sparse_uniform(Index rows, Index cols, double density, Scalar lo, Scalar hi,
                                     Rng& rng) {
  if (rows < 1 || cols < 1) throw ArgumentError("sparse_uniform: dimensions must be positive");
  if (!(density > 0.0 && density <= 1.0))
    throw ArgumentError("sparse_uniform: density must lie in (0, 1]");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ArgumentError("sparse_uniform: range requires finite lo < hi");

  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(static_cast<std::size_t>(double(rows) * double(cols) * density) + 16);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const bool keep = rng.uniform() < density;
      Scalar value = Scalar(rng.uniform(double(lo), double(hi)));
      if (!keep) continue;
      while (value == Scalar(0)) value = Scalar(rng.uniform(double(lo), double(hi)));
      entries.emplace_back(i, j, value);
    }
  }
  SparseMatrixX<Scalar> out(rows, cols);
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

}  // namespace rc
