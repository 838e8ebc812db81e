#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace twirlab {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kDefaultRankTolerance = 1e-8;

// Element of a GPT vector space (a state, unnormalized state, or difference).
class RealVector {
 public:
  RealVector() = default;
  explicit RealVector(Vector values);
  RealVector(std::initializer_list<double> values);

  Index dim() const { return values_.size(); }
  const Vector& values() const { return values_; }
  double operator[](Index i) const { return values_[i]; }

 private:
  Vector values_;
};

// Row covector on a GPT vector space (an effect or difference of effects).
class LinearFunctional {
 public:
  LinearFunctional() = default;
  explicit LinearFunctional(RowVector values);
  LinearFunctional(std::initializer_list<double> values);

  static LinearFunctional zero(Index dim);

  Index dim() const { return values_.size(); }
  const RowVector& values() const { return values_; }
  double operator[](Index i) const { return values_[i]; }

 private:
  RowVector values_;
};

class LinearMap {
 public:
  LinearMap() = default;
  explicit LinearMap(Matrix matrix);

  static LinearMap identity(Index dim);

  Index dim_out() const { return matrix_.rows(); }
  Index dim_in() const { return matrix_.cols(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

// Kronecker products; pair (i, j) lands at index i * dim_b + j.
RealVector tensor(const RealVector& a, const RealVector& b);
LinearFunctional tensor(const LinearFunctional& a, const LinearFunctional& b);
LinearMap tensor(const LinearMap& a, const LinearMap& b);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

// Applies (F_0 ⊗ F_1 ⊗ ... ⊗ F_{k-1}) to x without forming the product.
// Null entries stand for identities of the matching size in `dims`.
Vector kron_apply(std::span<const Matrix* const> factors, std::span<const Index> dims,
                  const Vector& x);

bool all_finite(const Eigen::Ref<const Matrix>& m);

// Largest absolute entry; 0 for empty input.
double max_abs(const Eigen::Ref<const Matrix>& m);

// Number of singular values above rel_tol * sigma_max.
Index numerical_rank(const Eigen::Ref<const Matrix>& m, double rel_tol = kDefaultRankTolerance);

// Orthonormal basis (columns) of the column space, same threshold policy.
Matrix orthonormal_range(const Eigen::Ref<const Matrix>& m,
                         double rel_tol = kDefaultRankTolerance);

// Columns scaled to unit 2-norm (zero columns stay zero).  Spans of
// generator sets are ranked on this, since a few long generators otherwise
// push short but independent directions under the relative threshold.
Matrix unit_columns(const Eigen::Ref<const Matrix>& m);

// Orthonormal basis of the (right) null space.
Matrix null_space(const Eigen::Ref<const Matrix>& m, double rel_tol = kDefaultRankTolerance);

// Indices of the first occurrence of each distinct column, compared on a
// grid of spacing `tol`.
std::vector<Index> distinct_columns(const Eigen::Ref<const Matrix>& m, double tol);
Matrix select_columns(const Eigen::Ref<const Matrix>& m, const std::vector<Index>& cols);

// Hash of x rounded to a grid of spacing `cell`.
std::uint64_t grid_hash(const Eigen::Ref<const Vector>& x, double cell);

// Finds a column of `m` equal to `x` within `tol` (max norm); -1 if none.
class ColumnLookup {
 public:
  ColumnLookup(const Eigen::Ref<const Matrix>& m, double tol);
  Index find(const Eigen::Ref<const Vector>& x) const;

 private:
  Matrix columns_;
  double tol_;
  std::unordered_multimap<std::uint64_t, Index> index_;
};

// Deterministic generator for test vectors and trials. Uses the exact
// mt19937_64 sequence so that results do not depend on the standard library's
// distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);
  double uniform(double lo, double hi);
  Vector uniform_vector(Index dim, double lo = -1.0, double hi = 1.0);

 private:
  std::mt19937_64 engine_;
};

}  // namespace twirlab
