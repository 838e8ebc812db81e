#include "twirlab/core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "twirlab/error.hpp"

namespace twirlab {

namespace {

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!all_finite(m)) fail(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

}  // namespace

std::uint64_t grid_hash(const Eigen::Ref<const Vector>& x, double cell) {
  std::uint64_t h = 1469598103934665603ull;
  for (Index i = 0; i < x.size(); ++i) {
    const auto k = static_cast<std::uint64_t>(std::llround(x[i] / cell));
    h = (h ^ k) * 1099511628211ull;
    h ^= h >> 29;
  }
  return h;
}

RealVector::RealVector(Vector values) : values_(std::move(values)) {
  require_finite(values_, "vector");
}

RealVector::RealVector(std::initializer_list<double> values)
    : RealVector(Vector::Map(values.begin(), static_cast<Index>(values.size()))) {}

LinearFunctional::LinearFunctional(RowVector values) : values_(std::move(values)) {
  require_finite(values_, "functional");
}

LinearFunctional::LinearFunctional(std::initializer_list<double> values)
    : LinearFunctional(RowVector::Map(values.begin(), static_cast<Index>(values.size()))) {}

LinearFunctional LinearFunctional::zero(Index dim) { return LinearFunctional(RowVector::Zero(dim)); }

LinearMap::LinearMap(Matrix matrix) : matrix_(std::move(matrix)) { require_finite(matrix_, "map"); }

LinearMap LinearMap::identity(Index dim) { return LinearMap(Matrix::Identity(dim, dim)); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

RealVector tensor(const RealVector& a, const RealVector& b) {
  return RealVector(kron(a.values(), b.values()));
}

LinearFunctional tensor(const LinearFunctional& a, const LinearFunctional& b) {
  Vector k = kron(Vector(a.values().transpose()), Vector(b.values().transpose()));
  return LinearFunctional(k.transpose());
}

LinearMap tensor(const LinearMap& a, const LinearMap& b) {
  return LinearMap(kron(a.matrix(), b.matrix()));
}

Vector kron_apply(std::span<const Matrix* const> factors, std::span<const Index> dims,
                  const Vector& x) {
  if (factors.size() != dims.size())
    fail(ErrorCode::DimensionMismatch, "kron_apply: factor/dimension count mismatch");
  Index total = 1;
  for (Index d : dims) total *= d;
  if (total != x.size()) fail(ErrorCode::DimensionMismatch, "kron_apply: vector size mismatch");

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Vector cur = x;
  Vector next(x.size());
  Index left = 1;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const Index n = dims[f];
    const Index right = total / (left * n);
    if (factors[f] != nullptr) {
      const Matrix& op = *factors[f];
      if (op.rows() != n || op.cols() != n)
        fail(ErrorCode::DimensionMismatch, "kron_apply: factor is not square of the given size");
      for (Index l = 0; l < left; ++l) {
        Eigen::Map<const RowMajor> in(cur.data() + l * n * right, n, right);
        Eigen::Map<RowMajor> out(next.data() + l * n * right, n, right);
        out.noalias() = op * in;
      }
      std::swap(cur, next);
    }
    left *= n;
  }
  return cur;
}

bool all_finite(const Eigen::Ref<const Matrix>& m) { return m.allFinite(); }

double max_abs(const Eigen::Ref<const Matrix>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

namespace {

template <typename Svd>
Index count_above(const Svd& svd, double rel_tol) {
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  const double cut = rel_tol * s[0];
  Index r = 0;
  while (r < s.size() && s[r] > cut) ++r;
  return r;
}

}  // namespace

Index numerical_rank(const Eigen::Ref<const Matrix>& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  return count_above(svd, rel_tol);
}

Matrix orthonormal_range(const Eigen::Ref<const Matrix>& m, double rel_tol) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Index r = count_above(svd, rel_tol);
  return svd.matrixU().leftCols(r);
}

Matrix unit_columns(const Eigen::Ref<const Matrix>& m) {
  Matrix out = m;
  for (Index c = 0; c < out.cols(); ++c) {
    const double n = out.col(c).norm();
    if (n > 0) out.col(c) /= n;
  }
  return out;
}

Matrix null_space(const Eigen::Ref<const Matrix>& m, double rel_tol) {
  if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Index r = count_above(svd, rel_tol);
  return svd.matrixV().rightCols(m.cols() - r);
}

std::vector<Index> distinct_columns(const Eigen::Ref<const Matrix>& m, double tol) {
  std::unordered_multimap<std::uint64_t, Index> seen;
  std::vector<Index> out;
  for (Index c = 0; c < m.cols(); ++c) {
    const auto h = grid_hash(m.col(c), 4 * tol);
    bool dup = false;
    for (auto [it, end] = seen.equal_range(h); it != end && !dup; ++it)
      dup = (m.col(it->second) - m.col(c)).cwiseAbs().maxCoeff() <= tol;
    if (!dup) {
      seen.emplace(h, c);
      out.push_back(c);
    }
  }
  return out;
}

Matrix select_columns(const Eigen::Ref<const Matrix>& m, const std::vector<Index>& cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = m.col(cols[k]);
  return out;
}

ColumnLookup::ColumnLookup(const Eigen::Ref<const Matrix>& m, double tol)
    : columns_(m), tol_(tol) {
  // Coarse grid; a miss near a cell boundary is a false negative, which
  // callers treat as "fall back to the slow path".
  for (Index c = 0; c < m.cols(); ++c) index_.emplace(grid_hash(m.col(c), 4 * tol_), c);
}

Index ColumnLookup::find(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != columns_.rows()) return -1;
  for (auto [it, end] = index_.equal_range(grid_hash(x, 4 * tol_)); it != end; ++it) {
    if ((columns_.col(it->second) - x).cwiseAbs().maxCoeff() <= tol_) return it->second;
  }
  return -1;
}

SeededRng::SeededRng(std::uint64_t seed) : engine_(seed) {}

double SeededRng::uniform(double lo, double hi) {
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

Vector SeededRng::uniform_vector(Index dim, double lo, double hi) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
  return v;
}

}  // namespace twirlab
