#include "twirlab/core/membership.hpp"

#include <cmath>
#include <limits>

#include "twirlab/error.hpp"

namespace twirlab {

namespace {

constexpr double kPivotEps = 1e-11;

// Dense tableau for
//   min 1.(a+ + a-)  s.t.  A w + a+ - a- = b,  w, a+, a- >= 0
// with A = [G; 1^T], b = [x; 1].  Columns: w (n), a+ (m), a- (m).
class PhaseOneTableau {
 public:
  PhaseOneTableau(const Eigen::Ref<const Matrix>& g, const Eigen::Ref<const Vector>& x)
      : m_(g.rows() + 1), n_(g.cols()), cols_(n_ + 2 * m_), t_(m_, cols_ + 1), z_(cols_ + 1),
        basis_(static_cast<std::size_t>(m_)) {
    t_.setZero();
    for (Index i = 0; i < m_; ++i) {
      const double bi = i < g.rows() ? x[i] : 1.0;
      const double s = bi >= 0 ? 1.0 : -1.0;
      for (Index j = 0; j < n_; ++j) t_(i, j) = s * (i < g.rows() ? g(i, j) : 1.0);
      t_(i, n_ + i) = s;
      t_(i, n_ + m_ + i) = -s;
      t_(i, cols_) = std::abs(bi);
      basis_[i] = s > 0 ? n_ + i : n_ + m_ + i;
    }
    // Reduced costs: c_j - 1^T T_j over the basic (all-artificial) rows.
    for (Index j = 0; j <= cols_; ++j) {
      const double cj = (j >= n_ && j < cols_) ? 1.0 : 0.0;
      z_[j] = (j == cols_ ? 0.0 : cj) - t_.col(j).sum();
    }
  }

  void solve() {
    const Index max_iter = 50 * (m_ + cols_);
    Index degenerate_run = 0;
    for (Index iter = 0; iter < max_iter; ++iter) {
      const bool bland = degenerate_run > 2 * m_;
      Index enter = -1;
      double best = -kPivotEps;
      for (Index j = 0; j < cols_; ++j) {
        if (z_[j] < best) {
          enter = j;
          if (bland) break;
          best = z_[j];
        }
      }
      if (enter < 0) return;
      Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a > kPivotEps) {
          const double r = t_(i, cols_) / a;
          if (r < ratio - 1e-14 ||
              (std::abs(r - ratio) <= 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
            ratio = r;
            leave = i;
          }
        }
      }
      if (leave < 0) return;  // unbounded cannot happen; objective is bounded below by 0
      degenerate_run = ratio <= 1e-14 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
  }

  // Drive zero-level artificials out of the basis where a weight column can
  // replace them, so that the reported weights are a clean convex combination.
  void expel_artificials() {
    for (Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  double objective() const { return -z_[cols_]; }

  Vector weights() const {
    Vector w = Vector::Zero(n_);
    for (Index i = 0; i < m_; ++i)
      if (basis_[i] < n_) w[basis_[i]] = t_(i, cols_);
    return w;
  }

  // Dual multipliers y_i = 1 - (reduced cost of a+_i).
  Vector duals() const {
    Vector y(m_);
    for (Index i = 0; i < m_; ++i) y[i] = 1.0 - z_[n_ + i];
    return y;
  }

 private:
  void pivot(Index row, Index col) {
    t_.row(row) /= t_(row, col);
    for (Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    const double f = z_[col];
    if (f != 0.0) z_ -= f * t_.row(row).transpose();
    basis_[row] = col;
  }

  Index m_;
  Index n_;
  Index cols_;
  Matrix t_;
  Vector z_;
  std::vector<Index> basis_;
};

}  // namespace

MembershipResult convex_membership(const Eigen::Ref<const Vector>& x,
                                   const Eigen::Ref<const Matrix>& generators, double tol) {
  if (generators.cols() == 0) fail(ErrorCode::EmptyInput, "membership: no generators");
  if (generators.rows() != x.size())
    fail(ErrorCode::DimensionMismatch, "membership: point and generators differ in dimension");

  PhaseOneTableau tab(generators, x);
  tab.solve();
  MembershipResult out;
  out.distance = std::max(0.0, tab.objective());
  out.member = out.distance <= tol;
  if (out.member) {
    tab.expel_artificials();
    Vector w = tab.weights().cwiseMax(0.0);
    const double s = w.sum();
    if (s > 0) w /= s;
    out.weights = std::move(w);
  } else {
    const Vector y = tab.duals();
    out.separator = y.head(x.size());
    out.separator_threshold = -y[x.size()];
  }
  return out;
}

MembershipResult convex_membership(const RealVector& x, std::span<const RealVector> generators,
                                   double tol) {
  if (generators.empty()) fail(ErrorCode::EmptyInput, "membership: no generators");
  Matrix g(x.dim(), static_cast<Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (generators[k].dim() != x.dim())
      fail(ErrorCode::DimensionMismatch, "membership: generator dimension mismatch");
    g.col(static_cast<Index>(k)) = generators[k].values();
  }
  return convex_membership(x.values(), g, tol);
}

MembershipResult convex_membership(const LinearFunctional& x,
                                   std::span<const LinearFunctional> generators, double tol) {
  if (generators.empty()) fail(ErrorCode::EmptyInput, "membership: no generators");
  Matrix g(x.dim(), static_cast<Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (generators[k].dim() != x.dim())
      fail(ErrorCode::DimensionMismatch, "membership: generator dimension mismatch");
    g.col(static_cast<Index>(k)) = generators[k].values().transpose();
  }
  return convex_membership(Vector(x.values().transpose()), g, tol);
}

}  // namespace twirlab
