#include "twirlab/core/hermitian_basis.hpp"

#include "twirlab/error.hpp"

namespace twirlab::quantum {

HermitianBasis::HermitianBasis(int hilbert_dim) : d_(hilbert_dim) {
  if (d_ < 1) fail(ErrorCode::BadParam, "Hilbert dimension must be positive");
  const Complex i{0.0, 1.0};
  std::vector<SparseEntry> id;
  for (int j = 0; j < d_; ++j) id.push_back({j, j, 1.0});
  elements_.push_back(id);
  norms_.push_back(d_);
  for (int j = 0; j < d_; ++j)
    for (int k = j + 1; k < d_; ++k) {
      elements_.push_back({{j, k, 1.0}, {k, j, 1.0}});
      norms_.push_back(2.0);
    }
  for (int j = 0; j < d_; ++j)
    for (int k = j + 1; k < d_; ++k) {
      elements_.push_back({{j, k, -i}, {k, j, i}});
      norms_.push_back(2.0);
    }
  for (int l = 1; l < d_; ++l) {
    std::vector<SparseEntry> diag;
    for (int j = 0; j < l; ++j) diag.push_back({j, j, 1.0});
    diag.push_back({l, l, static_cast<double>(-l)});
    elements_.push_back(diag);
    norms_.push_back(static_cast<double>(l) * (l + 1));
  }
}

CMatrix HermitianBasis::dense(Index k) const {
  CMatrix m = CMatrix::Zero(d_, d_);
  for (const auto& e : elements_[k]) m(e.row, e.col) = e.value;
  return m;
}

OperatorCoordinates::OperatorCoordinates(std::vector<int> hilbert_dims)
    : dims_(std::move(hilbert_dims)) {
  if (dims_.empty()) fail(ErrorCode::BadParam, "quantum system needs at least one factor");
  for (int d : dims_) {
    bases_.emplace_back(d);
    total_hilbert_ *= d;
    dim_ *= static_cast<Index>(d) * d;
  }
}

// Calls fn(row, col, value, norm_sq) for every nonzero of composite element k.
template <typename Fn>
void OperatorCoordinates::for_each_entry(Index k, Fn&& fn) const {
  const std::size_t nf = dims_.size();
  std::vector<Index> idx(nf);
  Index rem = k;
  for (std::size_t f = nf; f-- > 0;) {
    const Index n = bases_[f].size();
    idx[f] = rem % n;
    rem /= n;
  }
  double norm = 1.0;
  for (std::size_t f = 0; f < nf; ++f) norm *= bases_[f].norm_sq(idx[f]);

  // Odometer over the per-factor sparse entry lists.
  std::vector<std::size_t> pos(nf, 0);
  while (true) {
    int row = 0;
    int col = 0;
    Complex value = 1.0;
    for (std::size_t f = 0; f < nf; ++f) {
      const auto& e = bases_[f].element(idx[f])[pos[f]];
      row = row * dims_[f] + e.row;
      col = col * dims_[f] + e.col;
      value *= e.value;
    }
    fn(row, col, value, norm);
    std::size_t f = nf;
    while (f-- > 0) {
      if (++pos[f] < bases_[f].element(idx[f]).size()) break;
      pos[f] = 0;
    }
    if (f == static_cast<std::size_t>(-1)) break;
  }
}

Vector OperatorCoordinates::state_vector(const CMatrix& rho) const {
  if (rho.rows() != total_hilbert_ || rho.cols() != total_hilbert_)
    fail(ErrorCode::DimensionMismatch, "operator size does not match the Hilbert space");
  Vector x(dim_);
  for (Index k = 0; k < dim_; ++k) {
    Complex tr = 0.0;
    // Tr(B rho) = sum_{r,c} B(r,c) rho(c,r)
    for_each_entry(k, [&](int r, int c, Complex v, double) { tr += v * rho(c, r); });
    x[k] = tr.real();
  }
  return x;
}

RowVector OperatorCoordinates::effect_vector(const CMatrix& effect) const {
  RowVector f(dim_);
  for (Index k = 0; k < dim_; ++k) {
    Complex tr = 0.0;
    double norm = 1.0;
    for_each_entry(k, [&](int r, int c, Complex v, double n) {
      tr += v * effect(c, r);
      norm = n;
    });
    f[k] = tr.real() / norm;
  }
  return f;
}

CMatrix OperatorCoordinates::operator_from_state(const Eigen::Ref<const Vector>& x) const {
  CMatrix rho = CMatrix::Zero(total_hilbert_, total_hilbert_);
  for (Index k = 0; k < dim_; ++k) {
    if (x[k] == 0.0) continue;
    for_each_entry(k, [&](int r, int c, Complex v, double n) { rho(r, c) += x[k] / n * v; });
  }
  return rho;
}

CMatrix OperatorCoordinates::operator_from_effect(const Eigen::Ref<const RowVector>& f) const {
  CMatrix e = CMatrix::Zero(total_hilbert_, total_hilbert_);
  for (Index k = 0; k < dim_; ++k) {
    if (f[k] == 0.0) continue;
    for_each_entry(k, [&](int r, int c, Complex v, double) { e(r, c) += f[k] * v; });
  }
  return e;
}

Matrix OperatorCoordinates::superoperator(const CMatrix& unitary) const {
  Matrix m(dim_, dim_);
  for (Index k = 0; k < dim_; ++k) {
    Vector unit = Vector::Zero(dim_);
    unit[k] = 1.0;
    const CMatrix b = operator_from_state(unit);
    m.col(k) = state_vector(unitary * b * unitary.adjoint());
  }
  return m;
}

CMatrix projector(const CVector& psi) {
  const CVector n = psi / psi.norm();
  return n * n.adjoint();
}

Matrix compression_map(const OperatorCoordinates& from, const std::vector<int>& keep) {
  const int kd = static_cast<int>(keep.size());
  OperatorCoordinates to({kd});
  Matrix map(to.dim(), from.dim());
  for (Index k = 0; k < from.dim(); ++k) {
    Vector unit = Vector::Zero(from.dim());
    unit[k] = 1.0;
    const CMatrix full = from.operator_from_state(unit);
    CMatrix sub(kd, kd);
    for (int r = 0; r < kd; ++r)
      for (int c = 0; c < kd; ++c) sub(r, c) = full(keep[r], keep[c]);
    map.col(k) = to.state_vector(sub);
  }
  return map;
}

}  // namespace twirlab::quantum
