#pragma once

#include <complex>
#include <vector>

#include "twirlab/core/linalg.hpp"

namespace twirlab::quantum {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct SparseEntry {
  int row;
  int col;
  Complex value;
};

// Orthogonal Hermitian operator basis of a d-level system: the identity,
// then symmetric (E_jk + E_kj) and antisymmetric (-i E_jk + i E_kj) pairs for
// j < k in lexicographic order, then the unnormalized diagonal elements
// D_l = sum_{j<l} E_jj - l E_ll.  For d = 2 this is (I, X, Y, Z).
class HermitianBasis {
 public:
  explicit HermitianBasis(int hilbert_dim);

  int hilbert_dim() const { return d_; }
  Index size() const { return static_cast<Index>(elements_.size()); }
  const std::vector<SparseEntry>& element(Index k) const { return elements_[k]; }
  double norm_sq(Index k) const { return norms_[k]; }
  CMatrix dense(Index k) const;

 private:
  int d_;
  std::vector<std::vector<SparseEntry>> elements_;
  std::vector<double> norms_;
};

// Real coordinates of Hermitian operators on H_1 ⊗ ... ⊗ H_k in the product
// of per-factor bases, factor-major.  States carry x_k = Tr(B_k rho) and
// effects f_k = Tr(B_k E) / Tr(B_k^2), so Tr(E rho) is the plain dot product
// and the unit effect is (1, 0, ..., 0).
class OperatorCoordinates {
 public:
  explicit OperatorCoordinates(std::vector<int> hilbert_dims);

  const std::vector<int>& hilbert_dims() const { return dims_; }
  int hilbert_dim() const { return total_hilbert_; }
  Index dim() const { return dim_; }

  Vector state_vector(const CMatrix& rho) const;
  RowVector effect_vector(const CMatrix& effect) const;
  CMatrix operator_from_state(const Eigen::Ref<const Vector>& x) const;
  CMatrix operator_from_effect(const Eigen::Ref<const RowVector>& f) const;

  // Matrix of rho -> U rho U^dagger acting on state coordinates.
  Matrix superoperator(const CMatrix& unitary) const;

 private:
  template <typename Fn>
  void for_each_entry(Index k, Fn&& fn) const;

  std::vector<int> dims_;
  std::vector<HermitianBasis> bases_;
  int total_hilbert_ = 1;
  Index dim_ = 1;
};

CMatrix projector(const CVector& psi);

// Restricts operators to the span of the listed computational basis states
// (indices into the full Hilbert space), expressed in the coordinates of a
// single d'-level system with d' = keep.size().
Matrix compression_map(const OperatorCoordinates& from, const std::vector<int>& keep);

}  // namespace twirlab::quantum
