#pragma once

// Independent reference computations for the tests.  Nothing here calls the
// library; inputs are plain matrices built from first principles.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  Rational(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) { norm(); }
  void norm() {
    if (den < 0) num = -num, den = -den;
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) num /= g, den /= g;
  }
  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
  bool zero() const { return num == 0; }
};

using RMatrix = std::vector<std::vector<Rational>>;

inline int exact_rank(RMatrix m) {
  int r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c].zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (static_cast<int>(i) == r || m[i][c].zero()) continue;
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] = m[i][k] - f * m[r][k];
    }
    ++r;
  }
  return r;
}

// Number of orbits of a set of permutations (each a vector of images) acting
// on {0..n-1}; the dimension of the invariant span of a simplex.
inline int orbit_count(int n, const std::vector<std::vector<int>>& perms) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : perms)
    for (int i = 0; i < n; ++i) parent[find(i)] = find(p[i]);
  int count = 0;
  for (int i = 0; i < n; ++i) count += find(i) == i;
  return count;
}

// Operators permuting the tensor factors of (C^2)^{⊗n}, one per element of S_n.
inline std::vector<Eigen::MatrixXd> permutation_operators(int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const int dim = 1 << n;
  std::vector<Eigen::MatrixXd> out;
  do {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
    for (int x = 0; x < dim; ++x) {
      int y = 0;
      for (int k = 0; k < n; ++k) {
        const int bit = (x >> (n - 1 - k)) & 1;
        y |= bit << (n - 1 - perm[k]);
      }
      p(y, x) = 1.0;
    }
    out.push_back(p);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Real dimension of span{P_pi}: flatten and rank.
inline int span_dimension(const std::vector<Eigen::MatrixXd>& ops) {
  Eigen::MatrixXd m(ops[0].size(), static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k)
    m.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXd>(ops[k].data(), ops[k].size());
  return static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank());
}

// Sum of squared eigenvalue multiplicities of a Hermitian generator: the
// dimension of its commutant, i.e. of the operators invariant under exp(i t H).
inline int commutant_dimension(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::EigenvaluesOnly);
  std::map<long, int> mult;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) ++mult[std::lround(eig.eigenvalues()[i] * 1e6)];
  int total = 0;
  for (const auto& [v, m] : mult) total += m * m;
  return total;
}

// n = a^dagger a on Fock levels 0..cutoff.
inline Eigen::MatrixXd number_operator(int cutoff) {
  Eigen::VectorXd d(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) d[n] = n;
  return d.asDiagonal();
}

inline Eigen::MatrixXd total_number(int cutoff) {
  const Eigen::MatrixXd n = number_operator(cutoff);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(cutoff + 1, cutoff + 1);
  return Eigen::kroneckerProduct(n, id) + Eigen::kroneckerProduct(id, n);
}

// Total number restricted to kets |m1 m2> with m1 + m2 <= cutoff.
inline Eigen::MatrixXd restricted_total_number(int cutoff) {
  std::vector<double> d;
  for (int m1 = 0; m1 <= cutoff; ++m1)
    for (int m2 = 0; m1 + m2 <= cutoff; ++m2) d.push_back(m1 + m2);
  return Eigen::Map<Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size())).asDiagonal();
}

// Spectral projectors of a diagonal or Hermitian matrix grouped by eigenvalue.
inline std::vector<Eigen::MatrixXcd> eigenspace_projectors(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  std::vector<Eigen::MatrixXcd> out;
  Eigen::Index i = 0;
  const auto& ev = eig.eigenvalues();
  while (i < ev.size()) {
    Eigen::Index j = i;
    while (j < ev.size() && std::abs(ev[j] - ev[i]) < 1e-8) ++j;
    const Eigen::MatrixXcd v = eig.eigenvectors().middleCols(i, j - i);
    out.push_back(v * v.adjoint());
    i = j;
  }
  return out;
}

// Singlet and triplet projectors on two qubits, from the swap operator.
inline std::vector<Eigen::MatrixXcd> singlet_triplet() {
  const Eigen::MatrixXd swap = permutation_operators(2)[1];
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  return {((id - swap) / 2).cast<std::complex<double>>(), ((id + swap) / 2).cast<std::complex<double>>()};
}

// Largest entry of P_i X P_j over distinct sectors.
inline double cross_block_max(const Eigen::MatrixXcd& x, const std::vector<Eigen::MatrixXcd>& sectors) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sectors.size(); ++i)
    for (std::size_t j = 0; j < sectors.size(); ++j)
      if (i != j) worst = std::max(worst, (sectors[i] * x * sectors[j]).cwiseAbs().maxCoeff());
  return worst;
}

// Eigenbasis of a Hermitian matrix with columns grouped by eigenvalue;
// sector[c] is the group of column c.
struct SectorBasis {
  Eigen::MatrixXcd basis;
  std::vector<int> sector;
};

inline SectorBasis sector_basis(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  SectorBasis out{eig.eigenvectors(), {}};
  const auto& ev = eig.eigenvalues();
  int s = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (i > 0 && std::abs(ev[i] - ev[i - 1]) >= 1e-8) ++s;
    out.sector.push_back(s);
  }
  return out;
}

// Largest entry of the off-diagonal sector blocks of X written in that basis.
inline double cross_block_max(const Eigen::MatrixXcd& x, const SectorBasis& b) {
  const Eigen::MatrixXcd w = b.basis.adjoint() * x * b.basis;
  double worst = 0.0;
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      if (b.sector[r] != b.sector[c]) worst = std::max(worst, std::abs(w(r, c)));
  return worst;
}

}  // namespace oracle
